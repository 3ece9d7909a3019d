#include <doctest.h>

#include <cmath>
#include <random>

#include "hgogp/errors.hpp"
#include "hgogp/gp.hpp"
#include "oracles.hpp"

using namespace hgogp;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) {
        out[i++] = x;
    }
    return out;
}

GpPosterior one_point(double y, double sf2 = 1.0, double sn2 = 1.0) {
    return fit(KernelParams::isotropic(1, sf2, 1.0), Dataset(Eigen::MatrixXd::Zero(1, 1), vec({y}), sn2));
}

}  // namespace

TEST_CASE("kernel values") {
    const auto k = KernelParams::isotropic(1, 1.0, 1.0);
    CHECK(kernel_eval(k, vec({0.0}), vec({0.0})) == 1.0);
    CHECK(kernel_eval(k, vec({0.0}), vec({2.0})) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(kernel_eval(k, vec({0.0}), vec({2.0})) == doctest::Approx(0.135335).epsilon(1e-6));

    const KernelParams aniso(1.7, vec({0.4, 2.0, 1.1}));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const Eigen::MatrixXd p = oracle::uniform_points(rng, 3, 2, -2.0, 2.0);
        CHECK(kernel_eval(aniso, p.col(0), p.col(1)) == kernel_eval(aniso, p.col(1), p.col(0)));
        CHECK(kernel_eval(aniso, p.col(0), p.col(1)) ==
              doctest::Approx(oracle::se_kernel(1.7, aniso.length_scales(), p.col(0), p.col(1))).epsilon(1e-14));
    }
}

TEST_CASE("kernel parameter validation") {
    CHECK_THROWS_AS(KernelParams(0.0, vec({1.0})), ArgumentError);
    CHECK_THROWS_AS(KernelParams(1.0, vec({1.0, -1.0})), ArgumentError);
    CHECK_THROWS_AS(KernelParams(1.0, Eigen::VectorXd(0)), ArgumentError);
    CHECK_THROWS_AS(kernel_eval(KernelParams::isotropic(2), vec({0.0}), vec({0.0})), ArgumentError);
}

TEST_CASE("empty posterior is the prior") {
    const GpPosterior gp = fit(KernelParams::isotropic(2, 1.5, 1.0), Dataset::empty(2, 0.1));
    CHECK(gp.mean(vec({0.3, -1.0})) == 0.0);
    CHECK(gp.variance(vec({0.3, -1.0})) == 1.5);
    CHECK(gp.mean_gradient(vec({0.3, -1.0})).isZero());
    CHECK_THROWS_AS(gp.gram_inverse_norm(), StateError);
}

TEST_CASE("one-point closed forms") {
    const GpPosterior gp = one_point(2.0);
    CHECK(gp.mean(vec({0.0})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gp.variance(vec({0.0})) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gp.gram_inverse_norm() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gp.weights().norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gp.mean_gradient(vec({0.0})).isZero());
}

TEST_CASE("symmetric pair matches the dense solve") {
    const double a = 0.7;
    Eigen::MatrixXd x(1, 2);
    x << -a, a;
    const GpPosterior gp = fit(KernelParams::isotropic(1), Dataset(x, vec({1.3, 1.3}), 0.2));
    const auto ref = oracle::dense_posterior(1.0, vec({1.0}), x, vec({1.3, 1.3}), 0.2, vec({0.0}));
    CHECK(gp.mean(vec({0.0})) == doctest::Approx(ref.mean).epsilon(1e-12));
    CHECK(gp.weights()[0] == doctest::Approx(gp.weights()[1]).epsilon(1e-14));
}

TEST_CASE("random datasets agree with the oracles") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> npts(1, 6);
    std::uniform_int_distribution<int> ndim(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = npts(rng);
        const int d = ndim(rng);
        const Eigen::VectorXd ls = oracle::uniform_points(rng, d, 1, 0.3, 2.0).col(0);
        const Eigen::MatrixXd x = oracle::uniform_points(rng, d, n, -2.0, 2.0);
        const Eigen::VectorXd y = oracle::uniform_points(rng, n, 1, -1.0, 1.0).col(0);
        const double sn2 = 0.05;
        const GpPosterior gp = fit(KernelParams(1.3, ls), Dataset(x, y, sn2));

        CHECK(gp.gram_inverse_norm() ==
              doctest::Approx(oracle::inverse_spectral_norm(1.3, ls, x, sn2)).epsilon(1e-8));
        CHECK(gp.gram_inverse_norm() <= 1.0 / sn2);

        const Eigen::VectorXd q = oracle::uniform_points(rng, d, 1, -2.0, 2.0).col(0);
        const auto ref = oracle::dense_posterior(1.3, ls, x, y, sn2, q);
        CHECK(std::abs(gp.mean(q) - ref.mean) <= 1e-8 * std::max(std::abs(ref.mean), y.cwiseAbs().maxCoeff()));
        const double var = gp.variance(q);
        CHECK(var >= 0.0);
        CHECK(var <= 1.3);
        CHECK(std::abs(var - ref.variance) <= 1e-8 * 1.3);

        const Eigen::VectorXd fd =
            oracle::fd_gradient([&](const Eigen::VectorXd& z) { return gp.mean(z); }, q, 1e-5);
        CHECK((gp.mean_gradient(q) - fd).norm() <= 1e-5 * std::max(fd.norm(), 1e-3));
    }
}

TEST_CASE("fit errors") {
    Eigen::MatrixXd x(1, 2);
    x << 0.0, 0.0;
    // Duplicate inputs without noise give a singular Gram matrix.
    try {
        fit(KernelParams::isotropic(1), Dataset(x, vec({1.0, 1.0}), 0.0));
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.pivot() == 1);
    }
    CHECK_THROWS_AS(Dataset(x, vec({1.0}), 0.1), ArgumentError);
    CHECK_THROWS_AS(Dataset(x, vec({1.0, 2.0}), -1.0), ArgumentError);
    CHECK_THROWS_AS(fit(KernelParams::isotropic(2), Dataset(x, vec({1.0, 2.0}), 0.1)), ArgumentError);
    CHECK_THROWS_AS(one_point(1.0).mean(vec({0.0, 1.0})), ArgumentError);
}

TEST_CASE("kernel constants") {
    const KernelParams k(2.0, vec({0.5, 3.0}));
    CHECK(kernel_max(k) == 2.0);
    CHECK(kernel_lipschitz(k) == doctest::Approx(2.0 / (0.5 * std::sqrt(std::exp(1.0)))));
    // |d/dr sf2 exp(-r^2 / 2l^2)| peaks at r = l.
    const double l = 0.5;
    double worst = 0.0;
    for (double r = 0.0; r < 3.0; r += 1e-3) {
        worst = std::max(worst, 2.0 * r / (l * l) * std::exp(-r * r / (2 * l * l)));
    }
    CHECK(worst <= kernel_lipschitz(k) + 1e-12);
}
