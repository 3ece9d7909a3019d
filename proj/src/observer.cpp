#include "hgogp/observer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "hgogp/errors.hpp"

namespace hgogp {

std::vector<std::complex<double>> gain_polynomial_roots(std::span<const double> gains) {
    const auto r = static_cast<Eigen::Index>(gains.size());
    if (r == 0) {
        throw ArgumentError("gain polynomial needs at least one gain");
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(r, r);
    for (Eigen::Index j = 0; j < r; ++j) {
        companion(0, j) = -gains[static_cast<std::size_t>(j)];
    }
    for (Eigen::Index i = 1; i < r; ++i) {
        companion(i, i - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const Eigen::VectorXcd ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

bool check_hurwitz(std::span<const double> gains) {
    if (gains.empty()) {
        return false;
    }
    for (double k : gains) {
        if (!std::isfinite(k)) {
            return false;
        }
    }
    const auto roots = gain_polynomial_roots(gains);
    return std::all_of(roots.begin(), roots.end(), [](const std::complex<double>& s) { return s.real() < 0.0; });
}

ObserverConfig::ObserverConfig(std::vector<double> gains, double scale) : gains_(std::move(gains)), scale_(scale) {
    if (gains_.empty()) {
        throw ArgumentError("observer: at least one gain is required");
    }
    for (std::size_t i = 0; i < gains_.size(); ++i) {
        if (!(gains_[i] > 0.0)) {
            throw ArgumentError("observer: gain k" + std::to_string(i + 1) + " must be positive");
        }
    }
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
        throw ArgumentError("observer: scale l must be positive");
    }
    if (!check_hurwitz(gains_)) {
        throw ArgumentError("observer: gain polynomial is not Hurwitz");
    }
    const auto roots = gain_polynomial_roots(gains_);
    double slowest = std::numeric_limits<double>::infinity();
    double fastest = 0.0;
    for (const auto& s : roots) {
        slowest = std::min(slowest, std::abs(s.real()));
        fastest = std::max(fastest, std::abs(s));
    }
    rate_ = scale_ * slowest;
    max_step_ = 1.0 / (2.0 * scale_ * fastest);

    injection_.resize(static_cast<Eigen::Index>(gains_.size()));
    double lp = 1.0;
    for (std::size_t i = 0; i < gains_.size(); ++i) {
        lp *= scale_;
        injection_[static_cast<Eigen::Index>(i)] = lp * gains_[i];
    }
}

double estimate_convergence_rate(const ObserverConfig& config) { return config.convergence_rate(); }

ObserverState initial_observer_state(const ObserverConfig& config, double y0, double t0) {
    ObserverState s;
    s.z_hat = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(config.order()));
    s.z_hat[0] = y0;
    s.time = t0;
    return s;
}

Eigen::VectorXd observer_derivative(const ObserverConfig& config, const Eigen::VectorXd& z_hat, double y) {
    const Eigen::Index r = z_hat.size();
    const double innovation = y - z_hat[0];
    Eigen::VectorXd dz(r);
    for (Eigen::Index i = 0; i + 1 < r; ++i) {
        dz[i] = z_hat[i + 1] + config.injection()[i] * innovation;
    }
    dz[r - 1] = config.injection()[r - 1] * innovation;
    return dz;
}

ObserverState observer_step(const ObserverConfig& config, const ObserverState& state, double y_held, double dt) {
    if (!(dt > 0.0)) {
        throw ArgumentError("observer_step: dt must be positive");
    }
    if (dt > config.max_stable_step()) {
        throw ArgumentError("observer_step: dt " + std::to_string(dt) + " exceeds stability limit 1/(2 l max|root|) = " +
                            std::to_string(config.max_stable_step()));
    }
    if (static_cast<std::size_t>(state.z_hat.size()) != config.order()) {
        throw ArgumentError("observer_step: state dimension does not match observer order");
    }
    const Eigen::VectorXd& z = state.z_hat;
    const Eigen::VectorXd k1 = observer_derivative(config, z, y_held);
    const Eigen::VectorXd k2 = observer_derivative(config, z + 0.5 * dt * k1, y_held);
    const Eigen::VectorXd k3 = observer_derivative(config, z + 0.5 * dt * k2, y_held);
    const Eigen::VectorXd k4 = observer_derivative(config, z + dt * k3, y_held);

    ObserverState next;
    next.z_hat = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next.time = state.time + dt;
    if (!next.z_hat.allFinite()) {
        throw DivergenceError("observer diverged at t = " + std::to_string(next.time), next.time,
                              std::vector<double>(next.z_hat.data(), next.z_hat.data() + next.z_hat.size()));
    }
    return next;
}

ObserverState observer_step(const ObserverConfig& config, const ObserverState& state,
                            const std::function<double(double)>& y_sampler, double dt) {
    return observer_step(config, state, y_sampler(state.time), dt);
}

}  // namespace hgogp
