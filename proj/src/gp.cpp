#include "hgogp/gp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

#include "hgogp/errors.hpp"

namespace hgogp {

KernelParams::KernelParams(double amplitude, Eigen::VectorXd length_scales)
    : amplitude_(amplitude), length_scales_(std::move(length_scales)) {
    if (!(amplitude_ > 0.0) || !std::isfinite(amplitude_)) {
        throw ArgumentError("kernel amplitude must be positive and finite");
    }
    if (length_scales_.size() == 0) {
        throw ArgumentError("kernel needs at least one length scale");
    }
    for (Eigen::Index i = 0; i < length_scales_.size(); ++i) {
        if (!(length_scales_[i] > 0.0) || !std::isfinite(length_scales_[i])) {
            throw ArgumentError("kernel length scale " + std::to_string(i) + " must be positive and finite");
        }
    }
    inv_sq_ = length_scales_.array().square().inverse().matrix();
}

KernelParams KernelParams::isotropic(std::size_t dim, double amplitude, double length_scale) {
    return KernelParams(amplitude, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), length_scale));
}

double kernel_eval(const KernelParams& params, const PointRef& x, const PointRef& xp) {
    if (static_cast<std::size_t>(x.size()) != params.dim() || static_cast<std::size_t>(xp.size()) != params.dim()) {
        throw ArgumentError("kernel_eval: point dimension does not match kernel dimension " +
                            std::to_string(params.dim()));
    }
    // (x-x')^T diag(2 l^2)^{-1} (x-x') = 0.5 * sum d_i^2 / l_i^2
    const double q = 0.5 * ((x - xp).array().square() * params.inverse_squared_scales().array()).sum();
    return params.amplitude() * std::exp(-q);
}

double kernel_lipschitz(const KernelParams& params) {
    return params.amplitude() / (params.length_scales().minCoeff() * std::sqrt(std::exp(1.0)));
}

Dataset::Dataset(Eigen::MatrixXd inputs, Eigen::VectorXd targets, double noise_variance)
    : inputs_(std::move(inputs)), targets_(std::move(targets)), noise_variance_(noise_variance) {
    if (inputs_.cols() != targets_.size()) {
        throw ArgumentError("dataset: " + std::to_string(inputs_.cols()) + " inputs but " +
                            std::to_string(targets_.size()) + " targets");
    }
    if (!(noise_variance_ >= 0.0) || !std::isfinite(noise_variance_)) {
        throw ArgumentError("dataset: noise variance must be non-negative");
    }
}

Dataset Dataset::empty(std::size_t dim, double noise_variance) {
    return Dataset(Eigen::MatrixXd(static_cast<Eigen::Index>(dim), 0), Eigen::VectorXd(0), noise_variance);
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) {
        throw ArgumentError("cholesky_lower: matrix is not square");
    }
    const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                       (n > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 0.0);
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > tol) || !std::isfinite(d)) {
            throw NumericalError("matrix is not positive definite at pivot " + std::to_string(j) +
                                     " (value " + std::to_string(d) + ")",
                                 static_cast<std::size_t>(j));
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
        }
    }
    return l;
}

GpPosterior fit(const KernelParams& kernel, Dataset data) {
    if (data.dim() != kernel.dim()) {
        throw ArgumentError("fit: dataset dimension " + std::to_string(data.dim()) +
                            " does not match kernel dimension " + std::to_string(kernel.dim()));
    }
    GpPosterior gp(kernel, std::move(data));
    const auto n = static_cast<Eigen::Index>(gp.data_.size());
    if (n == 0) {
        gp.weights_ = Eigen::VectorXd(0);
        gp.chol_ = Eigen::MatrixXd(0, 0);
        return gp;
    }
    const Eigen::MatrixXd& x = gp.data_.inputs();
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = kernel.amplitude() + gp.data_.noise_variance();
        for (Eigen::Index j = 0; j < i; ++j) {
            a(i, j) = a(j, i) = kernel_eval(kernel, x.col(i), x.col(j));
        }
    }
    gp.chol_ = cholesky_lower(a);
    const Eigen::VectorXd half = gp.chol_.triangularView<Eigen::Lower>().solve(gp.data_.targets());
    gp.weights_ = gp.chol_.transpose().triangularView<Eigen::Upper>().solve(half);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
    gp.inverse_norm_ = 1.0 / eig.eigenvalues().minCoeff();
    return gp;
}

void GpPosterior::check_query(const PointRef& x) const {
    if (static_cast<std::size_t>(x.size()) != dim()) {
        throw ArgumentError("query point has dimension " + std::to_string(x.size()) + ", expected " +
                            std::to_string(dim()));
    }
}

Eigen::VectorXd GpPosterior::kernel_vector(const PointRef& x) const {
    check_query(x);
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::VectorXd k(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k[i] = kernel_eval(kernel_, x, data_.inputs().col(i));
    }
    return k;
}

double GpPosterior::mean(const PointRef& x) const {
    check_query(x);
    if (size() == 0) {
        return 0.0;
    }
    return kernel_vector(x).dot(weights_);
}

double GpPosterior::variance(const PointRef& x) const {
    check_query(x);
    const double prior = kernel_.amplitude();
    if (size() == 0) {
        return prior;
    }
    const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(kernel_vector(x));
    const double var = prior - v.squaredNorm();
    if (var < 0.0) {
        if (var < -kVarianceClampTolerance) {
            spdlog::debug("posterior variance {} clamped to zero", var);
        }
        return 0.0;
    }
    return var;
}

Eigen::VectorXd GpPosterior::mean_gradient(const PointRef& x) const {
    check_query(x);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
    const auto n = static_cast<Eigen::Index>(size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto xi = data_.inputs().col(i);
        const double k = kernel_eval(kernel_, x, xi);
        // d/dx k(x, x_i) = -k * diag(1/l^2) (x - x_i)
        grad.noalias() -= (weights_[i] * k) * (kernel_.inverse_squared_scales().cwiseProduct(x - xi));
    }
    return grad;
}

double GpPosterior::gram_inverse_norm() const {
    if (size() == 0) {
        throw StateError("gram_inverse_norm: regressor has no training data");
    }
    return inverse_norm_;
}

}  // namespace hgogp
