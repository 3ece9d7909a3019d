#pragma once

// Zero-mean Gaussian-process regression with the squared-exponential kernel
//
//   k(x, x') = sf2 * exp(-(x - x')^T L^{-1} (x - x')),   L = diag(2 l_1^2, ..., 2 l_n^2)
//
// The Gram matrix plus noise is factorized once at fit time (Cholesky) and the
// posterior is immutable afterwards, so queries may run concurrently.

#include <cstddef>

#include <Eigen/Dense>

namespace hgogp {

using Point = Eigen::VectorXd;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;

class KernelParams {
public:
    KernelParams(double amplitude, Eigen::VectorXd length_scales);

    static KernelParams isotropic(std::size_t dim, double amplitude = 1.0, double length_scale = 1.0);

    double amplitude() const noexcept { return amplitude_; }
    const Eigen::VectorXd& length_scales() const noexcept { return length_scales_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(length_scales_.size()); }

    // diag(L^{-1}) premultiplied by 2, i.e. 1 / l_i^2. Used by the gradient.
    const Eigen::VectorXd& inverse_squared_scales() const noexcept { return inv_sq_; }

private:
    double amplitude_;
    Eigen::VectorXd length_scales_;
    Eigen::VectorXd inv_sq_;
};

double kernel_eval(const KernelParams& params, const PointRef& x, const PointRef& xp);

// Lipschitz constant of x -> k(x, x') in the Euclidean norm: sf2 / (min_i l_i * sqrt(e)).
double kernel_lipschitz(const KernelParams& params);

// Upper bound of the kernel over all pairs; attained on the diagonal.
inline double kernel_max(const KernelParams& params) { return params.amplitude(); }

class Dataset {
public:
    // inputs: one column per sample (dim x N); targets: length N.
    Dataset(Eigen::MatrixXd inputs, Eigen::VectorXd targets, double noise_variance);

    static Dataset empty(std::size_t dim, double noise_variance);

    std::size_t size() const noexcept { return static_cast<std::size_t>(inputs_.cols()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(inputs_.rows()); }
    bool empty() const noexcept { return size() == 0; }

    const Eigen::MatrixXd& inputs() const noexcept { return inputs_; }
    const Eigen::VectorXd& targets() const noexcept { return targets_; }
    double noise_variance() const noexcept { return noise_variance_; }

private:
    Eigen::MatrixXd inputs_;
    Eigen::VectorXd targets_;
    double noise_variance_;
};

// Lower-triangular L with L L^T = a. Throws NumericalError carrying the failing pivot.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a);

class GpPosterior {
public:
    const KernelParams& kernel() const noexcept { return kernel_; }
    const Dataset& data() const noexcept { return data_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t dim() const noexcept { return kernel_.dim(); }

    // (K + sn2 I)^{-1} y
    const Eigen::VectorXd& weights() const noexcept { return weights_; }
    const Eigen::MatrixXd& gram_factor() const noexcept { return chol_; }

    // Kernel vector k(x) = [k(x, x_1), ..., k(x, x_N)].
    Eigen::VectorXd kernel_vector(const PointRef& x) const;

    double mean(const PointRef& x) const;
    double variance(const PointRef& x) const;
    Eigen::VectorXd mean_gradient(const PointRef& x) const;

    // ||(K + sn2 I)^{-1}||_2 = 1 / lambda_min(K + sn2 I).
    double gram_inverse_norm() const;

    // Threshold below which a negative variance is considered round-off.
    static constexpr double kVarianceClampTolerance = 1e-12;

private:
    friend GpPosterior fit(const KernelParams& kernel, Dataset data);
    GpPosterior(KernelParams kernel, Dataset data) : kernel_(std::move(kernel)), data_(std::move(data)) {}

    void check_query(const PointRef& x) const;

    KernelParams kernel_;
    Dataset data_;
    Eigen::MatrixXd chol_;
    Eigen::VectorXd weights_;
    double inverse_norm_ = 0.0;
};

GpPosterior fit(const KernelParams& kernel, Dataset data);

}  // namespace hgogp
