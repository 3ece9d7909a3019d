#pragma once

// Computable pieces of the uniform error bound for windowed GP regression on
// observer data:
//
//   |mu_obs(x) - f(x)| <= sqrt(beta) * sigma(x) + alpha + gap       on a trajectory tube,
//
//   beta  = 2 ln(M(rho) / eta)
//   alpha = (L_f + L_mu) rho + sqrt(beta L_var rho)
//   gap   = k_max ||(K + sn2 I)^{-1}|| ||Y_obs - Y_true||
//
// with M(rho) a rho-covering number of the tube and L_mu, L_var Lipschitz
// bounds on the posterior mean and variance.

#include <cstddef>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "hgogp/gp.hpp"

namespace hgogp {

// Union of radius-`radius` balls around the polyline through `centers`
// (one column per trajectory sample, in time order).
class TrajectoryTube {
public:
    TrajectoryTube(Eigen::MatrixXd centers, double radius);

    const Eigen::MatrixXd& centers() const noexcept { return centers_; }
    double radius() const noexcept { return radius_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(centers_.rows()); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(centers_.cols()); }

    // Largest distance between consecutive centers.
    double sample_spacing() const;
    // Arc length of the polyline.
    double length() const;

private:
    Eigen::MatrixXd centers_;
    double radius_;
};

// Upper bound on the rho-covering number of the tube, from balls placed along
// the polyline by arc length. Non-increasing in rho and non-decreasing in the
// radius for every pair of arguments; a segment of length L with radius 0 gives
// ceil(L / (2 rho)), the exact minimum.
std::size_t covering_number(const TrajectoryTube& tube, double rho);

struct BetaAlpha {
    double beta = 0.0;
    double alpha = 0.0;
};

// confidence_param is the failure probability (delta or eta), in (0, 1).
BetaAlpha beta_alpha(std::size_t covering, double confidence_param, double rho, double lipschitz_f,
                     double lipschitz_mean, double lipschitz_variance);

struct LipschitzBounds {
    double mean = 0.0;
    double variance = 0.0;
};

// L_mu <= L_k sqrt(N) ||(K + sn2 I)^{-1} y||
// L_var <= 2 rho L_k (1 + N ||(K + sn2 I)^{-1}|| k_max)
LipschitzBounds lipschitz_bounds(const GpPosterior& gp, double lipschitz_kernel, double kernel_max, double rho);

// Bound on sup_x |mu_obs(x) - mu_true(x)| for two regressors sharing the inputs of `gp`:
// k_max * ||(K + sn2 I)^{-1}|| * ||observer_targets - ideal_targets||.
double regressor_gap_bound(const GpPosterior& gp, const Eigen::VectorXd& observer_targets,
                           const Eigen::VectorXd& ideal_targets, double kernel_max);

struct BoundInputs {
    double rho = 0.1;
    double eta = 0.1;               // failure probability
    double lipschitz_target = 0.0;  // L_f of the regressed function on the tube
    std::optional<double> gap;      // unset when ground truth is unavailable
};

class BoundReport {
public:
    double rho = 0.0;
    std::size_t covering = 0;
    double beta = 0.0;
    double alpha = 0.0;
    double lipschitz_kernel = 0.0;
    double kernel_max = 0.0;
    double lipschitz_target = 0.0;
    double lipschitz_mean = 0.0;
    double lipschitz_variance = 0.0;
    double confidence = 0.0;  // 1 - eta
    std::optional<double> gap;

    // sqrt(beta) * sigma(x) + alpha + gap (gap omitted when not computable).
    double envelope(const PointRef& x) const;

    const GpPosterior& posterior() const { return *gp_; }

private:
    friend BoundReport composite_bound(std::shared_ptr<const GpPosterior> gp, const TrajectoryTube& tube,
                                       const BoundInputs& inputs);
    std::shared_ptr<const GpPosterior> gp_;
};

BoundReport composite_bound(std::shared_ptr<const GpPosterior> gp, const TrajectoryTube& tube,
                            const BoundInputs& inputs);

}  // namespace hgogp
