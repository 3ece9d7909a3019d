#include "hgogp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hgogp/errors.hpp"

namespace hgogp {

namespace {

constexpr double kHugeCount = 1e18;
constexpr int kMaxChunkLevel = 40;

}  // namespace

TrajectoryTube::TrajectoryTube(Eigen::MatrixXd centers, double radius) : centers_(std::move(centers)), radius_(radius) {
    if (centers_.cols() == 0 || centers_.rows() == 0) {
        throw ArgumentError("trajectory tube needs at least one center");
    }
    if (!(radius_ >= 0.0) || !std::isfinite(radius_)) {
        throw ArgumentError("trajectory tube radius must be non-negative");
    }
    if (!centers_.allFinite()) {
        throw ArgumentError("trajectory tube centers must be finite");
    }
}

double TrajectoryTube::length() const {
    double total = 0.0;
    for (Eigen::Index i = 1; i < centers_.cols(); ++i) {
        total += (centers_.col(i) - centers_.col(i - 1)).norm();
    }
    return total;
}

double TrajectoryTube::sample_spacing() const {
    double gap = 0.0;
    for (Eigen::Index i = 1; i < centers_.cols(); ++i) {
        gap = std::max(gap, (centers_.col(i) - centers_.col(i - 1)).norm());
    }
    return gap;
}

std::size_t covering_number(const TrajectoryTube& tube, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ArgumentError("covering_number: rho must be positive");
    }
    const double length = tube.length();
    const double delta = tube.radius();
    const double n = static_cast<double>(tube.dim());

    // Thin tube: walk the polyline and drop a ball every 2 (rho - delta) of arc
    // length. Every point of a chunk lies within rho - delta of its midpoint,
    // so the ball of radius rho there covers the chunk's delta-neighbourhood.
    double best = kHugeCount;
    if (rho > delta) {
        best = std::max(1.0, std::ceil(length / (2.0 * (rho - delta))));
    }
    // Any tube: cut the polyline into 2^j chunks of equal arc length; each
    // chunk's neighbourhood sits in a ball of radius delta + l/2, which is
    // covered by the cubes of side 2 rho / sqrt(n) tiling its bounding cube.
    // The chunk family does not depend on rho or delta, so the minimum stays
    // monotone in both.
    const double side = 2.0 * rho / std::sqrt(n);
    for (int j = 0; j <= kMaxChunkLevel; ++j) {
        const double chunks = length > 0.0 ? std::ldexp(1.0, j) : 1.0;
        const double half = 0.5 * length / chunks;
        const double per_axis = std::max(1.0, std::ceil(2.0 * (delta + half) / side));
        best = std::min(best, chunks * std::pow(per_axis, n));
        if (length == 0.0) {
            break;
        }
    }
    return best >= kHugeCount ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(best);
}

BetaAlpha beta_alpha(std::size_t covering, double confidence_param, double rho, double lipschitz_f,
                     double lipschitz_mean, double lipschitz_variance) {
    if (!(confidence_param > 0.0 && confidence_param < 1.0)) {
        throw ArgumentError("beta_alpha: confidence parameter must lie in (0, 1)");
    }
    if (covering < 1) {
        throw ArgumentError("beta_alpha: covering number must be at least 1");
    }
    if (!(rho >= 0.0) || lipschitz_f < 0.0 || lipschitz_mean < 0.0 || lipschitz_variance < 0.0) {
        throw ArgumentError("beta_alpha: rho and Lipschitz constants must be non-negative");
    }
    BetaAlpha out;
    out.beta = 2.0 * std::log(static_cast<double>(covering) / confidence_param);
    out.alpha = (lipschitz_f + lipschitz_mean) * rho + std::sqrt(out.beta * lipschitz_variance * rho);
    return out;
}

LipschitzBounds lipschitz_bounds(const GpPosterior& gp, double lipschitz_kernel, double kernel_max, double rho) {
    if (gp.size() == 0) {
        throw StateError("lipschitz_bounds: regressor has no training data");
    }
    const double n = static_cast<double>(gp.size());
    LipschitzBounds out;
    out.mean = lipschitz_kernel * std::sqrt(n) * gp.weights().norm();
    out.variance = 2.0 * rho * lipschitz_kernel * (1.0 + n * gp.gram_inverse_norm() * kernel_max);
    return out;
}

double regressor_gap_bound(const GpPosterior& gp, const Eigen::VectorXd& observer_targets,
                           const Eigen::VectorXd& ideal_targets, double kernel_max) {
    if (observer_targets.size() != ideal_targets.size() ||
        static_cast<std::size_t>(observer_targets.size()) != gp.size()) {
        throw ArgumentError("regressor_gap_bound: target vectors must both have length " + std::to_string(gp.size()));
    }
    return kernel_max * gp.gram_inverse_norm() * (observer_targets - ideal_targets).norm();
}

double BoundReport::envelope(const PointRef& x) const {
    double e = std::sqrt(beta) * std::sqrt(gp_->variance(x)) + alpha;
    if (gap) {
        e += *gap;
    }
    return e;
}

BoundReport composite_bound(std::shared_ptr<const GpPosterior> gp, const TrajectoryTube& tube,
                            const BoundInputs& inputs) {
    if (!gp) {
        throw ArgumentError("composite_bound: regressor is null");
    }
    if (tube.dim() != gp->dim()) {
        throw ArgumentError("composite_bound: tube dimension " + std::to_string(tube.dim()) +
                            " does not match regressor dimension " + std::to_string(gp->dim()));
    }
    if (inputs.gap && !(*inputs.gap >= 0.0)) {
        throw ArgumentError("composite_bound: gap must be non-negative");
    }
    BoundReport r;
    r.rho = inputs.rho;
    r.covering = covering_number(tube, inputs.rho);
    r.lipschitz_kernel = kernel_lipschitz(gp->kernel());
    r.kernel_max = kernel_max(gp->kernel());
    r.lipschitz_target = inputs.lipschitz_target;
    const LipschitzBounds lb = lipschitz_bounds(*gp, r.lipschitz_kernel, r.kernel_max, inputs.rho);
    r.lipschitz_mean = lb.mean;
    r.lipschitz_variance = lb.variance;
    const BetaAlpha ba = beta_alpha(r.covering, inputs.eta, inputs.rho, inputs.lipschitz_target, lb.mean, lb.variance);
    r.beta = ba.beta;
    r.alpha = ba.alpha;
    r.confidence = 1.0 - inputs.eta;
    r.gap = inputs.gap;
    r.gp_ = std::move(gp);
    return r;
}

}  // namespace hgogp
