#include "hgogp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "hgogp/errors.hpp"
#include "hgogp/observer.hpp"
#include "hgogp/window.hpp"

namespace hgogp {

Eigen::Vector4d AgentState::stacked() const {
    Eigen::Vector4d x;
    x << position, velocity;
    return x;
}

AgentState AgentState::from_stacked(const Eigen::Vector4d& x) { return AgentState{x.head<2>(), x.tail<2>()}; }

double squared_distance(const Obstacle& obstacle, const Eigen::Vector2d& p) {
    const double gap = std::max(0.0, (p - obstacle.center).norm() - obstacle.radius);
    return gap * gap;
}

Eigen::Vector2d squared_distance_gradient(const Obstacle& obstacle, const Eigen::Vector2d& p) {
    const Eigen::Vector2d d = p - obstacle.center;
    const double dist = d.norm();
    if (dist <= obstacle.radius) {
        return Eigen::Vector2d::Zero();
    }
    return 2.0 * (dist - obstacle.radius) / dist * d;
}

double smooth_min(std::span<const double> values, double alpha) {
    if (values.empty()) {
        throw ArgumentError("smooth_min: no values");
    }
    // Shift exponents by their maximum so the largest weight is exp(0).
    double shift = -std::numeric_limits<double>::infinity();
    for (double h : values) {
        shift = std::max(shift, alpha * h);
    }
    double num = 0.0;
    double den = 0.0;
    for (double h : values) {
        const double w = std::exp(alpha * h - shift);
        num += h * w;
        den += w;
    }
    return num / den;
}

OutputValue hs_and_lie_derivative(std::span<const Obstacle> obstacles, double alpha, const AgentState& state) {
    if (obstacles.empty()) {
        throw ArgumentError("hs_and_lie_derivative: at least one obstacle is required");
    }
    const std::size_t n = obstacles.size();
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = squared_distance(obstacles[i], state.position);
    }
    double shift = -std::numeric_limits<double>::infinity();
    for (double hi : h) {
        shift = std::max(shift, alpha * hi);
    }
    std::vector<double> w(n);
    double den = 0.0;
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp(alpha * h[i] - shift);
        den += w[i];
        num += h[i] * w[i];
    }
    OutputValue out;
    out.value = num / den;
    // d h_s / d h_i = w_i (1 + alpha (h_i - h_s)) with normalized weights w_i
    for (std::size_t i = 0; i < n; ++i) {
        const double dhi = (w[i] / den) * (1.0 + alpha * (h[i] - out.value));
        out.gradient += dhi * squared_distance_gradient(obstacles[i], state.position);
    }
    out.lie = out.gradient.dot(state.velocity);
    return out;
}

ReferenceTrajectory::ReferenceTrajectory(std::vector<Eigen::Vector2d> waypoints, double segment_duration, bool closed)
    : points_(std::move(waypoints)), segment_duration_(segment_duration), closed_(closed) {
    if (points_.empty()) {
        throw ArgumentError("reference: at least one waypoint is required");
    }
    if (!(segment_duration_ > 0.0)) {
        throw ArgumentError("reference: segment duration must be positive");
    }
    if (points_.size() == 1 || closed_) {
        end_ = std::numeric_limits<double>::infinity();
    } else {
        end_ = segment_duration_ * static_cast<double>(points_.size() - 1);
    }
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> ReferenceTrajectory::evaluate(double t) const {
    if (!(t >= 0.0) || t > end_) {
        throw ArgumentError("reference: t = " + std::to_string(t) + " outside [0, " + std::to_string(end_) + "]");
    }
    const std::size_t m = points_.size();
    if (m == 1) {
        return {points_[0], Eigen::Vector2d::Zero()};
    }
    const std::size_t segments = closed_ ? m : m - 1;
    double s = t / segment_duration_;
    std::size_t seg;
    if (closed_) {
        s = std::fmod(s, static_cast<double>(segments));
        seg = std::min(static_cast<std::size_t>(s), segments - 1);
    } else {
        seg = std::min(static_cast<std::size_t>(s), segments - 1);
    }
    const double u = s - static_cast<double>(seg);

    auto point = [&](long i) -> const Eigen::Vector2d& {
        const long mm = static_cast<long>(m);
        if (closed_) {
            return points_[static_cast<std::size_t>(((i % mm) + mm) % mm)];
        }
        return points_[static_cast<std::size_t>(std::clamp(i, 0L, mm - 1))];
    };
    auto tangent = [&](long i) -> Eigen::Vector2d {
        if (!closed_ && (i == 0 || i == static_cast<long>(m) - 1)) {
            return i == 0 ? Eigen::Vector2d(point(1) - point(0)) : Eigen::Vector2d(point(i) - point(i - 1));
        }
        return 0.5 * (point(i + 1) - point(i - 1));
    };
    const long i0 = static_cast<long>(seg);
    const Eigen::Vector2d& p0 = point(i0);
    const Eigen::Vector2d& p1 = point(i0 + 1);
    const Eigen::Vector2d m0 = tangent(i0);
    const Eigen::Vector2d m1 = tangent(i0 + 1);

    const double u2 = u * u;
    const double u3 = u2 * u;
    const Eigen::Vector2d pos = (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * p1 +
                                (u3 - u2) * m1;
    const Eigen::Vector2d dpos =
        (6 * u2 - 6 * u) * p0 + (3 * u2 - 4 * u + 1) * m0 + (-6 * u2 + 6 * u) * p1 + (3 * u2 - 2 * u) * m1;
    return {pos, dpos / segment_duration_};
}

Eigen::Vector2d control_input(double kp, double kv, const ReferenceTrajectory& reference, const AgentState& state,
                              double t) {
    const auto [p_ref, v_ref] = reference.evaluate(t);
    return -kp * (state.position - p_ref) - kv * (state.velocity - v_ref);
}

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig c;
    c.waypoints = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(4.0, 0.0), Eigen::Vector2d(4.0, 4.0),
                   Eigen::Vector2d(0.0, 4.0)};
    c.obstacles = {Obstacle{Eigen::Vector2d(2.0, 2.0), 0.8}, Obstacle{Eigen::Vector2d(5.6, 2.0), 0.6}};
    return c;
}

void validate(const ScenarioConfig& c) {
    auto require = [](bool ok, const char* field, const std::string& what) {
        if (!ok) {
            throw ConfigError(field, what);
        }
    };
    require(!c.obstacles.empty(), "scenario.obstacles", "at least one obstacle is required");
    for (const auto& o : c.obstacles) {
        require(o.radius > 0.0 && std::isfinite(o.radius), "scenario.obstacles.radius", "must be positive");
        require(o.center.allFinite(), "scenario.obstacles.center", "must be finite");
    }
    require(std::isfinite(c.smoothing), "scenario.smoothing", "must be finite");
    require(c.kp > 0.0, "scenario.controller.kp", "must be positive");
    require(c.kv > 0.0, "scenario.controller.kv", "must be positive");
    require(!c.waypoints.empty(), "scenario.reference.waypoints", "at least one waypoint is required");
    require(c.segment_duration > 0.0, "scenario.reference.segment_duration", "must be positive");
    require(c.noise_variance >= 0.0 && std::isfinite(c.noise_variance), "scenario.noise_variance",
            "must be non-negative");
    require(c.duration > 0.0 && std::isfinite(c.duration), "scenario.duration", "must be positive");
    require(c.dt > 0.0 && c.dt < c.duration, "scenario.dt", "must be positive and shorter than the duration");
    require(c.record_every >= 1, "scenario.record_every", "must be at least 1");
    require(c.transient >= 0.0 && c.transient < c.duration, "scenario.transient", "must lie in [0, duration)");
    if (!c.closed_reference && c.waypoints.size() > 1) {
        require(c.segment_duration * static_cast<double>(c.waypoints.size() - 1) >= c.duration,
                "scenario.reference.segment_duration", "open reference ends before the simulation duration");
    }

    require(c.observer_gains.size() == 2, "observer.gains",
            "the obstacle scenario estimates h and L_f h, so exactly two gains are required");
    for (double k : c.observer_gains) {
        require(k > 0.0, "observer.gains", "gains must be positive");
    }
    require(check_hurwitz(c.observer_gains), "observer.gains", "gain polynomial is not Hurwitz");
    require(c.observer_scale > 0.0 && std::isfinite(c.observer_scale), "observer.scale", "must be positive");
    const ObserverConfig oc(c.observer_gains, c.observer_scale);
    if (c.dt > oc.max_stable_step()) {
        throw ConfigError("observer.scale", "integration step dt = " + std::to_string(c.dt) +
                                                " violates the stability rule dt <= 1/(2 l max|root|) = " +
                                                std::to_string(oc.max_stable_step()));
    }

    require(c.window_capacity >= 1, "window.capacity", "must be at least 1");
    require(c.trigger_distance > 0.0 && std::isfinite(c.trigger_distance), "window.trigger_distance",
            "must be positive");

    require(c.gp.amplitude > 0.0, "gp.amplitude", "must be positive");
    require(c.gp.length_scales.size() == 4, "gp.length_scales", "one length scale per state coordinate (4)");
    for (double l : c.gp.length_scales) {
        require(l > 0.0 && std::isfinite(l), "gp.length_scales", "must be positive");
    }
    require(c.gp.noise_variance_output > 0.0, "gp.noise_variance_output", "must be positive");
    require(c.gp.noise_variance_derivative > 0.0, "gp.noise_variance_derivative", "must be positive");

    if (c.bounds.rho) {
        require(*c.bounds.rho > 0.0, "bounds.rho", "must be positive");
    }
    require(c.bounds.tube_radius >= 0.0, "bounds.tube_radius", "must be non-negative");
    require(c.bounds.eta > 0.0 && c.bounds.eta < 1.0, "bounds.eta", "must lie in (0, 1)");
}

double GaussianNoise::uniform() {
    // 53 random bits mapped to (0, 1).
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianNoise::operator()(double variance) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return std::sqrt(variance) * z;
}

double lie_derivative_lipschitz(std::span<const Obstacle> obstacles, double alpha, const Eigen::MatrixXd& states) {
    constexpr double h = 1e-6;
    double best = 0.0;
    for (Eigen::Index c = 0; c < states.cols(); ++c) {
        const Eigen::Vector4d x = states.col(c);
        Eigen::Vector4d grad;
        for (int i = 0; i < 4; ++i) {
            Eigen::Vector4d xp = x;
            Eigen::Vector4d xm = x;
            xp[i] += h;
            xm[i] -= h;
            grad[i] = (hs_and_lie_derivative(obstacles, alpha, AgentState::from_stacked(xp)).lie -
                       hs_and_lie_derivative(obstacles, alpha, AgentState::from_stacked(xm)).lie) /
                      (2.0 * h);
        }
        best = std::max(best, grad.norm());
    }
    return best;
}

namespace {

struct Estimators {
    std::shared_ptr<const GpPosterior> output;      // regressor of h (baseline source)
    std::shared_ptr<const GpPosterior> derivative;  // regressor of L_f h on observer targets
};

Estimators refit(const ScenarioConfig& c, const KernelParams& kernel, const SlidingWindow& window) {
    Estimators e;
    Dataset h_data = c.gp.baseline_source == BaselineSource::Measurement
                         ? window.measurement_dataset(c.gp.noise_variance_output)
                         : window.as_dataset(0, c.gp.noise_variance_output);
    e.output = std::make_shared<const GpPosterior>(fit(kernel, std::move(h_data)));
    e.derivative = std::make_shared<const GpPosterior>(fit(kernel, window.as_dataset(1, c.gp.noise_variance_derivative)));
    return e;
}

Eigen::Vector4d agent_rhs(const ScenarioConfig& c, const ReferenceTrajectory& ref, const Eigen::Vector4d& x, double t) {
    const AgentState s = AgentState::from_stacked(x);
    const Eigen::Vector2d u = control_input(c.kp, c.kv, ref, s, t);
    Eigen::Vector4d dx;
    dx << s.velocity, u;
    return dx;
}

// Decimate recorded states in [t0, t1] so consecutive centers are at least `spacing` apart.
Eigen::MatrixXd tube_centers(const std::vector<TraceRow>& rows, double t0, double t1, double spacing) {
    std::vector<Eigen::Vector4d> picked;
    for (const TraceRow& r : rows) {
        if (r.t < t0 || r.t > t1) {
            continue;
        }
        const Eigen::Vector4d x(r.p_x, r.p_y, r.v_x, r.v_y);
        if (picked.empty() || (x - picked.back()).norm() >= spacing) {
            picked.push_back(x);
        }
    }
    Eigen::MatrixXd m(4, static_cast<Eigen::Index>(picked.size()));
    for (std::size_t i = 0; i < picked.size(); ++i) {
        m.col(static_cast<Eigen::Index>(i)) = picked[i];
    }
    return m;
}

WindowBound final_window_bound(const ScenarioConfig& c, const SlidingWindow& window, const Estimators& est,
                               const std::vector<TraceRow>& rows) {
    WindowBound wb;
    wb.window_start = window.samples().front().time;
    wb.window_end = window.samples().back().time;
    const double rho = c.bounds.rho.value_or(0.5 * c.trigger_distance);

    Eigen::MatrixXd centers = tube_centers(rows, wb.window_start, wb.window_end, 0.25 * rho);
    if (centers.cols() == 0) {
        centers = window.states();
    }
    wb.tube_centers = static_cast<std::size_t>(centers.cols());
    const TrajectoryTube tube(centers, c.bounds.tube_radius);

    // Query points: tube centers and random points within the tube radius of each.
    GaussianNoise rng(c.seed ^ 0x9E3779B97F4A7C15ULL);
    const std::size_t extra = c.bounds.tube_radius > 0.0 ? c.bounds.perturbations_per_center : 0;
    Eigen::MatrixXd queries(4, centers.cols() * static_cast<Eigen::Index>(1 + extra));
    Eigen::Index q = 0;
    for (Eigen::Index i = 0; i < centers.cols(); ++i) {
        queries.col(q++) = centers.col(i);
        for (std::size_t k = 0; k < extra; ++k) {
            Eigen::Vector4d dir;
            for (int d = 0; d < 4; ++d) {
                dir[d] = rng(1.0);
            }
            // uniform in the 4-ball: radius fraction u^{1/4}
            const double frac = std::pow(rng.uniform(), 0.25);
            queries.col(q++) = centers.col(i) + (c.bounds.tube_radius * frac / dir.norm()) * dir;
        }
    }

    // Ground truth at the stored samples closes the observer-to-ideal gap.
    const auto& samples = window.samples();
    Eigen::VectorXd observed(static_cast<Eigen::Index>(samples.size()));
    Eigen::VectorXd ideal(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        observed[static_cast<Eigen::Index>(i)] = samples[i].targets[1];
        ideal[static_cast<Eigen::Index>(i)] =
            hs_and_lie_derivative(c.obstacles, c.smoothing, AgentState::from_stacked(samples[i].state)).lie;
    }

    BoundInputs in;
    in.rho = rho;
    in.eta = c.bounds.eta;
    in.lipschitz_target = lie_derivative_lipschitz(c.obstacles, c.smoothing, queries);
    in.gap = regressor_gap_bound(*est.derivative, observed, ideal, kernel_max(est.derivative->kernel()));
    wb.report = composite_bound(est.derivative, tube, in);

    CoverageReport& cov = wb.coverage;
    cov.min_margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < queries.cols(); ++i) {
        const Eigen::Vector4d x = queries.col(i);
        const double truth = hs_and_lie_derivative(c.obstacles, c.smoothing, AgentState::from_stacked(x)).lie;
        const double err = std::abs(est.derivative->mean(x) - truth);
        const double margin = wb.report.envelope(x) - err;
        ++cov.query_points;
        if (margin >= 0.0) {
            ++cov.covered_points;
        }
        cov.max_error = std::max(cov.max_error, err);
        cov.min_margin = std::min(cov.min_margin, margin);
    }
    return wb;
}

}  // namespace

SimulationTrace run_scenario(const ScenarioConfig& c) {
    validate(c);
    const ObserverConfig oc(c.observer_gains, c.observer_scale);
    const ReferenceTrajectory ref(c.waypoints, c.segment_duration, c.closed_reference);
    const KernelParams kernel(c.gp.amplitude,
                              Eigen::Map<const Eigen::VectorXd>(c.gp.length_scales.data(),
                                                                static_cast<Eigen::Index>(c.gp.length_scales.size())));
    GaussianNoise noise(c.seed);
    SlidingWindow window(c.window_capacity, c.trigger_distance);

    const auto steps = static_cast<std::size_t>(std::llround(c.duration / c.dt));
    SimulationTrace trace;
    trace.rows.reserve(steps / c.record_every + 2);

    AgentState agent;
    {
        const auto [p0, v0] = ref.evaluate(0.0);
        (void)v0;
        agent.position = p0 + c.initial_position_offset;
        agent.velocity = c.initial_velocity;
    }
    Eigen::Vector4d x = agent.stacked();
    double t = 0.0;
    OutputValue truth = hs_and_lie_derivative(c.obstacles, c.smoothing, agent);
    double y = truth.value + noise(c.noise_variance);
    ObserverState obs = initial_observer_state(oc, y, t);

    window.offer(t, x, obs.z_hat, y);
    Estimators est = refit(c, kernel, window);
    bool event = true;

    double sum_h1 = 0.0;
    double sum_base = 0.0;
    double sum_obs = 0.0;
    std::size_t count = 0;

    for (std::size_t n = 0; n <= steps; ++n) {
        const double gp_h1 = est.derivative->mean(x);
        const Eigen::VectorXd grad = est.output->mean_gradient(x);
        // L_f mu = grad mu . f(x), with drift f(p, v) = (v, 0)
        const double baseline = grad.head<2>().dot(x.tail<2>());
        const double err_h1 = std::abs(gp_h1 - truth.lie);
        const double err_base = std::abs(baseline - truth.lie);
        if (t > c.transient) {
            sum_h1 += err_h1;
            sum_base += err_base;
            sum_obs += std::abs(obs.z_hat[1] - truth.lie);
            ++count;
        }
        if (n % c.record_every == 0 || n == steps) {
            TraceRow row;
            row.t = t;
            row.p_x = x[0];
            row.p_y = x[1];
            row.v_x = x[2];
            row.v_y = x[3];
            row.y_noisy = y;
            row.hs_true = truth.value;
            row.lf_hs_true = truth.lie;
            row.zhat1 = obs.z_hat[0];
            row.zhat2 = obs.z_hat[1];
            row.gp_h_mean = est.output->mean(x);
            row.gp_h1_mean = gp_h1;
            row.baseline_lf_gph = baseline;
            row.err_h1 = err_h1;
            row.err_baseline = err_base;
            row.window_event = event ? 1 : 0;
            trace.rows.push_back(row);
            event = false;
        }
        if (n == steps) {
            break;
        }

        try {
            obs = observer_step(oc, obs, y, c.dt);
        } catch (const DivergenceError& e) {
            throw SimulationError(e.what(), std::move(trace));
        }
        const Eigen::Vector4d k1 = agent_rhs(c, ref, x, t);
        const Eigen::Vector4d k2 = agent_rhs(c, ref, x + 0.5 * c.dt * k1, t + 0.5 * c.dt);
        const Eigen::Vector4d k3 = agent_rhs(c, ref, x + 0.5 * c.dt * k2, t + 0.5 * c.dt);
        const Eigen::Vector4d k4 = agent_rhs(c, ref, x + c.dt * k3, t + c.dt);
        x += (c.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = static_cast<double>(n + 1) * c.dt;
        if (!x.allFinite()) {
            throw SimulationError("agent state diverged at t = " + std::to_string(t), std::move(trace));
        }

        truth = hs_and_lie_derivative(c.obstacles, c.smoothing, AgentState::from_stacked(x));
        y = truth.value + noise(c.noise_variance);
        if (window.offer(t, x, obs.z_hat, y)) {
            est = refit(c, kernel, window);
            event = true;
        }
    }

    if (count > 0) {
        trace.summary.mean_err_h1 = sum_h1 / static_cast<double>(count);
        trace.summary.mean_err_baseline = sum_base / static_cast<double>(count);
        trace.summary.mean_err_observer = sum_obs / static_cast<double>(count);
    }
    trace.summary.post_transient_steps = count;
    trace.summary.accepted_samples = window.accepted_count();
    trace.bound = final_window_bound(c, window, est, trace.rows);
    return trace;
}

}  // namespace hgogp
