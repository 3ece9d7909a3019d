#pragma once

// Double-integrator agent tracking a reference loop among disc obstacles.
// The measured output is the smoothed squared distance to the obstacles plus
// Gaussian noise; a high-gain observer and two windowed GP regressors estimate
// the output and its Lie derivative along the drift, and the derivative of the
// output regressor serves as the baseline estimate.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hgogp/bounds.hpp"
#include "hgogp/gp.hpp"

namespace hgogp {

struct Obstacle {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double radius = 1.0;
};

struct AgentState {
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    Eigen::Vector2d velocity = Eigen::Vector2d::Zero();

    Eigen::Vector4d stacked() const;
    static AgentState from_stacked(const Eigen::Vector4d& x);
};

// (max(0, |p - c| - R))^2
double squared_distance(const Obstacle& obstacle, const Eigen::Vector2d& p);
Eigen::Vector2d squared_distance_gradient(const Obstacle& obstacle, const Eigen::Vector2d& p);

// sum h_i e^{a h_i} / sum e^{a h_i}; tends to min for a -> -inf and max for a -> +inf.
double smooth_min(std::span<const double> values, double alpha);

struct OutputValue {
    double value = 0.0;       // h_s(p)
    double lie = 0.0;         // L_f h_s(x) = grad_p h_s . v
    Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
};

OutputValue hs_and_lie_derivative(std::span<const Obstacle> obstacles, double alpha, const AgentState& state);

// Piecewise-cubic (Catmull-Rom) reference through waypoints with a fixed
// duration per segment. A closed loop is periodic and defined for all t >= 0;
// a single waypoint yields a constant reference.
class ReferenceTrajectory {
public:
    ReferenceTrajectory(std::vector<Eigen::Vector2d> waypoints, double segment_duration, bool closed);

    // Throws ArgumentError when t lies outside the domain.
    std::pair<Eigen::Vector2d, Eigen::Vector2d> evaluate(double t) const;

    // Upper end of the domain (infinity for closed loops and constant references).
    double domain_end() const noexcept { return end_; }

private:
    std::vector<Eigen::Vector2d> points_;
    double segment_duration_;
    bool closed_;
    double end_;
};

// u = -kp (p - p*) - kv (v - v*)
Eigen::Vector2d control_input(double kp, double kv, const ReferenceTrajectory& reference, const AgentState& state,
                              double t);

enum class BaselineSource { Measurement, Observer };

struct GpSettings {
    double amplitude = 1.0;
    std::vector<double> length_scales{1.0, 1.0, 1.0, 1.0};
    double noise_variance_output = 1e-3;      // regressor of h
    double noise_variance_derivative = 1e-2;  // regressor of L_f h on observer targets
    BaselineSource baseline_source = BaselineSource::Measurement;
};

struct BoundSettings {
    std::optional<double> rho;  // defaults to trigger_distance / 2
    double tube_radius = 0.05;
    double eta = 0.1;
    std::size_t perturbations_per_center = 4;
};

struct ScenarioConfig {
    std::vector<Obstacle> obstacles;
    double smoothing = -5.0;
    double kp = 8.0;
    double kv = 2.0;
    std::vector<Eigen::Vector2d> waypoints;
    double segment_duration = 2.5;
    bool closed_reference = true;
    Eigen::Vector2d initial_position_offset = Eigen::Vector2d::Zero();
    Eigen::Vector2d initial_velocity = Eigen::Vector2d::Zero();
    double noise_variance = 1e-3;

    std::vector<double> observer_gains{8.0, 15.0};
    double observer_scale = 20.0;

    std::size_t window_capacity = 10;
    double trigger_distance = 0.2;

    GpSettings gp;
    BoundSettings bounds;

    double duration = 20.0;
    double dt = 1e-4;
    std::size_t record_every = 10;
    double transient = 5.0;
    std::uint64_t seed = 1;

    // Obstacle layout and reference loop used when the config file omits them.
    static ScenarioConfig defaults();
};

// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& config);

struct TraceRow {
    double t = 0.0;
    double p_x = 0.0, p_y = 0.0, v_x = 0.0, v_y = 0.0;
    double y_noisy = 0.0;
    double hs_true = 0.0;
    double lf_hs_true = 0.0;
    double zhat1 = 0.0, zhat2 = 0.0;
    double gp_h_mean = 0.0;
    double gp_h1_mean = 0.0;
    double baseline_lf_gph = 0.0;
    double err_h1 = 0.0;
    double err_baseline = 0.0;
    int window_event = 0;
};

struct TraceSummary {
    double mean_err_h1 = 0.0;        // time-average over t > transient, every integration step
    double mean_err_baseline = 0.0;
    double mean_err_observer = 0.0;  // |z2 - L_f h_s|
    std::size_t post_transient_steps = 0;
    std::size_t accepted_samples = 0;
};

struct CoverageReport {
    std::size_t query_points = 0;
    std::size_t covered_points = 0;
    double max_error = 0.0;
    double min_margin = 0.0;  // min over queries of envelope - error
    bool all_covered() const noexcept { return query_points > 0 && covered_points == query_points; }
};

struct WindowBound {
    BoundReport report;
    CoverageReport coverage;
    double window_start = 0.0;
    double window_end = 0.0;
    std::size_t tube_centers = 0;
};

struct SimulationTrace {
    std::vector<TraceRow> rows;
    TraceSummary summary;
    std::optional<WindowBound> bound;  // bound for the final window of the derivative regressor
};

class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, SimulationTrace partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const SimulationTrace& partial() const noexcept { return partial_; }

private:
    SimulationTrace partial_;
};

// Standard normal deviates from mt19937_64 via Box-Muller (cosine branch);
// fixed algorithm so traces are reproducible across standard libraries.
class GaussianNoise {
public:
    explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}
    double operator()(double variance);

    // Uniform on (0, 1) from the top 53 bits of one draw.
    double uniform();

private:
    std::mt19937_64 engine_;
};

SimulationTrace run_scenario(const ScenarioConfig& config);

// Largest |grad_x L_f h_s| over the given states (central differences), used as
// the Lipschitz constant of the regressed function on a tube.
double lie_derivative_lipschitz(std::span<const Obstacle> obstacles, double alpha, const Eigen::MatrixXd& states);

}  // namespace hgogp
