#pragma once

// High-gain observer for a chain of r integrators driven by a scalar output y:
//
//   dz_i/dt = z_{i+1} + l^i k_i (y - z_1),   i < r
//   dz_r/dt =           l^r k_r (y - z_1)
//
// z_{i+1} practically converges to the i-th time derivative of y. The gains
// must make s^r + k_1 s^{r-1} + ... + k_r Hurwitz.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hgogp {

// Roots of s^r + k_1 s^{r-1} + ... + k_r from the companion matrix.
std::vector<std::complex<double>> gain_polynomial_roots(std::span<const double> gains);

bool check_hurwitz(std::span<const double> gains);

class ObserverConfig {
public:
    // Throws ArgumentError on empty/non-positive gains, non-Hurwitz gains, or scale <= 0.
    ObserverConfig(std::vector<double> gains, double scale);

    std::size_t order() const noexcept { return gains_.size(); }
    const std::vector<double>& gains() const noexcept { return gains_; }
    double scale() const noexcept { return scale_; }

    // l^i k_i, i = 1..r
    const Eigen::VectorXd& injection() const noexcept { return injection_; }

    // Slowest error mode: l * min_i |Re s_i|.
    double convergence_rate() const noexcept { return rate_; }

    // Largest admissible integration step, 1 / (2 l max_i |s_i|).
    double max_stable_step() const noexcept { return max_step_; }

    // Five slowest-mode time constants.
    double warmup_time() const noexcept { return 5.0 / rate_; }

private:
    std::vector<double> gains_;
    double scale_;
    Eigen::VectorXd injection_;
    double rate_ = 0.0;
    double max_step_ = 0.0;
};

double estimate_convergence_rate(const ObserverConfig& config);

struct ObserverState {
    Eigen::VectorXd z_hat;
    double time = 0.0;
};

// z_hat(0) = (y0, 0, ..., 0)
ObserverState initial_observer_state(const ObserverConfig& config, double y0, double t0 = 0.0);

Eigen::VectorXd observer_derivative(const ObserverConfig& config, const Eigen::VectorXd& z_hat, double y);

// One classical RK4 step with y held constant over the step (zero-order hold).
// Throws ArgumentError if dt exceeds max_stable_step(), DivergenceError on a non-finite result.
ObserverState observer_step(const ObserverConfig& config, const ObserverState& state, double y_held, double dt);

// Samples y once at the start of the step.
ObserverState observer_step(const ObserverConfig& config, const ObserverState& state,
                            const std::function<double(double)>& y_sampler, double dt);

}  // namespace hgogp
