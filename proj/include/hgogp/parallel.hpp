#pragma once

// Data-parallel kernels (OpenMP) with serial reference versions. The serial
// variants are the behavioural reference for tests and the baseline for the
// benchmarks; both produce identical results element for element.

#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hgogp/gp.hpp"
#include "hgogp/scenario.hpp"

namespace hgogp {

// Full Gram matrix k(x_i, x_j) for inputs given as columns.
Eigen::MatrixXd gram_matrix(const KernelParams& kernel, const Eigen::MatrixXd& inputs);
Eigen::MatrixXd gram_matrix_serial(const KernelParams& kernel, const Eigen::MatrixXd& inputs);

// Posterior mean / variance at each query column.
Eigen::VectorXd predict_mean_batch(const GpPosterior& gp, const Eigen::MatrixXd& queries);
Eigen::VectorXd predict_mean_batch_serial(const GpPosterior& gp, const Eigen::MatrixXd& queries);
Eigen::VectorXd predict_variance_batch(const GpPosterior& gp, const Eigen::MatrixXd& queries);
Eigen::VectorXd predict_variance_batch_serial(const GpPosterior& gp, const Eigen::MatrixXd& queries);

// max over query columns of |mu_a(x) - mu_b(x)|.
double max_abs_mean_difference(const GpPosterior& a, const GpPosterior& b, const Eigen::MatrixXd& queries);
double max_abs_mean_difference_serial(const GpPosterior& a, const GpPosterior& b, const Eigen::MatrixXd& queries);

struct SweepResult {
    std::uint64_t seed = 0;
    std::optional<SimulationTrace> trace;
    std::exception_ptr error;  // set when the run threw
};

// Independent scenario runs, one per seed, returned in seed order.
std::vector<SweepResult> run_seed_sweep(const ScenarioConfig& config, std::span<const std::uint64_t> seeds);
std::vector<SweepResult> run_seed_sweep_serial(const ScenarioConfig& config, std::span<const std::uint64_t> seeds);

int worker_threads();

}  // namespace hgogp
