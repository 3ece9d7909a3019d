#include "hgogp/parallel.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "hgogp/errors.hpp"

namespace hgogp {

namespace {

void check_queries(const GpPosterior& gp, const Eigen::MatrixXd& queries) {
    if (static_cast<std::size_t>(queries.rows()) != gp.dim()) {
        throw ArgumentError("batch query dimension " + std::to_string(queries.rows()) + " does not match regressor " +
                            std::to_string(gp.dim()));
    }
}

void check_inputs(const KernelParams& kernel, const Eigen::MatrixXd& inputs) {
    if (static_cast<std::size_t>(inputs.rows()) != kernel.dim()) {
        throw ArgumentError("gram_matrix: input dimension does not match kernel");
    }
}

SweepResult run_one(ScenarioConfig config, std::uint64_t seed) {
    SweepResult r;
    r.seed = seed;
    config.seed = seed;
    try {
        r.trace = run_scenario(config);
    } catch (...) {
        r.error = std::current_exception();
    }
    return r;
}

}  // namespace

int worker_threads() { return omp_get_max_threads(); }

Eigen::MatrixXd gram_matrix_serial(const KernelParams& kernel, const Eigen::MatrixXd& inputs) {
    check_inputs(kernel, inputs);
    const Eigen::Index n = inputs.cols();
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            k(i, j) = kernel_eval(kernel, inputs.col(i), inputs.col(j));
        }
    }
    return k;
}

Eigen::MatrixXd gram_matrix(const KernelParams& kernel, const Eigen::MatrixXd& inputs) {
    check_inputs(kernel, inputs);
    const Eigen::Index n = inputs.cols();
    Eigen::MatrixXd k(n, n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            k(i, j) = kernel_eval(kernel, inputs.col(i), inputs.col(j));
        }
    }
    return k;
}

Eigen::VectorXd predict_mean_batch_serial(const GpPosterior& gp, const Eigen::MatrixXd& queries) {
    check_queries(gp, queries);
    Eigen::VectorXd out(queries.cols());
    for (Eigen::Index q = 0; q < queries.cols(); ++q) {
        out[q] = gp.mean(queries.col(q));
    }
    return out;
}

Eigen::VectorXd predict_mean_batch(const GpPosterior& gp, const Eigen::MatrixXd& queries) {
    check_queries(gp, queries);
    Eigen::VectorXd out(queries.cols());
#pragma omp parallel for schedule(static)
    for (Eigen::Index q = 0; q < queries.cols(); ++q) {
        out[q] = gp.mean(queries.col(q));
    }
    return out;
}

Eigen::VectorXd predict_variance_batch_serial(const GpPosterior& gp, const Eigen::MatrixXd& queries) {
    check_queries(gp, queries);
    Eigen::VectorXd out(queries.cols());
    for (Eigen::Index q = 0; q < queries.cols(); ++q) {
        out[q] = gp.variance(queries.col(q));
    }
    return out;
}

Eigen::VectorXd predict_variance_batch(const GpPosterior& gp, const Eigen::MatrixXd& queries) {
    check_queries(gp, queries);
    Eigen::VectorXd out(queries.cols());
#pragma omp parallel for schedule(static)
    for (Eigen::Index q = 0; q < queries.cols(); ++q) {
        out[q] = gp.variance(queries.col(q));
    }
    return out;
}

double max_abs_mean_difference_serial(const GpPosterior& a, const GpPosterior& b, const Eigen::MatrixXd& queries) {
    check_queries(a, queries);
    check_queries(b, queries);
    double best = 0.0;
    for (Eigen::Index q = 0; q < queries.cols(); ++q) {
        best = std::max(best, std::abs(a.mean(queries.col(q)) - b.mean(queries.col(q))));
    }
    return best;
}

double max_abs_mean_difference(const GpPosterior& a, const GpPosterior& b, const Eigen::MatrixXd& queries) {
    check_queries(a, queries);
    check_queries(b, queries);
    double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
    for (Eigen::Index q = 0; q < queries.cols(); ++q) {
        best = std::max(best, std::abs(a.mean(queries.col(q)) - b.mean(queries.col(q))));
    }
    return best;
}

std::vector<SweepResult> run_seed_sweep_serial(const ScenarioConfig& config, std::span<const std::uint64_t> seeds) {
    std::vector<SweepResult> out;
    out.reserve(seeds.size());
    for (std::uint64_t s : seeds) {
        out.push_back(run_one(config, s));
    }
    return out;
}

std::vector<SweepResult> run_seed_sweep(const ScenarioConfig& config, std::span<const std::uint64_t> seeds) {
    std::vector<SweepResult> out(seeds.size());
    const auto n = static_cast<long>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = run_one(config, seeds[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace hgogp
