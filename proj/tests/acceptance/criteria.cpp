#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "hgogp/bounds.hpp"
#include "hgogp/commands.hpp"
#include "hgogp/config.hpp"
#include "hgogp/gp.hpp"
#include "hgogp/observer.hpp"
#include "hgogp/parallel.hpp"
#include "hgogp/scenario.hpp"

#include "../support/oracles.hpp"

namespace acceptance {

namespace {

using hgogp::Dataset;
using hgogp::GpPosterior;
using hgogp::KernelParams;

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Finish a result: the runtime limit is part of the pass condition.
Result finish(Result r, bool ok, const Timer& timer, std::string detail) {
    r.seconds = timer.seconds();
    r.passed = ok && r.seconds <= r.limit_seconds;
    r.detail = std::move(detail);
    if (ok && !r.passed) {
        r.detail += " (runtime limit exceeded)";
    }
    return r;
}

template <typename F>
Result guarded(Result r, F&& body) {
    const Timer timer;
    try {
        return body(r, timer);
    } catch (const std::exception& e) {
        return finish(r, false, timer, std::string("exception: ") + e.what());
    }
}

struct RandomProblem {
    double sf2 = 1.0;
    Eigen::VectorXd ls;
    double sn2 = 0.1;
    Eigen::MatrixXd inputs;
    Eigen::VectorXd targets;

    KernelParams kernel() const { return KernelParams(sf2, ls); }
    GpPosterior fit() const { return hgogp::fit(kernel(), Dataset(inputs, targets, sn2)); }
};

RandomProblem random_problem(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> npoints(1, 8);
    std::uniform_int_distribution<int> ndim(1, 4);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_real_distribution<double> scale(0.3, 2.0);
    std::uniform_real_distribution<double> log_noise(std::log(0.01), std::log(1.0));
    std::normal_distribution<double> normal(0.0, 1.0);

    RandomProblem p;
    const int n = npoints(rng);
    const int d = ndim(rng);
    p.sf2 = amp(rng);
    p.ls.resize(d);
    for (int i = 0; i < d; ++i) {
        p.ls[i] = scale(rng);
    }
    p.sn2 = std::exp(log_noise(rng));
    p.inputs = oracle::uniform_points(rng, d, n, -2.0, 2.0);
    p.targets.resize(n);
    for (int i = 0; i < n; ++i) {
        p.targets[i] = normal(rng);
    }
    return p;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

}  // namespace

Result gp_oracle(const Options& options) {
    Result r{1, "gp-oracle", false, false, 0.0, 10.0, ""};
    return guarded(r, [&](Result r, const Timer& timer) {
        std::mt19937_64 rng(101);
        double worst = 0.0;
        for (int trial = 0; trial < 500; ++trial) {
            const RandomProblem p = random_problem(rng);
            const GpPosterior gp = p.fit();
            Eigen::MatrixXd queries = oracle::uniform_points(rng, static_cast<int>(p.ls.size()), 4, -2.5, 2.5);
            queries.conservativeResize(Eigen::NoChange, 5);
            queries.col(4) = p.inputs.col(0);
            const double mean_scale = std::max(p.targets.cwiseAbs().maxCoeff(), 1e-300);
            for (Eigen::Index q = 0; q < queries.cols(); ++q) {
                const auto ref = oracle::dense_posterior(p.sf2, p.ls, p.inputs, p.targets, p.sn2, queries.col(q));
                const double em = std::abs(gp.mean(queries.col(q)) - ref.mean) / std::max(std::abs(ref.mean), mean_scale);
                const double ev = std::abs(gp.variance(queries.col(q)) - ref.variance) /
                                  std::max(std::abs(ref.variance), p.sf2);
                worst = std::max({worst, em, ev});
            }
        }
        const bool ok = worst <= options.oracle_tolerance;
        return finish(r, ok, timer,
                      "500 datasets, worst relative error " + fmt(worst) + " (tol " + fmt(options.oracle_tolerance) + ")");
    });
}

Result mean_gradient(const Options&) {
    Result r{2, "mean-gradient", false, false, 0.0, 5.0, ""};
    return guarded(r, [&](Result r, const Timer& timer) {
        std::mt19937_64 rng(202);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const RandomProblem p = random_problem(rng);
            const GpPosterior gp = p.fit();
            const Eigen::VectorXd x = oracle::uniform_points(rng, static_cast<int>(p.ls.size()), 1, -2.0, 2.0).col(0);
            const Eigen::VectorXd g = gp.mean_gradient(x);
            const Eigen::VectorXd fd =
                oracle::fd_gradient([&](const Eigen::VectorXd& z) { return gp.mean(z); }, x, 1e-5);
            worst = std::max(worst, (g - fd).norm() / std::max(fd.norm(), 1e-3));
        }
        return finish(r, worst < 1e-5, timer, "100 fits, worst relative error " + fmt(worst) + " (tol 1e-05)");
    });
}

namespace {

struct ObserverRun {
    double sup_error = 0.0;  // sup_{t > 3} |z2 - cos t| for y = sin t
    double noise_std = 0.0;  // std of z2 for y = 1 + noise
};

ObserverRun observer_run(const std::vector<double>& gains, double l) {
    const hgogp::ObserverConfig cfg(gains, l);
    constexpr double dt = 1e-4;
    ObserverRun out;

    hgogp::ObserverState s = hgogp::initial_observer_state(cfg, 0.0);
    const std::function<double(double)> sine = [](double t) { return std::sin(t); };
    for (int n = 0; n < 100000; ++n) {
        s = hgogp::observer_step(cfg, s, sine, dt);
        if (s.time > 3.0) {
            out.sup_error = std::max(out.sup_error, std::abs(s.z_hat[1] - std::cos(s.time)));
        }
    }

    hgogp::GaussianNoise noise(77);
    s = hgogp::initial_observer_state(cfg, 1.0);
    double sum = 0.0, sum2 = 0.0;
    long count = 0;
    for (int n = 0; n < 100000; ++n) {
        s = hgogp::observer_step(cfg, s, 1.0 + noise(1e-3), dt);
        if (s.time > 1.0) {
            sum += s.z_hat[1];
            sum2 += s.z_hat[1] * s.z_hat[1];
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    out.noise_std = std::sqrt(std::max(0.0, sum2 / static_cast<double>(count) - mean * mean));
    return out;
}

}  // namespace

Result observer_scaling(const Options& options) {
    Result r{3, "observer-scaling (Hurwitz gains)", false, false, 0.0, 30.0, ""};
    return guarded(r, [&](Result r, const Timer& timer) {
        if (!hgogp::check_hurwitz(options.observer_gains)) {
            std::string g;
            for (double k : options.observer_gains) {
                g += (g.empty() ? "" : ", ") + fmt(k);
            }
            return finish(r, false, timer, "observer gains (" + g + ") are not Hurwitz");
        }
        const ObserverRun l20 = observer_run(options.observer_gains, 20.0);
        const ObserverRun l40 = observer_run(options.observer_gains, 40.0);
        const double ratio = l40.sup_error / l20.sup_error;
        const bool ok = ratio <= 0.7 && l40.noise_std > l20.noise_std;
        return finish(r, ok, timer,
                      "sup error ratio l=40/l=20 " + fmt(ratio) + " (<= 0.7), noise std " + fmt(l20.noise_std) +
                          " -> " + fmt(l40.noise_std));
    });
}

Result gap_soundness(const Options&) {
    Result r{4, "gap-soundness", false, false, 0.0, 30.0, ""};
    return guarded(r, [&](Result r, const Timer& timer) {
        std::mt19937_64 rng(404);
        std::uniform_real_distribution<double> log_size(std::log(1e-3), std::log(1.0));
        std::normal_distribution<double> normal(0.0, 1.0);
        double worst_ratio = 0.0;
        int violations = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const RandomProblem p = random_problem(rng);
            const auto d = static_cast<int>(p.ls.size());
            const double size = std::exp(log_size(rng));
            Eigen::VectorXd observed = p.targets;
            for (Eigen::Index i = 0; i < observed.size(); ++i) {
                observed[i] += size * normal(rng);
            }
            const GpPosterior ideal = p.fit();
            const GpPosterior obs = hgogp::fit(p.kernel(), Dataset(p.inputs, observed, p.sn2));
            const double gap = hgogp::regressor_gap_bound(obs, observed, p.targets, hgogp::kernel_max(p.kernel()));

            // Regular grid over the inputs' box widened by two length scales, plus the inputs.
            const int per_axis = static_cast<int>(std::ceil(std::pow(1000.0, 1.0 / d) - 1e-9));
            const Eigen::VectorXd lo = p.inputs.rowwise().minCoeff().array() - 2.0 * p.ls.maxCoeff();
            const Eigen::VectorXd hi = p.inputs.rowwise().maxCoeff().array() + 2.0 * p.ls.maxCoeff();
            const int total = static_cast<int>(std::pow(per_axis, d));
            Eigen::MatrixXd grid(d, total + p.inputs.cols());
            for (int k = 0; k < total; ++k) {
                int rest = k;
                for (int i = 0; i < d; ++i) {
                    const int idx = rest % per_axis;
                    rest /= per_axis;
                    grid(i, k) = lo[i] + (hi[i] - lo[i]) * idx / (per_axis - 1);
                }
            }
            grid.rightCols(p.inputs.cols()) = p.inputs;
            const double sup = hgogp::max_abs_mean_difference(obs, ideal, grid);
            // The bound is attained for N = 1 at the training input; allow for rounding only.
            if (sup > gap * (1.0 + 1e-12)) {
                ++violations;
            }
            worst_ratio = std::max(worst_ratio, sup / gap);
        }
        return finish(r, violations == 0, timer,
                      "200 windows, " + std::to_string(violations) + " violations, max sup/gap " +
                          std::to_string(worst_ratio));
    });
}

Result error_reduction(const Options&) {
    Result r{5, "error-reduction", false, false, 0.0, 120.0, ""};
    return guarded(r, [&](Result r, const Timer& timer) {
        const hgogp::ScenarioConfig config = hgogp::ScenarioConfig::defaults();
        std::vector<std::uint64_t> seeds(10);
        std::iota(seeds.begin(), seeds.end(), 1);
        const auto runs = hgogp::run_seed_sweep(config, seeds);
        int better = 0;
        std::vector<double> improvement;
        for (const auto& run : runs) {
            if (run.error) {
                std::rethrow_exception(run.error);
            }
            const auto& s = run.trace->summary;
            better += s.mean_err_h1 < s.mean_err_baseline ? 1 : 0;
            improvement.push_back(1.0 - s.mean_err_h1 / s.mean_err_baseline);
        }
        std::sort(improvement.begin(), improvement.end());
        const double median = 0.5 * (improvement[4] + improvement[5]);
        const bool ok = better >= 9 && median >= 0.30;
        return finish(r, ok, timer,
                      std::to_string(better) + "/10 seeds improved, median improvement " + fmt(100.0 * median) +
                          "% (>= 30%)");
    });
}

Result envelope_coverage(const Options& options) {
    Result r{6, "envelope-coverage", false, false, 0.0, 600.0, ""};
    if (options.quick) {
        r.skipped = true;
        r.detail = "slow, skipped in quick mode";
        return r;
    }
    return guarded(r, [&](Result r, const Timer& timer) {
        const hgogp::ScenarioConfig config = hgogp::ScenarioConfig::defaults();
        std::vector<std::uint64_t> seeds(100);
        std::iota(seeds.begin(), seeds.end(), 1);
        const auto runs = hgogp::run_seed_sweep(config, seeds);
        int covered = 0;
        double min_margin = std::numeric_limits<double>::infinity();
        for (const auto& run : runs) {
            if (run.error) {
                std::rethrow_exception(run.error);
            }
            const auto& bound = run.trace->bound;
            if (bound && bound->coverage.all_covered()) {
                ++covered;
            }
            if (bound) {
                min_margin = std::min(min_margin, bound->coverage.min_margin);
            }
        }
        return finish(r, covered >= 90, timer,
                      std::to_string(covered) + "/100 runs inside the envelope (>= 90), smallest margin " +
                          fmt(min_margin));
    });
}

Result bound_monotonicity(const Options&) {
    Result r{7, "bound-monotonicity", false, false, 0.0, 5.0, ""};
    return guarded(r, [&](Result r, const Timer& timer) {
        std::mt19937_64 rng(707);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<std::string> failures;
        auto fail = [&](const std::string& what) {
            if (std::find(failures.begin(), failures.end(), what) == failures.end()) {
                failures.push_back(what);
            }
        };

        for (int trial = 0; trial < 500; ++trial) {
            const int d = 1 + static_cast<int>(u(rng) * 4);
            const int m = 1 + static_cast<int>(u(rng) * 30);
            Eigen::MatrixXd centers(d, m);
            centers.col(0).setZero();
            for (int j = 1; j < m; ++j) {
                for (int i = 0; i < d; ++i) {
                    centers(i, j) = centers(i, j - 1) + 0.2 * normal(rng);
                }
            }
            const double rho1 = 0.01 + u(rng);
            const double rho2 = rho1 * (1.0 + 2.0 * u(rng));
            const double delta1 = 0.3 * u(rng);
            const double delta2 = delta1 + 0.3 * u(rng);
            const hgogp::TrajectoryTube thin(centers, delta1);
            const hgogp::TrajectoryTube wide(centers, delta2);
            if (hgogp::covering_number(thin, rho2) > hgogp::covering_number(thin, rho1)) {
                fail("covering number increased with rho");
            }
            if (hgogp::covering_number(thin, rho1) > hgogp::covering_number(wide, rho1)) {
                fail("covering number decreased with the tube radius");
            }
            if (d == 1) {
                const double a = centers.minCoeff();
                const double b = centers.maxCoeff();
                if (static_cast<long>(hgogp::covering_number(thin, rho1)) < oracle::interval_cover(a, b, delta1, rho1)) {
                    fail("covering number below the 1-D minimum");
                }
            }

            const std::size_t m1 = 1 + static_cast<std::size_t>(u(rng) * 100);
            const std::size_t m2 = m1 + 1 + static_cast<std::size_t>(u(rng) * 100);
            const double eta1 = 0.01 + 0.98 * u(rng);
            const double eta2 = eta1 * u(rng);  // higher confidence
            const double rho = 0.01 + u(rng);
            const double lf = u(rng), lm = u(rng), lv = u(rng);
            const auto base = hgogp::beta_alpha(m1, eta1, rho, lf, lm, lv);
            if (!(hgogp::beta_alpha(m2, eta1, rho, lf, lm, lv).beta > base.beta)) {
                fail("beta not increasing in M");
            }
            if (eta2 > 0.0 && !(hgogp::beta_alpha(m1, eta2, rho, lf, lm, lv).beta > base.beta)) {
                fail("beta not increasing in confidence");
            }
            const double bump = 0.1 + u(rng);
            if (!(hgogp::beta_alpha(m1, eta1, rho, lf + bump, lm, lv).alpha > base.alpha)) {
                fail("alpha not increasing in L_f");
            }
            if (!(hgogp::beta_alpha(m1, eta1, rho, lf, lm + bump, lv).alpha > base.alpha)) {
                fail("alpha not increasing in L_mu");
            }
            if (!(hgogp::beta_alpha(m1, eta1, rho, lf, lm, lv + bump).alpha > base.alpha)) {
                fail("alpha not increasing in L_var");
            }
        }

        for (int trial = 0; trial < 200; ++trial) {
            const RandomProblem p = random_problem(rng);
            const GpPosterior gp = p.fit();
            Eigen::VectorXd diff(p.targets.size());
            for (Eigen::Index i = 0; i < diff.size(); ++i) {
                diff[i] = normal(rng);
            }
            const double c = 4.0 * (u(rng) - 0.5);
            const double kmax = hgogp::kernel_max(p.kernel());
            const double g1 = hgogp::regressor_gap_bound(gp, p.targets + diff, p.targets, kmax);
            const double gc = hgogp::regressor_gap_bound(gp, p.targets + c * diff, p.targets, kmax);
            if (std::abs(gc - std::abs(c) * g1) > 1e-12 * std::max(1.0, gc)) {
                fail("gap not homogeneous of degree 1");
            }
        }

        std::string detail = "covering, beta, alpha, gap checks over 500 + 200 random cases";
        for (const auto& f : failures) {
            detail += "; " + f;
        }
        return finish(r, failures.empty(), timer, detail);
    });
}

Result determinism(const Options& options) {
    Result r{8, "determinism", false, false, 0.0, 120.0, ""};
    return guarded(r, [&](Result r, const Timer& timer) {
        namespace fs = std::filesystem;
        fs::path dir = options.work_dir;
        if (dir.empty()) {
            std::random_device rd;
            dir = fs::temp_directory_path() / ("hgogp-verify-" + std::to_string(rd()));
        }
        fs::create_directories(dir);
        const fs::path config = dir / "config.json";
        {
            std::ofstream out(config);
            out << hgogp::dump_config(hgogp::ScenarioConfig::defaults());
        }
        std::ostringstream sink;
        const hgogp::RunOptions a{config, dir / "a", {7}};
        const hgogp::RunOptions b{config, dir / "b", {7}};
        if (hgogp::cmd_run(a, sink, sink) != 0 || hgogp::cmd_run(b, sink, sink) != 0) {
            return finish(r, false, timer, "run failed: " + sink.str());
        }
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        const std::string ta = slurp(dir / "a" / "trace_seed7.csv");
        const std::string tb = slurp(dir / "b" / "trace_seed7.csv");
        const bool ok = !ta.empty() && ta == tb;
        if (options.work_dir.empty()) {
            fs::remove_all(dir);
        }
        return finish(r, ok, timer,
                      std::string(ok ? "identical" : "different") + " traces, " + std::to_string(ta.size()) +
                          " bytes");
    });
}

std::string format_line(const Result& r) {
    std::ostringstream s;
    s << (r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL") << "  " << r.id << ". " << r.name;
    if (!r.skipped) {
        s << "  [" << fmt(r.seconds) << " s / " << fmt(r.limit_seconds) << " s]";
    }
    s << "  " << r.detail;
    return s.str();
}

std::vector<Result> run_all(const Options& options, std::ostream& out) {
    using Fn = Result (*)(const Options&);
    const Fn all[] = {gp_oracle,         mean_gradient,      observer_scaling,  gap_soundness,
                      error_reduction,   envelope_coverage,  bound_monotonicity, determinism};
    std::vector<Result> results;
    for (Fn f : all) {
        results.push_back(f(options));
        out << format_line(results.back()) << std::endl;
    }
    return results;
}

int summarize(const std::vector<Result>& results, std::ostream& out) {
    std::vector<const Result*> failed;
    for (const Result& r : results) {
        if (!r.skipped && !r.passed) {
            failed.push_back(&r);
        }
    }
    if (failed.empty()) {
        out << "all criteria passed\n";
        return 0;
    }
    out << failed.size() << " criteria failed:";
    for (const Result* r : failed) {
        out << ' ' << r->id << ". " << r->name << ';';
    }
    out << '\n';
    return 1;
}

}  // namespace acceptance
