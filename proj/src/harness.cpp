#include "mcabs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "mcabs/generate.hpp"

namespace mcabs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_spec(const SweepSpec& spec) {
    if (spec.n < 1) throw ParameterError("sweep: state count must be at least 1");
    if (spec.true_rank < 1 || spec.true_rank > spec.n) {
        throw ParameterError("sweep: generator rank must lie in [1, n]");
    }
    if (spec.kernel_sizes.empty() || spec.lambdas.empty() || spec.steps.empty()) {
        throw ParameterError("sweep: kernel size, lambda, and step lists must be non-empty");
    }
    for (int k : spec.kernel_sizes) {
        if (k < 1 || k > spec.n) throw ParameterError("sweep: kernel sizes must lie in [1, n]");
    }
    for (double l : spec.lambdas) {
        if (l < 0.0) throw ParameterError("sweep: lambdas must be nonnegative");
    }
    if (spec.instances < 1) throw ParameterError("sweep: instance count must be at least 1");
    if (spec.max_iters < 1) throw ParameterError("sweep: iteration cap must be at least 1");
    if (!(spec.rel_tol > 0.0)) throw ParameterError("sweep: tolerance must be positive");
    if (spec.threads < 1) throw ParameterError("sweep: thread count must be at least 1");
}

// Solver streams must be independent of the generator streams (which use the
// raw base_seed + instance), or the initial iterate could collide with the
// ground-truth factors.
std::uint64_t solver_seed(std::uint64_t base_seed, int instance) {
    return mix_seed(base_seed ^ mix_seed(static_cast<std::uint64_t>(instance) + 1));
}

struct RunningStat {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }
    double population_std() const {
        return count > 0 ? std::sqrt(m2 / static_cast<double>(count)) : kNaN;
    }
};

}  // namespace

InstanceResult run_instance(const TransitionMatrix& p, const SolverConfig& config,
                            const std::vector<int>& msteps) {
    InstanceResult out;
    const auto start = std::chrono::steady_clock::now();
    try {
        SolverResult solved = run(p, config);
        out.total_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        out.report = evaluate_abstraction(p, solved.factorization, msteps);
        out.trace = std::move(solved.trace);
        out.reason = solved.reason;
        out.iters = static_cast<int>(out.trace.records.size());
    } catch (const DivergenceError& err) {
        out.total_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        out.diverged = true;
        out.iters = err.iteration() + 1;
        out.report.approx_error = kNaN;
        out.report.nnz_u_mean = kNaN;
        out.report.nnz_v_mean = kNaN;
    }
    return out;
}

SweepResult sweep(const SweepSpec& spec) {
    validate_spec(spec);

    // One chain per instance, shared across all grid cells of that instance.
    std::vector<TransitionMatrix> chains;
    chains.reserve(static_cast<std::size_t>(spec.instances));
    for (int i = 0; i < spec.instances; ++i) {
        chains.push_back(
            gen_lowrank_transition({spec.n, spec.true_rank, spec.base_seed + i}).transition);
    }

    struct Cell {
        int kernel_size;
        double lambda;
        double step;
        int instance;
    };
    std::vector<Cell> cells;
    for (int k : spec.kernel_sizes) {
        for (double lambda : spec.lambdas) {
            for (double step : spec.steps) {
                for (int i = 0; i < spec.instances; ++i) {
                    cells.push_back(Cell{k, lambda, step, i});
                }
            }
        }
    }

    std::vector<SweepRecord> records(cells.size());
    const auto solve_cell = [&](std::size_t idx) {
        const Cell& cell = cells[idx];
        SolverConfig config;
        config.k = cell.kernel_size;
        config.lambda_u = cell.lambda;
        config.lambda_v = cell.lambda;
        config.step_policy = spec.policy;
        if (spec.policy == StepPolicy::kConstant) {
            config.alpha = config.beta = config.gamma = cell.step;
        } else {
            config.c1 = config.c2 = config.c3 = cell.step;
        }
        config.max_iters = spec.max_iters;
        config.rel_tol = spec.rel_tol;
        config.seed = solver_seed(spec.base_seed, cell.instance);
        config.threshold_scaling = spec.threshold_scaling;
        config.paper_literal_steps = spec.paper_literal_steps;

        const InstanceResult result =
            run_instance(chains[static_cast<std::size_t>(cell.instance)], config);

        SweepRecord& rec = records[idx];
        rec.kernel_size = cell.kernel_size;
        rec.lambda = cell.lambda;
        rec.policy = spec.policy;
        rec.step = cell.step;
        rec.instance = cell.instance;
        rec.approx_error = result.report.approx_error;
        rec.nnz_u = result.report.nnz_u_mean;
        rec.nnz_v = result.report.nnz_v_mean;
        rec.iters = result.iters;
        rec.reason = result.reason;
        rec.diverged = result.diverged;
        rec.total_ms = result.total_ms;
        rec.per_iter_ms = result.total_ms / static_cast<double>(std::max(result.iters, 1));
    };

    const int workers = std::min<int>(spec.threads, static_cast<int>(cells.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) solve_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                    solve_cell(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    SweepResult result;
    result.records = std::move(records);
    result.aggregates = aggregate(result.records);
    return result;
}

std::vector<CellAggregate> aggregate(const std::vector<SweepRecord>& records) {
    if (records.empty()) {
        throw ParameterError("aggregate: no records");
    }

    struct CellStats {
        CellAggregate agg;
        RunningStat error, ms, iters;
    };
    std::vector<CellStats> cells;
    const auto find_cell = [&](const SweepRecord& rec) -> CellStats& {
        for (auto& c : cells) {
            if (c.agg.kernel_size == rec.kernel_size && c.agg.lambda == rec.lambda &&
                c.agg.policy == rec.policy && c.agg.step == rec.step) {
                return c;
            }
        }
        CellStats fresh;
        fresh.agg.kernel_size = rec.kernel_size;
        fresh.agg.lambda = rec.lambda;
        fresh.agg.policy = rec.policy;
        fresh.agg.step = rec.step;
        cells.push_back(fresh);
        return cells.back();
    };

    for (const auto& rec : records) {
        CellStats& cell = find_cell(rec);
        if (rec.diverged) {
            ++cell.agg.n_diverged;
            continue;
        }
        cell.error.add(rec.approx_error);
        cell.ms.add(rec.total_ms);
        cell.iters.add(static_cast<double>(rec.iters));
    }

    std::vector<CellAggregate> out;
    out.reserve(cells.size());
    for (auto& cell : cells) {
        cell.agg.mean_error = cell.error.count > 0 ? cell.error.mean : kNaN;
        cell.agg.std_error = cell.error.population_std();
        cell.agg.mean_ms = cell.ms.count > 0 ? cell.ms.mean : kNaN;
        cell.agg.std_ms = cell.ms.population_std();
        cell.agg.mean_iters = cell.iters.count > 0 ? cell.iters.mean : kNaN;
        out.push_back(cell.agg);
    }
    return out;
}

}  // namespace mcabs
