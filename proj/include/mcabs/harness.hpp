#pragma once

#include <cstdint>
#include <vector>

#include "mcabs/eval.hpp"
#include "mcabs/solver.hpp"

namespace mcabs {

// A seed-replicated experiment grid: kernel sizes x regularization weights x
// step settings, each solved on `instances` independently generated chains.
struct SweepSpec {
    int n = 0;
    int true_rank = 0;
    std::vector<int> kernel_sizes;
    std::vector<double> lambdas;  // applied symmetrically: lambda_u = lambda_v
    StepPolicy policy = StepPolicy::kAdaptive;
    // Constant policy: alpha = beta = gamma = steps[i] per grid column.
    // Adaptive policy: c1 = c2 = c3 = steps[i].
    std::vector<double> steps;
    int instances = 10;
    std::uint64_t base_seed = 0;
    int max_iters = 1000;
    double rel_tol = 1e-8;
    int threads = 1;
    bool threshold_scaling = false;
    bool paper_literal_steps = false;
};

struct SweepRecord {
    int kernel_size = 0;
    double lambda = 0.0;
    StepPolicy policy = StepPolicy::kAdaptive;
    double step = 0.0;
    int instance = 0;
    double approx_error = 0.0;  // NaN when diverged
    double nnz_u = 0.0;
    double nnz_v = 0.0;
    int iters = 0;
    TerminationReason reason = TerminationReason::kMaxIters;
    bool diverged = false;
    double total_ms = 0.0;
    double per_iter_ms = 0.0;
};

// Per-cell mean and population standard deviation over non-diverged
// instances; diverged instances are counted separately.
struct CellAggregate {
    int kernel_size = 0;
    double lambda = 0.0;
    StepPolicy policy = StepPolicy::kAdaptive;
    double step = 0.0;
    double mean_error = 0.0;
    double std_error = 0.0;
    double mean_ms = 0.0;
    double std_ms = 0.0;
    double mean_iters = 0.0;
    int n_diverged = 0;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    std::vector<CellAggregate> aggregates;
};

// One solve plus one evaluation. Solver divergence is a recorded outcome,
// not an error: the result is flagged and carries NaN metrics.
struct InstanceResult {
    EvalReport report;
    SolverTrace trace;
    TerminationReason reason = TerminationReason::kMaxIters;
    bool diverged = false;
    int iters = 0;
    double total_ms = 0.0;
};

InstanceResult run_instance(const TransitionMatrix& p, const SolverConfig& config,
                            const std::vector<int>& msteps = {});

// Runs the full grid. Instance i of every cell shares the chain generated
// with seed base_seed + i, so comparisons across cells are paired. Cells may
// be solved on spec.threads workers; record order is by cell index and does
// not depend on completion order.
SweepResult sweep(const SweepSpec& spec);

// Group records by (kernel_size, lambda, policy, step) in first-appearance
// order and aggregate. Throws ParameterError on an empty record list.
std::vector<CellAggregate> aggregate(const std::vector<SweepRecord>& records);

}  // namespace mcabs
