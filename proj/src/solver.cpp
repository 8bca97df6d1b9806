#include "mcabs/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "mcabs/generate.hpp"
#include "mcabs/simplex.hpp"

namespace mcabs {

namespace {

// Overflow guard: row projection sums entries, so half-steps this large
// would wrap to inf inside the prox. Treated as divergence.
constexpr double kHalfStepLimit = 1e150;

void check_half_step(const Eigen::MatrixXd& half, int iter, const char* block) {
    if (!half.allFinite() || half.cwiseAbs().maxCoeff() > kHalfStepLimit) {
        throw DivergenceError(std::string("solver diverged in the ") + block +
                                  " update at iteration " + std::to_string(iter),
                              iter);
    }
}

double rel_change(const Eigen::MatrixXd& next, const Eigen::MatrixXd& prev) {
    return (next - prev).norm() / prev.norm();
}

}  // namespace

std::string to_string(StepPolicy policy) {
    return policy == StepPolicy::kConstant ? "constant" : "adaptive";
}

std::string to_string(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::kMaxIters: return "max_iters";
        case TerminationReason::kFactorChangeTol: return "factor_change_tol";
        case TerminationReason::kObjectiveChangeTol: return "objective_change_tol";
        case TerminationReason::kZeroGradient: return "zero_gradient";
    }
    return "unknown";
}

void validate_config(const SolverConfig& config, int n) {
    if (config.k < 1 || config.k > n) {
        throw ParameterError("solver config: kernel size must lie in [1, " + std::to_string(n) +
                             "], got " + std::to_string(config.k));
    }
    if (config.lambda_u < 0.0 || config.lambda_v < 0.0) {
        throw ParameterError("solver config: regularization weights must be nonnegative");
    }
    if (config.max_iters < 1) {
        throw ParameterError("solver config: iteration cap must be at least 1");
    }
    if (!(config.rel_tol > 0.0)) {
        throw ParameterError("solver config: relative tolerance must be positive");
    }
    if (config.step_policy == StepPolicy::kAdaptive) {
        for (double c : {config.c1, config.c2, config.c3}) {
            if (!(c > 0.0) || !(c < 2.0)) {
                throw ParameterError("solver config: descent constants must lie in (0, 2)");
            }
        }
    } else {
        for (double s : {config.alpha, config.beta, config.gamma}) {
            if (!(s > 0.0) || !std::isfinite(s)) {
                throw ParameterError("solver config: constant step sizes must be positive");
            }
        }
    }
}

Eigen::MatrixXd grad_u(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                       const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v) {
    if (u.cols() != pk.rows() || pk.cols() != v.rows() || p.rows() != u.rows() ||
        p.cols() != v.cols()) {
        throw DimensionError("grad_u: dimensions disagree");
    }
    return -((p - u * pk * v) * v.transpose() * pk.transpose());
}

Eigen::MatrixXd grad_p(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                       const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v) {
    if (u.cols() != pk.rows() || pk.cols() != v.rows() || p.rows() != u.rows() ||
        p.cols() != v.cols()) {
        throw DimensionError("grad_p: dimensions disagree");
    }
    return -(u.transpose() * (p - u * pk * v) * v.transpose());
}

Eigen::MatrixXd grad_v(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                       const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v) {
    if (u.cols() != pk.rows() || pk.cols() != v.rows() || p.rows() != u.rows() ||
        p.cols() != v.cols()) {
        throw DimensionError("grad_v: dimensions disagree");
    }
    return -(pk.transpose() * u.transpose() * (p - u * pk * v));
}

StepOutcome adaptive_step_u(const Eigen::MatrixXd& g, const Eigen::MatrixXd& pk,
                            const Eigen::MatrixXd& v, double c) {
    const double denom = (g * pk * v).squaredNorm();
    if (denom < kZeroGradientFloor) return StepOutcome{0.0, true};
    return StepOutcome{c * g.squaredNorm() / denom, false};
}

StepOutcome adaptive_step_p(const Eigen::MatrixXd& g, const Eigen::MatrixXd& u,
                            const Eigen::MatrixXd& v, double c) {
    const double denom = (u * g * v).squaredNorm();
    if (denom < kZeroGradientFloor) return StepOutcome{0.0, true};
    return StepOutcome{c * g.squaredNorm() / denom, false};
}

StepOutcome adaptive_step_v(const Eigen::MatrixXd& g, const Eigen::MatrixXd& u,
                            const Eigen::MatrixXd& pk, double c) {
    const double denom = (u * pk * g).squaredNorm();
    if (denom < kZeroGradientFloor) return StepOutcome{0.0, true};
    return StepOutcome{c * g.squaredNorm() / denom, false};
}

StepInfo step(const Eigen::MatrixXd& p, SolverState& state, const SolverConfig& config,
              int iter_index) {
    StepInfo info;
    const bool adaptive = config.step_policy == StepPolicy::kAdaptive;

    // --- U block ---
    Eigen::MatrixXd kernel_map = state.pk * state.v;  // k x n
    Eigen::MatrixXd residual = p - state.u * kernel_map;
    info.smooth_before = 0.5 * residual.squaredNorm();

    Eigen::MatrixXd g = -(residual * kernel_map.transpose());
    double alpha = config.alpha;
    if (adaptive) {
        const StepOutcome outcome = adaptive_step_u(g, state.pk, state.v, config.c1);
        info.u_skipped = outcome.zero_gradient;
        alpha = outcome.value;
    }
    if (!info.u_skipped) {
        Eigen::MatrixXd half = state.u - alpha * g;
        check_half_step(half, iter_index, "U");
        const double level =
            0.5 * config.lambda_u * (config.threshold_scaling ? alpha : 1.0);
        prox_rows(half, level);
        state.u = std::move(half);
        info.alpha = alpha;
    }
    residual.noalias() = p - state.u * kernel_map;
    info.smooth_after_u = 0.5 * residual.squaredNorm();

    // --- kernel block ---
    g.noalias() = -(state.u.transpose() * residual) * state.v.transpose();
    const double gp_sqnorm = g.squaredNorm();
    double beta = config.beta;
    if (adaptive) {
        StepOutcome outcome = adaptive_step_p(g, state.u, state.v, config.c2);
        if (config.paper_literal_steps && !outcome.zero_gradient) {
            // Printed quotient: the V-block gradient norm over the kernel-block
            // denominator, with the V gradient taken at the current point.
            const double num = grad_v(p, state.u, state.pk, state.v).squaredNorm();
            outcome.value *= num / std::max(gp_sqnorm, kZeroGradientFloor);
        }
        info.p_skipped = outcome.zero_gradient;
        beta = outcome.value;
    }
    if (!info.p_skipped) {
        Eigen::MatrixXd half = state.pk - beta * g;
        check_half_step(half, iter_index, "kernel");
        prox_rows(half, 0.0);  // projection only; the kernel is not regularized
        state.pk = std::move(half);
        info.beta = beta;
    }
    Eigen::MatrixXd mapped = state.u * state.pk;  // n x k
    residual.noalias() = p - mapped * state.v;
    info.smooth_after_p = 0.5 * residual.squaredNorm();

    // --- V block ---
    g.noalias() = -(mapped.transpose() * residual);
    double gamma = config.gamma;
    if (adaptive) {
        StepOutcome outcome = adaptive_step_v(g, state.u, state.pk, config.c3);
        if (config.paper_literal_steps && !outcome.zero_gradient) {
            outcome.value *= gp_sqnorm / std::max(g.squaredNorm(), kZeroGradientFloor);
        }
        info.v_skipped = outcome.zero_gradient;
        gamma = outcome.value;
    }
    if (!info.v_skipped) {
        Eigen::MatrixXd half = state.v - gamma * g;
        check_half_step(half, iter_index, "V");
        const double level =
            0.5 * config.lambda_v * (config.threshold_scaling ? gamma : 1.0);
        prox_rows(half, level);
        state.v = std::move(half);
        info.gamma = gamma;
    }
    residual.noalias() = p - mapped * state.v;
    info.smooth_after_v = 0.5 * residual.squaredNorm();
    return info;
}

SolverResult run(const TransitionMatrix& p, const SolverConfig& config) {
    validate_config(config, p.size());
    const Eigen::MatrixXd& pm = p.entries();
    const int n = p.size();
    const int k = config.k;

    std::mt19937_64 rng(config.seed);
    SolverState state;
    state.u = gen_stochastic_matrix(n, k, rng);
    state.pk = gen_stochastic_matrix(k, k, rng);
    state.v = gen_stochastic_matrix(k, n, rng);

    const Objective initial =
        objective(pm, state.u, state.pk, state.v, config.lambda_u, config.lambda_v);
    double prev_total = initial.total;

    SolverTrace trace;
    trace.records.reserve(static_cast<std::size_t>(std::min(config.max_iters, 4096)));
    TerminationReason reason = TerminationReason::kMaxIters;

    Eigen::MatrixXd u_prev, pk_prev, v_prev;
    const auto start = std::chrono::steady_clock::now();
    for (int t = 0; t < config.max_iters; ++t) {
        u_prev = state.u;
        pk_prev = state.pk;
        v_prev = state.v;

        const StepInfo info = step(pm, state, config, t);

        IterationRecord rec;
        rec.iter = t;
        rec.alpha = info.alpha;
        rec.beta = info.beta;
        rec.gamma = info.gamma;
        rec.du = rel_change(state.u, u_prev);
        rec.dp = rel_change(state.pk, pk_prev);
        rec.dv = rel_change(state.v, v_prev);
        rec.objective = make_objective(info.smooth_after_v,
                                       config.lambda_u * state.u.cwiseAbs().sum(),
                                       config.lambda_v * state.v.cwiseAbs().sum());
        rec.elapsed_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        trace.records.push_back(rec);

        const double total = rec.objective.total;
        if (!std::isfinite(total) || total > 1e6 * initial.total) {
            throw DivergenceError("solver diverged: objective " + std::to_string(total) +
                                      " at iteration " + std::to_string(t),
                                  t);
        }

        if (info.u_skipped && info.p_skipped && info.v_skipped) {
            reason = TerminationReason::kZeroGradient;
        } else if (std::max({rec.du, rec.dp, rec.dv}) < config.rel_tol) {
            reason = TerminationReason::kFactorChangeTol;
        } else if (std::abs(total - prev_total) /
                       std::max(std::abs(prev_total), std::numeric_limits<double>::min()) <
                   config.rel_tol) {
            reason = TerminationReason::kObjectiveChangeTol;
        } else {
            prev_total = total;
            continue;
        }
        break;
    }

    return SolverResult{Factorization(std::move(state.u), std::move(state.pk), std::move(state.v)),
                        std::move(trace), reason};
}

}  // namespace mcabs
