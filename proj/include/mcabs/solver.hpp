#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mcabs/stochastic.hpp"

namespace mcabs {

enum class StepPolicy { kConstant, kAdaptive };

enum class TerminationReason { kMaxIters, kFactorChangeTol, kObjectiveChangeTol, kZeroGradient };

std::string to_string(StepPolicy policy);
std::string to_string(TerminationReason reason);

struct SolverConfig {
    int k = 0;
    double lambda_u = 0.0;
    double lambda_v = 0.0;
    StepPolicy step_policy = StepPolicy::kAdaptive;
    // Constant policy: fixed step sizes per block.
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    // Adaptive policy: descent constants, each in (0, 2).
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    int max_iters = 1000;
    double rel_tol = 1e-8;
    std::uint64_t seed = 0;
    // Scale the shrinkage level by the block step size instead of using the
    // fixed lambda/2 level.
    bool threshold_scaling = false;
    // Keep the printed numerators of the adaptive beta/gamma quotients, which
    // swap the kernel- and V-block gradient norms, instead of the matched form.
    bool paper_literal_steps = false;
};

// Throws ParameterError if the configuration is unusable for an n-state chain.
void validate_config(const SolverConfig& config, int n);

// The three factor iterates, mutated in place by block updates. Rows stay on
// their simplices after every full block update.
struct SolverState {
    Eigen::MatrixXd u;   // n x k
    Eigen::MatrixXd pk;  // k x k
    Eigen::MatrixXd v;   // k x n
};

// What one iteration did: step sizes actually used (0 when the block was
// skipped by the zero-gradient guard) and the smooth loss after each block.
struct StepInfo {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    bool u_skipped = false;
    bool p_skipped = false;
    bool v_skipped = false;
    double smooth_before = 0.0;
    double smooth_after_u = 0.0;
    double smooth_after_p = 0.0;
    double smooth_after_v = 0.0;
};

struct IterationRecord {
    int iter = 0;
    Objective objective;  // state after this iteration
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double du = 0.0;  // ||U_{t+1}-U_t||_F / ||U_t||_F
    double dp = 0.0;
    double dv = 0.0;
    double elapsed_ms = 0.0;  // cumulative wall time
};

struct SolverTrace {
    std::vector<IterationRecord> records;
};

struct SolverResult {
    Factorization factorization;
    SolverTrace trace;
    TerminationReason reason = TerminationReason::kMaxIters;
};

// Block gradients of the smooth loss. The caller passes the freshest
// preceding factors, mirroring the update order U, Pk, V.
Eigen::MatrixXd grad_u(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                       const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v);
Eigen::MatrixXd grad_p(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                       const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v);
Eigen::MatrixXd grad_v(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                       const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v);

// An adaptive step size, or the zero-gradient signal when the denominator of
// the quotient vanishes (below 1e-30) and the block update must be skipped.
struct StepOutcome {
    double value = 0.0;
    bool zero_gradient = false;
};

constexpr double kZeroGradientFloor = 1e-30;

// c * ||G||_F^2 / ||G * Pk * V||_F^2 for the U block.
StepOutcome adaptive_step_u(const Eigen::MatrixXd& g, const Eigen::MatrixXd& pk,
                            const Eigen::MatrixXd& v, double c);
// c * ||G||_F^2 / ||U * G * V||_F^2 for the kernel block.
StepOutcome adaptive_step_p(const Eigen::MatrixXd& g, const Eigen::MatrixXd& u,
                            const Eigen::MatrixXd& v, double c);
// c * ||G||_F^2 / ||U * Pk * G||_F^2 for the V block.
StepOutcome adaptive_step_v(const Eigen::MatrixXd& g, const Eigen::MatrixXd& u,
                            const Eigen::MatrixXd& pk, double c);

// One full iteration: gradient step, shrinkage, and simplex projection for U,
// then the kernel (projection only), then V, in that order. iter_index is
// only used to tag divergence errors.
StepInfo step(const Eigen::MatrixXd& p, SolverState& state, const SolverConfig& config,
              int iter_index = 0);

// Full solve: seeded uniform-simplex initialization of all three factors,
// then step() until an iteration or tolerance bound is reached.
SolverResult run(const TransitionMatrix& p, const SolverConfig& config);

}  // namespace mcabs
