#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mcabs/stochastic.hpp"

namespace mcabs {

// A factorization together with its cached kernel-space transition
// K = V * U * Pk, through which m-step predictions run in k x k arithmetic.
class KernelChain {
  public:
    static constexpr double kKernelRowSumTol = 1e-8;

    explicit KernelChain(Factorization f);

    const Factorization& factorization() const { return factorization_; }
    const Eigen::MatrixXd& kernel() const { return kernel_; }

  private:
    Factorization factorization_;
    Eigen::MatrixXd kernel_;
};

KernelChain build_kernel_chain(Factorization f);

// Pk * K^(m-1), the k x k core of the m-step prediction. Exposed separately
// so the power loop can be timed without the n-dimensional mapping.
Eigen::MatrixXd kernel_power(const KernelChain& chain, int m);

// U * (Pk * K^(m-1)) * V; equals the exact m-step matrix under a perfect
// decomposition. m must be at least 1.
Eigen::MatrixXd kernel_mstep(const KernelChain& chain, int m);

// Max absolute entrywise difference between the exact m-step matrix and the
// kernel-space prediction.
double mstep_error(const TransitionMatrix& p, const KernelChain& chain, int m);

struct SparsityStats {
    double nnz_u_mean = 0.0;
    double nnz_v_mean = 0.0;
};

// Average per-row count of entries strictly greater than tol.
SparsityStats sparsity_stats(const Factorization& f, double tol);

constexpr double kSparsityTol = 1e-6;

// ||P - U*Pk*V||_F^2, the reported approximation error (not halved).
double approx_error(const TransitionMatrix& p, const Factorization& f);

struct MStepRecord {
    int m = 0;
    double max_abs_err = 0.0;
    double exact_ms = 0.0;
    double kernel_ms = 0.0;
};

struct EvalReport {
    double approx_error = 0.0;
    double nnz_u_mean = 0.0;
    double nnz_v_mean = 0.0;
    std::vector<MStepRecord> msteps;
};

// Full evaluation of an abstraction: reconstruction error, sparsity, and
// timed exact-vs-kernel m-step comparisons for each requested m.
EvalReport evaluate_abstraction(const TransitionMatrix& p, const Factorization& f,
                                const std::vector<int>& msteps);

}  // namespace mcabs
