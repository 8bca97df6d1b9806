#include "mcabs/eval.hpp"

#include <chrono>
#include <string>
#include <utility>

namespace mcabs {

namespace {

double now_ms_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

double mean_row_support(const Eigen::MatrixXd& m, double tol) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        total += static_cast<double>((m.row(i).array() > tol).count());
    }
    return total / static_cast<double>(m.rows());
}

}  // namespace

KernelChain::KernelChain(Factorization f) : factorization_(std::move(f)) {
    kernel_ = factorization_.v() * factorization_.u() * factorization_.pk();
    if (!validate_row_stochastic(kernel_, kKernelRowSumTol)) {
        throw ParameterError("KernelChain: kernel transition V*U*Pk is not row-stochastic");
    }
}

KernelChain build_kernel_chain(Factorization f) { return KernelChain(std::move(f)); }

Eigen::MatrixXd kernel_power(const KernelChain& chain, int m) {
    if (m < 1) {
        throw ParameterError("kernel_power: step count must be at least 1");
    }
    Eigen::MatrixXd core = chain.factorization().pk();
    for (int i = 1; i < m; ++i) {
        core = core * chain.kernel();
    }
    return core;
}

Eigen::MatrixXd kernel_mstep(const KernelChain& chain, int m) {
    if (m < 1) {
        throw ParameterError("kernel_mstep: step count must be at least 1");
    }
    return chain.factorization().u() * kernel_power(chain, m) * chain.factorization().v();
}

double mstep_error(const TransitionMatrix& p, const KernelChain& chain, int m) {
    if (p.size() != chain.factorization().states()) {
        throw DimensionError("mstep_error: chain and factorization sizes disagree");
    }
    return (matrix_power_mstep(p, m) - kernel_mstep(chain, m)).cwiseAbs().maxCoeff();
}

SparsityStats sparsity_stats(const Factorization& f, double tol) {
    if (!(tol > 0.0)) {
        throw ParameterError("sparsity_stats: tolerance must be positive");
    }
    return SparsityStats{mean_row_support(f.u(), tol), mean_row_support(f.v(), tol)};
}

double approx_error(const TransitionMatrix& p, const Factorization& f) {
    if (p.size() != f.states()) {
        throw DimensionError("approx_error: sizes disagree");
    }
    return (p.entries() - reconstruct(f)).squaredNorm();
}

EvalReport evaluate_abstraction(const TransitionMatrix& p, const Factorization& f,
                                const std::vector<int>& msteps) {
    EvalReport report;
    report.approx_error = approx_error(p, f);
    const SparsityStats stats = sparsity_stats(f, kSparsityTol);
    report.nnz_u_mean = stats.nnz_u_mean;
    report.nnz_v_mean = stats.nnz_v_mean;

    if (msteps.empty()) return report;

    const KernelChain chain(f);
    for (int m : msteps) {
        MStepRecord rec;
        rec.m = m;

        auto start = std::chrono::steady_clock::now();
        const Eigen::MatrixXd exact = matrix_power_mstep(p, m);
        rec.exact_ms = now_ms_since(start);

        start = std::chrono::steady_clock::now();
        const Eigen::MatrixXd approx = kernel_mstep(chain, m);
        rec.kernel_ms = now_ms_since(start);

        rec.max_abs_err = (exact - approx).cwiseAbs().maxCoeff();
        report.msteps.push_back(rec);
    }
    return report;
}

}  // namespace mcabs
