#include "mcabs/stochastic.hpp"

#include <cmath>
#include <string>

namespace mcabs {

namespace {

// Index of the first row violating nonnegativity or the row-sum condition,
// or -1 if none does.
int first_bad_row(const Eigen::MatrixXd& m, double tol) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if ((m.row(i).array() < -tol).any()) return static_cast<int>(i);
        if (std::abs(m.row(i).sum() - 1.0) > tol) return static_cast<int>(i);
    }
    return -1;
}

void require_row_stochastic(const Eigen::MatrixXd& m, double tol, const std::string& name) {
    const int bad = first_bad_row(m, tol);
    if (bad >= 0) {
        throw ParameterError(name + ": row " + std::to_string(bad) +
                             " is not a probability distribution (tolerance " +
                             std::to_string(tol) + ")");
    }
}

}  // namespace

bool validate_row_stochastic(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw DimensionError("validate_row_stochastic: matrix must have at least one row and column");
    }
    if (tol <= 0.0) {
        throw ParameterError("validate_row_stochastic: tolerance must be positive");
    }
    if (!m.allFinite()) return false;
    return first_bad_row(m, tol) < 0;
}

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd entries, double tol)
    : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.cols() == 0) {
        throw DimensionError("TransitionMatrix: state count must be at least 1");
    }
    if (entries_.rows() != entries_.cols()) {
        throw DimensionError("TransitionMatrix: matrix must be square, got " +
                             std::to_string(entries_.rows()) + "x" +
                             std::to_string(entries_.cols()));
    }
    if (!entries_.allFinite()) {
        throw ParameterError("TransitionMatrix: entries must be finite");
    }
    if ((entries_.array() > 1.0 + tol).any()) {
        throw ParameterError("TransitionMatrix: entries must lie in [0, 1]");
    }
    require_row_stochastic(entries_, tol, "TransitionMatrix");
}

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd entries, Eigen::VectorXd initial_distribution,
                                   double tol)
    : TransitionMatrix(std::move(entries), tol) {
    if (initial_distribution.size() != entries_.rows()) {
        throw DimensionError("TransitionMatrix: initial distribution has length " +
                             std::to_string(initial_distribution.size()) + ", expected " +
                             std::to_string(entries_.rows()));
    }
    if ((initial_distribution.array() < -tol).any() ||
        std::abs(initial_distribution.sum() - 1.0) > tol) {
        throw ParameterError("TransitionMatrix: initial distribution is not a distribution");
    }
    mu_init_ = std::move(initial_distribution);
}

Factorization::Factorization(Eigen::MatrixXd u, Eigen::MatrixXd pk, Eigen::MatrixXd v)
    : u_(std::move(u)), pk_(std::move(pk)), v_(std::move(v)) {
    const Eigen::Index n = u_.rows();
    const Eigen::Index k = u_.cols();
    if (n == 0 || k == 0) {
        throw DimensionError("Factorization: U must be nonempty");
    }
    if (k > n) {
        throw DimensionError("Factorization: kernel size " + std::to_string(k) +
                             " exceeds state count " + std::to_string(n));
    }
    if (pk_.rows() != k || pk_.cols() != k) {
        throw DimensionError("Factorization: kernel transition must be " + std::to_string(k) +
                             "x" + std::to_string(k));
    }
    if (v_.rows() != k || v_.cols() != n) {
        throw DimensionError("Factorization: V must be " + std::to_string(k) + "x" +
                             std::to_string(n));
    }
    require_row_stochastic(u_, kRowSumTol, "Factorization U");
    require_row_stochastic(pk_, kRowSumTol, "Factorization kernel");
    require_row_stochastic(v_, kRowSumTol, "Factorization V");
}

Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& u, const Eigen::MatrixXd& pk,
                            const Eigen::MatrixXd& v) {
    if (u.cols() != pk.rows() || pk.cols() != v.rows()) {
        throw DimensionError("reconstruct: inner dimensions disagree");
    }
    return u * pk * v;
}

Eigen::MatrixXd reconstruct(const Factorization& f) { return f.u() * f.pk() * f.v(); }

double smooth_loss(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                   const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v) {
    if (u.cols() != pk.rows() || pk.cols() != v.rows() || p.rows() != u.rows() ||
        p.cols() != v.cols()) {
        throw DimensionError("smooth_loss: dimensions disagree");
    }
    return 0.5 * (p - u * pk * v).squaredNorm();
}

double smooth_loss(const TransitionMatrix& p, const Factorization& f) {
    return smooth_loss(p.entries(), f.u(), f.pk(), f.v());
}

Objective objective(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                    const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v, double lambda_u,
                    double lambda_v) {
    if (lambda_u < 0.0 || lambda_v < 0.0) {
        throw ParameterError("objective: regularization weights must be nonnegative");
    }
    const double smooth = smooth_loss(p, u, pk, v);
    const double l1_u = lambda_u * u.cwiseAbs().sum();
    const double l1_v = lambda_v * v.cwiseAbs().sum();
    return make_objective(smooth, l1_u, l1_v);
}

Objective objective(const TransitionMatrix& p, const Factorization& f, double lambda_u,
                    double lambda_v) {
    return objective(p.entries(), f.u(), f.pk(), f.v(), lambda_u, lambda_v);
}

Eigen::MatrixXd matrix_power_mstep(const Eigen::MatrixXd& p, int m) {
    if (m < 0) {
        throw ParameterError("matrix_power_mstep: step count must be nonnegative");
    }
    if (p.rows() != p.cols()) {
        throw DimensionError("matrix_power_mstep: matrix must be square");
    }
    if (m == 0) {
        return Eigen::MatrixXd::Identity(p.rows(), p.cols());
    }
    Eigen::MatrixXd out = p;
    for (int i = 1; i < m; ++i) {
        out = out * p;
    }
    return out;
}

Eigen::MatrixXd matrix_power_mstep(const TransitionMatrix& p, int m) {
    return matrix_power_mstep(p.entries(), m);
}

}  // namespace mcabs
