#pragma once

#include <Eigen/Dense>
#include <optional>

#include "mcabs/errors.hpp"

namespace mcabs {

// True iff all entries of m are >= -tol and every row sum is within tol of 1.
bool validate_row_stochastic(const Eigen::MatrixXd& m, double tol);

// A finite Markov chain: dense n x n row-stochastic transition matrix, plus
// an optional initial distribution over the n states. Immutable once built.
class TransitionMatrix {
  public:
    static constexpr double kRowSumTol = 1e-9;

    explicit TransitionMatrix(Eigen::MatrixXd entries, double tol = kRowSumTol);
    TransitionMatrix(Eigen::MatrixXd entries, Eigen::VectorXd initial_distribution,
                     double tol = kRowSumTol);

    int size() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const { return entries_; }
    const std::optional<Eigen::VectorXd>& initial_distribution() const { return mu_init_; }

  private:
    Eigen::MatrixXd entries_;
    std::optional<Eigen::VectorXd> mu_init_;
};

// A three-factor stochastic decomposition P ~ U * Pk * V: U (n x k) maps
// states to meta states, Pk (k x k) is the kernel transition, V (k x n) maps
// meta states back. All rows lie on their probability simplex (within 1e-9).
class Factorization {
  public:
    static constexpr double kRowSumTol = 1e-9;

    Factorization(Eigen::MatrixXd u, Eigen::MatrixXd pk, Eigen::MatrixXd v);

    int states() const { return static_cast<int>(u_.rows()); }
    int kernel_size() const { return static_cast<int>(pk_.rows()); }
    const Eigen::MatrixXd& u() const { return u_; }
    const Eigen::MatrixXd& pk() const { return pk_; }
    const Eigen::MatrixXd& v() const { return v_; }

  private:
    Eigen::MatrixXd u_, pk_, v_;
};

// Objective value of the regularized factorization problem, kept in parts.
// total is always formed as smooth_loss + l1_u + l1_v.
struct Objective {
    double smooth_loss = 0.0;
    double l1_u = 0.0;
    double l1_v = 0.0;
    double total = 0.0;
};

inline Objective make_objective(double smooth, double l1_u, double l1_v) {
    return Objective{smooth, l1_u, l1_v, smooth + l1_u + l1_v};
}

// U * Pk * V for raw matrices; checks shape agreement.
Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& u, const Eigen::MatrixXd& pk,
                            const Eigen::MatrixXd& v);
Eigen::MatrixXd reconstruct(const Factorization& f);

// 0.5 * ||P - U*Pk*V||_F^2
double smooth_loss(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                   const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v);
double smooth_loss(const TransitionMatrix& p, const Factorization& f);

// Full objective of the regularized problem; ||.||_1 is the entrywise sum of
// absolute values. For feasible factors l1_u = lambda_u * n, l1_v = lambda_v * k.
Objective objective(const TransitionMatrix& p, const Factorization& f, double lambda_u,
                    double lambda_v);
Objective objective(const Eigen::MatrixXd& p, const Eigen::MatrixXd& u,
                    const Eigen::MatrixXd& pk, const Eigen::MatrixXd& v, double lambda_u,
                    double lambda_v);

// P^m by repeated multiplication. m == 0 returns the identity; m < 0 is an error.
Eigen::MatrixXd matrix_power_mstep(const TransitionMatrix& p, int m);
Eigen::MatrixXd matrix_power_mstep(const Eigen::MatrixXd& p, int m);

}  // namespace mcabs
