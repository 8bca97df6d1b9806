#pragma once

#include <Eigen/Dense>

#include "mcabs/errors.hpp"

namespace mcabs {

// A point on the probability simplex: nonnegative entries summing to 1
// (within 1e-12, checked at construction).
class SimplexVector {
  public:
    explicit SimplexVector(Eigen::VectorXd entries);

    int dim() const { return static_cast<int>(entries_.size()); }
    const Eigen::VectorXd& entries() const { return entries_; }

    static constexpr double kSumTol = 1e-12;

  private:
    Eigen::VectorXd entries_;
};

// Shrinkage-thresholding: sign(x) * max(|x| - eta, 0).
double soft_threshold(double x, double eta);

// Elementwise shrinkage-thresholding of a matrix.
Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double eta);

// Exact Euclidean projection onto the probability simplex, computed by the
// ascending-sort pivot scan. Core routine shared by all row-wise callers.
Eigen::VectorXd project_onto_simplex(const Eigen::VectorXd& y);

// Projection wrapped in the validated simplex type.
SimplexVector project_simplex(const Eigen::VectorXd& y);

// Shrinkage-threshold at level eta, then project onto the simplex.
SimplexVector prox_row_update(const Eigen::VectorXd& row, double eta);

// Apply the threshold-then-project composition to every row in place.
// eta == 0 reduces to plain row-wise simplex projection.
void prox_rows(Eigen::MatrixXd& m, double eta);

}  // namespace mcabs
