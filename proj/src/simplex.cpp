#include "mcabs/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mcabs {

SimplexVector::SimplexVector(Eigen::VectorXd entries) : entries_(std::move(entries)) {
    if (entries_.size() == 0) {
        throw DimensionError("SimplexVector: dimension must be at least 1");
    }
    if (!entries_.allFinite()) {
        throw ParameterError("SimplexVector: entries must be finite");
    }
    if ((entries_.array() < 0.0).any()) {
        throw ParameterError("SimplexVector: entries must be nonnegative");
    }
    const double sum = entries_.sum();
    if (std::abs(sum - 1.0) > kSumTol) {
        throw ParameterError("SimplexVector: entries sum to " + std::to_string(sum) +
                             ", expected 1");
    }
}

double soft_threshold(double x, double eta) {
    if (eta < 0.0) {
        throw ParameterError("soft_threshold: threshold level must be nonnegative");
    }
    const double mag = std::abs(x) - eta;
    if (mag <= 0.0) return 0.0;
    return x < 0.0 ? -mag : mag;
}

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double eta) {
    if (eta < 0.0) {
        throw ParameterError("soft_threshold: threshold level must be nonnegative");
    }
    return m.unaryExpr([eta](double x) {
        const double mag = std::abs(x) - eta;
        if (mag <= 0.0) return 0.0;
        return x < 0.0 ? -mag : mag;
    });
}

Eigen::VectorXd project_onto_simplex(const Eigen::VectorXd& y) {
    const int d = static_cast<int>(y.size());
    if (d == 0) {
        throw DimensionError("project_onto_simplex: dimension must be at least 1");
    }
    if (!y.allFinite()) {
        throw ParameterError("project_onto_simplex: entries must be finite");
    }

    std::vector<double> sorted(y.data(), y.data() + d);
    std::sort(sorted.begin(), sorted.end());

    // Scan pivots from the largest entry down: the first i (1-based, from d-1
    // to 1) with (sum of entries above i - 1)/(d - i) >= i-th smallest entry
    // gives the shift; otherwise all entries stay in the support.
    double tail = 0.0;
    double shift = 0.0;
    bool found = false;
    for (int i = d - 1; i >= 1; --i) {
        tail += sorted[i];
        const double b = (tail - 1.0) / static_cast<double>(d - i);
        if (b >= sorted[i - 1]) {
            shift = b;
            found = true;
            break;
        }
    }
    if (!found) {
        shift = (tail + sorted[0] - 1.0) / static_cast<double>(d);
    }
    return (y.array() - shift).max(0.0);
}

SimplexVector project_simplex(const Eigen::VectorXd& y) {
    return SimplexVector(project_onto_simplex(y));
}

SimplexVector prox_row_update(const Eigen::VectorXd& row, double eta) {
    if (eta < 0.0) {
        throw ParameterError("prox_row_update: threshold level must be nonnegative");
    }
    Eigen::VectorXd shrunk = row.unaryExpr([eta](double x) {
        const double mag = std::abs(x) - eta;
        if (mag <= 0.0) return 0.0;
        return x < 0.0 ? -mag : mag;
    });
    return SimplexVector(project_onto_simplex(shrunk));
}

void prox_rows(Eigen::MatrixXd& m, double eta) {
    if (eta < 0.0) {
        throw ParameterError("prox_rows: threshold level must be nonnegative");
    }
    Eigen::VectorXd row(m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (eta > 0.0) {
            row = m.row(i).transpose().unaryExpr([eta](double x) {
                const double mag = std::abs(x) - eta;
                if (mag <= 0.0) return 0.0;
                return x < 0.0 ? -mag : mag;
            });
        } else {
            row = m.row(i).transpose();
        }
        m.row(i) = project_onto_simplex(row).transpose();
    }
}

}  // namespace mcabs
