#include "mcabs/generate.hpp"

#include <cmath>

namespace mcabs {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_exponential(std::mt19937_64& rng) {
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    return -std::log(u);
}

SimplexVector sample_simplex_row(int d, std::mt19937_64& rng) {
    if (d < 1) {
        throw DimensionError("sample_simplex_row: dimension must be at least 1");
    }
    Eigen::VectorXd draws(d);
    for (int i = 0; i < d; ++i) {
        draws[i] = unit_exponential(rng);
    }
    draws /= draws.sum();
    return SimplexVector(std::move(draws));
}

Eigen::MatrixXd gen_stochastic_matrix(int rows, int cols, std::mt19937_64& rng) {
    if (rows < 1 || cols < 1) {
        throw DimensionError("gen_stochastic_matrix: dimensions must be at least 1");
    }
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        m.row(i) = sample_simplex_row(cols, rng).entries().transpose();
    }
    return m;
}

LowRankChain gen_lowrank_transition(const GenSpec& spec) {
    if (spec.n < 1) {
        throw ParameterError("gen_lowrank_transition: state count must be at least 1");
    }
    if (spec.k < 1 || spec.k > spec.n) {
        throw ParameterError("gen_lowrank_transition: factor rank must lie in [1, n]");
    }
    std::mt19937_64 rng(spec.seed);
    Eigen::MatrixXd a = gen_stochastic_matrix(spec.n, spec.k, rng);
    Eigen::MatrixXd b = gen_stochastic_matrix(spec.k, spec.k, rng);
    Eigen::MatrixXd c = gen_stochastic_matrix(spec.k, spec.n, rng);
    Eigen::MatrixXd p = a * b * c;
    return LowRankChain{TransitionMatrix(std::move(p)),
                        Factorization(std::move(a), std::move(b), std::move(c))};
}

}  // namespace mcabs
