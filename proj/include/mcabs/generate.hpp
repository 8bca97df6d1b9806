#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "mcabs/simplex.hpp"
#include "mcabs/stochastic.hpp"

namespace mcabs {

// Parameters for one synthetic low-rank chain draw.
struct GenSpec {
    int n = 0;
    int k = 0;
    std::uint64_t seed = 0;
};

// splitmix64 finalizer; used to derive independent seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t x);

// Unit-rate exponential variate from the top 53 bits of the generator,
// mapped into (0, 1) so the draw is always finite and positive.
double unit_exponential(std::mt19937_64& rng);

// One draw from the flat Dirichlet on the d-simplex: d unit exponentials
// normalized by their sum. Advances the generator.
SimplexVector sample_simplex_row(int d, std::mt19937_64& rng);

// Matrix with independently sampled uniform-simplex rows.
Eigen::MatrixXd gen_stochastic_matrix(int rows, int cols, std::mt19937_64& rng);

struct LowRankChain {
    TransitionMatrix transition;
    Factorization ground_truth;
};

// P = A * B * C from three independently drawn stochastic factors, so the
// chain has nonnegative rank at most spec.k. Returns P with its factors.
LowRankChain gen_lowrank_transition(const GenSpec& spec);

}  // namespace mcabs
