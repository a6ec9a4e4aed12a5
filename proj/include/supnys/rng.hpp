#pragma once

#include "supnys/types.hpp"

#include <cstdint>
#include <random>

namespace supnys {

using Rng = std::mt19937_64;

/// Derives an independent stream seed for a named stage from a base seed
/// (splitmix64 finalizer over seed and stage id).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stage);

/// rows x cols matrix of i.i.d. standard normal draws.
Matrix gaussian_matrix(Index rows, Index cols, Rng &rng);

/// n distinct indices drawn uniformly without replacement from [0, N),
/// returned in draw order.
IndexSet sample_without_replacement(Index N, Index n, Rng &rng);

}  // namespace supnys
