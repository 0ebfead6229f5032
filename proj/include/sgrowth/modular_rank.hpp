#pragma once

// Rank over Q of small integer matrices.

#include "sgrowth/bigint.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace sgrowth {

/// Row-major sparse integer matrix.
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> entries;  ///< per row, sorted by column

    std::vector<std::vector<std::int64_t>> dense() const;
};

/// Rank modulo a prime p < 2^32.
std::size_t rank_mod_p(const SparseMatrix& m, std::uint32_t p);

/// Exact rank over Q by fraction-free (Bareiss) elimination.
std::size_t rank_exact(const SparseMatrix& m);

/// `count` distinct primes in [2^30, 2^31), drawn from a fixed-seed stream.
std::vector<std::uint32_t> random_primes(std::size_t count, std::uint64_t seed);

struct RankResult {
    std::size_t rank = 0;
    std::vector<std::size_t> modular_ranks;
    bool used_exact = false;
};

/// Rank modulo each prime; accepted when all agree, otherwise the exact
/// rank. `force_exact` also runs the exact rank and throws std::logic_error
/// if it disagrees with an accepted modular answer.
RankResult rank_over_q(const SparseMatrix& m, const std::vector<std::uint32_t>& primes,
                       bool force_exact = false);

}  // namespace sgrowth
