#pragma once

// First Betti numbers of finite-index subgroups by abelianized
// Reidemeister-Schreier rewriting.

#include "sgrowth/hom_sample.hpp"
#include "sgrowth/modular_rank.hpp"

#include <cstdint>
#include <vector>

namespace sgrowth {

/// Coset table of a transitive hom with a BFS spanning tree rooted at point 1.
struct SchreierData {
    std::size_t n = 0;
    unsigned generators = 0;
    /// table[g][v] = image of v under generator g.
    std::vector<std::vector<Point>> table;
    /// column[g][v] = Schreier generator of the edge v -> table[g][v], or -1
    /// for a tree edge.
    std::vector<std::vector<std::int64_t>> column;
    std::size_t tree_edges = 0;
    std::size_t schreier_generators = 0;
};

/// Throws std::invalid_argument for a non-transitive hom.
SchreierData build_schreier(const HomSample& h);

/// Torus: x_1^{p_1} x_i^{-p_i}, i = 2..m. Freeprod and fuchsian: x_j^{p_j} per
/// finite factor.
std::vector<Word> standard_relators(const GroupSpec& spec);

/// Rows: (relator, start point) pairs, relator-major. Each relator is traced
/// right to left from the start point; throws std::logic_error if a trace
/// does not close up.
SparseMatrix abelian_relations(const SchreierData& s, const std::vector<Word>& relators);

struct BettiResult {
    long b1 = 0;
    std::size_t schreier_generators = 0;
    RankResult rank;
};

/// #Schreier generators minus the rank over Q of the relation matrix.
/// For torus specs b_1 >= 1 is enforced (std::logic_error otherwise).
BettiResult betti1_detailed(const HomSample& h, const std::vector<Word>& relators, bool force_exact = false);
BettiResult betti1_detailed(const HomSample& h, bool force_exact = false);
long betti1(const HomSample& h);

/// 1 - b_1 - sum_i sum_{d | p_i, d < p_i} c_{i,d} (1 - d/p_i)
///   = n (1 - r - sum_i (1 - 1/p_i)),
/// c_{i,d} the number of d-cycles of the i-th finite-order image.
bool kurosh_identity_check(const HomSample& h);
bool kurosh_identity_check(const HomSample& h, long b1);

/// Limit of b_1 / n: m - 1 - sum 1/p_i, or r - 1 + sum (1 - 1/p_i).
Rational l2_limit(const GroupSpec& spec);

}  // namespace sgrowth
