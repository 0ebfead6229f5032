#include "sgrowth/homology.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sgrowth {

namespace {

const std::vector<std::uint32_t>& rank_primes()
{
    static const std::vector<std::uint32_t> primes = random_primes(3, 0x5eed5eedULL);
    return primes;
}

}  // namespace

SchreierData build_schreier(const HomSample& h)
{
    if (!h.transitive)
        throw std::invalid_argument("build_schreier: the hom is not transitive");
    SchreierData s;
    s.n = h.n;
    s.generators = static_cast<unsigned>(h.images.size());
    s.table.resize(s.generators);
    s.column.assign(s.generators, std::vector<std::int64_t>(s.n, -2));
    for (unsigned g = 0; g < s.generators; ++g) {
        const auto img = h.images[g].images();
        s.table[g].assign(img.begin(), img.end());
    }

    std::vector<bool> seen(s.n, false);
    std::vector<Point> queue{0};
    if (s.n > 0)
        seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Point v = queue[head];
        for (unsigned g = 0; g < s.generators; ++g) {
            const Point w = s.table[g][v];
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
                s.column[g][v] = -1;
                ++s.tree_edges;
            }
        }
    }
    std::int64_t next = 0;
    for (std::size_t v = 0; v < s.n; ++v)
        for (unsigned g = 0; g < s.generators; ++g)
            if (s.column[g][v] == -2)
                s.column[g][v] = next++;
    s.schreier_generators = static_cast<std::size_t>(next);
    return s;
}

std::vector<Word> standard_relators(const GroupSpec& spec)
{
    std::vector<Word> out;
    if (spec.is_torus()) {
        const auto& p = spec.orders();
        for (unsigned i = 1; i < p.size(); ++i)
            out.push_back(Word({{0, static_cast<long long>(p[0])}, {i, -static_cast<long long>(p[i])}}));
        return out;
    }
    for (unsigned j = spec.free_rank(); j < spec.generator_count(); ++j)
        out.push_back(Word::generator(j, spec.generator_order(j)));
    return out;
}

SparseMatrix abelian_relations(const SchreierData& s, const std::vector<Word>& relators)
{
    // Inverse tables for negative exponents.
    std::vector<std::vector<Point>> inverse(s.generators, std::vector<Point>(s.n));
    for (unsigned g = 0; g < s.generators; ++g)
        for (std::size_t v = 0; v < s.n; ++v)
            inverse[g][s.table[g][v]] = static_cast<Point>(v);

    SparseMatrix m;
    m.rows = relators.size() * s.n;
    m.cols = s.schreier_generators;
    m.entries.reserve(m.rows);
    std::map<std::uint32_t, std::int64_t> row;
    for (const auto& rel : relators) {
        for (std::size_t start = 0; start < s.n; ++start) {
            row.clear();
            Point v = static_cast<Point>(start);
            const auto& syl = rel.syllables();
            for (auto it = syl.rbegin(); it != syl.rend(); ++it) {
                const unsigned g = it->generator;
                if (g >= s.generators)
                    throw std::invalid_argument(fmt::format("relator {} names a missing generator", rel.to_string()));
                const long long e = it->exponent;
                for (long long step = 0; step < std::abs(e); ++step) {
                    if (e > 0) {
                        const auto col = s.column[g][v];
                        if (col >= 0)
                            row[static_cast<std::uint32_t>(col)] += 1;
                        v = s.table[g][v];
                    } else {
                        const Point u = inverse[g][v];
                        const auto col = s.column[g][u];
                        if (col >= 0)
                            row[static_cast<std::uint32_t>(col)] -= 1;
                        v = u;
                    }
                }
            }
            if (v != start)
                throw std::logic_error(fmt::format("relator {} does not close at point {}",
                                                   rel.to_string(), start + 1));
            std::vector<std::pair<std::uint32_t, std::int64_t>> entries;
            for (const auto& [c, x] : row)
                if (x != 0)
                    entries.emplace_back(c, x);
            m.entries.push_back(std::move(entries));
        }
    }
    return m;
}

BettiResult betti1_detailed(const HomSample& h, const std::vector<Word>& relators, bool force_exact)
{
    const SchreierData s = build_schreier(h);
    const SparseMatrix m = abelian_relations(s, relators);
    BettiResult result;
    result.schreier_generators = s.schreier_generators;
    result.rank = rank_over_q(m, rank_primes(), force_exact);
    result.b1 = static_cast<long>(s.schreier_generators) - static_cast<long>(result.rank.rank);
    if (h.spec.is_torus() && result.b1 < 1)
        throw std::logic_error(fmt::format("b_1 = {} < 1 for a finite-index subgroup of {}", result.b1,
                                           h.spec.to_string()));
    return result;
}

BettiResult betti1_detailed(const HomSample& h, bool force_exact)
{
    return betti1_detailed(h, standard_relators(h.spec), force_exact);
}

long betti1(const HomSample& h)
{
    return betti1_detailed(h).b1;
}

bool kurosh_identity_check(const HomSample& h, long b1)
{
    if (h.spec.is_torus())
        throw std::invalid_argument("kurosh_identity_check: freeprod or fuchsian spec required");
    Rational lhs = 1 - b1;
    for (unsigned j = h.spec.free_rank(); j < h.spec.generator_count(); ++j) {
        const unsigned p = h.spec.generator_order(j);
        const CycleType type = cycle_type(h.images[j]);
        for (const auto& [d, c] : type.multiplicities())
            if (d < p) {
                Rational share(d, p);
                share.canonicalize();
                lhs -= Rational(c) * (1 - share);
            }
    }
    return lhs == Rational(static_cast<unsigned long>(h.n)) * h.spec.euler_characteristic();
}

bool kurosh_identity_check(const HomSample& h)
{
    return kurosh_identity_check(h, betti1(h));
}

Rational l2_limit(const GroupSpec& spec)
{
    return spec.growth_exponent();
}

}  // namespace sgrowth
