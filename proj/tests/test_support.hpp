#pragma once

// Brute-force helpers shared by the unit and acceptance tests.

#include "sgrowth/permutation.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace sgrowth::testing {

inline std::vector<Permutation> all_permutations(unsigned n)
{
    std::vector<Point> images(n);
    std::iota(images.begin(), images.end(), Point{0});
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation::from_images_unchecked(images));
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

/// #{sigma in S_n : sigma^m = z}.
inline unsigned long brute_roots(const Permutation& z, unsigned m)
{
    unsigned long count = 0;
    for (const auto& s : all_permutations(static_cast<unsigned>(z.degree())))
        count += s.power(m) == z;
    return count;
}

/// A permutation of the given cycle type with cycles on consecutive points.
inline Permutation canonical_of_type(const CycleType& type)
{
    std::vector<Point> images(type.degree());
    Point start = 0;
    for (unsigned len : type.parts()) {
        for (unsigned i = 0; i < len; ++i)
            images[start + i] = start + (i + 1) % len;
        start += len;
    }
    return Permutation::from_images_unchecked(images);
}

/// Pearson goodness-of-fit p-value of drawn keys against the uniform law on
/// `support`; keys outside the support give 0.
inline double uniform_fit_p_value(const std::vector<std::uint64_t>& support,
                                  const std::map<std::uint64_t, std::uint64_t>& draws)
{
    std::uint64_t total = 0;
    for (const auto& [key, count] : draws) {
        if (!std::binary_search(support.begin(), support.end(), key))
            return 0;
        total += count;
    }
    if (support.size() < 2)
        return 1;
    const double expected = static_cast<double>(total) / static_cast<double>(support.size());
    double stat = 0;
    for (auto key : support) {
        auto it = draws.find(key);
        const double observed = it == draws.end() ? 0.0 : static_cast<double>(it->second);
        stat += (observed - expected) * (observed - expected) / expected;
    }
    boost::math::chi_squared dist(static_cast<double>(support.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace sgrowth::testing
