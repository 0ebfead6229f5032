#pragma once

// Exhaustive enumeration of Hom(spec, S_n) at small n.

#include "sgrowth/exact_count.hpp"
#include "sgrowth/hom_sample.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sgrowth {

/// Rank of a permutation in lexicographic order of one-line images.
std::uint64_t permutation_rank(const Permutation& sigma);

/// Injective key of a tuple of images of degree n <= 8.
std::uint64_t hom_key(std::span<const Permutation> images);

struct OracleOptions {
    std::vector<ClassSpec> classes;  ///< Z histograms are collected for these
    bool reversed = false;           ///< enumerate candidate lists backwards
    bool keep_keys = false;          ///< record the key of every hom
    std::uint64_t budget = 20'000'000;
};

struct HomCensus {
    GroupSpec spec;
    unsigned n = 0;
    BigInt total;
    BigInt transitive;
    BigInt factoring;  ///< homs whose common power is the identity (torus)
    std::map<CycleType, BigInt> by_orbits;
    std::vector<ClassSpec> classes;
    std::vector<std::map<unsigned, BigInt>> z_all;         ///< over all homs
    std::vector<std::map<unsigned, BigInt>> z_transitive;  ///< over transitive homs
    std::vector<std::uint64_t> keys;                       ///< sorted, if requested
    std::vector<std::uint64_t> transitive_keys;            ///< sorted, if requested
    /// Sum of mixed hom keys modulo 2^64: independent of enumeration order.
    std::uint64_t hash = 0;
};

/// Throws CapExceeded when the candidate product exceeds the budget and
/// std::logic_error if the transitive count is not divisible by (n-1)!.
HomCensus enumerate_homs(const GroupSpec& spec, unsigned n, const OracleOptions& options = {});

/// Total variation between the empirical law of drawn keys and the uniform
/// law on `support` (sorted). Keys outside the support count fully.
double tv_to_uniform(const std::vector<std::uint64_t>& support,
                     const std::map<std::uint64_t, std::uint64_t>& draws);

struct Identity {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CrossCheckReport {
    GroupSpec spec;
    unsigned n_max = 0;
    std::vector<Identity> identities;

    bool all_pass() const;
    nlohmann::json to_json() const;
};

/// Classes whose Z laws the cross-check compares: every generator and, for
/// two or more generators, x1*x2.
std::vector<ClassSpec> default_oracle_classes(const GroupSpec& spec);

/// Oracle counts against exact_count (h, t, a, h_pi, factoring ratio) and
/// oracle Z means against the exact cycle-count formula, for n = 1..n_max.
CrossCheckReport cross_check(const GroupSpec& spec, unsigned n_max);

}  // namespace sgrowth
