#pragma once

#include "sgrowth/group_spec.hpp"
#include "sgrowth/permutation.hpp"

#include <json.hpp>

#include <vector>

namespace sgrowth {

/// A homomorphism from a GroupSpec to S_n, stored as one image per generator
/// (free-rank generators first).
struct HomSample {
    GroupSpec spec;
    std::size_t n = 0;
    std::vector<Permutation> images;
    bool transitive = false;
    /// Torus: the common power images_i^{p_i} is the identity. Always true for
    /// freeprod and fuchsian specs.
    bool factors_through_phi = true;
};

/// Builds a sample from generator images, computing both flags. Throws
/// std::invalid_argument when the images violate the spec's relations.
HomSample make_hom_sample(const GroupSpec& spec, std::vector<Permutation> images);

/// True when the group generated by `images` acts transitively on the points.
bool is_transitive(std::span<const Permutation> images, std::size_t n);

/// Product of generator images raised to exponents, in syllable order:
/// x_{j1}^{s1} x_{j2}^{s2} maps v to phi(x_{j1})^{s1}(phi(x_{j2})^{s2}(v)).
Permutation evaluate_word(std::span<const Permutation> images, std::size_t n, const Word& word);
Permutation evaluate_word(const HomSample& h, const Word& word);

/// {images: [[1-based one-line images]...], transitive, factors_through_phi}
nlohmann::json to_json(const HomSample& h);

}  // namespace sgrowth
