#pragma once

#include "sgrowth/bigint.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sgrowth {

using Point = std::uint32_t;

/// A permutation of {0, ..., n-1} in one-line form: images()[v] is the image
/// of v. Text and JSON renderings use 1-based points.
class Permutation {
public:
    Permutation() = default;

    /// Throws std::invalid_argument unless `images` is a bijection.
    explicit Permutation(std::vector<Point> images);

    static Permutation identity(std::size_t n);

    /// Builds from 1-based disjoint cycles, e.g. from_cycles(4, {{1, 2}, {3, 4}}).
    static Permutation from_cycles(std::size_t n,
                                   std::initializer_list<std::vector<Point>> cycles);
    static Permutation from_cycles(std::size_t n, const std::vector<std::vector<Point>>& cycles);

    /// Skips validation; callers guarantee a bijection.
    static Permutation from_images_unchecked(std::vector<Point> images);

    std::size_t degree() const noexcept { return images_.size(); }
    Point operator()(Point v) const { return images_[v]; }
    std::span<const Point> images() const noexcept { return images_; }

    bool is_identity() const noexcept;
    std::size_t fixed_point_count() const noexcept;

    Permutation inverse() const;
    /// this^k for any integer k.
    Permutation power(long long k) const;

    /// Disjoint cycles (0-based), each starting at its smallest point,
    /// ordered by that point; fixed points included as 1-cycles.
    std::vector<std::vector<Point>> cycles() const;

    /// 1-based cycle notation without fixed points, "()" for the identity.
    std::string to_string() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<Point> images_;
};

/// Maps v to a(b(v)). Throws std::invalid_argument on a degree mismatch.
Permutation compose(const Permutation& a, const Permutation& b);

/// Conjugacy class of S_n: multiplicity r_l of each cycle length l.
class CycleType {
public:
    CycleType() = default;

    /// Throws std::invalid_argument if some multiplicity or length is zero.
    explicit CycleType(std::map<unsigned, unsigned> multiplicities);

    /// From a list of parts, e.g. {2, 1} for 1^1 2^1.
    static CycleType from_parts(std::span<const unsigned> parts);
    static CycleType from_parts(std::initializer_list<unsigned> parts);

    unsigned degree() const noexcept { return degree_; }
    const std::map<unsigned, unsigned>& multiplicities() const noexcept { return mult_; }
    unsigned multiplicity(unsigned length) const;
    unsigned largest_part() const noexcept;
    std::vector<unsigned> parts() const;

    /// "1^2 3^1"; the empty type of degree 0 renders as "-".
    std::string to_string() const;

    friend bool operator==(const CycleType&, const CycleType&) = default;
    friend auto operator<=>(const CycleType&, const CycleType&) = default;

private:
    std::map<unsigned, unsigned> mult_;
    unsigned degree_ = 0;
};

CycleType cycle_type(const Permutation& sigma);

/// n! / prod_l (l^{r_l} r_l!).
BigInt class_size(const CycleType& type);

/// Every cycle type of degree n, in a fixed order (lexicographic on the
/// descending part list).
std::vector<CycleType> all_cycle_types(unsigned n);

/// Number of partitions of n, p(n).
BigInt partition_count(unsigned n);

}  // namespace sgrowth
