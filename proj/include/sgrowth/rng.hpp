#pragma once

#include "sgrowth/bigint.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace sgrowth {

/// xoshiro256** seeded through SplitMix64 from (master seed, stream index).
/// Identical (seed, stream, request sequence) gives identical output on every
/// platform; distinct streams are used for distinct samples.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    std::uint64_t next() noexcept
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    std::uint64_t operator()() noexcept { return next(); }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with
    /// rejection, unbiased).
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::array<std::uint64_t, 4> state_{};
};

/// Categorical law with non-negative big-integer weights, sampled exactly.
///
/// A uniform U in [0, 1) is generated lazily, 64 bits at a time, and compared
/// with the cumulative thresholds c_k / total. The first word decides all but
/// thresholds whose 64-bit prefix equals it; those are resolved by expanding
/// the exact remainder further.
class ExactCategorical {
public:
    ExactCategorical() = default;
    /// Throws std::invalid_argument when the weights are empty, negative or
    /// all zero.
    explicit ExactCategorical(std::vector<BigInt> weights);

    std::size_t size() const noexcept { return cumulative_.size(); }
    const BigInt& total() const { return cumulative_.back(); }
    BigInt weight(std::size_t i) const;
    Rational probability(std::size_t i) const;

    template <class Bits>
    std::size_t sample(Bits& bits) const
    {
        const std::size_t thresholds = prefix_.size();
        if (thresholds == 0)
            return 0;
        const std::uint64_t word = bits();
        auto lo = std::lower_bound(prefix_.begin(), prefix_.end(), word);
        auto hi = std::upper_bound(lo, prefix_.end(), word);
        std::size_t index = static_cast<std::size_t>(lo - prefix_.begin());
        if (lo == hi)
            return index;
        std::vector<std::uint64_t> extra;
        for (auto it = lo; it != hi; ++it) {
            if (!at_or_above(static_cast<std::size_t>(it - prefix_.begin()), bits, extra))
                break;
            ++index;
        }
        return index;
    }

private:
    template <class Bits>
    bool at_or_above(std::size_t k, Bits& bits, std::vector<std::uint64_t>& extra) const
    {
        if (full_[k])
            return false;
        BigInt rem = remainder_[k];
        for (std::size_t digit = 0;; ++digit) {
            if (sgn(rem) == 0)
                return true;
            if (digit == extra.size())
                extra.push_back(bits());
            BigInt scaled = rem << 64;
            BigInt d;
            mpz_fdiv_qr(d.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), total().get_mpz_t());
            const std::uint64_t threshold_digit = mpz_get_ui(d.get_mpz_t());
            if (extra[digit] != threshold_digit)
                return extra[digit] > threshold_digit;
        }
    }

    std::vector<BigInt> cumulative_;
    // Per threshold k (cumulative weight of indices 0..k, k < size-1):
    // floor(c_k 2^64 / total), the exact remainder, and whether c_k == total.
    std::vector<std::uint64_t> prefix_;
    std::vector<BigInt> remainder_;
    std::vector<bool> full_;
};

}  // namespace sgrowth
