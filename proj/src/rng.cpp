#include "sgrowth/rng.hpp"

#include <stdexcept>

namespace sgrowth {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept
{
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream)
{
    // Mix the stream index through its own SplitMix64 step before combining
    // so that neighbouring (seed, stream) pairs land far apart.
    std::uint64_t s = stream;
    std::uint64_t x = seed ^ splitmix64(s);
    for (auto& word : state_)
        word = splitmix64(x);
}

std::uint64_t RngStream::below(std::uint64_t bound) noexcept
{
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = -bound % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

ExactCategorical::ExactCategorical(std::vector<BigInt> weights)
{
    if (weights.empty())
        throw std::invalid_argument("ExactCategorical: no weights");
    BigInt running = 0;
    cumulative_.reserve(weights.size());
    for (auto& w : weights) {
        if (sgn(w) < 0)
            throw std::invalid_argument("ExactCategorical: negative weight");
        running += w;
        cumulative_.push_back(running);
    }
    if (sgn(running) == 0)
        throw std::invalid_argument("ExactCategorical: all weights are zero");
    const std::size_t thresholds = cumulative_.size() - 1;
    prefix_.resize(thresholds);
    remainder_.resize(thresholds);
    full_.resize(thresholds);
    for (std::size_t k = 0; k < thresholds; ++k) {
        if (cumulative_[k] == running) {
            prefix_[k] = std::numeric_limits<std::uint64_t>::max();
            full_[k] = true;
            continue;
        }
        BigInt scaled = cumulative_[k] << 64;
        BigInt q;
        mpz_fdiv_qr(q.get_mpz_t(), remainder_[k].get_mpz_t(), scaled.get_mpz_t(),
                    running.get_mpz_t());
        prefix_[k] = mpz_get_ui(q.get_mpz_t());
    }
}

BigInt ExactCategorical::weight(std::size_t i) const
{
    return i == 0 ? cumulative_[0] : BigInt(cumulative_[i] - cumulative_[i - 1]);
}

Rational ExactCategorical::probability(std::size_t i) const
{
    Rational out(weight(i), total());
    out.canonicalize();
    return out;
}

}  // namespace sgrowth
