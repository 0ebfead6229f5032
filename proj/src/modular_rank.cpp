#include "sgrowth/modular_rank.hpp"

#include "sgrowth/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgrowth {

std::vector<std::vector<std::int64_t>> SparseMatrix::dense() const
{
    std::vector<std::vector<std::int64_t>> out(rows, std::vector<std::int64_t>(cols, 0));
    for (std::size_t r = 0; r < rows; ++r)
        for (const auto& [c, v] : entries[r])
            out[r][c] += v;
    return out;
}

std::size_t rank_mod_p(const SparseMatrix& m, std::uint32_t p)
{
    std::vector<std::vector<std::uint64_t>> a(m.rows, std::vector<std::uint64_t>(m.cols, 0));
    for (std::size_t r = 0; r < m.rows; ++r)
        for (const auto& [c, v] : m.entries[r]) {
            std::int64_t x = v % static_cast<std::int64_t>(p);
            if (x < 0)
                x += p;
            a[r][c] = (a[r][c] + static_cast<std::uint64_t>(x)) % p;
        }
    auto inverse = [p](std::uint64_t x) {
        std::uint64_t result = 1, base = x, e = p - 2;
        while (e) {
            if (e & 1)
                result = result * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return result;
    };
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows && a[pivot][col] == 0)
            ++pivot;
        if (pivot == m.rows)
            continue;
        std::swap(a[pivot], a[rank]);
        const std::uint64_t inv = inverse(a[rank][col]);
        for (std::size_t c = col; c < m.cols; ++c)
            a[rank][c] = a[rank][c] * inv % p;
        for (std::size_t r = rank + 1; r < m.rows; ++r) {
            const std::uint64_t f = a[r][col];
            if (f == 0)
                continue;
            for (std::size_t c = col; c < m.cols; ++c)
                a[r][c] = (a[r][c] + (p - f) * a[rank][c]) % p;
        }
        ++rank;
    }
    return rank;
}

std::size_t rank_exact(const SparseMatrix& m)
{
    std::vector<std::vector<BigInt>> a(m.rows, std::vector<BigInt>(m.cols, BigInt(0)));
    for (std::size_t r = 0; r < m.rows; ++r)
        for (const auto& [c, v] : m.entries[r])
            a[r][c] += BigInt(static_cast<long>(v));
    BigInt previous = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows && sgn(a[pivot][col]) == 0)
            ++pivot;
        if (pivot == m.rows)
            continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t r = rank + 1; r < m.rows; ++r) {
            for (std::size_t c = col + 1; c < m.cols; ++c) {
                a[r][c] = a[rank][col] * a[r][c] - a[r][col] * a[rank][c];
                mpz_divexact(a[r][c].get_mpz_t(), a[r][c].get_mpz_t(), previous.get_mpz_t());
            }
            a[r][col] = 0;
        }
        previous = a[rank][col];
        ++rank;
    }
    return rank;
}

std::vector<std::uint32_t> random_primes(std::size_t count, std::uint64_t seed)
{
    RngStream rng(seed, 0);
    std::vector<std::uint32_t> out;
    while (out.size() < count) {
        BigInt candidate(static_cast<unsigned long>((1u << 30) + rng.below(1u << 30)));
        mpz_nextprime(candidate.get_mpz_t(), candidate.get_mpz_t());
        const auto p = static_cast<std::uint32_t>(candidate.get_ui());
        if (p < (1u << 31) && std::find(out.begin(), out.end(), p) == out.end())
            out.push_back(p);
    }
    return out;
}

RankResult rank_over_q(const SparseMatrix& m, const std::vector<std::uint32_t>& primes, bool force_exact)
{
    RankResult result;
    for (auto p : primes)
        result.modular_ranks.push_back(rank_mod_p(m, p));
    const bool agree = !result.modular_ranks.empty() &&
                       std::all_of(result.modular_ranks.begin(), result.modular_ranks.end(),
                                   [&](std::size_t r) { return r == result.modular_ranks.front(); });
    if (agree && !force_exact) {
        result.rank = result.modular_ranks.front();
        return result;
    }
    result.rank = rank_exact(m);
    result.used_exact = true;
    if (agree && result.rank != result.modular_ranks.front())
        throw std::logic_error("modular ranks agree but differ from the exact rank");
    return result;
}

}  // namespace sgrowth
