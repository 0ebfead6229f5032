#include "sgrowth/permutation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

namespace sgrowth {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images))
{
    std::vector<bool> seen(images_.size(), false);
    for (Point v : images_) {
        if (v >= images_.size() || seen[v])
            throw std::invalid_argument("Permutation: images are not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t n)
{
    std::vector<Point> images(n);
    for (std::size_t v = 0; v < n; ++v)
        images[v] = static_cast<Point>(v);
    return from_images_unchecked(std::move(images));
}

Permutation Permutation::from_cycles(std::size_t n,
                                     std::initializer_list<std::vector<Point>> cycles)
{
    return from_cycles(n, std::vector<std::vector<Point>>(cycles));
}

Permutation Permutation::from_cycles(std::size_t n, const std::vector<std::vector<Point>>& cycles)
{
    std::vector<Point> images(n);
    for (std::size_t v = 0; v < n; ++v)
        images[v] = static_cast<Point>(v);
    std::vector<bool> used(n, false);
    for (const auto& cycle : cycles) {
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            Point from = cycle[i];
            Point to = cycle[(i + 1) % cycle.size()];
            if (from < 1 || from > n || to < 1 || to > n || used[from - 1])
                throw std::invalid_argument("Permutation::from_cycles: bad cycle");
            used[from - 1] = true;
            images[from - 1] = to - 1;
        }
    }
    return Permutation(std::move(images));
}

Permutation Permutation::from_images_unchecked(std::vector<Point> images)
{
    Permutation out;
    out.images_ = std::move(images);
    return out;
}

bool Permutation::is_identity() const noexcept
{
    for (std::size_t v = 0; v < images_.size(); ++v)
        if (images_[v] != v)
            return false;
    return true;
}

std::size_t Permutation::fixed_point_count() const noexcept
{
    std::size_t count = 0;
    for (std::size_t v = 0; v < images_.size(); ++v)
        count += images_[v] == v;
    return count;
}

Permutation Permutation::inverse() const
{
    std::vector<Point> inv(images_.size());
    for (std::size_t v = 0; v < images_.size(); ++v)
        inv[images_[v]] = static_cast<Point>(v);
    return from_images_unchecked(std::move(inv));
}

Permutation Permutation::power(long long k) const
{
    // Walk each cycle once; the image of the i-th element is the
    // (i + k mod len)-th element.
    const std::size_t n = images_.size();
    std::vector<Point> out(n);
    std::vector<bool> done(n, false);
    std::vector<Point> cycle;
    for (std::size_t start = 0; start < n; ++start) {
        if (done[start])
            continue;
        cycle.clear();
        for (Point v = static_cast<Point>(start); !done[v]; v = images_[v]) {
            done[v] = true;
            cycle.push_back(v);
        }
        const long long len = static_cast<long long>(cycle.size());
        const long long shift = ((k % len) + len) % len;
        for (long long i = 0; i < len; ++i)
            out[cycle[i]] = cycle[(i + shift) % len];
    }
    return from_images_unchecked(std::move(out));
}

std::vector<std::vector<Point>> Permutation::cycles() const
{
    std::vector<std::vector<Point>> out;
    std::vector<bool> done(images_.size(), false);
    for (std::size_t start = 0; start < images_.size(); ++start) {
        if (done[start])
            continue;
        auto& cycle = out.emplace_back();
        for (Point v = static_cast<Point>(start); !done[v]; v = images_[v]) {
            done[v] = true;
            cycle.push_back(v);
        }
    }
    return out;
}

std::string Permutation::to_string() const
{
    std::string out;
    for (const auto& cycle : cycles()) {
        if (cycle.size() == 1)
            continue;
        out += '(';
        for (std::size_t i = 0; i < cycle.size(); ++i)
            out += (i ? " " : "") + std::to_string(cycle[i] + 1);
        out += ')';
    }
    return out.empty() ? "()" : out;
}

Permutation compose(const Permutation& a, const Permutation& b)
{
    if (a.degree() != b.degree())
        throw std::invalid_argument(fmt::format("compose: degree mismatch ({} vs {})",
                                                a.degree(), b.degree()));
    std::vector<Point> out(a.degree());
    for (std::size_t v = 0; v < out.size(); ++v)
        out[v] = a(b(static_cast<Point>(v)));
    return Permutation::from_images_unchecked(std::move(out));
}

CycleType::CycleType(std::map<unsigned, unsigned> multiplicities) : mult_(std::move(multiplicities))
{
    for (auto [length, count] : mult_) {
        if (length == 0 || count == 0)
            throw std::invalid_argument("CycleType: zero length or multiplicity");
        degree_ += length * count;
    }
}

CycleType CycleType::from_parts(std::span<const unsigned> parts)
{
    std::map<unsigned, unsigned> mult;
    for (unsigned part : parts)
        ++mult[part];
    return CycleType(std::move(mult));
}

CycleType CycleType::from_parts(std::initializer_list<unsigned> parts)
{
    return from_parts(std::span<const unsigned>(parts.begin(), parts.size()));
}

unsigned CycleType::multiplicity(unsigned length) const
{
    auto it = mult_.find(length);
    return it == mult_.end() ? 0 : it->second;
}

unsigned CycleType::largest_part() const noexcept
{
    return mult_.empty() ? 0 : mult_.rbegin()->first;
}

std::vector<unsigned> CycleType::parts() const
{
    std::vector<unsigned> out;
    for (auto it = mult_.rbegin(); it != mult_.rend(); ++it)
        out.insert(out.end(), it->second, it->first);
    return out;
}

std::string CycleType::to_string() const
{
    if (mult_.empty())
        return "-";
    std::string out;
    for (auto [length, count] : mult_) {
        if (!out.empty())
            out += ' ';
        out += fmt::format("{}^{}", length, count);
    }
    return out;
}

CycleType cycle_type(const Permutation& sigma)
{
    std::map<unsigned, unsigned> mult;
    for (const auto& cycle : sigma.cycles())
        ++mult[static_cast<unsigned>(cycle.size())];
    return CycleType(std::move(mult));
}

BigInt class_size(const CycleType& type)
{
    BigInt denom = 1;
    for (auto [length, count] : type.multiplicities())
        denom *= ipow(length, count) * factorial(count);
    return exact_quotient(factorial(type.degree()), denom, "class_size");
}

namespace {

void collect_partitions(unsigned remaining, unsigned max_part, std::vector<unsigned>& parts,
                        std::vector<CycleType>& out)
{
    if (remaining == 0) {
        out.push_back(CycleType::from_parts(parts));
        return;
    }
    for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
        parts.push_back(part);
        collect_partitions(remaining - part, part, parts, out);
        parts.pop_back();
    }
}

}  // namespace

std::vector<CycleType> all_cycle_types(unsigned n)
{
    std::vector<CycleType> out;
    std::vector<unsigned> parts;
    collect_partitions(n, n, parts, out);
    return out;
}

BigInt partition_count(unsigned n)
{
    // p(k) = sum_{j<=k} p(k - j) restricted to parts <= j, done as the
    // usual coin-change recurrence.
    std::vector<BigInt> p(n + 1, 0);
    p[0] = 1;
    for (unsigned part = 1; part <= n; ++part)
        for (unsigned k = part; k <= n; ++k)
            p[k] += p[k - part];
    return p[n];
}

}  // namespace sgrowth
