#include "sgrowth/sampler.hpp"

#include <fmt/format.h>

#include <cassert>
#include <numeric>
#include <stdexcept>

namespace sgrowth {

namespace {

std::vector<BigInt> cycle_length_weights(const std::vector<unsigned>& lengths, unsigned u,
                                         const Sequence& h)
{
    std::vector<BigInt> w;
    for (unsigned d : lengths)
        w.push_back(d <= u ? falling_factorial(u - 1, d - 1) * h[u - d] : BigInt(0));
    return w;
}

// Removes and returns a uniformly chosen element of pool.
template <class T>
T take_uniform(std::vector<T>& pool, RngStream& rng)
{
    const std::size_t idx = rng.below(pool.size());
    T value = pool[idx];
    pool[idx] = pool.back();
    pool.pop_back();
    return value;
}

}  // namespace

OrderDividingSampler::OrderDividingSampler(unsigned p, unsigned n) : p_(p), n_(n)
{
    if (p == 0)
        throw std::invalid_argument("OrderDividingSampler: p must be positive");
    for (unsigned d = 1; d <= p; ++d)
        if (p % d == 0)
            lengths_.push_back(d);
    const Sequence h = hn_cyclic_table(p, n);
    by_count_.resize(n + 1);
    for (unsigned u = 1; u <= n; ++u)
        by_count_[u] = ExactCategorical(cycle_length_weights(lengths_, u, h));
}

Permutation OrderDividingSampler::sample(RngStream& rng) const
{
    std::vector<Point> images(n_);
    std::vector<Point> pool(n_);
    std::iota(pool.begin(), pool.end(), Point{0});
    std::vector<Point> cycle;
    while (!pool.empty()) {
        const unsigned u = static_cast<unsigned>(pool.size());
        const unsigned d = lengths_[by_count_[u].sample(rng)];
        cycle.assign(1, pool.back());
        pool.pop_back();
        for (unsigned j = 1; j < d; ++j)
            cycle.push_back(take_uniform(pool, rng));
        for (unsigned j = 0; j < d; ++j)
            images[cycle[j]] = cycle[(j + 1) % d];
    }
    return Permutation::from_images_unchecked(std::move(images));
}

RootSampler::RootSampler(unsigned p, unsigned n) : p_(p), n_(n)
{
    if (p == 0)
        throw std::invalid_argument("RootSampler: p must be positive");
    lengths_.resize(n);
    for (unsigned l = 1; l <= n; ++l) {
        Length& entry = lengths_[l - 1];
        const unsigned R = n / l;
        entry.sizes = joinable_group_sizes(p, l);
        entry.counts = root_counts(p, l, R);
        entry.by_count.resize(R + 1);
        for (unsigned r = 1; r <= R; ++r) {
            if (sgn(entry.counts[r]) == 0)
                continue;
            std::vector<BigInt> w;
            for (unsigned i : entry.sizes)
                w.push_back(i <= r ? binomial(r - 1, i - 1) * factorial(i - 1) *
                                         ipow(BigInt(l), i - 1) * entry.counts[r - i]
                                   : BigInt(0));
            entry.by_count[r] = ExactCategorical(std::move(w));
        }
    }
}

const RootSampler::Length& RootSampler::length(unsigned l) const
{
    if (l == 0 || l > n_)
        throw std::invalid_argument(fmt::format("RootSampler: cycle length {} exceeds degree {}", l, n_));
    return lengths_[l - 1];
}

BigInt RootSampler::root_count(const CycleType& type) const
{
    BigInt count = 1;
    for (const auto& [l, r] : type.multiplicities())
        count *= length(l).counts[r];
    return count;
}

Permutation RootSampler::sample(const Permutation& z, RngStream& rng) const
{
    std::map<unsigned, std::vector<std::vector<Point>>> by_length;
    for (auto& c : z.cycles())
        by_length[static_cast<unsigned>(c.size())].push_back(std::move(c));

    std::vector<Point> images(z.degree());
    std::vector<std::size_t> picked;
    std::vector<unsigned> phase;
    std::vector<Point> joined;
    for (const auto& [l, cycles] : by_length) {
        const Length& entry = length(l);
        const unsigned r = static_cast<unsigned>(cycles.size());
        if (sgn(entry.counts[r]) == 0)
            throw std::invalid_argument(fmt::format(
                "no {}-th root exists: {} cycles of length {} cannot be joined", p_, r, l));
        std::vector<std::size_t> pool(r);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        while (!pool.empty()) {
            const unsigned u = static_cast<unsigned>(pool.size());
            const unsigned i = entry.sizes[entry.by_count[u].sample(rng)];
            picked.assign(1, pool.back());
            pool.pop_back();
            phase.assign(1, 0);
            for (unsigned j = 1; j < i; ++j) {
                picked.push_back(take_uniform(pool, rng));
                phase.push_back(static_cast<unsigned>(rng.below(l)));
            }
            // The joined cycle b_0 .. b_{L-1}: residue class c mod i holds
            // cycle picked[c], b_{c + t p} = z^t(start), so sigma^p = z.
            const unsigned L = l * i;
            joined.assign(L, 0);
            for (unsigned c = 0; c < i; ++c) {
                const auto& cyc = cycles[picked[c]];
                for (unsigned t = 0; t < l; ++t)
                    joined[(c + static_cast<unsigned long long>(t) * p_) % L] = cyc[(phase[c] + t) % l];
            }
            for (unsigned s = 0; s < L; ++s)
                images[joined[s]] = joined[(s + 1) % L];
        }
    }
    Permutation sigma = Permutation::from_images_unchecked(std::move(images));
    assert(sigma.power(p_) == z);
    return sigma;
}

Permutation uniform_permutation(unsigned n, RngStream& rng)
{
    std::vector<Point> images(n);
    std::iota(images.begin(), images.end(), Point{0});
    for (unsigned i = n; i > 1; --i)
        std::swap(images[i - 1], images[rng.below(i)]);
    return Permutation::from_images_unchecked(std::move(images));
}

Permutation uniform_of_type(const CycleType& type, RngStream& rng)
{
    const Permutation order = uniform_permutation(type.degree(), rng);
    const auto points = order.images();
    std::vector<Point> images(type.degree());
    std::size_t pos = 0;
    for (const auto& [l, r] : type.multiplicities())
        for (unsigned k = 0; k < r; ++k) {
            for (unsigned j = 0; j < l; ++j)
                images[points[pos + j]] = points[pos + (j + 1) % l];
            pos += l;
        }
    return Permutation::from_images_unchecked(std::move(images));
}

const char* model_name(SamplingModel model)
{
    return model == SamplingModel::exact ? "exact" : "factored";
}

SamplingModel parse_model(const std::string& text)
{
    if (text == "exact")
        return SamplingModel::exact;
    if (text == "factored")
        return SamplingModel::factored;
    throw std::invalid_argument(fmt::format("unknown sampling model '{}' (exact|factored)", text));
}

HomSampler::HomSampler(const GroupSpec& spec, unsigned n, SamplingModel model, const Caps& caps)
    : spec_(spec), n_(n), model_(model)
{
    if (model == SamplingModel::factored && !spec.is_torus())
        throw std::invalid_argument("the factored model applies to torus specs only");
    const bool exact_torus = spec.is_torus() && model == SamplingModel::exact;
    if (exact_torus && n > caps.sampler)
        throw CapExceeded(fmt::format(
            "exact torus sampling at n = {} exceeds the cycle-type cap {}; raise --cap-partitions "
            "or use --model factored", n, caps.sampler));

    total_ = ipow(factorial(n), spec.free_rank());
    if (!exact_torus) {
        for (unsigned p : spec.orders()) {
            cyclic_.emplace_back(p, n);
            total_ *= hn_cyclic_table(p, n)[n];
        }
        return;
    }

    for (unsigned p : spec.orders())
        roots_.emplace_back(p, n);
    std::vector<BigInt> weights;
    for (auto& type : all_cycle_types(n)) {
        BigInt w = class_size(type);
        for (const auto& roots : roots_)
            w *= roots.root_count(type);
        if (sgn(w) == 0)
            continue;
        weights.push_back(w);
        types_.push_back(std::move(type));
    }
    type_law_ = ExactCategorical(std::move(weights));
    total_ = type_law_.total();
    if (total_ != hn_torus_dp(spec, n, std::max(n, caps.dp))[n])
        throw std::logic_error("torus cycle-type weights do not sum to h_n");
}

Rational HomSampler::type_probability(const CycleType& type) const
{
    for (std::size_t i = 0; i < types_.size(); ++i)
        if (types_[i] == type)
            return type_law_.probability(i);
    return 0;
}

HomSample HomSampler::sample(RngStream& rng) const
{
    std::vector<Permutation> images;
    images.reserve(spec_.generator_count());
    for (unsigned j = 0; j < spec_.free_rank(); ++j)
        images.push_back(uniform_permutation(n_, rng));
    if (roots_.empty()) {
        for (const auto& c : cyclic_)
            images.push_back(c.sample(rng));
    } else {
        const Permutation z = uniform_of_type(types_[type_law_.sample(rng)], rng);
        for (const auto& roots : roots_)
            images.push_back(roots.sample(z, rng));
    }
    return make_hom_sample(spec_, std::move(images));
}

SubgroupSampler::SubgroupSampler(const HomSampler& homs, unsigned retry_ceiling)
    : homs_(homs), retry_ceiling_(retry_ceiling)
{
}

SubgroupSampler::Draw SubgroupSampler::sample(RngStream& rng) const
{
    for (unsigned attempt = 0; attempt < retry_ceiling_; ++attempt) {
        HomSample h = homs_.sample(rng);
        if (h.transitive)
            return {std::move(h), attempt};
    }
    std::string rate = "unknown";
    try {
        GroupSpec target = homs_.model() == SamplingModel::factored
                               ? GroupSpec::free_product(homs_.spec().orders(), GroupSpec::Check::lenient)
                               : homs_.spec();
        const CountTable table = CountTable::build(target, homs_.degree());
        rate = fmt::format("{:.6g}", to_double(Rational(table.t.back(), table.h.back())));
    } catch (const std::exception&) {
    }
    throw std::runtime_error(fmt::format(
        "no transitive hom after {} draws for {} at n = {} (exact acceptance rate t_n/h_n = {})",
        retry_ceiling_, homs_.spec().to_string(), homs_.degree(), rate));
}

Permutation sample_perm_order_dividing(unsigned p, unsigned n, RngStream& rng)
{
    return OrderDividingSampler(p, n).sample(rng);
}

Permutation sample_root(const Permutation& z, unsigned p, RngStream& rng)
{
    return RootSampler(p, static_cast<unsigned>(z.degree())).sample(z, rng);
}

HomSample sample_freeprod_hom(const GroupSpec& spec, unsigned n, RngStream& rng)
{
    if (spec.is_torus())
        throw std::invalid_argument("sample_freeprod_hom: freeprod or fuchsian spec required");
    return HomSampler(spec, n).sample(rng);
}

HomSample sample_torus_hom(const GroupSpec& spec, unsigned n, RngStream& rng, const Caps& caps)
{
    if (!spec.is_torus())
        throw std::invalid_argument("sample_torus_hom: torus spec required");
    return HomSampler(spec, n, SamplingModel::exact, caps).sample(rng);
}

SubgroupSampler::Draw sample_subgroup(const GroupSpec& spec, unsigned n, RngStream& rng,
                                      unsigned retry_ceiling)
{
    const HomSampler homs(spec, n);
    return SubgroupSampler(homs, retry_ceiling).sample(rng);
}

}  // namespace sgrowth
