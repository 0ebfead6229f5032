#include "sgrowth/oracle.hpp"

#include "sgrowth/statistics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgrowth {

namespace {

std::vector<Permutation> all_permutations(unsigned n)
{
    std::vector<Point> images(n);
    std::iota(images.begin(), images.end(), Point{0});
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation::from_images_unchecked(images));
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

std::uint64_t mix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CycleType orbit_sizes(std::span<const Permutation> images, unsigned n)
{
    std::vector<Point> parent(n);
    std::iota(parent.begin(), parent.end(), Point{0});
    auto find = [&](Point v) {
        while (parent[v] != v)
            v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& g : images)
        for (Point v = 0; v < n; ++v) {
            const Point a = find(v), b = find(g(v));
            if (a != b)
                parent[std::max(a, b)] = std::min(a, b);
        }
    std::map<Point, unsigned> sizes;
    for (Point v = 0; v < n; ++v)
        ++sizes[find(v)];
    std::vector<unsigned> parts;
    for (const auto& [root, size] : sizes)
        parts.push_back(size);
    return CycleType::from_parts(parts);
}

class Census {
public:
    Census(const GroupSpec& spec, unsigned n, const OracleOptions& options)
        : options_(options), out_{spec, n, 0, 0, 0, {}, options.classes, {}, {}, {}, {}, 0}
    {
        out_.z_all.resize(options.classes.size());
        out_.z_transitive.resize(options.classes.size());
    }

    void visit(const std::vector<Permutation>& images)
    {
        const unsigned n = out_.n;
        const CycleType orbits = orbit_sizes(images, n);
        const bool transitive = orbits.multiplicities().size() == 1 && orbits.multiplicity(n) == 1;
        out_.total += 1;
        out_.by_orbits[orbits] += 1;
        if (transitive)
            out_.transitive += 1;
        if (out_.spec.is_torus() && images[0].power(out_.spec.orders()[0]).is_identity())
            out_.factoring += 1;
        const std::uint64_t key = hom_key(images);
        out_.hash += mix(key);
        if (options_.keep_keys) {
            out_.keys.push_back(key);
            if (transitive)
                out_.transitive_keys.push_back(key);
        }
        for (std::size_t c = 0; c < options_.classes.size(); ++c) {
            const unsigned z = static_cast<unsigned>(
                evaluate_word(images, n, options_.classes[c].word).fixed_point_count());
            out_.z_all[c][z] += 1;
            if (transitive)
                out_.z_transitive[c][z] += 1;
        }
    }

    HomCensus finish()
    {
        std::sort(out_.keys.begin(), out_.keys.end());
        std::sort(out_.transitive_keys.begin(), out_.transitive_keys.end());
        if (out_.n >= 1) {
            const BigInt f = factorial(out_.n - 1);
            if (!mpz_divisible_p(out_.transitive.get_mpz_t(), f.get_mpz_t()))
                throw std::logic_error(fmt::format("oracle: transitive count {} not divisible by {}!",
                                                   to_decimal(out_.transitive), out_.n - 1));
        }
        return std::move(out_);
    }

private:
    const OracleOptions& options_;
    HomCensus out_;
};

template <class F>
void product_for_each(const std::vector<const std::vector<Permutation>*>& lists, bool reversed, F&& f)
{
    const std::size_t G = lists.size();
    std::vector<Permutation> current(G);
    std::vector<std::size_t> pos(G, 0);
    for (const auto* l : lists)
        if (l->empty())
            return;
    auto pick = [&](std::size_t g) {
        const auto& l = *lists[g];
        current[g] = reversed ? l[l.size() - 1 - pos[g]] : l[pos[g]];
    };
    for (std::size_t g = 0; g < G; ++g)
        pick(g);
    while (true) {
        f(current);
        std::size_t g = G;
        while (g > 0) {
            --g;
            if (++pos[g] < lists[g]->size()) {
                pick(g);
                break;
            }
            pos[g] = 0;
            pick(g);
            if (g == 0)
                return;
        }
        if (G == 0)
            return;
    }
}

}  // namespace

std::uint64_t permutation_rank(const Permutation& sigma)
{
    const auto img = sigma.images();
    const std::size_t n = img.size();
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (img[j] < img[i])
                ++smaller;
        rank = rank * (n - i) + smaller;
    }
    return rank;
}

std::uint64_t hom_key(std::span<const Permutation> images)
{
    std::uint64_t key = 0;
    for (const auto& g : images) {
        if (g.degree() > 8)
            throw std::invalid_argument("hom_key: degree above 8");
        std::uint64_t base = 1;
        for (std::size_t i = 2; i <= g.degree(); ++i)
            base *= i;
        key = key * base + permutation_rank(g);
    }
    return key;
}

HomCensus enumerate_homs(const GroupSpec& spec, unsigned n, const OracleOptions& options)
{
    if (n == 0 || n > 8)
        throw std::invalid_argument("enumerate_homs: n must be in 1..8");
    const auto perms = all_permutations(n);
    Census census(spec, n, options);

    if (!spec.is_torus()) {
        std::map<unsigned, std::vector<Permutation>> by_order;
        for (unsigned j = spec.free_rank(); j < spec.generator_count(); ++j) {
            const unsigned p = spec.generator_order(j);
            if (by_order.count(p))
                continue;
            auto& list = by_order[p];
            for (const auto& s : perms)
                if (s.power(p).is_identity())
                    list.push_back(s);
        }
        std::vector<const std::vector<Permutation>*> lists;
        BigInt size = 1;
        for (unsigned j = 0; j < spec.generator_count(); ++j) {
            lists.push_back(spec.is_free_generator(j) ? &perms : &by_order.at(spec.generator_order(j)));
            size *= static_cast<unsigned long>(lists.back()->size());
        }
        if (size > BigInt(static_cast<unsigned long>(options.budget)))
            throw CapExceeded(fmt::format("oracle: {} homs exceed the budget {}", to_decimal(size), options.budget));
        product_for_each(lists, options.reversed, [&](const std::vector<Permutation>& images) { census.visit(images); });
        return census.finish();
    }

    // Torus: group permutations by their p-th powers, then combine roots of
    // each common power z.
    const auto& orders = spec.orders();
    std::map<unsigned, std::map<std::uint64_t, std::vector<Permutation>>> roots;
    for (unsigned p : orders) {
        if (roots.count(p))
            continue;
        auto& table = roots[p];
        for (const auto& s : perms)
            table[permutation_rank(s.power(p))].push_back(s);
    }
    BigInt size = 0;
    std::vector<std::uint64_t> powers;
    for (const auto& [z, list] : roots.at(orders[0])) {
        BigInt term = 1;
        for (unsigned p : orders) {
            auto it = roots.at(p).find(z);
            term *= it == roots.at(p).end() ? 0ul : static_cast<unsigned long>(it->second.size());
        }
        if (sgn(term) > 0)
            powers.push_back(z);
        size += term;
    }
    if (size > BigInt(static_cast<unsigned long>(options.budget)))
        throw CapExceeded(fmt::format("oracle: {} homs exceed the budget {}", to_decimal(size), options.budget));
    if (options.reversed)
        std::reverse(powers.begin(), powers.end());
    for (std::uint64_t z : powers) {
        std::vector<const std::vector<Permutation>*> lists;
        for (unsigned p : orders)
            lists.push_back(&roots.at(p).at(z));
        product_for_each(lists, options.reversed, [&](const std::vector<Permutation>& images) { census.visit(images); });
    }
    return census.finish();
}

double tv_to_uniform(const std::vector<std::uint64_t>& support,
                     const std::map<std::uint64_t, std::uint64_t>& draws)
{
    if (support.empty())
        throw std::invalid_argument("tv_to_uniform: empty support");
    std::uint64_t total = 0;
    for (const auto& [key, count] : draws)
        total += count;
    if (total == 0)
        throw std::invalid_argument("tv_to_uniform: no draws");
    const double u = 1.0 / static_cast<double>(support.size());
    double sum = 0;
    for (auto key : support) {
        auto it = draws.find(key);
        const double f = it == draws.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
        sum += std::abs(f - u);
    }
    for (const auto& [key, count] : draws)
        if (!std::binary_search(support.begin(), support.end(), key))
            sum += static_cast<double>(count) / static_cast<double>(total);
    return sum / 2;
}

bool CrossCheckReport::all_pass() const
{
    return std::all_of(identities.begin(), identities.end(), [](const Identity& i) { return i.pass; });
}

nlohmann::json CrossCheckReport::to_json() const
{
    auto list = nlohmann::json::array();
    for (const auto& i : identities) {
        nlohmann::json entry{{"name", i.name}, {"pass", i.pass}};
        if (!i.detail.empty())
            entry["detail"] = i.detail;
        list.push_back(std::move(entry));
    }
    return {{"spec", spec.to_string()}, {"n", n_max}, {"identities", std::move(list)}, {"pass", all_pass()}};
}

std::vector<ClassSpec> default_oracle_classes(const GroupSpec& spec)
{
    std::vector<ClassSpec> out;
    for (unsigned j = 0; j < spec.generator_count(); ++j)
        out.push_back(classify(spec, Word::generator(j)));
    if (spec.generator_count() >= 2)
        out.push_back(classify(spec, Word({{0, 1}, {1, 1}})));
    if (spec.is_torus())
        out.push_back(classify(spec, Word::generator(0, spec.orders()[0])));
    return out;
}

CrossCheckReport cross_check(const GroupSpec& spec, unsigned n_max)
{
    CrossCheckReport report{spec, n_max, {}};
    const CountTable table = CountTable::build(spec, n_max);
    std::vector<Rational> ratio;
    if (spec.is_torus())
        ratio = factor_ratio(spec, n_max);
    const auto classes = default_oracle_classes(spec);
    auto add = [&](std::string name, bool pass, std::string detail = {}) {
        report.identities.push_back({std::move(name), pass, std::move(detail)});
    };
    auto mismatch = [](const BigInt& oracle, const BigInt& exact) {
        return fmt::format("oracle {} vs exact {}", to_decimal(oracle), to_decimal(exact));
    };

    for (unsigned n = 1; n <= n_max; ++n) {
        OracleOptions options;
        options.classes = classes;
        const HomCensus census = enumerate_homs(spec, n, options);

        add(fmt::format("h_{}", n), census.total == table.h[n], mismatch(census.total, table.h[n]));
        add(fmt::format("t_{}", n), census.transitive == table.t[n], mismatch(census.transitive, table.t[n]));
        const BigInt a = census.transitive / factorial(n - 1);
        add(fmt::format("a_{}", n), a == table.a[n], mismatch(a, table.a[n]));

        bool pi_ok = true;
        std::string pi_detail;
        BigInt pi_sum = 0;
        for (const auto& type : all_cycle_types(n)) {
            auto it = census.by_orbits.find(type);
            const BigInt oracle = it == census.by_orbits.end() ? BigInt(0) : it->second;
            const BigInt exact = h_pi(table.t, type);
            pi_sum += exact;
            if (oracle != exact && pi_ok) {
                pi_ok = false;
                pi_detail = fmt::format("orbits {}: {}", type.to_string(), mismatch(oracle, exact));
            }
        }
        add(fmt::format("h_pi_{}", n), pi_ok, pi_detail);
        add(fmt::format("sum_h_pi_{}", n), pi_sum == table.h[n], mismatch(pi_sum, table.h[n]));

        if (spec.is_torus()) {
            Rational oracle(census.factoring, census.total);
            oracle.canonicalize();
            add(fmt::format("factor_ratio_{}", n), oracle == ratio[n],
                fmt::format("oracle {} vs exact {}", to_decimal(oracle), to_decimal(ratio[n])));
            const auto& kernel = census.z_all.back();
            auto it = kernel.find(n);
            const BigInt fixed_all = it == kernel.end() ? BigInt(0) : it->second;
            add(fmt::format("kernel_class_factoring_{}", n), fixed_all == census.factoring,
                mismatch(fixed_all, census.factoring));
        } else {
            for (std::size_t c = 0; c < classes.size(); ++c) {
                const auto* fin = std::get_if<FiniteOrderClass>(&classes[c].kind);
                if (!fin)
                    continue;
                BigInt weighted = 0;
                for (const auto& [z, count] : census.z_all[c])
                    weighted += count * z;
                Rational oracle(weighted, census.total);
                oracle.canonicalize();
                const Rational exact =
                    expected_z_finite_order(spec.generator_order(fin->generator), fin->exponent, n);
                add(fmt::format("mean_z_{}_{}", classes[c].word.to_string(), n), oracle == exact,
                    fmt::format("oracle {} vs exact {}", to_decimal(oracle), to_decimal(exact)));
            }
        }

        OracleOptions reversed;
        reversed.reversed = true;
        const HomCensus backwards = enumerate_homs(spec, n, reversed);
        add(fmt::format("order_independent_hash_{}", n), backwards.hash == census.hash && backwards.total == census.total);
    }
    return report;
}

}  // namespace sgrowth
