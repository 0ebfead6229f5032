// Acceptance suite: one PASS/FAIL line per criterion, raw data indented
// below it. Exits non-zero if any criterion fails.

#include "sgrowth/asymptotics.hpp"
#include "sgrowth/homology.hpp"
#include "sgrowth/oracle.hpp"
#include "sgrowth/sampler.hpp"
#include "sgrowth/statistics.hpp"

#include "test_support.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

using namespace sgrowth;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;

    void check(bool ok, std::string line)
    {
        pass = pass && ok;
        lines.push_back(fmt::format("[{}] {}", ok ? "ok" : "FAIL", line));
    }
    void note(std::string line) { lines.push_back(std::move(line)); }
};

ClassSpec cls(const GroupSpec& spec, const char* w)
{
    return classify(spec, Word::parse(w));
}

double ratio(const BigInt& a, const BigInt& b)
{
    Rational q(a, b);
    q.canonicalize();
    return to_double(q);
}

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (const auto& p : parts)
        out += (out.empty() ? "" : " ") + p;
    return out;
}

bool within_binomial(double observed, double p, std::size_t trials, double sigmas = 3)
{
    return std::abs(observed - p) <= sigmas * std::sqrt(p * (1 - p) / static_cast<double>(trials)) + 1e-12;
}

std::vector<HomSample> subgroup_samples(const GroupSpec& spec, unsigned n, std::size_t count, std::uint64_t seed,
                                        SamplingModel model = SamplingModel::exact)
{
    const HomSampler homs(spec, n, model);
    const SubgroupSampler sub(homs);
    std::vector<HomSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        RngStream r(seed, i);
        out.push_back(sub.sample(r).hom);
    }
    return out;
}

Outcome oracle_equivalence()
{
    Outcome o;
    const std::pair<const char*, unsigned> matrix[] = {
        {"free:2,2", 7}, {"free:2,3", 7}, {"fuchsian:1;2", 7}, {"torus:2,3", 6}};
    for (const auto& [s, n_max] : matrix) {
        const CrossCheckReport r = cross_check(GroupSpec::parse(s, GroupSpec::Check::lenient), n_max);
        std::size_t failed = 0;
        for (const auto& id : r.identities)
            failed += !id.pass;
        o.check(r.all_pass(), fmt::format("{} n<={}: {} identities, {} failed", s, n_max, r.identities.size(), failed));
        for (const auto& id : r.identities)
            if (!id.pass)
                o.note(fmt::format("  {} {}", id.name, id.detail));
    }
    return o;
}

Outcome triple_route()
{
    Outcome o;
    for (const char* s : {"torus:2,3", "torus:3,3,3"}) {
        const auto spec = GroupSpec::parse(s);
        const Sequence dp = hn_torus_dp(spec, 25);
        unsigned agree = 0;
        for (unsigned n = 1; n <= 25; ++n)
            agree += hn_torus_closed(spec, n) == dp[n] && hn_torus_root_sum(spec, n) == dp[n];
        o.check(agree == 25, fmt::format("{}: closed = dp = root sum for {} of 25 degrees", s, agree));
    }
    const BigInt h4 = hn_torus_dp(GroupSpec::parse("torus:2,3"), 4)[4];
    o.check(h4 == 96, fmt::format("h_4(torus:2,3) = {}", to_decimal(h4)));
    return o;
}

Outcome factoring_trend()
{
    Outcome o;
    const auto r = factor_ratio(GroupSpec::parse("torus:3,3,3"), 40);
    std::vector<std::string> raw;
    std::vector<unsigned> drops;
    for (unsigned n = 1; n <= 40; ++n) {
        raw.push_back(fmt::format("{}:{:.12f}", n, to_double(r[n])));
        if (n > 20 && r[n] <= r[n - 1])
            drops.push_back(n);
    }
    o.check(drops.empty(), fmt::format("strictly increasing on 20..40 ({} non-increases, at n = {})", drops.size(),
                                       fmt::join(drops, ",")));
    bool above = true;
    for (unsigned n = 20; n <= 40; ++n)
        above = above && r[n] > r[10];
    o.check(above, fmt::format("exceeds r(10) = {:.12f} on 20..40", to_double(r[10])));
    o.note("  raw " + join(raw));
    return o;
}

Outcome poisson_law()
{
    Outcome o;
    const auto spec = GroupSpec::parse("free:2,3");
    const ClassSpec k1 = cls(spec, "x1*x2");
    const ClassSpec k2 = cls(spec, "(x1*x2)^2");
    const unsigned n = 300;
    const std::size_t draws = 100000;
    const auto samples = subgroup_samples(spec, n, draws, 7);
    Histogram z1, z2;
    for (const auto& h : samples) {
        z1.add(z_count(h, k1));
        z2.add(z_count(h, k2));
    }
    const double tv1 = tv_distance(z1, compound_poisson_pmf(1));
    const double tv2 = tv_distance(z2, compound_poisson_pmf(2));
    const double three = z1.frequency(3);
    const double target = 1 / (6 * std::exp(1.0));
    o.check(tv1 < 0.02, fmt::format("x1*x2: TV to Poisson(1) = {:.4f} (< 0.02), mean {:.4f}", tv1, z1.mean()));
    o.check(tv2 < 0.03, fmt::format("(x1*x2)^2: TV to X_1 + 2 X_1/2 = {:.4f} (< 0.03), mean {:.4f}", tv2, z2.mean()));
    o.check(std::abs(three - target) <= 0.01, fmt::format("P[Z = 3] = {:.4f} vs {:.4f} (+-0.01)", three, target));
    std::vector<std::string> hist;
    for (const auto& [v, c] : z1.counts())
        hist.push_back(fmt::format("{}:{}", v, c));
    o.note("  x1*x2 histogram " + join(hist));
    return o;
}

Outcome clt()
{
    Outcome o;
    const auto spec = GroupSpec::parse("free:2,3");
    const ClassSpec c = cls(spec, "x2");
    const unsigned n = 3000;
    const auto samples = subgroup_samples(spec, n, 10000, 1);
    Histogram h;
    for (const auto& s : samples)
        h.add(z_count(s, c));
    const auto summary = empirical_summary(h, limit_law(spec, c), n);
    o.check(std::abs(*summary.normalized_mean) <= 0.1, fmt::format("normalized mean {:.4f}", *summary.normalized_mean));
    o.check(*summary.normalized_var >= 0.85 && *summary.normalized_var <= 1.15,
            fmt::format("normalized variance {:.4f}", *summary.normalized_var));
    o.check(*summary.ks < 0.05, fmt::format("KS {:.4f} (< 0.05)", *summary.ks));
    return o;
}

Outcome mean_formula()
{
    Outcome o;
    const auto spec = GroupSpec::parse("free:2,3");
    const ClassSpec c = cls(spec, "x2");
    const unsigned n = 200;
    const std::size_t draws = 100000;
    const HomSampler homs(spec, n);
    const auto z = parallel_map(draws, 1, 6, [&](std::size_t, RngStream& r) { return z_count(homs.sample(r), c); });
    Histogram h;
    for (unsigned v : z)
        h.add(v);
    const Sequence c3 = hn_cyclic_table(3, n);
    const double exact = n * ratio(c3[n - 1], c3[n]);
    const double se = std::sqrt(h.variance() / static_cast<double>(draws));
    o.check(std::abs(h.mean() - exact) <= 3 * se,
            fmt::format("E[Z_x2] = {:.5f} vs exact {:.5f} (se {:.5f}, z {:.2f})", h.mean(), exact, se,
                        (h.mean() - exact) / se));
    return o;
}

Outcome irs_limit()
{
    Outcome o;
    const auto torus = GroupSpec::parse("torus:3,3,3");
    const unsigned n = 30;
    const std::size_t draws = 2000;
    const auto samples = subgroup_samples(torus, n, draws, 11);
    const ClassSpec x1 = cls(torus, "x1");
    const ClassSpec c = cls(torus, "x1^3");
    double local = 0;
    std::size_t at_n = 0;
    for (const auto& h : samples) {
        local += static_cast<double>(z_count(h, x1)) / n;
        at_n += z_count(h, c) == n;
    }
    local /= draws;
    const CountTable whole = CountTable::build(torus, n);
    const CountTable image = CountTable::build(GroupSpec::free_product(torus.orders(), GroupSpec::Check::lenient), n);
    const double exact = ratio(image.t[n], whole.t[n]);
    const double freq = static_cast<double>(at_n) / draws;
    o.check(local <= 0.2, fmt::format("torus:3,3,3 n={}: mean Z_x1/n = {:.4f} (<= 0.2)", n, local));
    o.check(within_binomial(freq, exact, draws),
            fmt::format("P[Z_x1^3 = n] = {:.6f} vs exact t_n(image)/t_n = {:.9f}", freq, exact));

    const auto f2 = GroupSpec::parse("fuchsian:2;");
    const auto fs = subgroup_samples(f2, 200, 2000, 12);
    const ClassSpec y1 = cls(f2, "x1");
    double fl = 0;
    for (const auto& h : fs)
        fl += static_cast<double>(z_count(h, y1)) / 200;
    fl /= static_cast<double>(fs.size());
    o.check(fl <= 0.05, fmt::format("fuchsian:2; n=200: mean Z_x1/n = {:.5f} (<= 0.05)", fl));
    return o;
}

Outcome betti_growth()
{
    Outcome o;
    const auto torus = GroupSpec::parse("torus:3,3,3");
    const double limit = to_double(l2_limit(torus));
    auto mean_b1_over_n = [&](unsigned n) {
        const auto samples = subgroup_samples(torus, n, 100, 1);
        double sum = 0;
        for (const auto& h : samples)
            sum += static_cast<double>(betti1(h)) / n;
        return sum / 100;
    };
    const double m10 = mean_b1_over_n(10);
    const double m30 = mean_b1_over_n(30);
    o.check(m30 >= 0.75 && m30 <= 1.0, fmt::format("mean b1/n at n=30: {:.4f}", m30));
    o.check(std::abs(m30 - limit) < std::abs(m10 - limit),
            fmt::format("deviation from {}: {:.4f} at n=30 vs {:.4f} at n=10", limit, std::abs(m30 - limit),
                        std::abs(m10 - limit)));
    const HomSample whole = make_hom_sample(torus, std::vector<Permutation>(3, Permutation::identity(1)));
    const long b = betti1(whole);
    o.check(b == 1, fmt::format("b1(whole group) = {}", b));

    std::size_t total = 0, holds = 0;
    for (const char* s : {"free:2,3", "free:2,2,2", "fuchsian:1;2", "fuchsian:2;"})
        for (unsigned n : {5u, 20u})
            for (const auto& h : subgroup_samples(GroupSpec::parse(s), n, 100, 2)) {
                ++total;
                holds += kurosh_identity_check(h);
            }
    o.check(holds == total, fmt::format("Kurosh identity on {} of {} freeprod/fuchsian samples", holds, total));
    return o;
}

Outcome asymptotic_evaluators()
{
    Outcome o;
    const Sequence inv = hn_cyclic_table(2, 200);
    auto cyclic_ratio = [&](unsigned n) {
        return std::exp(static_cast<double>(log_of(inv[n]) - asym_cyclic(2, n)));
    };
    const double r7 = cyclic_ratio(7), r200 = cyclic_ratio(200);
    o.check(r7 >= 0.8 && r7 <= 1.05, fmt::format("h_7(C_2)/asym = {:.5f} (in [0.8, 1.05])", r7));
    o.check(std::abs(r200 - 1) < std::abs(r7 - 1), fmt::format("h_200(C_2)/asym = {:.5f}", r200));

    const auto torus = GroupSpec::parse("torus:3,3,3");
    const CountTable t = CountTable::build(torus, 60);
    auto torus_ratio = [&](unsigned n) {
        return std::exp(static_cast<double>(log_of(t.a[n]) - asym_torus(torus, n)));
    };
    const double a20 = torus_ratio(20), a60 = torus_ratio(60);
    o.check(std::abs(a60 - 1) < std::abs(a20 - 1),
            fmt::format("a_n(torus:3,3,3)/asym = {:.5f} at n=20, {:.5f} at n=60", a20, a60));
    std::vector<std::string> cyc, tor;
    for (unsigned n : {2u, 3u, 5u, 7u, 10u, 20u, 50u, 100u, 200u})
        cyc.push_back(fmt::format("{}:{:.6f}", n, cyclic_ratio(n)));
    for (unsigned n = 10; n <= 60; n += 5)
        tor.push_back(fmt::format("{}:{:.6f}", n, torus_ratio(n)));
    o.note("  h_n(C_2)/asym " + join(cyc));
    o.note("  a_n(torus:3,3,3)/asym " + join(tor));
    return o;
}

Outcome sampler_exactness()
{
    Outcome o;
    const std::size_t draws = 1000000;
    auto tv_of = [&](const std::vector<std::uint64_t>& support, std::uint64_t seed,
                     const std::function<std::uint64_t(RngStream&)>& draw) {
        std::map<std::uint64_t, std::uint64_t> counts;
        for (std::size_t i = 0; i < draws; ++i) {
            RngStream r(seed, i);
            ++counts[draw(r)];
        }
        return tv_to_uniform(support, counts);
    };
    const auto s4 = sgrowth::testing::all_permutations(4);
    auto support_where = [&](const std::function<bool(const Permutation&)>& keep) {
        std::vector<std::uint64_t> out;
        for (const auto& s : s4)
            if (keep(s))
                out.push_back(permutation_rank(s));
        std::sort(out.begin(), out.end());
        return out;
    };

    for (unsigned p : {2u, 3u, 4u}) {
        const OrderDividingSampler sampler(p, 4);
        const auto support = support_where([&](const Permutation& s) { return s.power(p).is_identity(); });
        const double tv = tv_of(support, 100 + p, [&](RngStream& r) { return permutation_rank(sampler.sample(r)); });
        o.check(tv < 0.01, fmt::format("order dividing {}: TV {:.5f} over {} permutations", p, tv, support.size()));
    }
    const std::pair<Permutation, unsigned> root_cases[] = {
        {Permutation::from_cycles(4, {{1, 2}, {3, 4}}), 2},
        {Permutation::identity(4), 2},
        {Permutation::from_cycles(4, {{1, 2, 3}}), 2},
        {Permutation::identity(4), 3},
    };
    for (const auto& [z, p] : root_cases) {
        const RootSampler sampler(p, 4);
        const auto support = support_where([&, &z = z, p = p](const Permutation& s) { return s.power(p) == z; });
        const double tv = tv_of(support, 200 + p, [&, &z = z](RngStream& r) { return permutation_rank(sampler.sample(z, r)); });
        o.check(tv < 0.01, fmt::format("{}-th roots of {}: TV {:.5f} over {} roots", p, z.to_string(), tv, support.size()));
    }
    for (const char* s : {"free:2,3", "torus:2,3", "fuchsian:1;2"}) {
        const auto spec = GroupSpec::parse(s);
        OracleOptions options;
        options.keep_keys = true;
        const HomCensus census = enumerate_homs(spec, 4, options);
        const HomSampler homs(spec, 4);
        const SubgroupSampler sub(homs);
        const double tv_h = tv_of(census.keys, 300, [&](RngStream& r) { return hom_key(homs.sample(r).images); });
        const double tv_t =
            tv_of(census.transitive_keys, 301, [&](RngStream& r) { return hom_key(sub.sample(r).hom.images); });
        o.check(tv_h < 0.01, fmt::format("{} homs: TV {:.5f} over {}", s, tv_h, census.keys.size()));
        o.check(tv_t < 0.01, fmt::format("{} subgroups: TV {:.5f} over {}", s, tv_t, census.transitive_keys.size()));

        std::uint64_t accepted = 0, attempts = 0;
        for (std::size_t i = 0; i < 100000; ++i) {
            RngStream r(302, i);
            attempts += 1 + sub.sample(r).rejections;
            ++accepted;
        }
        const double rate = static_cast<double>(accepted) / static_cast<double>(attempts);
        const double exact = ratio(census.transitive, census.total);
        o.check(within_binomial(rate, exact, attempts),
                fmt::format("{} n=4 acceptance {:.5f} vs exact {:.5f} over {} draws", s, rate, exact, attempts));
    }

    RngStream rng(2024, 0);
    unsigned valid = 0;
    for (unsigned trial = 0; trial < 10000; ++trial) {
        const unsigned n = 1 + static_cast<unsigned>(rng.below(60));
        const unsigned p = 1 + static_cast<unsigned>(rng.below(12));
        const Permutation z = uniform_permutation(n, rng).power(p);
        valid += sample_root(z, p, rng).power(p) == z;
    }
    o.check(valid == 10000, fmt::format("sample_root valid on {} of 10000 random inputs", valid));
    return o;
}

Outcome appendix_diagnostics()
{
    Outcome o;
    unsigned checked = 0, failed = 0;
    for (unsigned p = 1; p <= 6; ++p)
        for (unsigned l = 1; l <= 6; ++l)
            for (unsigned r = 1; r <= 60; ++r) {
                ++checked;
                failed += !tau_bound_check(p, l, r);
            }
    o.check(failed == 0, fmt::format("tau bound holds on {} of {} (p, l, r)", checked - failed, checked));
    const CountTable t = CountTable::build(GroupSpec::parse("torus:3,3,3"), 40);
    const double d10 = to_double(convolution_decay(t.a, 10));
    const double d40 = to_double(convolution_decay(t.a, 40));
    o.check(d40 < d10, fmt::format("convolution decay {:.6g} at n=40 vs {:.6g} at n=10", d40, d10));
    return o;
}

struct Criterion {
    int number;
    const char* name;
    double budget_seconds;  // 0: no limit
    Outcome (*run)();
};

}  // namespace

int main()
{
    const Criterion criteria[] = {
        {1, "oracle equivalence", 600, oracle_equivalence},
        {2, "triple-route torus counts", 300, triple_route},
        {3, "factoring trend", 120, factoring_trend},
        {4, "Poisson lift counts", 600, poisson_law},
        {5, "central limit for a finite-order class", 900, clt},
        {6, "mean fixed-point formula", 0, mean_formula},
        {7, "invariant random subgroup limit", 0, irs_limit},
        {8, "Betti growth", 1200, betti_growth},
        {9, "asymptotic evaluators", 0, asymptotic_evaluators},
        {10, "sampler exactness", 0, sampler_exactness},
        {11, "tau bound and convolution decay", 0, appendix_diagnostics},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, fmt::format("exception: {}", e.what()));
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0 && seconds > c.budget_seconds)
            o.check(false, fmt::format("runtime {:.1f} s exceeds {:.0f} s", seconds, c.budget_seconds));
        failures += !o.pass;
        fmt::print("{} criterion {:2d}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", c.number, c.name, seconds);
        for (const auto& line : o.lines)
            fmt::print("    {}\n", line);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria pass\n", std::size(criteria) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
