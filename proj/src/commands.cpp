#include "sgrowth/commands.hpp"

#include "sgrowth/asymptotics.hpp"
#include "sgrowth/count_cache.hpp"
#include "sgrowth/homology.hpp"
#include "sgrowth/oracle.hpp"
#include "sgrowth/sampler.hpp"
#include "sgrowth/statistics.hpp"

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace sgrowth {

namespace {

// Beyond this degree t_n/h_n is not computed for reports: the transitive
// recurrence is quadratic in n over numbers with ~n log n digits.
constexpr unsigned exact_rate_limit = 400;

nlohmann::json metadata()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    return {{"timestamp", fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now))}};
}

nlohmann::json report_header(const RunConfig& config)
{
    return {{"config", config.to_json()}, {"metadata", metadata()}};
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

void write_text(const std::string& path, const std::string& text, std::ostream& fallback)
{
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw UsageError(fmt::format("cannot open '{}' for writing", path));
    file << text;
}

void write_json(const std::string& path, const nlohmann::json& j, std::ostream& fallback)
{
    write_text(path, j.dump(2) + "\n", fallback);
}

GroupSpec parsed_spec(const RunConfig& config)
{
    const auto check = config.allow_degenerate ? GroupSpec::Check::lenient : GroupSpec::Check::strict;
    return GroupSpec::parse(config.group, check);
}

/// The group whose homs the sampler draws from uniformly.
GroupSpec sampled_spec(const GroupSpec& spec, SamplingModel model)
{
    if (model == SamplingModel::factored)
        return GroupSpec::free_product(spec.orders(), GroupSpec::Check::lenient);
    return spec;
}

CountTable load_table(const RunConfig& config, const GroupSpec& spec, unsigned N, std::ostream& err,
                      std::vector<std::string>* warnings = nullptr)
{
    if (config.cache_dir.empty())
        return CountTable::build(spec, N, config.caps());
    std::vector<std::string> local;
    CountTable table = CountCache(config.cache_dir).get(spec, N, config.caps(), &local);
    for (const auto& w : local)
        err << "warning: " << w << "\n";
    if (warnings)
        warnings->insert(warnings->end(), local.begin(), local.end());
    return table;
}

std::vector<ClassSpec> parsed_classes(const RunConfig& config, const GroupSpec& spec)
{
    std::vector<ClassSpec> out;
    for (const auto& w : config.classes)
        out.push_back(classify(spec, Word::parse(w)));
    return out;
}

long double log_ratio_to_double(long double exact_log, long double predicted_log)
{
    return std::exp(exact_log - predicted_log);
}

nlohmann::json rational_json(const Rational& q)
{
    return {{"exact", to_decimal(q)}, {"value", to_double(q)}};
}

// ---------------------------------------------------------------- count

int count_impl(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const GroupSpec spec = parsed_spec(config);
    if (config.with_asym && spec.kind() == GroupKind::fuchsian)
        throw UsageError("--with-asym applies to torus and freeprod groups");
    const unsigned N = config.max_n;
    const CountTable table = load_table(config, spec, N, err);
    std::vector<Rational> ratio;
    if (spec.is_torus()) {
        ratio.resize(N + 1);
        for (unsigned n = 0; n <= N; ++n) {
            BigInt num_ = 1;
            for (const auto& c : table.cyclic)
                num_ *= c[n];
            ratio[n] = Rational(num_, table.h[n]);
            ratio[n].canonicalize();
        }
    }

    if (config.resolved_format() == "csv") {
        std::string text = "n,h,t,a";
        if (spec.is_torus())
            text += ",factor_ratio";
        if (config.with_asym)
            text += ",asym_log,ratio";
        text += "\n";
        for (unsigned n = 1; n <= N; ++n) {
            text += fmt::format("{},{},{},{}", n, to_decimal(table.h[n]), to_decimal(table.t[n]),
                                to_decimal(table.a[n]));
            if (spec.is_torus())
                text += "," + num(to_double(ratio[n]));
            if (config.with_asym) {
                const long double pred = asym_torus(spec, n);
                text += "," + num(static_cast<double>(pred)) + "," +
                        num(static_cast<double>(log_ratio_to_double(log_of(table.a[n]), pred)));
            }
            text += "\n";
        }
        write_text(config.out, text, out);
        return exit_ok;
    }

    nlohmann::json j = report_header(config);
    j["spec"] = spec.to_string();
    auto& rows = j["rows"] = nlohmann::json::array();
    for (unsigned n = 1; n <= N; ++n) {
        nlohmann::json row{{"n", n},
                           {"h", to_decimal(table.h[n])},
                           {"t", to_decimal(table.t[n])},
                           {"a", to_decimal(table.a[n])}};
        if (spec.is_torus())
            row["factor_ratio"] = rational_json(ratio[n]);
        if (config.with_asym) {
            const long double pred = asym_torus(spec, n);
            row["asym_log"] = static_cast<double>(pred);
            row["ratio"] = static_cast<double>(log_ratio_to_double(log_of(table.a[n]), pred));
        }
        rows.push_back(row);
    }
    write_json(config.out, j, out);
    return exit_ok;
}

// ---------------------------------------------------------------- stats

struct StatsRow {
    std::vector<unsigned> z;
    unsigned rejections = 0;
    bool factors = true;
};

nlohmann::json binomial_check(double empirical, double exact, std::uint64_t samples)
{
    const double se = std::sqrt(exact * (1 - exact) / static_cast<double>(samples));
    nlohmann::json j{{"empirical", empirical}, {"exact", exact}, {"standard_error", se}};
    j["z_score"] = se > 0 ? (empirical - exact) / se : 0.0;
    return j;
}

int stats_impl(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const GroupSpec spec = parsed_spec(config);
    const auto classes = parsed_classes(config, spec);
    for (const auto& c : classes)
        if (c.is_trivial())
            throw UsageError(fmt::format("class '{}' is trivial; its lift count is always n", c.word.to_string()));
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t k = i + 1; k < classes.size(); ++k)
            if (have_common_root(spec, classes[i], classes[k]))
                throw UsageError(fmt::format("classes '{}' and '{}' share a common root; their lift counts are "
                                             "not asymptotically independent",
                                             classes[i].word.to_string(), classes[k].word.to_string()));
    std::vector<LimitLaw> laws;
    for (const auto& c : classes)
        laws.push_back(limit_law(spec, c));

    const unsigned n = config.n;
    const auto model = parse_model(config.model);
    const bool subgroups = config.population == "subgroups";
    const std::uint64_t samples = config.resolved_samples();
    const HomSampler homs(spec, n, model, config.caps());
    const SubgroupSampler sub(homs, config.retry_ceiling);

    const auto rows = parallel_map(samples, config.workers, config.seed, [&](std::size_t, RngStream& rng) {
        StatsRow row;
        auto draw = subgroups ? sub.sample(rng) : SubgroupSampler::Draw{homs.sample(rng), 0};
        const HomSample& h = draw.hom;
        row.rejections = draw.rejections;
        row.factors = h.factors_through_phi;
        for (const auto& c : classes)
            row.z.push_back(z_count(h, c));
        return row;
    });

    nlohmann::json j = report_header(config);
    j["spec"] = spec.to_string();
    j["n"] = n;
    j["population"] = config.population;
    j["model"] = model_name(model);
    j["samples"] = samples;

    // Exact sizes of the sampled population, when affordable.
    std::optional<CountTable> table;
    if (n <= exact_rate_limit) {
        try {
            table = CountTable::build(sampled_spec(spec, model), n, config.caps());
        } catch (const CapExceeded&) {
        }
    }

    auto& per_class = j["classes"] = nlohmann::json::array();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        Histogram hist;
        for (const auto& row : rows)
            hist.add(row.z[c]);
        const EmpiricalSummary summary = empirical_summary(hist, laws[c], n);
        const double mean = hist.mean();
        const double se = std::sqrt(hist.variance() / static_cast<double>(samples));
        nlohmann::json cj{{"word", classes[c].word.to_string()},
                          {"classification", classes[c].describe()},
                          {"limit_law", laws[c].to_json()},
                          {"summary", summary.to_json()},
                          {"mean", mean},
                          {"mean_standard_error", se},
                          {"mean_over_n", mean / n}};

        const auto& kind = classes[c].kind;
        if (const auto* cp = std::get_if<CompoundPoisson>(&laws[c].kind); cp && cp->k == 1)
            cj["three_lifts"] = binomial_check(hist.frequency(3), 1.0 / (6.0 * std::exp(1.0)), samples);

        if (const auto* fin = std::get_if<FiniteOrderClass>(&kind); fin && !subgroups) {
            const unsigned p = spec.generator_order(fin->generator);
            const Rational exact = expected_z_finite_order(p, fin->exponent, n);
            const double e = to_double(exact);
            cj["exact_mean"] = rational_json(exact);
            cj["exact_mean_z_score"] = se > 0 ? (mean - e) / se : 0.0;
        }

        // Z = n for c^{+-1} exactly when the hom factors through the free product.
        if (const auto* ker = std::get_if<KernelClass>(&kind);
            ker && std::llabs(ker->central_power) == 1 && spec.is_torus() && model == SamplingModel::exact) {
            try {
                const GroupSpec image = GroupSpec::free_product(spec.orders(), GroupSpec::Check::lenient);
                const CountTable whole = table ? *table : CountTable::build(spec, n, config.caps());
                const CountTable quotient = CountTable::build(image, n, config.caps());
                Rational p = subgroups ? Rational(quotient.t[n], whole.t[n]) : Rational(quotient.h[n], whole.h[n]);
                p.canonicalize();
                cj["probability_z_equals_n"] = binomial_check(hist.frequency(n), to_double(p), samples);
                cj["probability_z_equals_n"]["exact_fraction"] = to_decimal(p);
            } catch (const CapExceeded& e) {
                err << "note: exact factoring probability skipped: " << e.what() << "\n";
            }
        }
        per_class.push_back(cj);
    }

    if (classes.size() >= 2) {
        std::vector<std::vector<unsigned>> matrix;
        matrix.reserve(rows.size());
        for (const auto& row : rows)
            matrix.push_back(row.z);
        j["independence"] = joint_independence_report(spec, classes, matrix).to_json();
    }

    if (spec.is_torus() && model == SamplingModel::exact && !subgroups) {
        const auto factoring = static_cast<double>(
            std::count_if(rows.begin(), rows.end(), [](const StatsRow& r) { return r.factors; }));
        nlohmann::json fj{{"empirical", factoring / static_cast<double>(samples)}};
        if (table) {
            BigInt num_ = 1;
            for (const auto& cyc : table->cyclic)
                num_ *= cyc[n];
            Rational q(num_, table->h[n]);
            q.canonicalize();
            fj = binomial_check(factoring / static_cast<double>(samples), to_double(q), samples);
        }
        j["factoring"] = fj;
    }

    if (subgroups) {
        std::uint64_t rejections = 0;
        for (const auto& row : rows)
            rejections += row.rejections;
        const std::uint64_t draws = samples + rejections;
        const double rate = static_cast<double>(samples) / static_cast<double>(draws);
        nlohmann::json aj{{"draws", draws}, {"rejections", rejections}, {"acceptance_rate", rate}};
        if (table) {
            Rational q(table->t[n], table->h[n]);
            q.canonicalize();
            const double e = to_double(q);
            // Accepted count among `draws` trials, approximately binomial.
            const double se = std::sqrt(e * (1 - e) / static_cast<double>(draws));
            aj["exact_rate"] = rational_json(q);
            aj["z_score"] = se > 0 ? (rate - e) / se : 0.0;
        }
        j["acceptance"] = aj;
    }

    write_json(config.out, j, out);
    return exit_ok;
}

// ---------------------------------------------------------------- betti

struct BettiRow {
    long b1 = 0;
    bool factors = true;
    bool kurosh = true;
};

int betti_impl(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const GroupSpec spec = parsed_spec(config);
    const unsigned n = config.n;
    const std::uint64_t samples = config.resolved_samples();
    const auto model = parse_model(config.model);
    const HomSampler homs(spec, n, model, config.caps());
    const SubgroupSampler sub(homs, config.retry_ceiling);
    const bool torus = spec.is_torus();

    const auto rows = parallel_map(samples, config.workers, config.seed, [&](std::size_t, RngStream& rng) {
        const HomSample h = sub.sample(rng).hom;
        BettiRow row;
        row.b1 = betti1_detailed(h).b1;
        row.factors = h.factors_through_phi;
        row.kurosh = torus || kurosh_identity_check(h, row.b1);
        return row;
    });

    // Spot check: sample 0 again, ranked by exact elimination.
    bool spot = true;
    if (samples > 0) {
        RngStream rng(config.seed, 0);
        const HomSample h = sub.sample(rng).hom;
        spot = betti1_detailed(h, true).b1 == rows[0].b1;
    }

    double sum = 0, sum2 = 0;
    bool kurosh_all = true;
    for (const auto& r : rows) {
        const double x = static_cast<double>(r.b1) / n;
        sum += x;
        sum2 += x * x;
        kurosh_all = kurosh_all && r.kurosh;
    }
    const double count = static_cast<double>(samples);
    const double mean = samples ? sum / count : 0;
    const double var = samples > 1 ? (sum2 - count * mean * mean) / (count - 1) : 0;
    const Rational limit = l2_limit(spec);

    nlohmann::json summary{{"spec", spec.to_string()},
                           {"n", n},
                           {"samples", samples},
                           {"mean_b1_over_n", mean},
                           {"stddev_b1_over_n", std::sqrt(std::max(0.0, var))},
                           {"l2_limit", rational_json(limit)},
                           {"deviation_from_limit", std::abs(mean - to_double(limit))},
                           {"exact_rank_spot_check", spot}};
    if (!torus)
        summary["kurosh_all_hold"] = kurosh_all;
    else
        summary["factoring_fraction"] =
            static_cast<double>(std::count_if(rows.begin(), rows.end(), [](const BettiRow& r) { return r.factors; })) /
            std::max(1.0, count);

    nlohmann::json report = report_header(config);
    report["summary"] = summary;
    if (config.resolved_format() == "csv") {
        std::string text = fmt::format("sample_index,n,b1,b1_over_n,{}\n", torus ? "factors_through_phi" : "kurosh");
        for (std::size_t i = 0; i < rows.size(); ++i)
            text += fmt::format("{},{},{},{},{}\n", i, n, rows[i].b1, num(static_cast<double>(rows[i].b1) / n),
                                torus ? rows[i].factors : rows[i].kurosh);
        write_text(config.out, text, out);
        write_json(config.summary_out, report, err);
    } else {
        auto& arr = report["rows"] = nlohmann::json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            nlohmann::json r{{"sample_index", i}, {"b1", rows[i].b1}};
            r[torus ? "factors_through_phi" : "kurosh"] = torus ? rows[i].factors : rows[i].kurosh;
            arr.push_back(r);
        }
        write_json(config.out, report, out);
        if (!config.summary_out.empty())
            write_json(config.summary_out, report["summary"], err);
    }
    if (!kurosh_all || !spot) {
        err << "error: " << (!spot ? "exact rank disagrees with the modular rank" : "Kurosh identity failed")
            << "\n";
        return exit_verification;
    }
    return exit_ok;
}

// ---------------------------------------------------------------- asym

int asym_impl(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    struct Row {
        unsigned n;
        BigInt exact;
        long double prediction;
    };
    std::vector<Row> rows;
    std::string label;
    if (config.cyclic != 0) {
        const Sequence h = hn_cyclic_table(config.cyclic, config.max_n);
        for (unsigned n = config.min_n; n <= config.max_n; ++n)
            rows.push_back({n, h[n], asym_cyclic(config.cyclic, n)});
        label = fmt::format("h_n(C_{})", config.cyclic);
    } else {
        const GroupSpec spec = parsed_spec(config);
        if (spec.kind() == GroupKind::fuchsian)
            throw UsageError("asym applies to torus and freeprod groups, or --cyclic p");
        const CountTable table = load_table(config, spec, config.max_n, err);
        for (unsigned n = config.min_n; n <= config.max_n; ++n)
            rows.push_back({n, table.a[n], asym_torus(spec, n)});
        label = fmt::format("a_n({})", spec.to_string());
    }

    auto ratio = [](const Row& r) { return static_cast<double>(std::exp(log_of(r.exact) - r.prediction)); };
    if (config.resolved_format() == "csv") {
        std::string text = "n,exact,log_prediction,ratio\n";
        for (const auto& r : rows)
            text += fmt::format("{},{},{},{}\n", r.n, to_decimal(r.exact), num(static_cast<double>(r.prediction)),
                                num(ratio(r)));
        write_text(config.out, text, out);
        return exit_ok;
    }
    nlohmann::json j = report_header(config);
    j["sequence"] = label;
    auto& arr = j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"n", r.n},
                       {"exact", to_decimal(r.exact)},
                       {"log_prediction", static_cast<double>(r.prediction)},
                       {"ratio", ratio(r)}});
    write_json(config.out, j, out);
    return exit_ok;
}

// ---------------------------------------------------------------- sample

int sample_impl(const RunConfig& config, std::ostream& out, std::ostream&)
{
    const GroupSpec spec = parsed_spec(config);
    const HomSampler homs(spec, config.n, parse_model(config.model), config.caps());
    const SubgroupSampler sub(homs, config.retry_ceiling);
    const auto lines =
        parallel_map(config.resolved_samples(), config.workers, config.seed, [&](std::size_t, RngStream& rng) {
            return to_json(config.subgroups ? sub.sample(rng).hom : homs.sample(rng)).dump();
        });
    std::string text;
    for (const auto& line : lines)
        text += line + "\n";
    write_text(config.out, text, out);
    return exit_ok;
}

// ---------------------------------------------------------------- verify

struct MatrixEntry {
    std::string spec;
    unsigned n_max;
};

template <class Draw>
Identity tv_identity(const std::string& name, const std::vector<std::uint64_t>& support, std::uint64_t draws,
                     const RunConfig& config, Draw draw)
{
    const auto keys = parallel_map(draws, config.workers, config.seed,
                                   [&](std::size_t, RngStream& rng) { return draw(rng); });
    std::map<std::uint64_t, std::uint64_t> counts;
    for (auto k : keys)
        ++counts[k];
    const double tv = tv_to_uniform(support, counts);
    return {name, tv < 0.01, fmt::format("tv={:.6f} draws={} support={}", tv, draws, support.size())};
}

std::vector<Identity> sampler_identities(const GroupSpec& spec, const RunConfig& config)
{
    constexpr unsigned n = 4;
    const std::uint64_t draws = config.resolved_samples();
    OracleOptions options;
    options.keep_keys = true;
    const HomCensus census = enumerate_homs(spec, n, options);
    const HomSampler homs(spec, n, SamplingModel::exact, config.caps());
    const SubgroupSampler sub(homs, config.retry_ceiling);
    std::vector<Identity> out;
    out.push_back(tv_identity("sampler_tv_homs_n4", census.keys, draws, config,
                              [&](RngStream& rng) { return hom_key(homs.sample(rng).images); }));
    out.push_back(tv_identity("sampler_tv_subgroups_n4", census.transitive_keys, draws, config,
                              [&](RngStream& rng) { return hom_key(sub.sample(rng).hom.images); }));
    return out;
}

std::vector<Identity> permutation_sampler_identities(const RunConfig& config)
{
    constexpr unsigned n = 4;
    const std::uint64_t draws = config.resolved_samples();
    std::vector<Point> images(n);
    std::iota(images.begin(), images.end(), Point{0});
    std::vector<Permutation> all;
    do {
        all.push_back(Permutation::from_images_unchecked(images));
    } while (std::next_permutation(images.begin(), images.end()));

    std::vector<Identity> out;
    for (unsigned p : {2u, 3u}) {
        std::vector<std::uint64_t> support;
        for (const auto& s : all)
            if (s.power(p).is_identity())
                support.push_back(permutation_rank(s));
        std::sort(support.begin(), support.end());
        const OrderDividingSampler sampler(p, n);
        out.push_back(tv_identity(fmt::format("sampler_tv_order_dividing_p{}_n4", p), support, draws, config,
                                  [&](RngStream& rng) { return permutation_rank(sampler.sample(rng)); }));
    }
    // Square roots of (1 2)(3 4).
    const Permutation z = Permutation::from_images_unchecked({1, 0, 3, 2});
    std::vector<std::uint64_t> support;
    for (const auto& s : all)
        if (s.power(2) == z)
            support.push_back(permutation_rank(s));
    std::sort(support.begin(), support.end());
    const RootSampler roots(2, n);
    out.push_back(tv_identity("sampler_tv_square_roots_n4", support, draws, config,
                              [&](RngStream& rng) { return permutation_rank(roots.sample(z, rng)); }));
    return out;
}

Identity round_trip_identity(const GroupSpec& spec, unsigned N, const Caps& caps)
{
    const Sequence h = hn_table(spec, N, caps);
    const Sequence t = t_from_h(h);
    const Sequence a = a_from_t(t);
    bool ok = a == a_from_h_direct(h);
    // Rebuild h from t: h_n = sum_k C(n-1, k-1) t_k h_{n-k}.
    Sequence back(N + 1);
    back[0] = 1;
    for (unsigned m = 1; m <= N; ++m)
        for (unsigned k = 1; k <= m; ++k)
            back[m] += binomial(m - 1, k - 1) * t[k] * back[m - k];
    ok = ok && back == h;
    for (unsigned m = 1; m <= N && ok; ++m)
        ok = a[m] * factorial(m - 1) == t[m];
    return {fmt::format("recurrence_round_trip_n{}", N), ok, ok ? "" : "sequences disagree"};
}

Identity closed_formula_identity(const GroupSpec& spec, unsigned N, const Caps& caps)
{
    const Sequence dp = hn_torus_dp(spec, N, caps.dp);
    for (unsigned n = 1; n <= N; ++n) {
        const BigInt closed = hn_torus_closed(spec, n, caps.partitions);
        const BigInt roots = hn_torus_root_sum(spec, n, caps.partitions);
        if (closed != dp[n] || roots != dp[n])
            return {fmt::format("dp_closed_root_sum_n{}", N), false, fmt::format("first mismatch at n={}", n)};
    }
    return {fmt::format("dp_closed_root_sum_n{}", N), true, ""};
}

nlohmann::json identities_json(const std::vector<Identity>& ids)
{
    auto arr = nlohmann::json::array();
    for (const auto& id : ids) {
        nlohmann::json j{{"name", id.name}, {"pass", id.pass}};
        if (!id.detail.empty())
            j["detail"] = id.detail;
        arr.push_back(j);
    }
    return arr;
}

bool all_pass(const std::vector<Identity>& ids)
{
    return std::all_of(ids.begin(), ids.end(), [](const Identity& i) { return i.pass; });
}

int verify_impl(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    std::vector<MatrixEntry> matrix;
    if (!config.group.empty()) {
        const GroupSpec spec = parsed_spec(config);
        matrix.push_back({spec.to_string(), config.max_n ? config.max_n : (spec.is_torus() ? 6u : 7u)});
    } else {
        for (const char* s : {"free:2,2", "free:2,3", "fuchsian:1;2"})
            matrix.push_back({s, config.max_n ? config.max_n : 7u});
        matrix.push_back({"torus:2,3", config.max_n ? config.max_n : 6u});
    }
    constexpr unsigned round_trip_n = 40;
    constexpr unsigned closed_n = 20;

    nlohmann::json j = report_header(config);
    auto& reports = j["reports"] = nlohmann::json::array();
    std::vector<std::string> warnings;
    bool pass = true;

    for (const auto& entry : matrix) {
        // free:2,2 lies on the boundary of the standing hypothesis.
        const GroupSpec spec = GroupSpec::parse(entry.spec, GroupSpec::Check::lenient);
        err << "verify: " << spec.to_string() << "\n";
        CrossCheckReport cc = cross_check(spec, entry.n_max);
        auto& ids = cc.identities;
        for (auto& id : sampler_identities(spec, config))
            ids.push_back(std::move(id));
        ids.push_back(round_trip_identity(spec, round_trip_n, config.caps()));
        if (spec.is_torus())
            ids.push_back(closed_formula_identity(spec, closed_n, config.caps()));
        if (!config.cache_dir.empty()) {
            const CountTable cached = load_table(config, spec, round_trip_n, err, &warnings);
            const CountTable fresh = CountTable::build(spec, round_trip_n, config.caps());
            const bool same = cached.h == fresh.h && cached.t == fresh.t && cached.a == fresh.a;
            ids.push_back({"cache_table_matches", same, same ? "" : "cached table differs"});
        }
        nlohmann::json r{{"spec", spec.to_string()}, {"n", entry.n_max}, {"identities", identities_json(ids)},
                         {"pass", all_pass(ids)}};
        pass = pass && all_pass(ids);
        reports.push_back(r);
    }

    std::vector<Identity> diagnostics;
    {
        unsigned failures = 0, checked = 0;
        for (unsigned p = 1; p <= 6; ++p)
            for (unsigned l = 1; l <= 6; ++l)
                for (unsigned r = 1; r <= 60; ++r, ++checked)
                    failures += !tau_bound_check(p, l, r);
        diagnostics.push_back({"tau_bound_sweep", failures == 0, fmt::format("{} of {} fail", failures, checked)});
    }
    for (auto& id : permutation_sampler_identities(config))
        diagnostics.push_back(std::move(id));
    if (config.group.empty()) {
        Identity id = closed_formula_identity(GroupSpec::parse("torus:3,3,3"), closed_n, config.caps());
        id.name = "torus_3_3_3_" + id.name;
        diagnostics.push_back(id);
    }
    j["diagnostics"] = {{"identities", identities_json(diagnostics)}, {"pass", all_pass(diagnostics)}};
    pass = pass && all_pass(diagnostics);
    if (!warnings.empty())
        j["warnings"] = warnings;
    j["pass"] = pass;

    write_json(config.out, j, out);
    if (!pass) {
        for (const auto& r : reports)
            for (const auto& id : r["identities"])
                if (!id["pass"].get<bool>())
                    err << "FAIL " << r["spec"].get<std::string>() << " " << id["name"].get<std::string>() << "\n";
        for (const auto& id : diagnostics)
            if (!id.pass)
                err << "FAIL " << id.name << " " << id.detail << "\n";
        return exit_verification;
    }
    return exit_ok;
}

// ---------------------------------------------------------------- parsing

const std::vector<std::pair<const char*, const char*>> subcommands{
    {"count", "exact table of h_n, t_n and a_n"},
    {"stats", "Monte Carlo lift counts of conjugacy classes"},
    {"betti", "first Betti numbers of random finite-index subgroups"},
    {"asym", "exact sequence against its asymptotic prediction"},
    {"sample", "dump sampled homomorphisms as JSON lines"},
    {"verify", "oracle cross-checks and sampler exactness"},
};

std::string config_path(const std::vector<std::string>& args)
{
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw UsageError("--config needs a file");
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    return path;
}

void load_config_file(const std::string& path, RunConfig& config)
{
    std::ifstream file(path);
    if (!file)
        throw UsageError(fmt::format("cannot read config file '{}'", path));
    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(fmt::format("config file '{}': {}", path, e.what()));
    }
    config.apply_json(j);
}

/// Fills `config`; returns an exit code if the program should stop (help or
/// parse error), printing CLI11's message.
std::optional<int> parse_into(const std::vector<std::string>& args, RunConfig& config, std::ostream& out,
                              std::ostream& err)
{
    CLI::App app{"Subgroup growth, random subgroups and lift statistics", "sgrowth"};
    app.require_subcommand(1);
    std::string config_file;
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : subcommands) {
        auto* sub = app.add_subcommand(name, help);
        add_flags(*sub, config);
        sub->add_option("--config", config_file, "JSON file of flag values");
        subs.push_back(sub);
    }
    const std::string path = config_path(args);
    if (!path.empty())
        load_config_file(path, config);

    std::vector<std::string> reversed;
    for (std::size_t i = args.size(); i-- > 1;)
        reversed.push_back(args[i]);
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }
    for (auto* sub : subs)
        if (sub->parsed())
            config.command = sub->get_name();
    return std::nullopt;
}

}  // namespace

int cmd_count(const RunConfig& config, std::ostream& out, std::ostream& err) { return count_impl(config, out, err); }
int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err) { return stats_impl(config, out, err); }
int cmd_betti(const RunConfig& config, std::ostream& out, std::ostream& err) { return betti_impl(config, out, err); }
int cmd_asym(const RunConfig& config, std::ostream& out, std::ostream& err) { return asym_impl(config, out, err); }
int cmd_sample(const RunConfig& config, std::ostream& out, std::ostream& err) { return sample_impl(config, out, err); }
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) { return verify_impl(config, out, err); }

RunConfig parse_command_line(const std::vector<std::string>& args)
{
    RunConfig config;
    std::ostringstream out, err;
    if (auto code = parse_into(args, config, out, err))
        throw UsageError(err.str().empty() ? out.str() : err.str());
    config.validate();
    return config;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        RunConfig config;
        if (auto code = parse_into(args, config, out, err))
            return *code;
        config.validate();
        if (config.command == "count")
            return cmd_count(config, out, err);
        if (config.command == "stats")
            return cmd_stats(config, out, err);
        if (config.command == "betti")
            return cmd_betti(config, out, err);
        if (config.command == "asym")
            return cmd_asym(config, out, err);
        if (config.command == "sample")
            return cmd_sample(config, out, err);
        return cmd_verify(config, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return exit_cap;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::logic_error& e) {
        err << "internal check failed: " << e.what() << "\n";
        return exit_verification;
    } catch (const std::runtime_error& e) {
        // The retry ceiling of the subgroup sampler.
        err << "error: " << e.what() << "\n";
        return exit_cap;
    }
}

}  // namespace sgrowth
