#include "sgrowth/statistics.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgrowth {

namespace {

double std_normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace

unsigned z_count(const HomSample& h, const ClassSpec& c)
{
    return static_cast<unsigned>(evaluate_word(h, c.word).fixed_point_count());
}

std::string LimitLaw::describe() const
{
    return std::visit(
        [](const auto& law) -> std::string {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, DiracAtN>)
                return "dirac_at_n";
            else if constexpr (std::is_same_v<T, CompoundPoisson>)
                return fmt::format("compound_poisson(k={})", law.k);
            else
                return fmt::format("gaussian(k={},l={})", law.k, law.l);
        },
        kind);
}

nlohmann::json LimitLaw::to_json() const
{
    return std::visit(
        [](const auto& law) -> nlohmann::json {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, DiracAtN>)
                return {{"kind", "dirac_at_n"}};
            else if constexpr (std::is_same_v<T, CompoundPoisson>)
                return {{"kind", "compound_poisson"}, {"k", law.k}};
            else
                return {{"kind", "gaussian"}, {"k", law.k}, {"l", law.l}, {"span", law.span}};
        },
        kind);
}

LimitLaw limit_law(const GroupSpec& spec, const ClassSpec& c)
{
    if (c.is_trivial())
        throw std::invalid_argument(fmt::format("class {} is trivial; no limit law applies", c.word.to_string()));
    if (std::holds_alternative<KernelClass>(c.kind))
        return {DiracAtN{}};
    if (auto inf = std::get_if<InfiniteOrderClass>(&c.kind))
        return {CompoundPoisson{inf->power}};
    const auto& fin = std::get<FiniteOrderClass>(c.kind);
    const unsigned p = spec.generator_order(fin.generator);
    const unsigned g = std::gcd(p, fin.exponent);
    unsigned span = 0;
    for (unsigned d = 1; d <= p; ++d)
        if (p % d == 0 && g % d != 0)
            span = std::gcd(span, d);
    return {Gaussian{fin.order, g, span}};
}

Pmf compound_poisson_pmf(unsigned k, unsigned max_support)
{
    if (k == 0)
        throw std::invalid_argument("compound_poisson_pmf: k must be positive");
    if (max_support == auto_max_support) {
        for (unsigned support = 40;; support *= 2) {
            Pmf pmf = compound_poisson_pmf(k, support);
            if (pmf.tail < 1e-12 || support >= (1u << 16))
                return pmf;
        }
    }
    const unsigned extended = 2 * max_support + 60;
    std::vector<double> mass(extended + 1, 0.0);
    mass[0] = 1.0;
    for (unsigned d = 1; d <= k; ++d) {
        if (k % d != 0)
            continue;
        const double lambda = 1.0 / d;
        std::vector<double> component(extended + 1, 0.0);
        double term = std::exp(-lambda);
        for (unsigned j = 0; j * d <= extended; ++j) {
            component[j * d] = term;
            term *= lambda / (j + 1);
        }
        std::vector<double> next(extended + 1, 0.0);
        for (unsigned a = 0; a <= extended; ++a) {
            if (mass[a] == 0.0)
                continue;
            for (unsigned b = 0; a + b <= extended; b += d)
                next[a + b] += mass[a] * component[b];
        }
        mass = std::move(next);
    }
    Pmf out;
    out.mass.assign(mass.begin(), mass.begin() + max_support + 1);
    for (unsigned j = max_support + 1; j <= extended; ++j)
        out.tail += mass[j];
    return out;
}

void Histogram::merge(const Histogram& other)
{
    for (const auto& [v, c] : other.counts_)
        add(v, c);
}

std::uint64_t Histogram::count(unsigned value) const
{
    auto it = counts_.find(value);
    return it == counts_.end() ? 0 : it->second;
}

double Histogram::frequency(unsigned value) const
{
    return total_ == 0 ? 0.0 : static_cast<double>(count(value)) / static_cast<double>(total_);
}

double Histogram::factorial_moment(unsigned j) const
{
    if (total_ == 0)
        return 0.0;
    BigInt sum = 0;
    for (const auto& [v, c] : counts_)
        sum += falling_factorial(v, j) * BigInt(static_cast<unsigned long>(c));
    return to_double(Rational(sum, BigInt(static_cast<unsigned long>(total_))));
}

double Histogram::mean() const
{
    return factorial_moment(1);
}

double Histogram::variance() const
{
    if (total_ < 2)
        return 0.0;
    const double m = mean();
    double ss = 0;
    for (const auto& [v, c] : counts_)
        ss += static_cast<double>(c) * (v - m) * (v - m);
    return ss / static_cast<double>(total_ - 1);
}

double tv_distance(const Histogram& samples, const Pmf& pmf)
{
    const unsigned M = static_cast<unsigned>(pmf.mass.size()) - 1;
    double sum = 0;
    for (unsigned j = 0; j <= M; ++j)
        sum += std::abs(samples.frequency(j) - pmf.mass[j]);
    double beyond = 0;
    for (const auto& [v, c] : samples.counts())
        if (v > M)
            beyond += static_cast<double>(c);
    beyond /= static_cast<double>(std::max<std::uint64_t>(samples.total(), 1));
    sum += std::abs(beyond - pmf.tail);
    return 0.5 * sum;
}

EmpiricalSummary empirical_summary(const Histogram& samples, const LimitLaw& law, unsigned n)
{
    if (samples.total() == 0)
        throw std::invalid_argument("empirical_summary: no samples");
    EmpiricalSummary s;
    s.histogram = samples;
    for (unsigned j = 1; j <= 4; ++j)
        s.factorial_moments[j - 1] = samples.factorial_moment(j);

    if (std::holds_alternative<DiracAtN>(law.kind)) {
        s.tv = 1.0 - samples.frequency(n);
    } else if (auto cp = std::get_if<CompoundPoisson>(&law.kind)) {
        const Pmf pmf = compound_poisson_pmf(cp->k);
        s.tv = tv_distance(samples, pmf);
        s.tail = pmf.tail;
    } else {
        const auto& g = std::get<Gaussian>(law.kind);
        const double center = std::pow(static_cast<double>(n), 1.0 / g.k);
        const double scale = std::sqrt(static_cast<double>(g.l)) * std::pow(static_cast<double>(n), 0.5 / g.k);
        s.normalized_mean = (samples.mean() - center) / scale;
        s.normalized_var = samples.variance() / (scale * scale);
        const double half = 0.5 * g.span;
        const double total = static_cast<double>(samples.total());
        double below = 0;
        double ks = 0;
        for (const auto& [v, c] : samples.counts()) {
            ks = std::max(ks, std::abs(below / total - std_normal_cdf((v - half - center) / scale)));
            below += static_cast<double>(c);
            ks = std::max(ks, std::abs(below / total - std_normal_cdf((v + half - center) / scale)));
        }
        s.ks = ks;
    }
    return s;
}

EmpiricalSummary empirical_summary(const std::vector<unsigned>& samples, const LimitLaw& law, unsigned n)
{
    Histogram h;
    for (unsigned v : samples)
        h.add(v);
    return empirical_summary(h, law, n);
}

nlohmann::json EmpiricalSummary::to_json() const
{
    auto opt = [](const std::optional<double>& v) -> nlohmann::json {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [v, c] : histogram.counts())
        hist[std::to_string(v)] = c;
    return {{"histogram", hist},
            {"samples", histogram.total()},
            {"factorial_moments", factorial_moments},
            {"tv", opt(tv)},
            {"ks", opt(ks)},
            {"normalized_mean", opt(normalized_mean)},
            {"normalized_var", opt(normalized_var)},
            {"tail_mass", opt(tail)}};
}

Rational expected_cycle_count(unsigned p, unsigned d, unsigned n)
{
    if (d == 0 || p % d != 0 || d > n)
        return 0;
    const Sequence h = hn_cyclic_table(p, n);
    Rational value(falling_factorial(n, d) * h[n - d], h[n] * d);
    value.canonicalize();
    return value;
}

Rational expected_z_finite_order(unsigned p, unsigned l, unsigned n)
{
    const unsigned g = std::gcd(p, l);
    Rational sum = 0;
    for (unsigned d = 1; d <= g; ++d)
        if (g % d == 0)
            sum += Rational(d) * expected_cycle_count(p, d, n);
    return sum;
}

IndependenceReport joint_independence_report(const GroupSpec& spec, const std::vector<ClassSpec>& classes,
                                             const std::vector<std::vector<unsigned>>& samples)
{
    for (std::size_t a = 0; a < classes.size(); ++a)
        for (std::size_t b = a + 1; b < classes.size(); ++b)
            if (have_common_root(spec, classes[a], classes[b]))
                throw std::invalid_argument(fmt::format("classes {} and {} have a common root",
                                                        classes[a].word.to_string(),
                                                        classes[b].word.to_string()));
    IndependenceReport report;
    const std::size_t N = samples.size();
    if (N < 2)
        return report;
    for (std::size_t a = 0; a < classes.size(); ++a)
        for (std::size_t b = a + 1; b < classes.size(); ++b) {
            PairStatistics st{a, b};
            double ma = 0, mb = 0;
            for (const auto& row : samples) {
                ma += row[a];
                mb += row[b];
            }
            ma /= N;
            mb /= N;
            double sum = 0, sum_sq = 0;
            for (const auto& row : samples) {
                const double prod = (row[a] - ma) * (row[b] - mb);
                sum += prod;
                sum_sq += prod * prod;
            }
            st.covariance = sum / (N - 1);
            const double mean_prod = sum / N;
            st.covariance_se = std::sqrt(std::max(0.0, sum_sq / N - mean_prod * mean_prod) / N);

            std::map<std::pair<unsigned, unsigned>, double> cells;
            std::map<unsigned, double> rows, cols;
            for (const auto& row : samples) {
                const unsigned x = std::min(row[a], contingency_cap);
                const unsigned y = std::min(row[b], contingency_cap);
                cells[{x, y}] += 1;
                rows[x] += 1;
                cols[y] += 1;
            }
            for (const auto& [x, rx] : rows)
                for (const auto& [y, cy] : cols) {
                    const double expected = rx * cy / N;
                    auto it = cells.find({x, y});
                    const double observed = it == cells.end() ? 0.0 : it->second;
                    st.chi_square += (observed - expected) * (observed - expected) / expected;
                }
            st.dof = static_cast<unsigned>((rows.size() - 1) * (cols.size() - 1));
            if (st.dof > 0) {
                boost::math::chi_squared dist(st.dof);
                st.p_value = boost::math::cdf(boost::math::complement(dist, st.chi_square));
            }
            report.pairs.push_back(st);
        }
    return report;
}

nlohmann::json IndependenceReport::to_json() const
{
    auto out = nlohmann::json::array();
    for (const auto& p : pairs)
        out.push_back({{"first", p.first},
                       {"second", p.second},
                       {"covariance", p.covariance},
                       {"covariance_se", p.covariance_se},
                       {"chi_square", p.chi_square},
                       {"dof", p.dof},
                       {"p_value", p.p_value}});
    return out;
}

std::vector<double> irs_local_profile(const HomSample& h, const std::vector<ClassSpec>& classes)
{
    if (!h.transitive)
        throw std::invalid_argument("irs_local_profile: the sample is not transitive");
    std::vector<double> out;
    for (const auto& c : classes)
        out.push_back(static_cast<double>(z_count(h, c)) / static_cast<double>(h.n));
    return out;
}

}  // namespace sgrowth
