#include "sgrowth/exact_count.hpp"

#include <mpfr.h>

#include <fmt/format.h>

#include <map>
#include <numeric>
#include <tuple>

namespace sgrowth {

namespace {

std::vector<unsigned> divisors(unsigned p)
{
    std::vector<unsigned> out;
    for (unsigned d = 1; d <= p; ++d)
        if (p % d == 0)
            out.push_back(d);
    return out;
}

void require_torus(const GroupSpec& spec, const char* what)
{
    if (!spec.is_torus())
        throw std::invalid_argument(fmt::format("{}: {} is not a torus spec", what, spec.to_string()));
}

// Enumerates K(p, l, r): vectors k over allowed sizes with sum i k_i = r,
// accumulating prod_i 1 / ((l i)^{k_i} k_i!).
void sum_compositions(const std::vector<unsigned>& sizes, std::size_t pos, unsigned remaining,
                      unsigned l, const Rational& term, Rational& total)
{
    if (remaining == 0) {
        total += term;
        return;
    }
    if (pos == sizes.size())
        return;
    const unsigned i = sizes[pos];
    Rational current = term;
    const Rational step(BigInt(1), BigInt(l) * i);
    for (unsigned k = 0; k * i <= remaining; ++k) {
        if (k > 0) {
            current *= step;
            current /= k;
        }
        sum_compositions(sizes, pos + 1, remaining - k * i, l, current, total);
    }
}

class TauCache {
public:
    const Rational& get(unsigned p, unsigned l, unsigned r)
    {
        auto key = std::make_tuple(p, l, r);
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, tau_by_compositions(p, l, r)).first;
        return it->second;
    }

private:
    std::map<std::tuple<unsigned, unsigned, unsigned>, Rational> cache_;
};

}  // namespace

std::vector<unsigned> joinable_group_sizes(unsigned p, unsigned l)
{
    std::vector<unsigned> out;
    for (unsigned i = 1; i <= p; ++i)
        if (std::gcd(i * l, p) == i)
            out.push_back(i);
    return out;
}

Sequence hn_cyclic_table(unsigned p, unsigned N)
{
    if (p == 0)
        throw std::invalid_argument("hn_cyclic_table: p must be positive");
    Sequence h(N + 1);
    h[0] = 1;
    const auto ds = divisors(p);
    for (unsigned n = 1; n <= N; ++n) {
        BigInt sum = 0;
        for (unsigned d : ds) {
            if (d > n)
                break;
            sum += falling_factorial(n - 1, d - 1) * h[n - d];
        }
        h[n] = sum;
    }
    return h;
}

Sequence root_counts(unsigned p, unsigned l, unsigned R)
{
    if (p == 0 || l == 0)
        throw std::invalid_argument("root_counts: p and l must be positive");
    const auto sizes = joinable_group_sizes(p, l);
    Sequence out(R + 1);
    out[0] = 1;
    for (unsigned r = 1; r <= R; ++r) {
        BigInt sum = 0;
        for (unsigned i : sizes) {
            if (i > r)
                break;
            sum += binomial(r - 1, i - 1) * factorial(i - 1) * ipow(BigInt(l), i - 1) * out[r - i];
        }
        out[r] = sum;
    }
    return out;
}

Rational tau_by_compositions(unsigned p, unsigned l, unsigned r)
{
    Rational total = 0;
    sum_compositions(joinable_group_sizes(p, l), 0, r, l, Rational(1), total);
    total.canonicalize();
    return total;
}

BigInt pavlov_roots(const CycleType& type, unsigned m)
{
    if (m == 0)
        throw std::invalid_argument("pavlov_roots: m must be positive");
    Rational product = 1;
    for (const auto& [l, r] : type.multiplicities()) {
        const Rational tau = tau_by_compositions(m, l, r);
        if (sgn(tau) == 0)
            return 0;
        product *= Rational(factorial(r) * ipow(BigInt(l), r)) * tau;
    }
    return integral_value(product, "pavlov_roots");
}

TauTable tau_table(unsigned p, unsigned l, unsigned R)
{
    if (p == 0 || l == 0)
        throw std::invalid_argument("tau_table: p and l must be positive");
    // F' = F * sum_i x^{i-1} / l, so r c_r = (1/l) sum_i c_{r-i}.
    TauTable table{p, l, std::vector<Rational>(R + 1)};
    auto& c = table.coefficients;
    c[0] = 1;
    const auto sizes = joinable_group_sizes(p, l);
    for (unsigned r = 1; r <= R; ++r) {
        Rational sum = 0;
        for (unsigned i : sizes)
            if (i <= r)
                sum += c[r - i];
        sum /= BigInt(l) * r;
        sum.canonicalize();
        c[r] = sum;
    }
    return table;
}

namespace {

bool bound_holds_for(unsigned p, unsigned l, unsigned r, const Rational& tau)
{
    constexpr mpfr_prec_t prec = 256;
    mpfr_t up, log_up, log_dn, e1, term, sum, bound;
    for (mpfr_ptr x : {up, log_up, log_dn, e1, term, sum, bound})
        mpfr_init2(x, prec);

    const unsigned long rl = static_cast<unsigned long>(r) * l;
    mpfr_set_q(up, tau.get_mpq_t(), MPFR_RNDU);

    mpfr_set_ui(log_up, rl, MPFR_RNDU);
    mpfr_log(log_up, log_up, MPFR_RNDU);
    mpfr_set_ui(log_dn, rl, MPFR_RNDD);
    mpfr_log(log_dn, log_dn, MPFR_RNDD);

    // (r/p) log(rl), rounded up: it is subtracted.
    mpfr_mul_ui(e1, log_up, r, MPFR_RNDU);
    mpfr_div_ui(e1, e1, p, MPFR_RNDU);

    mpfr_set_ui(sum, 0, MPFR_RNDD);
    for (unsigned i : divisors(p)) {
        mpfr_mul_ui(term, log_dn, i, MPFR_RNDD);
        mpfr_div_ui(term, term, p, MPFR_RNDD);
        mpfr_exp(term, term, MPFR_RNDD);
        mpfr_div_ui(term, term, static_cast<unsigned long>(i) * l, MPFR_RNDD);
        mpfr_add(sum, sum, term, MPFR_RNDD);
    }
    mpfr_sub(bound, sum, e1, MPFR_RNDD);
    mpfr_exp(bound, bound, MPFR_RNDD);

    const bool ok = mpfr_lessequal_p(up, bound) != 0;
    for (mpfr_ptr x : {up, log_up, log_dn, e1, term, sum, bound})
        mpfr_clear(x);
    return ok;
}

}  // namespace

bool TauTable::bound_holds() const
{
    for (unsigned r = 1; r < coefficients.size(); ++r)
        if (!bound_holds_for(p, l, r, coefficients[r]))
            return false;
    return true;
}

bool tau_bound_check(unsigned p, unsigned l, unsigned r)
{
    if (r == 0)
        throw std::invalid_argument("tau_bound_check: r must be positive");
    return bound_holds_for(p, l, r, tau_table(p, l, r).coefficients[r]);
}

BigInt hn_torus_closed(const GroupSpec& spec, unsigned n, unsigned cap)
{
    require_torus(spec, "hn_torus_closed");
    if (n > cap)
        throw CapExceeded(fmt::format(
            "hn_torus_closed: n = {} exceeds the partition cap {}; use hn_torus_dp", n, cap));
    const unsigned m = spec.factor_count();
    TauCache taus;
    Rational total = 0;
    for (const auto& type : all_cycle_types(n)) {
        Rational term = 1;
        for (const auto& [l, r] : type.multiplicities()) {
            term *= Rational(ipow(factorial(r) * ipow(BigInt(l), r), m - 1));
            for (unsigned p : spec.orders())
                term *= taus.get(p, l, r);
            if (sgn(term) == 0)
                break;
        }
        total += term;
    }
    total *= Rational(factorial(n));
    return integral_value(total, "hn_torus_closed");
}

BigInt hn_torus_root_sum(const GroupSpec& spec, unsigned n, unsigned cap)
{
    require_torus(spec, "hn_torus_root_sum");
    if (n > cap)
        throw CapExceeded(fmt::format(
            "hn_torus_root_sum: n = {} exceeds the partition cap {}", n, cap));
    BigInt total = 0;
    for (const auto& type : all_cycle_types(n)) {
        BigInt term = class_size(type);
        for (unsigned p : spec.orders()) {
            term *= pavlov_roots(type, p);
            if (sgn(term) == 0)
                break;
        }
        total += term;
    }
    return total;
}

Sequence hn_torus_dp(const GroupSpec& spec, unsigned N, unsigned cap)
{
    require_torus(spec, "hn_torus_dp");
    if (N > cap)
        throw CapExceeded(fmt::format("hn_torus_dp: N = {} exceeds the DP cap {}", N, cap));
    const unsigned m = spec.factor_count();
    Sequence h(N + 1, BigInt(0));
    h[0] = 1;
    for (unsigned l = 1; l <= N; ++l) {
        const unsigned R = N / l;
        std::vector<TauTable> taus;
        for (unsigned p : spec.orders())
            taus.push_back(tau_table(p, l, R));
        // block[r]: structures on a labelled set of l r points where the
        // common power consists of r l-cycles.
        Sequence block(R + 1, BigInt(0));
        for (unsigned r = 0; r <= R; ++r) {
            Rational value(ipow(factorial(r) * ipow(BigInt(l), r), m - 1) * factorial(l * r));
            for (const auto& tau : taus)
                value *= tau.coefficients[r];
            block[r] = integral_value(value, "hn_torus_dp block");
        }
        Sequence next(N + 1, BigInt(0));
        for (unsigned a = 0; a <= N; ++a) {
            BigInt sum = h[a];
            for (unsigned r = 1; l * r <= a; ++r)
                if (sgn(block[r]) != 0)
                    sum += binomial(a, l * r) * block[r] * h[a - l * r];
            next[a] = sum;
        }
        h = std::move(next);
    }
    return h;
}

Sequence hn_table(const GroupSpec& spec, unsigned N, const Caps& caps)
{
    if (spec.is_torus())
        return hn_torus_dp(spec, N, caps.dp);
    Sequence h(N + 1);
    for (unsigned n = 0; n <= N; ++n)
        h[n] = ipow(factorial(n), spec.free_rank());
    for (unsigned p : spec.orders()) {
        const Sequence cyc = hn_cyclic_table(p, N);
        for (unsigned n = 0; n <= N; ++n)
            h[n] *= cyc[n];
    }
    return h;
}

Sequence t_from_h(const Sequence& h)
{
    if (h.empty() || h[0] != 1)
        throw std::invalid_argument("t_from_h: h[0] must be 1");
    const std::size_t N = h.size() - 1;
    Sequence t(N + 1, BigInt(0));
    for (std::size_t n = 1; n <= N; ++n) {
        BigInt value = h[n];
        for (std::size_t k = 1; k < n; ++k)
            value -= binomial(n - 1, k - 1) * t[k] * h[n - k];
        if (sgn(value) < 0)
            throw std::logic_error(fmt::format("t_from_h: negative t_{}; the h table is inconsistent", n));
        t[n] = value;
    }
    return t;
}

Sequence a_from_t(const Sequence& t)
{
    Sequence a(t.size(), BigInt(0));
    for (std::size_t n = 1; n < t.size(); ++n) {
        const BigInt f = factorial(n - 1);
        if (!mpz_divisible_p(t[n].get_mpz_t(), f.get_mpz_t()))
            throw std::logic_error(fmt::format("a_from_t: (n-1)! does not divide t_{}", n));
        a[n] = t[n] / f;
    }
    return a;
}

Sequence a_from_h_direct(const Sequence& h)
{
    if (h.empty() || h[0] != 1)
        throw std::invalid_argument("a_from_h_direct: h[0] must be 1");
    // Multiplied through by (n-1)!: (n-1)! a_n = h_n - sum_k (n-1)_{k-1} h_{n-k} a_k.
    Sequence a(h.size(), BigInt(0));
    for (std::size_t n = 1; n < h.size(); ++n) {
        BigInt value = h[n];
        for (std::size_t k = 1; k < n; ++k)
            value -= falling_factorial(n - 1, k - 1) * h[n - k] * a[k];
        const BigInt f = factorial(n - 1);
        if (sgn(value) < 0 || !mpz_divisible_p(value.get_mpz_t(), f.get_mpz_t()))
            throw std::logic_error(fmt::format("a_from_h_direct: inconsistent value at n = {}", n));
        a[n] = value / f;
    }
    return a;
}

BigInt h_pi(const Sequence& t, const CycleType& orbit_sizes)
{
    Rational value(factorial(orbit_sizes.degree()));
    for (const auto& [l, r] : orbit_sizes.multiplicities()) {
        if (l >= t.size())
            throw std::out_of_range(fmt::format("h_pi: t table too short for part {}", l));
        Rational per_orbit(t[l], factorial(l));
        per_orbit.canonicalize();
        Rational power = 1;
        for (unsigned j = 0; j < r; ++j)
            power *= per_orbit;
        value *= power / Rational(factorial(r));
    }
    return integral_value(value, "h_pi");
}

std::vector<Rational> factor_ratio(const GroupSpec& spec, unsigned N, const Caps& caps)
{
    require_torus(spec, "factor_ratio");
    const Sequence h = hn_torus_dp(spec, N, caps.dp);
    Sequence product(N + 1, BigInt(1));
    for (unsigned p : spec.orders()) {
        const Sequence cyc = hn_cyclic_table(p, N);
        for (unsigned n = 0; n <= N; ++n)
            product[n] *= cyc[n];
    }
    std::vector<Rational> out(N + 1);
    for (unsigned n = 0; n <= N; ++n) {
        out[n] = Rational(product[n], h[n]);
        out[n].canonicalize();
    }
    return out;
}

Rational convolution_decay(const Sequence& a, unsigned n)
{
    if (n < 1 || n >= a.size() || sgn(a[n]) <= 0)
        throw std::invalid_argument("convolution_decay: a_n must be available and positive");
    BigInt sum = 0;
    for (unsigned k = 1; k < n; ++k)
        sum += a[k] * a[n - k];
    Rational out(sum, a[n]);
    out.canonicalize();
    return out;
}

CountTable CountTable::build(const GroupSpec& spec, unsigned N, const Caps& caps)
{
    CountTable table{spec, N, hn_table(spec, N, caps), {}, {}, {}};
    table.t = t_from_h(table.h);
    table.a = a_from_t(table.t);
    if (table.a != a_from_h_direct(table.h))
        throw std::logic_error("CountTable: the two a_n routes disagree");
    for (unsigned p : spec.orders())
        table.cyclic.push_back(hn_cyclic_table(p, N));
    return table;
}

}  // namespace sgrowth
