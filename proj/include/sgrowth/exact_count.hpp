#pragma once

// Exact subgroup-growth sequences.
//
// Conventions: every sequence is indexed 0..N. h[0] = 1 (the empty action),
// t[0] = a[0] = 0.

#include "sgrowth/bigint.hpp"
#include "sgrowth/group_spec.hpp"
#include "sgrowth/permutation.hpp"

#include <stdexcept>
#include <vector>

namespace sgrowth {

using Sequence = std::vector<BigInt>;

/// Thrown when a request exceeds a configured enumeration or table cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Caps {
    unsigned partitions = 45;  ///< hn_torus_closed: full partition enumeration
    unsigned dp = 300;         ///< hn_torus_dp and torus CountTables
    unsigned sampler = 50;     ///< torus cycle-type weight table
};

/// I_{p,l} = { i <= p : gcd(i l, p) = i }: the ways of joining i l-cycles of
/// a permutation into one cycle of a p-th root.
std::vector<unsigned> joinable_group_sizes(unsigned p, unsigned l);

/// h_n(C_p) = #{sigma in S_n : sigma^p = 1} for n = 0..N.
Sequence hn_cyclic_table(unsigned p, unsigned N);

/// Number of p-th roots of a permutation made of r cycles of length l, for
/// r = 0..R, by the sequential recurrence on the group holding one
/// distinguished cycle. root_counts(p, 1, N) equals hn_cyclic_table(p, N).
Sequence root_counts(unsigned p, unsigned l, unsigned R);

/// Literal sum over K(p, l, r) of prod_i 1 / ((l i)^{k_i} k_i!).
Rational tau_by_compositions(unsigned p, unsigned l, unsigned r);

/// N_m(pi): number of sigma with sigma^m = pi for pi of the given type.
BigInt pavlov_roots(const CycleType& type, unsigned m);

/// Coefficients of F_{p,l}(x) = prod_{i in I_{p,l}} exp(x^i / (i l)).
struct TauTable {
    unsigned p = 1;
    unsigned l = 1;
    std::vector<Rational> coefficients;  ///< tau_{p,l,0..R}

    /// The coefficient bound holds for every stored r >= 1.
    bool bound_holds() const;
};

TauTable tau_table(unsigned p, unsigned l, unsigned R);

/// tau_{p,l,r} <= (r l)^{-r/p} exp(sum_{i | p} (r l)^{i/p} / (i l)), with the
/// exact coefficient rounded up and the bound evaluated with downward
/// rounding at 256 bits.
bool tau_bound_check(unsigned p, unsigned l, unsigned r);

/// Closed formula: n! sum over cycle types prod_l (r_l! l^{r_l})^{m-1}
/// prod_i tau_{p_i,l,r_l}. Throws CapExceeded when n > cap.
BigInt hn_torus_closed(const GroupSpec& spec, unsigned n, unsigned cap = Caps{}.partitions);

/// sum over cycle types of class_size * prod_i pavlov_roots.
BigInt hn_torus_root_sum(const GroupSpec& spec, unsigned n, unsigned cap = Caps{}.partitions);

/// h_0..h_N by convolving, over cycle lengths l of the common power, the
/// per-block counts (l r)! (r! l^r)^{m-1} prod_i tau_{p_i,l,r}.
Sequence hn_torus_dp(const GroupSpec& spec, unsigned N, unsigned cap = Caps{}.dp);

/// h_0..h_N for any spec: products of cyclic tables for freeprod/fuchsian,
/// hn_torus_dp for torus.
Sequence hn_table(const GroupSpec& spec, unsigned N, const Caps& caps = {});

/// t_n = h_n - sum_{k<n} C(n-1, k-1) t_k h_{n-k}. Throws std::logic_error
/// on a negative value.
Sequence t_from_h(const Sequence& h);

/// a_n = t_n / (n-1)!. Throws std::logic_error on non-divisibility.
Sequence a_from_t(const Sequence& t);

/// From h_n / (n-1)! = a_n + sum_{k<n} h_{n-k} / (n-k)! a_k.
Sequence a_from_h_direct(const Sequence& h);

/// Homomorphisms to S_{|pi|} with orbit sizes pi:
/// |pi|! prod_l (t_l / l!)^{r_l} / r_l!.
BigInt h_pi(const Sequence& t, const CycleType& orbit_sizes);

/// prod_i h_n(C_{p_i}) / h_n(Gamma) for n = 0..N (torus specs).
std::vector<Rational> factor_ratio(const GroupSpec& spec, unsigned N, const Caps& caps = {});

/// sum_{k=1}^{n-1} a_k a_{n-k} / a_n.
Rational convolution_decay(const Sequence& a, unsigned n);

/// h, t and a for one spec up to N, with both a-routes cross-checked.
struct CountTable {
    GroupSpec spec;
    unsigned N = 0;
    Sequence h;
    Sequence t;
    Sequence a;
    /// h_n(C_{p_i}) per cyclic factor, in factor order.
    std::vector<Sequence> cyclic;

    static CountTable build(const GroupSpec& spec, unsigned N, const Caps& caps = {});
};

}  // namespace sgrowth
