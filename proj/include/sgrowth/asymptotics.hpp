#pragma once

// Log-space asymptotic predictions for h_n(C_p) and a_n.

#include "sgrowth/group_spec.hpp"

#include <utility>
#include <vector>

namespace sgrowth {

/// log f(n) = log_constant + power log n + alpha (n log n - n)
///            + sum_i beta_i n^{gamma_i}
struct AsymptoticModel {
    long double log_constant = 0;
    long double power = 0;
    long double alpha = 0;
    std::vector<std::pair<long double, long double>> terms;  ///< (beta, gamma), gamma in (0, 1]

    long double log_value(long double n) const;
};

/// h_n(C_p) ~ A_p exp(sum_{d | p, d < p} n^{d/p} / d) (n/e)^{n (1 - 1/p)},
/// A_p = p^{-1/2}, times e^{-1/(2p)} when p is even.
AsymptoticModel cyclic_model(unsigned p);

/// a_n for torus and freeprod specs:
/// (A / (2 pi)) n^{1/2} exp(sum_i sum_{j | p_i, j < p_i} n^{j/p_i} / j)
/// (n/e)^{n (m - 1 - sum 1/p_i)}.
AsymptoticModel torus_model(const GroupSpec& spec);

/// A = sqrt(2 pi) exp(-sum_{p_i even} 1/(2 p_i)) prod p_i^{-1/2}.
long double stated_torus_constant(const GroupSpec& spec);

/// Log of the predictions.
long double asym_cyclic(unsigned p, unsigned n);
long double asym_torus(const GroupSpec& spec, unsigned n);

}  // namespace sgrowth
