#pragma once

// Lift counts Z_K, their limit laws and empirical comparison.

#include "sgrowth/exact_count.hpp"
#include "sgrowth/group_spec.hpp"
#include "sgrowth/hom_sample.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sgrowth {

/// Number of fixed points of the image of the class word.
unsigned z_count(const HomSample& h, const ClassSpec& c);

struct DiracAtN {};
/// Law of sum_{d | k} d X_{1/d}, X_{1/d} ~ Poisson(1/d) independent.
struct CompoundPoisson {
    unsigned k = 1;
};
/// (Z - n^{1/k}) / (sqrt(l) n^{1/(2k)}) -> N(0, 1). Z lives on n + span Z.
struct Gaussian {
    unsigned k = 1;
    unsigned l = 1;
    unsigned span = 1;
};

struct LimitLaw {
    std::variant<DiracAtN, CompoundPoisson, Gaussian> kind;

    std::string describe() const;
    nlohmann::json to_json() const;
};

/// Throws std::invalid_argument for the trivial class.
LimitLaw limit_law(const GroupSpec& spec, const ClassSpec& c);

struct Pmf {
    std::vector<double> mass;  ///< P[Z = j], j = 0..max_support
    double tail = 0;           ///< P[Z > max_support]
};

/// Selects the smallest support 40 * 2^j whose tail mass is below 1e-12.
inline constexpr unsigned auto_max_support = 0;

Pmf compound_poisson_pmf(unsigned k, unsigned max_support = auto_max_support);

/// Integer-valued sample histogram; merging is commutative.
class Histogram {
public:
    void add(unsigned value, std::uint64_t count = 1) { counts_[value] += count; total_ += count; }
    void merge(const Histogram& other);

    std::uint64_t total() const noexcept { return total_; }
    const std::map<unsigned, std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t count(unsigned value) const;
    double frequency(unsigned value) const;

    /// E[(Z)_j], computed exactly from the counts and rounded once.
    double factorial_moment(unsigned j) const;
    double mean() const;
    double variance() const;

private:
    std::map<unsigned, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

struct EmpiricalSummary {
    Histogram histogram;
    std::array<double, 4> factorial_moments{};
    std::optional<double> normalized_mean;
    std::optional<double> normalized_var;
    std::optional<double> tv;
    std::optional<double> ks;
    std::optional<double> tail;  ///< truncation mass of the reference pmf

    nlohmann::json to_json() const;
};

/// TV against the Dirac or compound-Poisson limit; KS of the normalized
/// statistic against N(0, 1) for the Gaussian limit, comparing the empirical
/// CDF at each lattice point j with Phi at j + span/2.
EmpiricalSummary empirical_summary(const Histogram& samples, const LimitLaw& law, unsigned n);
EmpiricalSummary empirical_summary(const std::vector<unsigned>& samples, const LimitLaw& law, unsigned n);

/// Total variation between an empirical histogram and a pmf with tail mass.
double tv_distance(const Histogram& samples, const Pmf& pmf);

/// E[#d-cycles] of a uniform sigma with sigma^p = 1: (n)_d / d h_{n-d} / h_n.
Rational expected_cycle_count(unsigned p, unsigned d, unsigned n);

/// Exact E[Z] for the class of x^l, x of order p, over uniform homs of a
/// freeprod/fuchsian spec: sum_{d | gcd(p, l)} d E[#d-cycles].
Rational expected_z_finite_order(unsigned p, unsigned l, unsigned n);

struct PairStatistics {
    std::size_t first = 0;
    std::size_t second = 0;
    double covariance = 0;
    double covariance_se = 0;  ///< standard error of the sample covariance
    double chi_square = 0;     ///< on the table truncated to 0..10
    unsigned dof = 0;
    double p_value = 1;
};

struct IndependenceReport {
    std::vector<PairStatistics> pairs;
    nlohmann::json to_json() const;
};

inline constexpr unsigned contingency_cap = 10;

/// samples[s][c] = Z of class c in sample s. Throws std::invalid_argument
/// when two classes share a common root.
IndependenceReport joint_independence_report(const GroupSpec& spec, const std::vector<ClassSpec>& classes,
                                             const std::vector<std::vector<unsigned>>& samples);

/// Z_K / n for each class; requires a transitive sample.
std::vector<double> irs_local_profile(const HomSample& h, const std::vector<ClassSpec>& classes);

}  // namespace sgrowth
