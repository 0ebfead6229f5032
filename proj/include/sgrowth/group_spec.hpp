#pragma once

#include "sgrowth/bigint.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sgrowth {

enum class GroupKind {
    torus,     ///< <x_1..x_m | x_1^{p_1} = ... = x_m^{p_m}>
    freeprod,  ///< C_{p_1} * ... * C_{p_m}
    fuchsian,  ///< F_r * C_{p_1} * ... * C_{p_m}
};

/// One of the three group families. Generators are indexed from 0: the r
/// free generators first, then one generator per cyclic (or torus) factor.
/// Text form: `torus:2,3`, `free:2,3`, `fuchsian:1;2` and `fuchsian:2;`.
class GroupSpec {
public:
    /// `strict` enforces sum 1/p_i < m - 1 (torus, freeprod) or negative Euler
    /// characteristic (fuchsian); `lenient` only enforces well-formedness.
    enum class Check { strict, lenient };

    static GroupSpec torus(std::vector<unsigned> orders, Check check = Check::strict);
    static GroupSpec free_product(std::vector<unsigned> orders, Check check = Check::strict);
    static GroupSpec fuchsian(unsigned free_rank, std::vector<unsigned> orders,
                              Check check = Check::strict);

    /// Throws std::invalid_argument with a message naming the problem.
    static GroupSpec parse(std::string_view text, Check check = Check::strict);

    GroupKind kind() const noexcept { return kind_; }
    bool is_torus() const noexcept { return kind_ == GroupKind::torus; }
    unsigned free_rank() const noexcept { return free_rank_; }
    const std::vector<unsigned>& orders() const noexcept { return orders_; }
    unsigned factor_count() const noexcept { return static_cast<unsigned>(orders_.size()); }
    unsigned generator_count() const noexcept { return free_rank_ + factor_count(); }

    /// Order of generator j in the free-product image; 0 means infinite.
    unsigned generator_order(unsigned j) const;
    bool is_free_generator(unsigned j) const noexcept { return j < free_rank_; }

    /// m - 1 - sum 1/p_i for torus and freeprod; r + m - 1 - sum 1/p_i for
    /// fuchsian. Equals -chi of the free-product image.
    Rational growth_exponent() const;

    /// 1 - r - sum (1 - 1/p_i) of the free-product image (orbifold Euler
    /// characteristic).
    Rational euler_characteristic() const;

    bool satisfies_hypothesis() const;

    std::string to_string() const;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

private:
    GroupSpec(GroupKind kind, unsigned free_rank, std::vector<unsigned> orders, Check check);

    GroupKind kind_ = GroupKind::freeprod;
    unsigned free_rank_ = 0;
    std::vector<unsigned> orders_;
};

struct Syllable {
    unsigned generator = 0;  ///< 0-based generator index
    long long exponent = 0;
    friend bool operator==(const Syllable&, const Syllable&) = default;
};

/// A word x_{j1}^{s1} ... x_{jl}^{sl}. Grammar: `x<i>` (1-based), `^<int>`,
/// optional `*` between factors, parentheses with an outer `^k`.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Syllable> syllables);

    static Word parse(std::string_view text);
    static Word generator(unsigned j, long long exponent = 1);

    const std::vector<Syllable>& syllables() const noexcept { return syllables_; }
    bool empty() const noexcept { return syllables_.empty(); }
    std::size_t length() const noexcept { return syllables_.size(); }

    Word inverse() const;
    Word power(long long k) const;
    Word concat(const Word& other) const;
    /// Largest generator index plus one (0 for the empty word).
    unsigned generator_bound() const noexcept;

    /// "x1^2*x2"; the empty word renders as "1".
    std::string to_string() const;

    friend bool operator==(const Word&, const Word&) = default;

private:
    std::vector<Syllable> syllables_;
};

struct TrivialClass {};
struct KernelClass {
    long long central_power = 0;  ///< t with g conjugate to c^t, c = x_1^{p_1}
};
struct FiniteOrderClass {
    unsigned generator = 0;  ///< j
    unsigned exponent = 0;   ///< l in 1..p_j-1
    unsigned order = 0;      ///< k = p_j / gcd(p_j, l)
};
struct InfiniteOrderClass {
    Word primitive_root;
    unsigned power = 1;  ///< k
};

/// A conjugacy class given by a word, classified through the free-product
/// image (Phi for torus specs).
struct ClassSpec {
    Word word;                   ///< as supplied
    Word reduced;                ///< cyclically reduced image in the free product
    long long central_power = 0; ///< torus only: c-exponent collected while reducing
    std::variant<TrivialClass, KernelClass, FiniteOrderClass, InfiniteOrderClass> kind;

    bool is_trivial() const noexcept { return std::holds_alternative<TrivialClass>(kind); }
    /// "trivial", "kernel", "finite_order" or "infinite_order".
    std::string kind_name() const;
    /// Human-readable classification, e.g. "finite_order(j=2,l=2,k=3)".
    std::string describe() const;
};

/// Throws std::invalid_argument if the word mentions generators the spec
/// does not have. Trivial classes are returned, not rejected.
ClassSpec classify(const GroupSpec& spec, const Word& word);

/// Syntactic common-root test: kernel classes share the root c with each
/// other and with powers of a finite-order generator; finite-order classes
/// share a root iff they are powers of the same generator; infinite-order
/// classes share one iff their primitive roots agree up to cyclic rotation
/// and inversion. Trivial classes share a root with everything.
bool have_common_root(const GroupSpec& spec, const ClassSpec& a, const ClassSpec& b);

}  // namespace sgrowth
