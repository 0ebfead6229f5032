#pragma once

// Exact uniform samplers for Hom(spec, S_n) and for index-n subgroups.

#include "sgrowth/exact_count.hpp"
#include "sgrowth/hom_sample.hpp"
#include "sgrowth/rng.hpp"

#include <functional>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace sgrowth {

/// Uniform over {sigma in S_n : sigma^p = 1}. The canonical remaining point
/// opens a cycle of length d | p with probability
/// C(u-1, d-1) (d-1)! h_{u-d}(C_p) / h_u(C_p); the other members are drawn
/// uniformly in order.
class OrderDividingSampler {
public:
    OrderDividingSampler(unsigned p, unsigned n);

    unsigned order() const noexcept { return p_; }
    unsigned degree() const noexcept { return n_; }
    Permutation sample(RngStream& rng) const;

private:
    unsigned p_;
    unsigned n_;
    std::vector<unsigned> lengths_;           // divisors of p
    std::vector<ExactCategorical> by_count_;  // index u = unplaced points
};

/// Uniform over {sigma : sigma^p = z} for z of degree at most n. Per cycle
/// length l of z, the group of cycles joined with a canonical remaining cycle
/// has size i in I_{p,l} with probability
/// C(r-1, i-1) (i-1)! l^{i-1} R(r-i) / R(r); its members and their phases
/// are then uniform.
class RootSampler {
public:
    RootSampler(unsigned p, unsigned n);

    unsigned order() const noexcept { return p_; }
    /// Throws std::invalid_argument naming the first cycle length of z that
    /// admits no p-th root.
    Permutation sample(const Permutation& z, RngStream& rng) const;
    /// Number of p-th roots of a permutation of this type.
    BigInt root_count(const CycleType& type) const;

private:
    struct Length {
        std::vector<unsigned> sizes;          // I_{p,l}
        Sequence counts;                      // R_{p,l}(0..n/l)
        std::vector<ExactCategorical> by_count;
    };
    const Length& length(unsigned l) const;

    unsigned p_;
    unsigned n_;
    std::vector<Length> lengths_;  // index l - 1
};

/// Uniform random permutation of degree n (Fisher-Yates).
Permutation uniform_permutation(unsigned n, RngStream& rng);

/// Uniform permutation of the given cycle type.
Permutation uniform_of_type(const CycleType& type, RngStream& rng);

enum class SamplingModel {
    exact,     ///< uniform on Hom(spec, S_n)
    factored,  ///< torus only: uniform on homs factoring through the free-product image
};

const char* model_name(SamplingModel model);
SamplingModel parse_model(const std::string& text);

/// Uniform sampler on Hom(spec, S_n) (or on the factored homs). Tables are
/// built once; sample() is const and safe to call from several threads.
class HomSampler {
public:
    HomSampler(const GroupSpec& spec, unsigned n, SamplingModel model = SamplingModel::exact,
               const Caps& caps = {});

    const GroupSpec& spec() const noexcept { return spec_; }
    unsigned degree() const noexcept { return n_; }
    SamplingModel model() const noexcept { return model_; }
    /// Size of the sampled set.
    const BigInt& total() const noexcept { return total_; }

    HomSample sample(RngStream& rng) const;

    /// Torus exact model: probability of each common-power cycle type.
    Rational type_probability(const CycleType& type) const;

private:
    GroupSpec spec_;
    unsigned n_;
    SamplingModel model_;
    BigInt total_;
    std::vector<OrderDividingSampler> cyclic_;  // per finite factor
    std::vector<RootSampler> roots_;            // torus exact model
    std::vector<CycleType> types_;
    ExactCategorical type_law_;
};

/// Rejection to transitive homs: the stabilizer of point 1 is then a
/// uniform index-n subgroup.
class SubgroupSampler {
public:
    struct Draw {
        HomSample hom;
        unsigned rejections = 0;
    };

    explicit SubgroupSampler(const HomSampler& homs, unsigned retry_ceiling = 10000);

    const HomSampler& homs() const noexcept { return homs_; }
    /// Throws std::runtime_error after `retry_ceiling` consecutive
    /// non-transitive draws; the message carries the exact acceptance rate
    /// when it is computable.
    Draw sample(RngStream& rng) const;

private:
    const HomSampler& homs_;
    unsigned retry_ceiling_;
};

/// One-shot helpers that build their tables per call.
Permutation sample_perm_order_dividing(unsigned p, unsigned n, RngStream& rng);
Permutation sample_root(const Permutation& z, unsigned p, RngStream& rng);
HomSample sample_freeprod_hom(const GroupSpec& spec, unsigned n, RngStream& rng);
HomSample sample_torus_hom(const GroupSpec& spec, unsigned n, RngStream& rng, const Caps& caps = {});
SubgroupSampler::Draw sample_subgroup(const GroupSpec& spec, unsigned n, RngStream& rng,
                                      unsigned retry_ceiling = 10000);

/// Evaluates fn(index, rng) for index in [0, count), each with its own
/// RngStream(seed, index), on `workers` threads. Results are in index order
/// and do not depend on the worker count.
template <class Fn>
auto parallel_map(std::size_t count, unsigned workers, std::uint64_t seed, Fn fn)
    -> std::vector<decltype(fn(std::size_t{}, std::declval<RngStream&>()))>
{
    using T = decltype(fn(std::size_t{}, std::declval<RngStream&>()));
    std::vector<T> out(count);
    auto run = [&](unsigned worker, unsigned stride) {
        for (std::size_t i = worker; i < count; i += stride) {
            RngStream rng(seed, i);
            out[i] = fn(i, rng);
        }
    };
    if (workers <= 1 || count < 2) {
        run(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                run(w, workers);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

}  // namespace sgrowth
