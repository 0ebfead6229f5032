#include "sgrowth/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgrowth {

namespace {

void add_divisor_terms(AsymptoticModel& model, unsigned p)
{
    for (unsigned d = 1; d < p; ++d)
        if (p % d == 0)
            model.terms.emplace_back(1.0L / d, static_cast<long double>(d) / p);
}

long double log_vw_constant(unsigned p)
{
    long double value = -0.5L * std::log(static_cast<long double>(p));
    if (p % 2 == 0)
        value -= 1.0L / (2.0L * p);
    return value;
}

}  // namespace

long double AsymptoticModel::log_value(long double n) const
{
    const long double log_n = std::log(n);
    long double value = log_constant + power * log_n + alpha * (n * log_n - n);
    for (const auto& [beta, gamma] : terms)
        value += beta * std::pow(n, gamma);
    return value;
}

AsymptoticModel cyclic_model(unsigned p)
{
    if (p < 2)
        throw std::invalid_argument("cyclic_model: p must be at least 2");
    AsymptoticModel model;
    model.log_constant = log_vw_constant(p);
    model.alpha = 1.0L - 1.0L / p;
    add_divisor_terms(model, p);
    return model;
}

long double stated_torus_constant(const GroupSpec& spec)
{
    long double log_a = 0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
    for (unsigned p : spec.orders())
        log_a += log_vw_constant(p);
    return std::exp(log_a);
}

AsymptoticModel torus_model(const GroupSpec& spec)
{
    if (spec.kind() == GroupKind::fuchsian)
        throw std::invalid_argument("torus_model: torus or freeprod spec required");
    AsymptoticModel model;
    model.log_constant = std::log(stated_torus_constant(spec))
                         - std::log(2.0L * std::numbers::pi_v<long double>);
    model.power = 0.5L;
    long double alpha = static_cast<long double>(spec.factor_count()) - 1.0L;
    for (unsigned p : spec.orders()) {
        alpha -= 1.0L / p;
        add_divisor_terms(model, p);
    }
    model.alpha = alpha;
    return model;
}

long double asym_cyclic(unsigned p, unsigned n)
{
    return cyclic_model(p).log_value(n);
}

long double asym_torus(const GroupSpec& spec, unsigned n)
{
    return torus_model(spec).log_value(n);
}

}  // namespace sgrowth
