#include "sgrowth/hom_sample.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace sgrowth {

bool is_transitive(std::span<const Permutation> images, std::size_t n)
{
    if (n <= 1)
        return true;
    std::vector<bool> seen(n, false);
    std::vector<Point> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Point v = queue[head];
        for (const auto& g : images) {
            Point w = g(v);
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
                if (++reached == n)
                    return true;
            }
        }
    }
    return false;
}

HomSample make_hom_sample(const GroupSpec& spec, std::vector<Permutation> images)
{
    if (images.size() != spec.generator_count())
        throw std::invalid_argument(fmt::format("{} needs {} generator images, got {}",
                                                spec.to_string(), spec.generator_count(),
                                                images.size()));
    HomSample h{spec, images.empty() ? 0 : images.front().degree(), std::move(images), false, true};
    for (const auto& g : h.images)
        if (g.degree() != h.n)
            throw std::invalid_argument("generator images have different degrees");
    if (spec.is_torus()) {
        Permutation common = h.images[0].power(spec.orders()[0]);
        for (std::size_t i = 1; i < h.images.size(); ++i)
            if (h.images[i].power(spec.orders()[i]) != common)
                throw std::invalid_argument(
                    fmt::format("images violate x1^{} = x{}^{}", spec.orders()[0], i + 1,
                                spec.orders()[i]));
        h.factors_through_phi = common.is_identity();
    } else {
        for (unsigned j = spec.free_rank(); j < spec.generator_count(); ++j)
            if (!h.images[j].power(spec.generator_order(j)).is_identity())
                throw std::invalid_argument(
                    fmt::format("image of x{} has order not dividing {}", j + 1,
                                spec.generator_order(j)));
    }
    h.transitive = is_transitive(h.images, h.n);
    return h;
}

Permutation evaluate_word(std::span<const Permutation> images, std::size_t n, const Word& word)
{
    Permutation out = Permutation::identity(n);
    for (const auto& s : word.syllables()) {
        if (s.generator >= images.size())
            throw std::invalid_argument(
                fmt::format("word {} uses x{} but only {} generator images are given",
                            word.to_string(), s.generator + 1, images.size()));
        out = compose(out, images[s.generator].power(s.exponent));
    }
    return out;
}

Permutation evaluate_word(const HomSample& h, const Word& word)
{
    return evaluate_word(h.images, h.n, word);
}

nlohmann::json to_json(const HomSample& h)
{
    nlohmann::json images = nlohmann::json::array();
    for (const auto& g : h.images) {
        nlohmann::json row = nlohmann::json::array();
        for (Point v : g.images())
            row.push_back(v + 1);
        images.push_back(std::move(row));
    }
    return {{"images", std::move(images)},
            {"transitive", h.transitive},
            {"factors_through_phi", h.factors_through_phi}};
}

}  // namespace sgrowth
