#include "sgrowth/count_cache.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sgrowth {

namespace {

nlohmann::json decimal_array(const Sequence& s)
{
    auto out = nlohmann::json::array();
    for (const auto& v : s)
        out.push_back(to_decimal(v));
    return out;
}

Sequence parse_array(const nlohmann::json& j, const char* field)
{
    if (!j.contains(field) || !j[field].is_array())
        throw std::invalid_argument(fmt::format("count table: missing array '{}'", field));
    Sequence out;
    for (const auto& v : j[field]) {
        if (!v.is_string())
            throw std::invalid_argument(fmt::format("count table: '{}' entries must be strings", field));
        out.push_back(parse_decimal(v.get<std::string>()));
    }
    return out;
}

CountTable truncated(const CountTable& table, unsigned N)
{
    CountTable out{table.spec, N, {}, {}, {}, {}};
    out.h.assign(table.h.begin(), table.h.begin() + N + 1);
    out.t.assign(table.t.begin(), table.t.begin() + N + 1);
    out.a.assign(table.a.begin(), table.a.begin() + N + 1);
    for (const auto& c : table.cyclic)
        out.cyclic.emplace_back(c.begin(), c.begin() + N + 1);
    return out;
}

// Empty string when the cached table is acceptable.
std::string validate(const CountTable& cached, const GroupSpec& spec, const Caps& caps)
{
    if (!(cached.spec == spec))
        return "spec mismatch";
    if (cached.h.size() != cached.N + 1 || cached.t.size() != cached.N + 1 || cached.a.size() != cached.N + 1)
        return "sequence lengths do not match N";
    for (unsigned n = 1; n <= cached.N; ++n)
        if (cached.a[n] * factorial(n - 1) != cached.t[n])
            return fmt::format("a_{} (n-1)! != t_{}", n, n);
    const unsigned probe = std::min(cached.N, 10u);
    const CountTable fresh = CountTable::build(spec, probe, caps);
    for (unsigned n = 0; n <= probe; ++n)
        if (fresh.h[n] != cached.h[n] || fresh.t[n] != cached.t[n] || fresh.a[n] != cached.a[n])
            return fmt::format("entry n = {} differs from recomputation", n);
    return {};
}

}  // namespace

nlohmann::json to_json(const CountTable& table)
{
    return {{"version", count_cache_version},
            {"spec", table.spec.to_string()},
            {"N", table.N},
            {"h", decimal_array(table.h)},
            {"t", decimal_array(table.t)},
            {"a", decimal_array(table.a)}};
}

CountTable count_table_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("version") || j["version"] != count_cache_version)
        throw std::invalid_argument("count table: unsupported version");
    if (!j.contains("spec") || !j["spec"].is_string() || !j.contains("N") || !j["N"].is_number_unsigned())
        throw std::invalid_argument("count table: missing spec or N");
    CountTable table{GroupSpec::parse(j["spec"].get<std::string>(), GroupSpec::Check::lenient),
                     j["N"].get<unsigned>(), parse_array(j, "h"), parse_array(j, "t"),
                     parse_array(j, "a"), {}};
    for (unsigned p : table.spec.orders())
        table.cyclic.push_back(hn_cyclic_table(p, table.N));
    return table;
}

std::string to_csv(const CountTable& table)
{
    std::ostringstream out;
    out << "n,h,t,a\n";
    for (unsigned n = 1; n <= table.N; ++n)
        out << n << ',' << to_decimal(table.h[n]) << ',' << to_decimal(table.t[n]) << ','
            << to_decimal(table.a[n]) << '\n';
    return out.str();
}

CountCache::CountCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path CountCache::path_for(const GroupSpec& spec) const
{
    std::string name = spec.to_string();
    std::replace_if(name.begin(), name.end(), [](char c) { return c == ':' || c == ';' || c == ','; }, '_');
    return directory_ / fmt::format("{}-v{}.json", name, count_cache_version);
}

CountTable CountCache::get(const GroupSpec& spec, unsigned N, const Caps& caps,
                           std::vector<std::string>* warnings) const
{
    const auto path = path_for(spec);
    auto warn = [&](const std::string& message) {
        if (warnings)
            warnings->push_back(fmt::format("cache {}: {}; recomputed", path.string(), message));
    };

    if (std::filesystem::exists(path)) {
        std::string problem;
        try {
            std::ifstream in(path);
            const CountTable cached = count_table_from_json(nlohmann::json::parse(in));
            problem = validate(cached, spec, caps);
            if (problem.empty() && cached.N >= N)
                return truncated(cached, N);
        } catch (const std::exception& e) {
            problem = e.what();
        }
        if (!problem.empty())
            warn(problem);
    }

    CountTable table = CountTable::build(spec, N, caps);
    std::filesystem::create_directories(directory_);
    std::ofstream out(path);
    out << to_json(table).dump() << '\n';
    return table;
}

}  // namespace sgrowth
