#pragma once

#include "sgrowth/exact_count.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sgrowth {

inline constexpr int count_cache_version = 1;

/// {version, spec, N, h, t, a} with decimal-string entries.
nlohmann::json to_json(const CountTable& table);

/// Parses without validation beyond shape; throws std::invalid_argument.
CountTable count_table_from_json(const nlohmann::json& j);

/// Columns n,h,t,a for n = 1..N.
std::string to_csv(const CountTable& table);

/// Count tables persisted as one JSON file per spec. A loaded file is
/// accepted only when its version and spec match, its sequences satisfy
/// a_n (n-1)! = t_n, and its entries for n <= 10 equal a fresh computation.
class CountCache {
public:
    explicit CountCache(std::filesystem::path directory);

    /// Cached or freshly built table truncated to N. Problems with the cache
    /// file are appended to `warnings` and the file is rewritten.
    CountTable get(const GroupSpec& spec, unsigned N, const Caps& caps,
                   std::vector<std::string>* warnings = nullptr) const;

    std::filesystem::path path_for(const GroupSpec& spec) const;

private:
    std::filesystem::path directory_;
};

}  // namespace sgrowth
