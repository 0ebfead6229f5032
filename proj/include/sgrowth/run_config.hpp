#pragma once

#include "sgrowth/exact_count.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace sgrowth {

/// Bad flags or flag combinations (exit code 1).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every CLI flag of every command. JSON keys and flag names coincide
/// (`max-n` <-> `--max-n`), so a config file mirrors the flags one-to-one.
struct RunConfig {
    std::string command;
    std::string group;
    unsigned n = 0;
    unsigned min_n = 1;
    unsigned max_n = 0;
    std::uint64_t samples = 0;  ///< 0 selects the command's default
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::vector<std::string> classes;
    std::string format;  ///< csv|json; empty selects the command's default
    std::string out;
    std::string summary_out;
    std::string model = "exact";
    std::string population = "subgroups";  ///< stats: subgroups|homs
    unsigned cap_partitions = Caps{}.partitions;
    unsigned cap_dp = Caps{}.dp;
    unsigned cap_sampler = Caps{}.sampler;
    unsigned retry_ceiling = 10000;
    unsigned cyclic = 0;  ///< asym: compare h_n(C_p) instead of a_n
    bool allow_degenerate = false;
    bool with_asym = false;
    bool subgroups = false;  ///< sample: transitive homs only
    std::string cache_dir;

    Caps caps() const { return {cap_partitions, cap_dp, cap_sampler}; }
    std::string resolved_format() const;
    std::uint64_t resolved_samples() const;

    /// The flag values of this command, keyed by flag name.
    nlohmann::json to_json() const;
    /// Sets the fields named in a config-file object; unknown keys throw UsageError.
    void apply_json(const nlohmann::json& j);
    /// Command line reproducing this config: {command, --flag, value, ...}.
    std::vector<std::string> to_args() const;

    /// Rejects invalid combinations; throws UsageError.
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Registers one CLI11 option per RunConfig field on `app`, bound to `config`.
void add_flags(CLI::App& app, RunConfig& config);

}  // namespace sgrowth
