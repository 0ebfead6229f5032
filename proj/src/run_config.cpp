#include "sgrowth/run_config.hpp"

#include "sgrowth/group_spec.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <set>
#include <sstream>
#include <variant>

namespace sgrowth {

namespace {

using FieldRef = std::variant<std::string*, unsigned*, std::uint64_t*, std::vector<std::string>*, bool*>;

struct Field {
    const char* name;
    FieldRef ref;
};

std::vector<Field> fields(RunConfig& c)
{
    return {{"group", &c.group},
            {"n", &c.n},
            {"min-n", &c.min_n},
            {"max-n", &c.max_n},
            {"samples", &c.samples},
            {"seed", &c.seed},
            {"workers", &c.workers},
            {"classes", &c.classes},
            {"format", &c.format},
            {"out", &c.out},
            {"summary-out", &c.summary_out},
            {"model", &c.model},
            {"population", &c.population},
            {"cap-partitions", &c.cap_partitions},
            {"cap-dp", &c.cap_dp},
            {"cap-sampler", &c.cap_sampler},
            {"retry-ceiling", &c.retry_ceiling},
            {"cyclic", &c.cyclic},
            {"allow-degenerate", &c.allow_degenerate},
            {"with-asym", &c.with_asym},
            {"subgroups", &c.subgroups},
            {"cache-dir", &c.cache_dir}};
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? "," : "") + items[i];
    return out;
}

const std::set<std::string> commands{"count", "stats", "betti", "asym", "sample", "verify"};

}  // namespace

std::string RunConfig::resolved_format() const
{
    if (!format.empty())
        return format;
    return command == "count" || command == "asym" || command == "betti" ? "csv" : "json";
}

std::uint64_t RunConfig::resolved_samples() const
{
    if (samples != 0)
        return samples;
    return command == "verify" ? 1'000'000 : 1000;
}

void add_flags(CLI::App& app, RunConfig& config)
{
    for (const auto& f : fields(config)) {
        const std::string flag = std::string("--") + f.name;
        std::visit(
            [&](auto* p) {
                using T = std::remove_pointer_t<decltype(p)>;
                if constexpr (std::is_same_v<T, bool>)
                    app.add_flag(flag, *p);
                else if constexpr (std::is_same_v<T, std::vector<std::string>>)
                    app.add_option(flag, *p)->delimiter(',');
                else
                    app.add_option(flag, *p);
            },
            f.ref);
    }
}

nlohmann::json RunConfig::to_json() const
{
    nlohmann::json j{{"command", command}};
    for (const auto& f : fields(const_cast<RunConfig&>(*this)))
        std::visit([&](auto* p) { j[f.name] = *p; }, f.ref);
    return j;
}

void RunConfig::apply_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw UsageError("config file must hold a JSON object");
    auto list = fields(*this);
    for (const auto& [key, value] : j.items()) {
        if (key == "command")
            continue;
        auto it = std::find_if(list.begin(), list.end(), [&](const Field& f) { return key == f.name; });
        if (it == list.end())
            throw UsageError(fmt::format("config file: unknown key '{}'", key));
        try {
            std::visit(
                [&](auto* p) {
                    using T = std::remove_pointer_t<decltype(p)>;
                    if constexpr (std::is_same_v<T, std::vector<std::string>>) {
                        if (value.is_string()) {
                            p->clear();
                            std::stringstream in(value.get<std::string>());
                            for (std::string item; std::getline(in, item, ',');)
                                p->push_back(item);
                            return;
                        }
                    }
                    *p = value.get<T>();
                },
                it->ref);
        } catch (const nlohmann::json::exception&) {
            throw UsageError(fmt::format("config file: bad value for '{}'", key));
        }
    }
}

std::vector<std::string> RunConfig::to_args() const
{
    std::vector<std::string> args{command};
    for (const auto& f : fields(const_cast<RunConfig&>(*this))) {
        const std::string flag = std::string("--") + f.name;
        std::visit(
            [&](auto* p) {
                using T = std::remove_pointer_t<decltype(p)>;
                if constexpr (std::is_same_v<T, bool>) {
                    if (*p)
                        args.push_back(flag);
                } else if constexpr (std::is_same_v<T, std::string>) {
                    if (!p->empty()) {
                        args.push_back(flag);
                        args.push_back(*p);
                    }
                } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
                    if (!p->empty()) {
                        args.push_back(flag);
                        args.push_back(join(*p));
                    }
                } else {
                    args.push_back(flag);
                    args.push_back(std::to_string(*p));
                }
            },
            f.ref);
    }
    return args;
}

void RunConfig::validate() const
{
    if (!commands.count(command))
        throw UsageError(fmt::format("unknown command '{}'", command));
    const std::string fmt_ = resolved_format();
    if (fmt_ != "csv" && fmt_ != "json")
        throw UsageError(fmt::format("--format must be csv or json, got '{}'", format));
    if (model != "exact" && model != "factored")
        throw UsageError(fmt::format("--model must be exact or factored, got '{}'", model));
    if (population != "subgroups" && population != "homs")
        throw UsageError(fmt::format("--population must be subgroups or homs, got '{}'", population));
    if (workers == 0)
        throw UsageError("--workers must be positive");

    const bool needs_group = command != "verify" && !(command == "asym" && cyclic != 0);
    if (needs_group && group.empty())
        throw UsageError(fmt::format("{} requires --group", command));
    if (!group.empty()) {
        const auto check = allow_degenerate ? GroupSpec::Check::lenient : GroupSpec::Check::strict;
        GroupSpec spec = [&] {
            try {
                return GroupSpec::parse(group, check);
            } catch (const std::invalid_argument& e) {
                bool degenerate = false;
                try {
                    GroupSpec::parse(group, GroupSpec::Check::lenient);
                    degenerate = true;
                } catch (const std::invalid_argument&) {
                }
                throw UsageError(degenerate ? fmt::format("{} (--allow-degenerate accepts it)", e.what()) : e.what());
            }
        }();
        if (model == "factored" && !spec.is_torus())
            throw UsageError("--model factored applies to torus groups only");
        for (const auto& w : classes) {
            try {
                classify(spec, Word::parse(w));
            } catch (const std::invalid_argument& e) {
                throw UsageError(fmt::format("class '{}': {}", w, e.what()));
            }
        }
    }
    if ((command == "stats" || command == "betti" || command == "sample") && n == 0)
        throw UsageError(fmt::format("{} requires --n >= 1", command));
    if (command == "stats" && classes.empty())
        throw UsageError("stats requires --classes");
    if ((command == "count" || command == "asym") && max_n == 0)
        throw UsageError(fmt::format("{} requires --max-n >= 1", command));
    if (command == "asym" && (min_n == 0 || min_n > max_n))
        throw UsageError("asym requires 1 <= --min-n <= --max-n");
    if (command == "asym" && cyclic == 1)
        throw UsageError("--cyclic needs p >= 2");
}

}  // namespace sgrowth
