#include "sgrowth/commands.hpp"
#include "sgrowth/count_cache.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sgrowth;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "sgrowth");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json without_metadata(const std::string& text)
{
    auto j = nlohmann::json::parse(text);
    j.erase("metadata");
    j["config"].erase("workers");
    return j;
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("sgrowth_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config round trips")
{
    RunConfig c;
    c.command = "stats";
    c.group = "free:2,3";
    c.n = 50;
    c.samples = 123;
    c.seed = 9;
    c.workers = 2;
    c.classes = {"x1*x2", "x1"};
    c.format = "json";
    c.population = "homs";
    c.retry_ceiling = 77;
    const std::vector<std::string> args = c.to_args();
    std::vector<std::string> argv{"sgrowth"};
    argv.insert(argv.end(), args.begin(), args.end());
    CHECK(parse_command_line(argv) == c);

    RunConfig d;
    d.apply_json(c.to_json());
    d.command = c.command;
    CHECK(d == c);
    CHECK_THROWS_AS(d.apply_json(nlohmann::json{{"no-such-flag", 1}}), UsageError);
}

TEST_CASE("invalid combinations are usage errors")
{
    CHECK(run({"count"}).code == exit_usage);
    CHECK(run({"count", "--group", "torus:2,3"}).code == exit_usage);
    CHECK(run({"count", "--group", "torus:2,3", "--max-n", "3", "--format", "xml"}).code == exit_usage);
    CHECK(run({"stats", "--group", "free:2,3", "--n", "5"}).code == exit_usage);
    CHECK(run({"stats", "--group", "free:2,3", "--n", "5", "--classes", "x1^2"}).code == exit_usage);
    CHECK(run({"stats", "--group", "free:2,3", "--n", "5", "--classes", "x1*x2", "x2*x1"}).code == exit_usage);
    CHECK(run({"count", "--group", "free:2,3", "--max-n", "3", "--model", "factored"}).code == exit_usage);
    CHECK(run({"count", "--group", "fuchsian:1;2", "--max-n", "3", "--with-asym"}).code == exit_usage);
    CHECK(run({"asym", "--group", "torus:2,3", "--min-n", "5", "--max-n", "3"}).code == exit_usage);
    CHECK(run({"frobnicate"}).code == exit_usage);
    CHECK(run({"count", "--bogus"}).code == exit_usage);

    const Result degenerate = run({"count", "--group", "torus:2,2", "--max-n", "3"});
    CHECK(degenerate.code == exit_usage);
    CHECK(degenerate.err.find("--allow-degenerate") != std::string::npos);
    CHECK(run({"count", "--group", "torus:2,2", "--max-n", "3", "--allow-degenerate"}).code == exit_ok);
}

TEST_CASE("count output")
{
    const Result r = run({"count", "--group", "torus:2,3", "--max-n", "4"});
    CHECK(r.code == exit_ok);
    CHECK(r.out == "n,h,t,a,factor_ratio\n1,1,1,1,1\n2,2,1,1,1\n3,12,8,4,1\n4,96,54,9,0.9375\n");

    const Result j = run({"count", "--group", "free:2,3", "--max-n", "9", "--format", "json"});
    CHECK(j.code == exit_ok);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["rows"].size() == 9);
    CHECK(doc["rows"][8]["a"] == "120");
    CHECK(doc.contains("metadata"));
    CHECK(doc["config"]["group"] == "free:2,3");

    CHECK(run({"count", "--group", "torus:2,3", "--max-n", "400"}).code == exit_cap);
    CHECK(run({"sample", "--group", "torus:2,3", "--n", "51", "--samples", "1"}).code == exit_cap);
}

TEST_CASE("outputs are deterministic apart from metadata")
{
    const std::vector<std::string> base{"stats", "--group", "free:2,3", "--n", "40", "--classes", "x1*x2", "x1",
                                        "--samples", "300", "--seed", "5", "--format", "json"};
    auto with_workers = [&](const char* w) {
        auto args = base;
        args.insert(args.end(), {"--workers", w});
        const Result r = run(args);
        REQUIRE(r.code == exit_ok);
        return without_metadata(r.out);
    };
    const auto one = with_workers("1");
    CHECK(one == with_workers("1"));
    CHECK(one == with_workers("3"));

    const Result a = run({"sample", "--group", "torus:3,3,3", "--n", "8", "--samples", "5", "--seed", "2"});
    const Result b = run({"sample", "--group", "torus:3,3,3", "--n", "8", "--samples", "5", "--seed", "2",
                          "--workers", "2"});
    CHECK(a.code == exit_ok);
    CHECK(a.out == b.out);
    std::istringstream lines(a.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto h = nlohmann::json::parse(line);
        CHECK(h["images"].size() == 3);
        ++count;
    }
    CHECK(count == 5);
}

TEST_CASE("betti command")
{
    const Result r = run({"betti", "--group", "torus:2,3", "--n", "1", "--samples", "3"});
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("0,1,1,1,true") != std::string::npos);
    const auto summary = nlohmann::json::parse(r.err);
    CHECK(summary["summary"]["mean_b1_over_n"] == 1.0);

    const Result k = run({"betti", "--group", "free:2,3", "--n", "12", "--samples", "20", "--format", "json"});
    CHECK(k.code == exit_ok);
    CHECK(nlohmann::json::parse(k.out)["summary"]["kurosh_all_hold"] == true);
}

TEST_CASE("asym command")
{
    const Result r = run({"asym", "--group", "torus:2,3", "--min-n", "10", "--max-n", "12", "--format", "json"});
    CHECK(r.code == exit_ok);
    CHECK(nlohmann::json::parse(r.out)["rows"].size() == 3);
    const Result c = run({"asym", "--group", "torus:2,3", "--cyclic", "2", "--min-n", "7", "--max-n", "7"});
    CHECK(c.code == exit_ok);
    CHECK(c.out.find("7,232,") != std::string::npos);
}

TEST_CASE("config files and overrides")
{
    const fs::path dir = scratch_dir("config");
    const fs::path file = dir / "run.json";
    std::ofstream(file) << R"({"group": "torus:2,3", "max-n": 4})";
    const Result r = run({"count", "--config", file.string()});
    CHECK(r.code == exit_ok);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
    const Result o = run({"count", "--config", file.string(), "--max-n", "2"});
    CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 3);

    std::ofstream(dir / "bad.json") << R"({"colour": 3})";
    CHECK(run({"count", "--config", (dir / "bad.json").string()}).code == exit_usage);
    CHECK(run({"count", "--config", (dir / "missing.json").string()}).code == exit_usage);

    const fs::path out = dir / "rows.csv";
    CHECK(run({"count", "--group", "torus:2,3", "--max-n", "3", "--out", out.string()}).code == exit_ok);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,h,t,a,factor_ratio");
    CHECK(run({"count", "--group", "torus:2,3", "--max-n", "3", "--out", (dir / "no/such/dir.csv").string()}).code ==
          exit_usage);
}

TEST_CASE("verify passes and survives a corrupted cache")
{
    const fs::path dir = scratch_dir("cache");
    REQUIRE(run({"count", "--group", "torus:2,3", "--max-n", "40", "--cache-dir", dir.string()}).code == exit_ok);
    const fs::path file = CountCache(dir).path_for(GroupSpec::parse("torus:2,3"));
    REQUIRE(fs::exists(file));
    std::ofstream(file) << "{ truncated";

    const Result r = run({"verify", "--max-n", "6", "--group", "torus:2,3", "--cache-dir", dir.string()});
    CHECK(r.code == exit_ok);
    CHECK(r.err.find("warning:") != std::string::npos);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["pass"] == true);
    CHECK(doc["warnings"].size() >= 1);
    bool cache_checked = false;
    for (const auto& id : doc["reports"][0]["identities"])
        cache_checked |= id["name"] == "cache_table_matches" && id["pass"] == true;
    CHECK(cache_checked);
}
