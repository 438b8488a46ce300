#include "procpat/cli.hpp"
#include "procpat/json_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace procpat;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "procpat");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("procpat_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Small synthetic workspace with a generated config.
fs::path synth_workspace(const std::string& name) {
    const fs::path dir = fresh(name);
    PlantSpec spec;
    spec.traces = 200;
    spec.seed = 11;
    std::ofstream(dir / "spec.json") << dump(to_json(spec));
    const Run r = cli({"synth", (dir / "data").string(), "--spec", (dir / "spec.json").string()});
    REQUIRE(r.code == kExitOk);
    return dir;
}

} // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(cli({}).code == kExitConfig);
    CHECK(cli({"frobnicate"}).code == kExitConfig);
    CHECK(cli({"discover"}).code == kExitConfig);
    CHECK(cli({"--help"}).code == kExitOk);
    CHECK(cli({"discover", "/nonexistent/config.json"}).code == kExitConfig);
}

TEST_CASE("synth writes a log, ground truth and a runnable config") {
    const fs::path dir = synth_workspace("synth");
    CHECK(fs::exists(dir / "data" / "log.csv"));
    const Json truth = Json::parse(slurp(dir / "data" / "ground_truth.json"));
    CHECK(truth.contains("planted_pattern"));
    CHECK(truth.at("spec").at("traces") == 200);
    CHECK_NOTHROW(load_run_config(dir / "data" / "config.json"));
}

TEST_CASE("discover is byte-identical across runs and replays") {
    const fs::path dir = synth_workspace("discover");
    const std::string config = (dir / "data" / "config.json").string();
    const Run a = cli({"discover", config, "--auto", "--out", (dir / "a").string()});
    REQUIRE(a.code == kExitOk);
    const Run b = cli({"discover", config, "--auto", "--out", (dir / "b").string()});
    REQUIRE(b.code == kExitOk);
    for (const char* f : {"session.json", "patterns.json", "fronts.csv", "features.csv"}) {
        CAPTURE(f);
        CHECK(fs::exists(dir / "a" / f));
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    const Json session = Json::parse(slurp(dir / "a" / "session.json"));
    CHECK(session.at("iterations").size() >= 2);

    const Run r = cli({"replay", config, (dir / "a" / "session.json").string(), "--out", (dir / "r").string()});
    CHECK(r.code == kExitOk);

    // Tampered recording diverges.
    Json tampered = session;
    tampered["iterations"][0]["front_ids"] = Json::array();
    std::ofstream(dir / "tampered.json") << dump(tampered);
    CHECK(cli({"replay", config, (dir / "tampered.json").string(), "--out", (dir / "r").string()}).code ==
          kExitData);

    Json other_log = session;
    other_log["log"]["fingerprint"] = "0000";
    std::ofstream(dir / "other.json") << dump(other_log);
    CHECK(cli({"replay", config, (dir / "other.json").string(), "--out", (dir / "r").string()}).code ==
          kExitData);
}

TEST_CASE("discover without --auto stops at the singletons") {
    const fs::path dir = synth_workspace("single");
    const Run a = cli({"discover", (dir / "data" / "config.json").string(), "--out", (dir / "o").string()});
    REQUIRE(a.code == kExitOk);
    CHECK(Json::parse(slurp(dir / "o" / "session.json")).at("iterations").size() == 1);
    CHECK(cli({"discover", (dir / "data" / "config.json").string(), "--iterations", "0"}).code == kExitConfig);
}

TEST_CASE("evaluate writes a report and rejects bad strategies") {
    const fs::path dir = synth_workspace("evaluate");
    const std::string config = (dir / "data" / "config.json").string();
    const Run ok = cli({"evaluate", config, "--folds", "3", "--out", (dir / "e").string()});
    REQUIRE(ok.code == kExitOk);
    const Json report = Json::parse(slurp(dir / "e" / "eval_report.json"));
    CHECK(report.at("folds") == 3);
    CHECK(fs::exists(dir / "e" / "eval_report.csv"));
    CHECK(ok.out.find("pareto/all") != std::string::npos);

    CHECK(cli({"evaluate", config, "--strategies", "pareto,bogus"}).code == kExitConfig);
    CHECK(cli({"evaluate", config, "--folds", "1"}).code == kExitConfig);
    CHECK(cli({"evaluate", config, "--folds", "150", "--out", (dir / "e").string()}).code == kExitData);
}

TEST_CASE("continuous outcomes need bins for evaluation") {
    const fs::path dir = fresh("continuous");
    PlantSpec spec;
    spec.traces = 150;
    spec.outcome_kind = OutcomeKind::Continuous;
    std::ofstream(dir / "spec.json") << dump(to_json(spec));
    REQUIRE(cli({"synth", (dir / "data").string(), "--spec", (dir / "spec.json").string()}).code == kExitOk);

    Json config = Json::parse(slurp(dir / "data" / "config.json"));
    config["evaluation"].erase("outcome_bins");
    std::ofstream(dir / "data" / "nobins.json") << dump(config);
    CHECK(cli({"evaluate", (dir / "data" / "nobins.json").string()}).code == kExitConfig);
    CHECK(cli({"evaluate", (dir / "data" / "config.json").string(), "--folds", "3", "--out",
               (dir / "e").string()})
              .code == kExitOk);
}
