#include "helpers.hpp"

#include "procpat/json_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace procpat;
using testutil::code_of;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "procpat_json_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("pattern json round trip") {
    const Pattern p = planted_pattern(PlantSpec{.pattern_blocks = {{"A"}, {"B", "C"}, {"D"}}});
    const Json j = to_json(p);
    CHECK(j.at("id") == p.id());
    CHECK(j.at("key") == p.key());
    CHECK(j.at("nodes").size() == 4);
    CHECK(j.at("nodes")[0].at("id") == "n0");
    const Pattern back = pattern_from_json(j);
    CHECK(back.key() == p.key());
    CHECK(back.id() == p.id());

    Json bad = j;
    bad["id"] = "0123456789abcdef";
    CHECK(code_of([&] { pattern_from_json(bad); }) == Errc::InvalidPattern);
    Json worse = j;
    worse["relations"][0]["kind"] = "sideways";
    CHECK(code_of([&] { pattern_from_json(worse); }) == Errc::InvalidPattern);
    Json nodes = j;
    nodes["nodes"][0]["id"] = "n7";
    CHECK(code_of([&] { pattern_from_json(nodes); }) == Errc::InvalidPattern);
}

TEST_CASE("schema, oracle and discovery config round trip") {
    LogSchema s;
    s.outcome_kind = OutcomeKind::Continuous;
    s.numeric_attributes = {"age"};
    s.categorical_attributes = {"segment", "site"};
    s.end_timestamp_column = "end";
    s.delimiter = ';';
    CHECK(schema_from_json(to_json(s)) == s);

    DiscoveryConfig c;
    c.oracle = synth_oracle();
    c.oracle.rules.push_back({ConcurrencyRule::Kind::StartWindow, std::set<std::string>{"x", "y"}, std::chrono::hours(72)});
    c.oracle.tie_policy = TiePolicy::Lexicographic;
    c.rules = {ExtensionRule::DirectFollow, ExtensionRule::EventualPrecede};
    c.quantifier = Quantifier::All;
    c.min_case_frequency = 10;
    c.filter_mode = FilterMode::PostFront;
    c.interest.oi_transform = OiTransform::Abs;
    c.interest.distance = {{"age"}, {"segment"}, CdAggregation::Literal};
    c.interest.directions[2] = Direction::Maximize;
    c.seed = 99;
    CHECK(oracle_from_json(to_json(c.oracle)) == c.oracle);
    CHECK(discovery_config_from_json(to_json(c), s) == c);
}

TEST_CASE("discovery config defaults and strictness") {
    LogSchema s;
    s.numeric_attributes = {"age"};
    s.categorical_attributes = {"segment"};
    const DiscoveryConfig d = discovery_config_from_json(Json::object(), s);
    CHECK(d.interest.distance.numeric_attributes == s.numeric_attributes);
    CHECK(d.interest.distance.categorical_attributes == s.categorical_attributes);
    CHECK(d.rules == all_rules());
    CHECK(d.max_iterations == 3);

    CHECK(discovery_config_from_json(Json{{"rules", "df,conc"}}, s).rules ==
          std::vector<ExtensionRule>{ExtensionRule::DirectFollow, ExtensionRule::Concurrent});
    CHECK(code_of([&] { discovery_config_from_json(Json{{"colour", "red"}}, s); }) == Errc::InvalidConfig);
    CHECK(code_of([&] { discovery_config_from_json(Json{{"max_iterations", 0}}, s); }) ==
          Errc::InvalidConfig);
    CHECK(code_of([&] { discovery_config_from_json(Json{{"max_iterations", "three"}}, s); }) ==
          Errc::InvalidConfig);
    CHECK(code_of([&] { discovery_config_from_json(Json{{"rules", "df,zz"}}, s); }) == Errc::InvalidConfig);
    CHECK(code_of([&] { discovery_config_from_json(Json{{"rules", Json::array()}}, s); }) ==
          Errc::InvalidConfig);
    CHECK(code_of([&] {
              discovery_config_from_json(Json::parse(R"({"oracle":{"rules":[{"kind":"start_window"}]}})"), s);
          }) == Errc::InvalidConfig);
}

TEST_CASE("plant spec round trip and validation") {
    PlantSpec spec{.pattern_blocks = {{"X"}, {"Y"}}, .noise = 0.1, .traces = 77, .seed = 3};
    CHECK(plant_spec_from_json(to_json(spec)) == spec);
    CHECK(plant_spec_from_json(Json::object()) == PlantSpec{});
    CHECK(code_of([] { plant_spec_from_json(Json{{"noise", 2.0}}); }) == Errc::InvalidConfig);
    CHECK(code_of([] { plant_spec_from_json(Json{{"size", 2}}); }) == Errc::InvalidConfig);
}

TEST_CASE("run config from a commented file") {
    const auto path = scratch("run.jsonc");
    std::ofstream(path) << R"(// sample configuration
{
  "log": {"path": "data/log.csv", "schema": {"numeric_attributes": ["age"]}},
  /* discovery block */
  "discovery": {"max_iterations": 2, "rules": ["df", "dc"]},
  "evaluation": {"folds": 4, "strategies": "pareto,all", "seed": 5, "outcome_bins": 3},
  "output_dir": "results"
}
)";
    const RunConfig c = load_run_config(path);
    CHECK(c.log_path == path.parent_path() / "data/log.csv");
    CHECK(c.output_dir == path.parent_path() / "results");
    CHECK(c.schema.numeric_attributes == std::vector<std::string>{"age"});
    CHECK(c.discovery.max_iterations == 2);
    CHECK(c.discovery.interest.distance.numeric_attributes == std::vector<std::string>{"age"});
    CHECK(c.evaluation.folds == 4);
    CHECK(c.evaluation.strategies.size() == 2);
    CHECK(c.evaluation.seed == 5);
    CHECK(c.evaluation.outcome_bins == 3);

    CHECK(code_of([] { run_config_from_json(Json{{"log", {{"path", "x"}}}, {"extra", 1}}); }) ==
          Errc::InvalidConfig);
    CHECK(code_of([] { run_config_from_json(Json::object()); }) == Errc::InvalidConfig);
    CHECK(code_of([] {
              run_config_from_json(Json{{"log", {{"path", "x"}}}, {"evaluation", {{"strategies", "magic"}}}});
          }) == Errc::InvalidConfig);
    CHECK(code_of([] { parse_json_with_comments("{ nope"); }) == Errc::InvalidConfig);
    CHECK(code_of([] { load_run_config("/nonexistent/run.json"); }) == Errc::InvalidConfig);
    CHECK(run_config_from_json(Json{{"log", {{"path", "/abs/log.csv"}}}}, "/base").log_path == "/abs/log.csv");
}

TEST_CASE("session json carries everything needed to replay") {
    const SynthResult syn = generate(PlantSpec{.traces = 80});
    DiscoveryConfig cfg;
    cfg.oracle = synth_oracle();
    cfg.interest.distance = {{"age"}, {"segment"}, CdAggregation::PairMean};
    auto log = std::make_shared<const EventLog>(syn.log);
    DiscoverySession s(log, cfg);
    s.step(s.iterations()[0].front_ids, {ExtensionRule::DirectContext}, 3);
    const Json j = session_to_json(s);
    CHECK(j.at("format") == "procpat-session/1");
    CHECK(j.at("status") == "awaiting-selection");
    CHECK(j.at("iterations").size() == 2);
    CHECK(j.at("log").at("cases") == 80);
    CHECK(j.at("log").at("fingerprint") == log_fingerprint(syn.log));

    // Through text and back.
    const Json reread = Json::parse(dump(j));
    const SessionRecord r = session_from_json(reread, schema_from_json(reread.at("schema")));
    CHECK(r.config == cfg);
    CHECK(r.log_fingerprint == log_fingerprint(syn.log));
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].min_case_frequency == 3);
    const DiscoverySession again = replay_session(log, r.config, r.steps);
    CHECK(dump(session_to_json(again)) == dump(j));

    CHECK(code_of([] { session_from_json(Json{{"format", "other"}}, {}); }) == Errc::InvalidConfig);
}

TEST_CASE("measured pattern and iteration shapes") {
    const SynthResult syn = generate(PlantSpec{.traces = 60});
    DiscoveryConfig cfg;
    cfg.oracle = synth_oracle();
    DiscoverySession s(std::make_shared<const EventLog>(syn.log), cfg);
    const Iteration& it = s.iterations()[0];
    const Json ji = to_json(it);
    CHECK(ji.at("index") == 0);
    CHECK(ji.at("candidates").size() == it.candidates.size());
    CHECK(ji.at("front_ids").size() == it.front_ids.size());
    const Json m = ji.at("candidates")[0];
    for (const char* key : {"pattern", "interest", "directions", "case_count", "oi_degenerate",
                            "cd_degenerate", "front", "error"})
        CHECK(m.contains(key));
    CHECK(m.at("directions").at("cd") == "min");
    CHECK(m.at("error").is_null());

    const DashboardData d = s.dashboard(it.candidates[0].pattern);
    const Json jd = to_json(d);
    CHECK(jd.at("outcome_kind") == "categorical");
    CHECK(jd.at("km_in").is_null());
    CHECK(jd.at("outcome_shares").is_object());
    CHECK(jd.at("numeric").size() == 1);
}

TEST_CASE("ground truth and eval report shapes") {
    const SynthResult syn = generate(PlantSpec{.traces = 30});
    const Json t = to_json(syn.truth);
    CHECK(t.at("pattern_key") == syn.truth.pattern_key);
    CHECK(t.at("records").size() == 30);

    EvalReport r;
    r.folds = 2;
    r.strategies.push_back({"pareto", 0.9, 0.8, 1.0, 3.0, {0.8, 1.0}, {3, 3}});
    r.pareto_all_ratio = {0.5, 0.25};
    r.mean_pareto_all_ratio = 0.375;
    const Json j = to_json(r);
    CHECK(j.at("strategies")[0].at("strategy") == "pareto");
    CHECK(j.at("mean_pareto_all_ratio") == 0.375);
}

TEST_CASE("session json reports oracle rule conflicts") {
    std::string csv = testutil::kHeader;
    csv += "c1,a,2021-01-01T02:00:00,x\nc1,b,2021-01-01T12:00:00,x\nc1,c,2021-01-03T00:00:00,x\n";
    csv += testutil::chain_rows("c2", {"a", "c"}, "y");
    DiscoveryConfig cfg;
    cfg.oracle.rules = {{ConcurrencyRule::Kind::SameInterval, std::nullopt, {}},
                        {ConcurrencyRule::Kind::StartWindow, std::nullopt, std::chrono::hours(72)}};
    const DiscoverySession s(std::make_shared<const EventLog>(testutil::csv_log(csv)), cfg);
    const Json j = session_to_json(s);
    REQUIRE(j.at("oracle_warnings").size() >= 1);
    CHECK(j.at("oracle_warnings").at(0).get<std::string>().find("RuleConflict") != std::string::npos);

    DiscoveryConfig plain;
    const DiscoverySession q(std::make_shared<const EventLog>(testutil::csv_log(csv)), plain);
    CHECK(session_to_json(q).at("oracle_warnings").empty());
}
