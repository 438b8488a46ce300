#pragma once

#include "procpat/discovery.hpp"
#include "procpat/eval.hpp"
#include "procpat/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace procpat {

using Json = nlohmann::json;

Json to_json(const Pattern& p);
/// Rebuilds the pattern from nodes/relations; the stored id must match.
Pattern pattern_from_json(const Json& j);

Json to_json(const InterestVector& v);
Json to_json(const MeasuredPattern& m);
Json to_json(const Iteration& it);
Json to_json(const ValidationReport& r);
Json to_json(const DashboardData& d);
Json to_json(const EvalReport& r);
Json to_json(const GroundTruth& t);

Json to_json(const LogSchema& s);
LogSchema schema_from_json(const Json& j);

Json to_json(const OracleConfig& o);
OracleConfig oracle_from_json(const Json& j);

/// Distance attributes default to every attribute the schema declares.
Json to_json(const DiscoveryConfig& c);
DiscoveryConfig discovery_config_from_json(const Json& j, const LogSchema& schema);

Json to_json(const PlantSpec& s);
PlantSpec plant_spec_from_json(const Json& j);

Json to_json(const StepRecord& s);
StepRecord step_from_json(const Json& j);

/// Counts plus a content hash of the log's canonical CSV form.
Json log_summary(const EventLog& log);
std::string log_fingerprint(const EventLog& log);

/// Config, log summary, status, every iteration, and the step history.
Json session_to_json(const DiscoverySession& s);

struct SessionRecord {
    DiscoveryConfig config;
    std::string log_fingerprint;
    std::vector<StepRecord> steps;
    Json iterations;
};

SessionRecord session_from_json(const Json& j, const LogSchema& schema);

struct EvalSettings {
    std::size_t folds = 5;
    std::vector<Strategy> strategies = default_strategies();
    std::uint64_t seed = 0;
    DTParams tree;
    /// Equal-frequency classes for continuous outcomes.
    std::optional<std::size_t> outcome_bins;
};

struct RunConfig {
    std::filesystem::path log_path;
    LogSchema schema;
    DiscoveryConfig discovery;
    EvalSettings evaluation;
    std::filesystem::path output_dir = "out";
};

/// Relative paths resolve against `base_dir`. Unknown keys are rejected.
RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
/// Reads JSON with // and /* */ comments.
RunConfig load_run_config(const std::filesystem::path& path);

Json parse_json_with_comments(const std::string& text);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

} // namespace procpat
