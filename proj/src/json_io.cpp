#include "procpat/json_io.hpp"

#include "procpat/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace procpat {

namespace {

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

void check_object(const Json& j, const char* what) {
    if (!j.is_object())
        throw Error(Errc::InvalidConfig, std::string(what) + " must be a JSON object");
}

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed, const char* what) {
    check_object(j, what);
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw Error(Errc::InvalidConfig, std::string("unknown key '") + key + "' in " + what);
}

template <typename T>
void read(const Json& j, std::string_view key, T& out) {
    const auto it = j.find(key);
    if (it == j.end())
        return;
    out = it->get<T>();
}

template <typename T>
void read_optional(const Json& j, std::string_view key, std::optional<T>& out) {
    const auto it = j.find(key);
    if (it == j.end())
        return;
    if (it->is_null())
        out.reset();
    else
        out = it->get<T>();
}

std::vector<std::string> strings(const Json& j) {
    return j.get<std::vector<std::string>>();
}

RelationKind relation_from_name(std::string_view name) {
    for (RelationKind r : {RelationKind::Direct, RelationKind::Eventual, RelationKind::Concurrent,
                           RelationKind::InverseDirect, RelationKind::InverseEventual})
        if (relation_name(r) == name)
            return r;
    throw Error(Errc::InvalidPattern, "unknown relation '" + std::string(name) + "'");
}

std::size_t node_index(const Json& j, std::size_t n) {
    const auto text = j.get<std::string>();
    if (text.size() < 2 || text[0] != 'n')
        throw Error(Errc::InvalidPattern, "bad node id '" + text + "'");
    const auto idx = parse_number(std::string_view(text).substr(1));
    if (!idx || *idx < 0 || *idx >= static_cast<double>(n) || *idx != static_cast<std::size_t>(*idx))
        throw Error(Errc::InvalidPattern, "bad node id '" + text + "'");
    return static_cast<std::size_t>(*idx);
}

Json rules_json(const std::vector<ExtensionRule>& rules) {
    Json out = Json::array();
    for (ExtensionRule r : rules)
        out.push_back(rule_name(r));
    return out;
}

std::vector<ExtensionRule> rules_from_json(const Json& j) {
    std::vector<ExtensionRule> out;
    for (const auto& name : strings(j))
        out.push_back(parse_rule(name));
    return out;
}

Json share_json(const CategoricalSummary& s) {
    Json shares = Json::array();
    for (const auto& c : s.shares)
        shares.push_back({{"value", c.value},
                          {"in_count", c.in_count},
                          {"out_count", c.out_count},
                          {"in_share", c.in_share},
                          {"out_share", c.out_share}});
    return {{"attribute", s.attribute}, {"shares", shares}};
}

Json km_json(const std::optional<std::vector<SurvivalPoint>>& curve) {
    if (!curve)
        return nullptr;
    Json out = Json::array();
    for (const auto& p : *curve)
        out.push_back({{"time", p.time},
                       {"survival", p.survival},
                       {"at_risk", p.at_risk},
                       {"events", p.events},
                       {"censored", p.censored}});
    return out;
}

std::string_view outcome_kind_name(OutcomeKind k) {
    return k == OutcomeKind::Continuous ? "continuous" : "categorical";
}

OutcomeKind parse_outcome_kind(std::string_view name) {
    if (name == "continuous")
        return OutcomeKind::Continuous;
    if (name == "categorical")
        return OutcomeKind::Categorical;
    throw Error(Errc::InvalidConfig, "unknown outcome kind '" + std::string(name) + "'");
}

// Turns library parse/type errors into InvalidConfig with the given context.
template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const Json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string(what) + ": " + e.what());
    }
}

} // namespace

Json to_json(const Pattern& p) {
    Json nodes = Json::array();
    for (std::size_t i = 0; i < p.size(); ++i)
        nodes.push_back({{"id", "n" + std::to_string(i)}, {"label", p.label(i)}});
    Json relations = Json::array();
    for (const auto& e : p.edges())
        relations.push_back({{"from", "n" + std::to_string(e.from)},
                             {"to", "n" + std::to_string(e.to)},
                             {"kind", relation_name(e.kind)}});
    return {{"id", p.id()},
            {"key", p.key()},
            {"nodes", nodes},
            {"relations", relations},
            {"foundational", optional_json(p.foundational())}};
}

Pattern pattern_from_json(const Json& j) {
    return guarded("pattern", [&] {
        if (!j.is_object())
            throw Error(Errc::InvalidPattern, "pattern must be an object");
        std::vector<std::string> labels;
        const Json& nodes = j.at("nodes");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (node_index(nodes[i].at("id"), nodes.size()) != i)
                throw Error(Errc::InvalidPattern, "node ids must be n0..n{k-1} in order");
            labels.push_back(nodes[i].at("label").get<std::string>());
        }
        std::vector<RelationEdge> edges;
        for (const Json& r : j.at("relations"))
            edges.push_back({node_index(r.at("from"), labels.size()),
                             node_index(r.at("to"), labels.size()),
                             relation_from_name(r.at("kind").get<std::string>())});
        std::optional<std::string> foundational;
        read_optional(j, "foundational", foundational);
        Pattern p = Pattern::from_edges(std::move(labels), edges, std::move(foundational));
        if (j.contains("id") && j.at("id").get<std::string>() != p.id())
            throw Error(Errc::InvalidPattern, "pattern id " + j.at("id").get<std::string>() +
                                                  " does not match its structure (" + p.id() + ")");
        return p;
    });
}

Json to_json(const InterestVector& v) {
    Json out = Json::object();
    for (std::size_t i = 0; i < v.values.size() && i < kInterestDimensions.size(); ++i)
        out[std::string(kInterestDimensions[i])] = v.values[i];
    return out;
}

Json to_json(const MeasuredPattern& m) {
    Json directions = Json::object();
    for (std::size_t i = 0; i < m.interest.directions.size() && i < kInterestDimensions.size(); ++i)
        directions[std::string(kInterestDimensions[i])] = direction_name(m.interest.directions[i]);
    return {{"pattern", to_json(m.pattern)},
            {"interest", to_json(m.interest)},
            {"directions", directions},
            {"case_count", m.case_count},
            {"oi_degenerate", m.oi_degenerate},
            {"cd_degenerate", m.cd_degenerate},
            {"front", m.front},
            {"error", m.error.empty() ? Json(nullptr) : Json(m.error)}};
}

Json to_json(const Iteration& it) {
    Json candidates = Json::array();
    for (const auto& c : it.candidates)
        candidates.push_back(to_json(c));
    return {{"index", it.index},
            {"candidates", candidates},
            {"front_ids", it.front_ids},
            {"selected_ids", it.selected_ids},
            {"off_front_selected", it.off_front_selected},
            {"rules", rules_json(it.rules)},
            {"min_case_frequency", optional_json(it.min_case_frequency)},
            {"filtered_out", it.filtered_out}};
}

Json to_json(const ValidationReport& r) {
    Json issues = Json::array();
    for (const auto& i : r.issues)
        issues.push_back({{"case_id", i.case_id}, {"attribute", i.attribute}, {"message", i.message}});
    return {{"clean", r.clean()},
            {"case_count", r.case_count},
            {"activity_count", r.activity_count},
            {"event_count", r.event_count},
            {"issues", issues}};
}

Json to_json(const DashboardData& d) {
    Json categorical = Json::array();
    for (const auto& c : d.categorical)
        categorical.push_back(share_json(c));
    Json numeric = Json::array();
    for (const auto& n : d.numeric)
        numeric.push_back({{"attribute", n.attribute},
                           {"lo", n.lo},
                           {"hi", n.hi},
                           {"in_bins", n.in_bins},
                           {"out_bins", n.out_bins},
                           {"in_missing", n.in_missing},
                           {"out_missing", n.out_missing},
                           {"in_median", optional_json(n.in_median)},
                           {"out_median", optional_json(n.out_median)}});
    Json lr = nullptr;
    if (d.log_rank)
        lr = {{"statistic", d.log_rank->statistic},
              {"p_value", d.log_rank->p_value},
              {"observed_a", d.log_rank->observed_a},
              {"expected_a", d.log_rank->expected_a},
              {"variance", d.log_rank->variance}};
    return {{"pattern", to_json(d.pattern)},
            {"interest", to_json(d.measurement.interest)},
            {"case_count", d.measurement.case_count},
            {"oi_degenerate", d.measurement.oi_degenerate},
            {"cd_degenerate", d.measurement.cd_degenerate},
            {"cases_in", d.cases_in},
            {"cases_out", d.cases_out},
            {"outcome_kind", outcome_kind_name(d.outcome_kind)},
            {"categorical", categorical},
            {"numeric", numeric},
            {"median_outcome_in", optional_json(d.median_outcome_in)},
            {"median_outcome_out", optional_json(d.median_outcome_out)},
            {"outcome_shares", d.outcome_shares ? share_json(*d.outcome_shares) : Json(nullptr)},
            {"km_in", km_json(d.km_in)},
            {"km_out", km_json(d.km_out)},
            {"log_rank", lr}};
}

Json to_json(const EvalReport& r) {
    Json strategies = Json::array();
    for (const auto& s : r.strategies)
        strategies.push_back({{"strategy", s.strategy},
                              {"mean_f1", s.mean_f1},
                              {"min_f1", s.min_f1},
                              {"max_f1", s.max_f1},
                              {"mean_features", s.mean_features},
                              {"fold_f1", s.fold_f1},
                              {"fold_features", s.fold_features}});
    return {{"folds", r.folds},
            {"seed", r.seed},
            {"strategies", strategies},
            {"pareto_all_ratio", r.pareto_all_ratio},
            {"mean_pareto_all_ratio", r.mean_pareto_all_ratio}};
}

Json to_json(const GroundTruth& t) {
    Json records = Json::array();
    for (const auto& r : t.records)
        records.push_back({{"case_id", r.case_id},
                           {"planted", r.planted},
                           {"planted_events", r.planted_events},
                           {"decoy", r.decoy},
                           {"noise_redrawn", r.noise_redrawn}});
    return {{"pattern_key", t.pattern_key}, {"planted_count", t.planted_count()}, {"records", records}};
}

Json to_json(const LogSchema& s) {
    return {{"case_column", s.case_column},
            {"activity_column", s.activity_column},
            {"timestamp_column", s.timestamp_column},
            {"end_timestamp_column", optional_json(s.end_timestamp_column)},
            {"outcome_column", s.outcome_column},
            {"outcome_kind", outcome_kind_name(s.outcome_kind)},
            {"outcome_observed_column", optional_json(s.outcome_observed_column)},
            {"numeric_attributes", s.numeric_attributes},
            {"categorical_attributes", s.categorical_attributes},
            {"timestamp_format", s.timestamp_format},
            {"delimiter", std::string(1, s.delimiter)}};
}

LogSchema schema_from_json(const Json& j) {
    return guarded("schema", [&] {
        check_keys(j,
                   {"case_column", "activity_column", "timestamp_column", "end_timestamp_column",
                    "outcome_column", "outcome_kind", "outcome_observed_column", "numeric_attributes",
                    "categorical_attributes", "timestamp_format", "delimiter"},
                   "schema");
        LogSchema s;
        read(j, "case_column", s.case_column);
        read(j, "activity_column", s.activity_column);
        read(j, "timestamp_column", s.timestamp_column);
        read_optional(j, "end_timestamp_column", s.end_timestamp_column);
        read(j, "outcome_column", s.outcome_column);
        if (j.contains("outcome_kind"))
            s.outcome_kind = parse_outcome_kind(j.at("outcome_kind").get<std::string>());
        read_optional(j, "outcome_observed_column", s.outcome_observed_column);
        read(j, "numeric_attributes", s.numeric_attributes);
        read(j, "categorical_attributes", s.categorical_attributes);
        read(j, "timestamp_format", s.timestamp_format);
        if (j.contains("delimiter")) {
            const auto d = j.at("delimiter").get<std::string>();
            if (d.size() != 1)
                throw Error(Errc::InvalidConfig, "delimiter must be a single character");
            s.delimiter = d[0];
        }
        return s;
    });
}

Json to_json(const OracleConfig& o) {
    Json rules = Json::array();
    for (const auto& r : o.rules) {
        Json scope = nullptr;
        if (r.scope)
            scope = Json(std::vector<std::string>(r.scope->begin(), r.scope->end()));
        Json rule = {{"kind", r.kind == ConcurrencyRule::Kind::StartWindow ? "start_window"
                                                                            : "same_interval"},
                     {"scope", scope}};
        if (r.kind == ConcurrencyRule::Kind::StartWindow)
            rule["window"] = format_duration(r.window);
        rules.push_back(rule);
    }
    return {{"rules", rules},
            {"tie_policy", o.tie_policy == TiePolicy::Concurrent ? "concurrent" : "lexicographic"}};
}

OracleConfig oracle_from_json(const Json& j) {
    return guarded("oracle", [&] {
        check_keys(j, {"rules", "tie_policy"}, "oracle");
        OracleConfig o;
        if (j.contains("rules")) {
            for (const Json& r : j.at("rules")) {
                check_keys(r, {"kind", "scope", "window"}, "oracle rule");
                ConcurrencyRule rule;
                const auto kind = r.at("kind").get<std::string>();
                if (kind == "start_window") {
                    rule.kind = ConcurrencyRule::Kind::StartWindow;
                    if (!r.contains("window"))
                        throw Error(Errc::InvalidConfig, "start_window rule needs a window");
                    const Json& w = r.at("window");
                    rule.window = w.is_string() ? parse_duration(w.get<std::string>())
                                                : std::chrono::milliseconds(
                                                      static_cast<long long>(w.get<double>() * 1000.0));
                    if (rule.window.count() < 0)
                        throw Error(Errc::InvalidConfig, "window must be non-negative");
                } else if (kind == "same_interval") {
                    rule.kind = ConcurrencyRule::Kind::SameInterval;
                } else {
                    throw Error(Errc::InvalidConfig, "unknown oracle rule kind '" + kind + "'");
                }
                if (r.contains("scope") && !r.at("scope").is_null()) {
                    const auto labels = strings(r.at("scope"));
                    rule.scope = std::set<std::string>(labels.begin(), labels.end());
                }
                o.rules.push_back(std::move(rule));
            }
        }
        if (j.contains("tie_policy")) {
            const auto t = j.at("tie_policy").get<std::string>();
            if (t == "concurrent")
                o.tie_policy = TiePolicy::Concurrent;
            else if (t == "lexicographic")
                o.tie_policy = TiePolicy::Lexicographic;
            else
                throw Error(Errc::InvalidConfig, "unknown tie policy '" + t + "'");
        }
        return o;
    });
}

Json to_json(const DiscoveryConfig& c) {
    Json directions = Json::object();
    for (std::size_t i = 0; i < c.interest.directions.size() && i < kInterestDimensions.size(); ++i)
        directions[std::string(kInterestDimensions[i])] = direction_name(c.interest.directions[i]);
    return {{"oracle", to_json(c.oracle)},
            {"interest",
             {{"directions", directions},
              {"oi_transform", transform_name(c.interest.oi_transform)},
              {"distance",
               {{"numeric_attributes", c.interest.distance.numeric_attributes},
                {"categorical_attributes", c.interest.distance.categorical_attributes},
                {"aggregation", aggregation_name(c.interest.distance.aggregation)}}}}},
            {"rules", rules_json(c.rules)},
            {"quantifier", quantifier_name(c.quantifier)},
            {"max_iterations", c.max_iterations},
            {"max_pattern_size", c.max_pattern_size},
            {"min_case_frequency", optional_json(c.min_case_frequency)},
            {"filter_mode", filter_mode_name(c.filter_mode)},
            {"max_instances_per_trace", c.max_instances_per_trace},
            {"max_candidates", c.max_candidates},
            {"stop_on_novelty", c.stop_on_novelty},
            {"seed", c.seed}};
}

DiscoveryConfig discovery_config_from_json(const Json& j, const LogSchema& schema) {
    return guarded("discovery", [&] {
        DiscoveryConfig c;
        c.interest.distance.numeric_attributes = schema.numeric_attributes;
        c.interest.distance.categorical_attributes = schema.categorical_attributes;
        if (j.is_null())
            return c;
        check_keys(j,
                   {"oracle", "interest", "rules", "quantifier", "max_iterations", "max_pattern_size",
                    "min_case_frequency", "filter_mode", "max_instances_per_trace", "max_candidates",
                    "stop_on_novelty", "seed"},
                   "discovery");
        if (j.contains("oracle"))
            c.oracle = oracle_from_json(j.at("oracle"));
        if (j.contains("interest")) {
            const Json& in = j.at("interest");
            check_keys(in, {"directions", "oi_transform", "distance"}, "interest");
            if (in.contains("directions")) {
                const Json& d = in.at("directions");
                check_keys(d, {"cc", "oi", "cd"}, "directions");
                for (const auto& [key, value] : d.items())
                    c.interest.directions[dimension_index(key)] = parse_direction(value.get<std::string>());
            }
            if (in.contains("oi_transform"))
                c.interest.oi_transform = parse_transform(in.at("oi_transform").get<std::string>());
            if (in.contains("distance")) {
                const Json& d = in.at("distance");
                check_keys(d, {"numeric_attributes", "categorical_attributes", "aggregation"}, "distance");
                read(d, "numeric_attributes", c.interest.distance.numeric_attributes);
                read(d, "categorical_attributes", c.interest.distance.categorical_attributes);
                if (d.contains("aggregation"))
                    c.interest.distance.aggregation = parse_aggregation(d.at("aggregation").get<std::string>());
            }
        }
        if (j.contains("rules")) {
            const Json& r = j.at("rules");
            c.rules = r.is_string() ? parse_rules(r.get<std::string>()) : rules_from_json(r);
            if (c.rules.empty())
                throw Error(Errc::InvalidConfig, "at least one extension rule is required");
        }
        if (j.contains("quantifier"))
            c.quantifier = parse_quantifier(j.at("quantifier").get<std::string>());
        read(j, "max_iterations", c.max_iterations);
        read(j, "max_pattern_size", c.max_pattern_size);
        read_optional(j, "min_case_frequency", c.min_case_frequency);
        if (j.contains("filter_mode"))
            c.filter_mode = parse_filter_mode(j.at("filter_mode").get<std::string>());
        read(j, "max_instances_per_trace", c.max_instances_per_trace);
        read(j, "max_candidates", c.max_candidates);
        read(j, "stop_on_novelty", c.stop_on_novelty);
        read(j, "seed", c.seed);
        if (c.max_iterations < 1)
            throw Error(Errc::InvalidConfig, "max_iterations must be at least 1");
        if (c.max_pattern_size < 1)
            throw Error(Errc::InvalidConfig, "max_pattern_size must be at least 1");
        return c;
    });
}

Json to_json(const PlantSpec& s) {
    return {{"pattern_blocks", s.pattern_blocks},
            {"plant_probability", s.plant_probability},
            {"decoy_probability", s.decoy_probability},
            {"noise", s.noise},
            {"positive_class", s.positive_class},
            {"negative_class", s.negative_class},
            {"outcome_kind", outcome_kind_name(s.outcome_kind)},
            {"planted_effect", s.planted_effect},
            {"filler_alphabet", s.filler_alphabet},
            {"min_filler", s.min_filler},
            {"max_filler", s.max_filler},
            {"traces", s.traces},
            {"confound", s.confound},
            {"seed", s.seed}};
}

PlantSpec plant_spec_from_json(const Json& j) {
    return guarded("synth spec", [&] {
        check_keys(j,
                   {"pattern_blocks", "plant_probability", "decoy_probability", "noise",
                    "positive_class", "negative_class", "outcome_kind", "planted_effect",
                    "filler_alphabet", "min_filler", "max_filler", "traces", "confound", "seed"},
                   "synth spec");
        PlantSpec s;
        read(j, "pattern_blocks", s.pattern_blocks);
        read(j, "plant_probability", s.plant_probability);
        read(j, "decoy_probability", s.decoy_probability);
        read(j, "noise", s.noise);
        read(j, "positive_class", s.positive_class);
        read(j, "negative_class", s.negative_class);
        if (j.contains("outcome_kind"))
            s.outcome_kind = parse_outcome_kind(j.at("outcome_kind").get<std::string>());
        read(j, "planted_effect", s.planted_effect);
        read(j, "filler_alphabet", s.filler_alphabet);
        read(j, "min_filler", s.min_filler);
        read(j, "max_filler", s.max_filler);
        read(j, "traces", s.traces);
        read(j, "confound", s.confound);
        read(j, "seed", s.seed);
        validate_spec(s);
        return s;
    });
}

Json to_json(const StepRecord& s) {
    return {{"selected_ids", s.selected_ids},
            {"rules", rules_json(s.rules)},
            {"min_case_frequency", optional_json(s.min_case_frequency)}};
}

StepRecord step_from_json(const Json& j) {
    return guarded("step", [&] {
        check_keys(j, {"selected_ids", "rules", "min_case_frequency"}, "step");
        StepRecord s;
        s.selected_ids = strings(j.at("selected_ids"));
        s.rules = rules_from_json(j.at("rules"));
        read_optional(j, "min_case_frequency", s.min_case_frequency);
        return s;
    });
}

std::string log_fingerprint(const EventLog& log) {
    std::ostringstream out;
    write_event_log_csv(log, out);
    return content_hash(out.str());
}

Json log_summary(const EventLog& log) {
    Json summary = {{"cases", log.size()},
                    {"events", log.event_count()},
                    {"activities", std::vector<std::string>(log.activity_alphabet().begin(),
                                                            log.activity_alphabet().end())},
                    {"outcome_kind", outcome_kind_name(log.outcome_kind())},
                    {"fingerprint", log_fingerprint(log)}};
    if (log.outcome_kind() == OutcomeKind::Categorical) {
        std::map<std::string, std::size_t> classes;
        for (const Trace& t : log.traces())
            if (!t.outcome.missing())
                ++classes[t.outcome.category()];
        summary["outcome_classes"] = classes;
    }
    return summary;
}

Json session_to_json(const DiscoverySession& s) {
    Json iterations = Json::array();
    for (const auto& it : s.iterations())
        iterations.push_back(to_json(it));
    Json history = Json::array();
    for (const auto& step : s.history())
        history.push_back(to_json(step));
    Json oracle_warnings = Json::array();
    for (const auto& po : s.partial_orders())
        for (const auto& w : po.warnings())
            oracle_warnings.push_back(w);
    return {{"format", "procpat-session/1"},
            {"status", status_name(s.status())},
            {"config", to_json(s.config())},
            {"schema", to_json(s.log().schema())},
            {"log", log_summary(s.log())},
            {"iterations", iterations},
            {"history", history},
            {"oracle_warnings", oracle_warnings}};
}

SessionRecord session_from_json(const Json& j, const LogSchema& schema) {
    return guarded("session", [&] {
        check_object(j, "session");
        if (j.value("format", "") != "procpat-session/1")
            throw Error(Errc::InvalidConfig, "not a session file");
        SessionRecord r;
        r.config = discovery_config_from_json(j.at("config"), schema);
        r.log_fingerprint = j.at("log").at("fingerprint").get<std::string>();
        for (const Json& step : j.at("history"))
            r.steps.push_back(step_from_json(step));
        r.iterations = j.at("iterations");
        return r;
    });
}

RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
    return guarded("config", [&] {
        check_keys(j, {"log", "discovery", "evaluation", "output_dir"}, "config");
        RunConfig c;
        const Json& log = j.at("log");
        check_keys(log, {"path", "schema"}, "log");
        c.log_path = log.at("path").get<std::string>();
        if (c.log_path.is_relative())
            c.log_path = base_dir / c.log_path;
        if (log.contains("schema"))
            c.schema = schema_from_json(log.at("schema"));
        c.discovery = discovery_config_from_json(j.contains("discovery") ? j.at("discovery") : Json(),
                                                 c.schema);
        if (j.contains("evaluation")) {
            const Json& e = j.at("evaluation");
            check_keys(e, {"folds", "strategies", "seed", "max_depth", "min_samples_leaf", "outcome_bins"},
                       "evaluation");
            read(e, "folds", c.evaluation.folds);
            if (e.contains("strategies")) {
                const Json& s = e.at("strategies");
                if (s.is_string()) {
                    c.evaluation.strategies = parse_strategies(s.get<std::string>());
                } else {
                    c.evaluation.strategies.clear();
                    for (const auto& name : strings(s))
                        c.evaluation.strategies.push_back(parse_strategy(name));
                }
            }
            read(e, "seed", c.evaluation.seed);
            read(e, "max_depth", c.evaluation.tree.max_depth);
            read(e, "min_samples_leaf", c.evaluation.tree.min_samples_leaf);
            c.evaluation.tree.seed = c.evaluation.seed;
            read_optional(e, "outcome_bins", c.evaluation.outcome_bins);
        }
        if (j.contains("output_dir")) {
            c.output_dir = j.at("output_dir").get<std::string>();
            if (c.output_dir.is_relative())
                c.output_dir = base_dir / c.output_dir;
        } else {
            c.output_dir = base_dir / c.output_dir;
        }
        return c;
    });
}

Json parse_json_with_comments(const std::string& text) {
    try {
        return Json::parse(text, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw Error(Errc::InvalidConfig, std::string("malformed JSON: ") + e.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::InvalidConfig, "cannot read config '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return run_config_from_json(parse_json_with_comments(buffer.str()), path.parent_path());
}

std::string dump(const Json& j) {
    return j.dump(2) + "\n";
}

} // namespace procpat
