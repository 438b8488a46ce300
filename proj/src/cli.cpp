#include "procpat/cli.hpp"

#include "procpat/error.hpp"
#include "procpat/json_io.hpp"
#include "procpat/service.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace procpat {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, "cannot write '" + path.string() + "'");
    out << content;
    if (!out)
        throw Error(Errc::Io, "failed writing '" + path.string() + "'");
}

std::string read_file(const fs::path& path, Errc code) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(code, "cannot read '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int exit_code_for(Errc code) {
    switch (code) {
    case Errc::InvalidConfig:
    case Errc::InvalidArgument: return kExitConfig;
    default: return kExitData;
    }
}

EventLog load_log(const RunConfig& cfg, std::ostream& err) {
    std::vector<std::string> warnings;
    EventLog log = load_event_log(cfg.log_path, cfg.schema, &warnings);
    for (const auto& w : warnings)
        err << "warning: " << w << "\n";
    return log;
}

std::string fronts_csv(const std::vector<Iteration>& its) {
    std::ostringstream out;
    out << "iteration,rank,pattern_id,key,nodes,cc,oi,cd,case_count\n";
    for (const Iteration& it : its)
        for (std::size_t r = 0; r < it.front_ids.size(); ++r) {
            const MeasuredPattern* m = it.find(it.front_ids[r]);
            out << it.index << ',' << r << ',' << m->pattern.id() << ",\"" << m->pattern.key() << "\","
                << m->pattern.size() << ',' << format_number(m->interest.cc()) << ','
                << format_number(m->interest.oi()) << ',' << format_number(m->interest.cd()) << ','
                << m->case_count << '\n';
        }
    return out.str();
}

Json patterns_json(const std::vector<Iteration>& its) {
    Json discovered = Json::array();
    for (const auto& m : discovered_patterns(its))
        discovered.push_back(to_json(m));
    return {{"format", "procpat-patterns/1"},
            {"iterations", its.size()},
            {"candidates_total", all_candidates(its).size()},
            {"patterns", discovered}};
}

struct DiscoverArgs {
    std::string config;
    bool automatic = false;
    std::optional<std::size_t> iterations;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

int cmd_discover(const DiscoverArgs& a, std::ostream& out, std::ostream& err) {
    RunConfig cfg = load_run_config(a.config);
    if (a.iterations)
        cfg.discovery.max_iterations = *a.iterations;
    if (a.seed)
        cfg.discovery.seed = *a.seed;
    if (a.out)
        cfg.output_dir = *a.out;
    if (cfg.discovery.max_iterations < 1)
        throw Error(Errc::InvalidConfig, "--iterations must be at least 1");
    auto log = std::make_shared<const EventLog>(load_log(cfg, err));

    // Without --auto only the singleton analysis runs; later steps are
    // driven interactively through the service.
    DiscoverySession session(log, cfg.discovery);
    for (const auto& po : session.partial_orders())
        for (const auto& w : po.warnings())
            err << "warning: " << w << "\n";
    if (a.automatic)
        auto_discover(session);
    const std::vector<Iteration>& its = session.iterations();

    write_file(cfg.output_dir / "session.json", dump(session_to_json(session)));
    write_file(cfg.output_dir / "patterns.json", dump(patterns_json(its)));
    write_file(cfg.output_dir / "fronts.csv", fronts_csv(its));
    std::vector<Pattern> features;
    for (const auto& m : discovered_patterns(its))
        features.push_back(m.pattern);
    std::ostringstream fcsv;
    write_feature_csv(encode_features(features, *log, session.partial_orders(),
                                      cfg.discovery.max_instances_per_trace),
                      fcsv);
    write_file(cfg.output_dir / "features.csv", fcsv.str());

    for (const Iteration& it : its)
        out << "iteration " << it.index << ": " << it.candidates.size() << " candidates, "
            << it.front_ids.size() << " on the front\n";
    out << "wrote " << (cfg.output_dir / "session.json").string() << "\n";
    return kExitOk;
}

struct EvaluateArgs {
    std::string config;
    std::optional<std::size_t> folds;
    std::optional<std::string> strategies;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    RunConfig cfg = load_run_config(a.config);
    if (a.folds)
        cfg.evaluation.folds = *a.folds;
    if (a.strategies)
        cfg.evaluation.strategies = parse_strategies(*a.strategies);
    if (a.seed) {
        cfg.evaluation.seed = *a.seed;
        cfg.evaluation.tree.seed = *a.seed;
    }
    if (a.out)
        cfg.output_dir = *a.out;
    if (cfg.evaluation.folds < 2)
        throw Error(Errc::InvalidConfig, "--folds must be at least 2");
    EventLog log = load_log(cfg, err);
    if (log.outcome_kind() == OutcomeKind::Continuous) {
        if (!cfg.evaluation.outcome_bins)
            throw Error(Errc::InvalidConfig,
                        "continuous outcomes need evaluation.outcome_bins to form classes");
        log = bin_outcome_equal_frequency(log, *cfg.evaluation.outcome_bins);
    }
    const EvalReport report = cross_validate(log, cfg.discovery, cfg.evaluation.strategies,
                                             cfg.evaluation.folds, cfg.evaluation.seed, cfg.evaluation.tree);
    write_file(cfg.output_dir / "eval_report.json", dump(to_json(report)));
    std::ostringstream csv;
    write_eval_csv(report, csv);
    write_file(cfg.output_dir / "eval_report.csv", csv.str());

    out << std::left << std::setw(12) << "strategy" << std::setw(10) << "mean_f1" << std::setw(10)
        << "min_f1" << std::setw(10) << "max_f1" << "features\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& s : report.strategies)
        out << std::setw(12) << s.strategy << std::setw(10) << s.mean_f1 << std::setw(10) << s.min_f1
            << std::setw(10) << s.max_f1 << std::setprecision(1) << s.mean_features << std::setprecision(4)
            << "\n";
    out << "pareto/all feature ratio: " << report.mean_pareto_all_ratio << "\n";
    return kExitOk;
}

int cmd_synth(const std::optional<std::string>& spec_path, const std::string& out_dir, std::ostream& out) {
    PlantSpec spec;
    if (spec_path)
        spec = plant_spec_from_json(parse_json_with_comments(read_file(*spec_path, Errc::InvalidConfig)));
    validate_spec(spec);
    const SynthResult syn = generate(spec);
    const fs::path dir = out_dir;
    std::ostringstream csv;
    write_event_log_csv(syn.log, csv);
    write_file(dir / "log.csv", csv.str());
    Json truth = to_json(syn.truth);
    truth["planted_pattern"] = to_json(planted_pattern(spec));
    truth["spec"] = to_json(spec);
    write_file(dir / "ground_truth.json", dump(truth));

    // A runnable config next to the log.
    DiscoveryConfig dc;
    dc.oracle = synth_oracle();
    dc.interest.distance.numeric_attributes = synth_schema(spec).numeric_attributes;
    dc.interest.distance.categorical_attributes = synth_schema(spec).categorical_attributes;
    Json discovery = to_json(dc);
    Json evaluation = {{"folds", 5}, {"strategies", "pareto,single:cc,single:oi,single:cd,all"}, {"seed", 0}};
    if (spec.outcome_kind == OutcomeKind::Continuous)
        evaluation["outcome_bins"] = 3;
    const Json config = {{"log", {{"path", "log.csv"}, {"schema", to_json(synth_schema(spec))}}},
                         {"discovery", discovery},
                         {"evaluation", evaluation},
                         {"output_dir", "out"}};
    write_file(dir / "config.json", dump(config));
    out << "wrote " << syn.log.size() << " traces (" << syn.truth.planted_count() << " planted) to "
        << (dir / "log.csv").string() << "\n";
    return kExitOk;
}

int cmd_replay(const std::string& config_path, const std::string& session_path,
               const std::optional<std::string>& out_dir, std::ostream& out, std::ostream& err) {
    RunConfig cfg = load_run_config(config_path);
    if (out_dir)
        cfg.output_dir = *out_dir;
    const Json recorded = parse_json_with_comments(read_file(session_path, Errc::InvalidConfig));
    const SessionRecord rec = session_from_json(recorded, cfg.schema);
    auto log = std::make_shared<const EventLog>(load_log(cfg, err));
    if (log_fingerprint(*log) != rec.log_fingerprint)
        throw Error(Errc::InvalidState, "the log differs from the one the session was recorded on");
    const DiscoverySession replayed = replay_session(log, rec.config, rec.steps);
    const Json again = session_to_json(replayed);
    write_file(cfg.output_dir / "replayed_session.json", dump(again));
    if (again.at("iterations") != rec.iterations) {
        err << "replay diverged from the recorded session\n";
        return kExitData;
    }
    out << "replayed " << rec.steps.size() << " steps; " << replayed.iterations().size()
        << " iterations identical\n";
    return kExitOk;
}

int cmd_serve(const std::string& host, int port, const std::optional<std::string>& logs_dir,
              std::size_t max_upload_mb, std::ostream& out) {
    ServiceOptions opts;
    if (logs_dir)
        opts.logs_dir = *logs_dir;
    opts.max_upload_bytes = max_upload_mb * 1024u * 1024u;
    Service service(opts);
    HttpServer server(service);
    if (!server.bind(host, port))
        throw Error(Errc::InvalidConfig, "cannot bind " + host + ":" + std::to_string(port));
    out << "listening on http://" << host << ":" << port << std::endl;
    return server.listen_after_bind() ? kExitOk : kExitData;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-objective process pattern discovery"};
    app.require_subcommand(1);

    DiscoverArgs d;
    auto* discover = app.add_subcommand("discover", "Run pattern discovery from a config file");
    discover->add_option("config", d.config, "Config file (JSON, comments allowed)")->required();
    discover->add_flag("--auto", d.automatic, "Extend the whole front each iteration");
    discover->add_option("--iterations", d.iterations, "Maximum number of iterations");
    discover->add_option("--seed", d.seed, "Seed recorded with the run");
    discover->add_option("--out", d.out, "Output directory (overrides the config)");

    EvaluateArgs e;
    auto* evaluate = app.add_subcommand("evaluate", "Cross-validate feature-set strategies");
    evaluate->add_option("config", e.config, "Config file")->required();
    evaluate->add_option("--folds", e.folds, "Number of folds");
    evaluate->add_option("--strategies", e.strategies, "Comma-separated strategies");
    evaluate->add_option("--seed", e.seed, "Fold seed");
    evaluate->add_option("--out", e.out, "Output directory (overrides the config)");

    std::optional<std::string> spec_path;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic log with a planted pattern");
    synth->add_option("out_dir", synth_out, "Directory for log.csv, ground_truth.json and config.json")
        ->required();
    synth->add_option("--spec", spec_path, "Generator spec (JSON)");

    std::string replay_config, replay_session_path;
    std::optional<std::string> replay_out;
    auto* replay = app.add_subcommand("replay", "Replay a recorded session and compare");
    replay->add_option("config", replay_config, "Config file")->required();
    replay->add_option("session", replay_session_path, "Recorded session JSON")->required();
    replay->add_option("--out", replay_out, "Output directory (overrides the config)");

    std::string host = "127.0.0.1";
    int port = 8765;
    std::optional<std::string> logs_dir;
    std::size_t max_upload_mb = 100;
    auto* serve = app.add_subcommand("serve", "Start the HTTP/JSON service");
    serve->add_option("--host", host, "Interface to bind");
    serve->add_option("--port", port, "Port");
    serve->add_option("--logs-dir", logs_dir, "Directory for server-side log paths");
    serve->add_option("--max-upload-mb", max_upload_mb, "Upload size cap in MiB");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& pe) {
        err << "error: " << pe.what() << "\n";
        return kExitConfig;
    }

    try {
        if (discover->parsed())
            return cmd_discover(d, out, err);
        if (evaluate->parsed())
            return cmd_evaluate(e, out, err);
        if (synth->parsed())
            return cmd_synth(spec_path, synth_out, out);
        if (replay->parsed())
            return cmd_replay(replay_config, replay_session_path, replay_out, out, err);
        if (serve->parsed())
            return cmd_serve(host, port, logs_dir, max_upload_mb, out);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_code_for(ex.code());
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitData;
    }
    return kExitConfig;
}

} // namespace procpat
