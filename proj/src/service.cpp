#include "procpat/service.hpp"

#include "procpat/error.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <sstream>
#include <vector>

namespace procpat {

struct Service::LogEntry {
    std::string id;
    std::shared_ptr<const EventLog> log;
    Json summary;
};

struct Service::SessionEntry {
    std::string id;
    std::string log_id;
    std::chrono::system_clock::time_point created;
    DiscoverySession session;
    // Held for the whole of a mutation; readers never take it.
    std::mutex writer;
    mutable std::mutex snapshot_mu;
    std::shared_ptr<const Json> snapshot;

    SessionEntry(std::string id_, std::string log_id_, DiscoverySession s)
        : id(std::move(id_)), log_id(std::move(log_id_)), created(std::chrono::system_clock::now()),
          session(std::move(s)) {}

    std::shared_ptr<const Json> view() const {
        std::lock_guard lock(snapshot_mu);
        return snapshot;
    }

    void publish() {
        Json j = session_to_json(session);
        j["session_id"] = id;
        j["log_id"] = log_id;
        auto next = std::make_shared<const Json>(std::move(j));
        std::lock_guard lock(snapshot_mu);
        snapshot = std::move(next);
    }
};

namespace {

ApiResponse error_response(int status, std::string_view code, const std::string& message) {
    return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

int status_for(Errc code) {
    switch (code) {
    case Errc::UnknownPatternId: return 404;
    default: return 400;
    }
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/')
            ++i;
        const std::size_t j = path.find('/', i);
        const std::size_t end = j == std::string_view::npos ? path.size() : j;
        if (end > i)
            out.emplace_back(path.substr(i, end - i));
        i = end;
    }
    return out;
}

std::string make_id(const char* prefix, std::uint64_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%06llu", prefix, static_cast<unsigned long long>(n));
    return buf;
}

const Json* find_pattern(const Json& snapshot, const std::string& pattern_id) {
    const Json& its = snapshot.at("iterations");
    for (auto it = its.rbegin(); it != its.rend(); ++it)
        for (const Json& c : it->at("candidates"))
            if (c.at("pattern").at("id") == pattern_id)
                return &c.at("pattern");
    return nullptr;
}

} // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {}
Service::~Service() = default;

ApiResponse Service::handle(std::string_view method, std::string_view path, const std::string& body) {
    const auto parts = split_path(path);
    try {
        Json payload;
        if (method == "POST") {
            if (body.size() > options_.max_upload_bytes)
                return error_response(413, "PayloadTooLarge",
                                      "request body exceeds " + std::to_string(options_.max_upload_bytes) +
                                          " bytes");
            try {
                payload = body.empty() ? Json::object() : Json::parse(body);
            } catch (const Json::parse_error& e) {
                return error_response(400, "MalformedJson", e.what());
            }
            if (!payload.is_object())
                return error_response(400, "MalformedJson", "request body must be a JSON object");
        }

        if (parts.size() == 1 && parts[0] == "health" && method == "GET")
            return {200, {{"status", "ok"}}};
        if (parts.size() == 1 && parts[0] == "logs" && method == "POST")
            return post_log(payload);
        if (!parts.empty() && parts[0] == "sessions") {
            if (parts.size() == 1 && method == "POST")
                return post_session(payload);
            if (parts.size() == 2 && method == "GET")
                return get_session(parts[1]);
            if (parts.size() == 3 && parts[2] == "extend" && method == "POST")
                return extend(parts[1], payload);
            if (parts.size() == 3 && parts[2] == "export" && method == "GET")
                return export_session(parts[1]);
            if (parts.size() == 5 && parts[2] == "patterns" && parts[4] == "dashboard" && method == "GET")
                return dashboard(parts[1], parts[3]);
        }
        return error_response(404, "NotFound", std::string(method) + " " + std::string(path));
    } catch (const Error& e) {
        return error_response(status_for(e.code()), errc_name(e.code()), e.what());
    } catch (const Json::exception& e) {
        return error_response(400, "InvalidRequest", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "Internal", e.what());
    }
}

ApiResponse Service::post_log(const Json& body) {
    for (const auto& [key, value] : body.items())
        if (key != "schema" && key != "csv" && key != "path")
            return error_response(400, "InvalidRequest", "unknown key '" + key + "'");
    if (body.contains("csv") == body.contains("path"))
        return error_response(400, "InvalidRequest", "give exactly one of 'csv' or 'path'");
    const LogSchema schema = body.contains("schema") ? schema_from_json(body.at("schema")) : LogSchema{};

    std::vector<std::string> warnings;
    std::shared_ptr<const EventLog> log;
    if (body.contains("csv")) {
        std::istringstream in(body.at("csv").get<std::string>());
        log = std::make_shared<const EventLog>(parse_event_log(in, schema, &warnings));
    } else {
        if (options_.logs_dir.empty())
            return error_response(400, "InvalidRequest", "server-side log paths are disabled");
        namespace fs = std::filesystem;
        const fs::path root = fs::weakly_canonical(options_.logs_dir);
        const fs::path target = fs::weakly_canonical(root / body.at("path").get<std::string>());
        const auto rel = target.lexically_relative(root);
        if (rel.empty() || *rel.begin() == "..")
            return error_response(400, "InvalidRequest", "path escapes the logs directory");
        if (!fs::is_regular_file(target))
            return error_response(404, "NotFound", "no log file '" + rel.string() + "'");
        if (fs::file_size(target) > options_.max_upload_bytes)
            return error_response(413, "PayloadTooLarge", "log file exceeds the size cap");
        log = std::make_shared<const EventLog>(load_event_log(target, schema, &warnings));
    }

    auto entry = std::make_shared<LogEntry>();
    entry->log = log;
    entry->summary = log_summary(*log);
    {
        std::unique_lock lock(registry_mu_);
        entry->id = make_id("log-", next_log_++);
        logs_[entry->id] = entry;
    }
    return {201,
            {{"log_id", entry->id},
             {"summary", entry->summary},
             {"warnings", warnings},
             {"validation", to_json(validate_log(*log))}}};
}

ApiResponse Service::post_session(const Json& body) {
    for (const auto& [key, value] : body.items())
        if (key != "log_id" && key != "config")
            return error_response(400, "InvalidRequest", "unknown key '" + key + "'");
    if (!body.contains("log_id"))
        return error_response(400, "InvalidRequest", "missing 'log_id'");
    const std::string log_id = body.at("log_id").get<std::string>();
    std::shared_ptr<LogEntry> log;
    {
        std::shared_lock lock(registry_mu_);
        if (auto it = logs_.find(log_id); it != logs_.end())
            log = it->second;
    }
    if (!log)
        return error_response(404, "UnknownLogId", "no log '" + log_id + "'");

    const Json config = body.value("config", Json::object());
    DiscoveryConfig cfg = discovery_config_from_json(config, log->log->schema());
    if (!config.contains("max_candidates"))
        cfg.max_candidates = options_.max_candidates;

    std::string id;
    {
        std::unique_lock lock(registry_mu_);
        id = make_id("ses-", next_session_++);
    }
    auto entry = std::make_shared<SessionEntry>(id, log_id, DiscoverySession(log->log, std::move(cfg)));
    entry->publish();
    {
        std::unique_lock lock(registry_mu_);
        sessions_[id] = entry;
    }
    const auto& its = entry->session.iterations();
    return {201,
            {{"session_id", id},
             {"log_id", log_id},
             {"status", status_name(entry->session.status())},
             {"iteration", to_json(its.front())}}};
}

std::shared_ptr<Service::SessionEntry> Service::find_session(const std::string& id) const {
    std::shared_lock lock(registry_mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

ApiResponse Service::get_session(const std::string& id) {
    const auto entry = find_session(id);
    if (!entry)
        return error_response(404, "UnknownSessionId", "no session '" + id + "'");
    return {200, *entry->view()};
}

ApiResponse Service::export_session(const std::string& id) {
    const auto entry = find_session(id);
    if (!entry)
        return error_response(404, "UnknownSessionId", "no session '" + id + "'");
    Json j = *entry->view();
    j.erase("session_id");
    j.erase("log_id");
    return {200, j};
}

ApiResponse Service::extend(const std::string& id, const Json& body) {
    const auto entry = find_session(id);
    if (!entry)
        return error_response(404, "UnknownSessionId", "no session '" + id + "'");
    for (const auto& [key, value] : body.items())
        if (key != "pattern_ids" && key != "rules" && key != "min_case_frequency")
            return error_response(400, "InvalidRequest", "unknown key '" + key + "'");
    if (!body.contains("pattern_ids") || !body.at("pattern_ids").is_array())
        return error_response(400, "InvalidRequest", "'pattern_ids' must be an array of ids");

    std::unique_lock lock(entry->writer, std::try_to_lock);
    if (!lock.owns_lock())
        return error_response(409, "StepInProgress", "session '" + id + "' is already extending");

    DiscoverySession& s = entry->session;
    const auto ids = body.at("pattern_ids").get<std::vector<std::string>>();
    std::vector<ExtensionRule> rules = s.config().rules;
    if (body.contains("rules")) {
        const Json& r = body.at("rules");
        rules = r.is_string() ? parse_rules(r.get<std::string>()) : std::vector<ExtensionRule>{};
        if (r.is_array())
            for (const Json& name : r)
                rules.push_back(parse_rule(name.get<std::string>()));
    }
    std::optional<std::size_t> min = s.config().min_case_frequency;
    if (body.contains("min_case_frequency"))
        min = body.at("min_case_frequency").is_null()
                  ? std::nullopt
                  : std::optional<std::size_t>(body.at("min_case_frequency").get<std::size_t>());

    try {
        const Iteration& it = s.step(ids, rules, min);
        entry->publish();
        return {200, {{"session_id", id}, {"status", status_name(s.status())}, {"iteration", to_json(it)}}};
    } catch (const Error& e) {
        if (e.code() != Errc::NoExtensionPossible)
            throw;
        entry->publish();
        return {200,
                {{"session_id", id},
                 {"status", status_name(s.status())},
                 {"iteration", nullptr},
                 {"message", e.what()}}};
    }
}

ApiResponse Service::dashboard(const std::string& id, const std::string& pattern_id) {
    const auto entry = find_session(id);
    if (!entry)
        return error_response(404, "UnknownSessionId", "no session '" + id + "'");
    const auto snap = entry->view();
    const Json* pj = find_pattern(*snap, pattern_id);
    if (!pj)
        return error_response(404, "UnknownPatternId", "no pattern '" + pattern_id + "' in session");
    // Only immutable session state is touched here, so no writer lock.
    return {200, to_json(entry->session.dashboard(pattern_from_json(*pj)))};
}

std::unique_lock<std::mutex> Service::hold_session(std::string_view session_id) {
    const auto entry = find_session(std::string(session_id));
    if (!entry)
        throw Error(Errc::InvalidArgument, "no session '" + std::string(session_id) + "'");
    return std::unique_lock<std::mutex>(entry->writer);
}

// --- HTTP --------------------------------------------------------------------

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;

    explicit Impl(Service& s) : service(s) {
        // Leave room for the JSON wrapper around an uploaded CSV.
        server.set_payload_max_length(service.options().max_upload_bytes + (1u << 20));
        auto route = [this](const httplib::Request& req, httplib::Response& res) {
            const ApiResponse r = service.handle(req.method, req.path, req.body);
            res.status = r.status;
            res.set_header("Access-Control-Allow-Origin", "*");
            res.set_content(r.body.dump(), "application/json");
        };
        server.Get(".*", route);
        server.Post(".*", route);
        server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Origin", "*");
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });
    }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }
bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() {
    if (impl_)
        impl_->server.stop();
}
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

} // namespace procpat
