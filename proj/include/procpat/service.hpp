#pragma once

#include "procpat/discovery.hpp"
#include "procpat/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>

namespace procpat {

struct ServiceOptions {
    /// Root for server-side log paths in POST /logs; empty disables them.
    std::filesystem::path logs_dir;
    std::size_t max_upload_bytes = 100u * 1024u * 1024u;
    std::size_t max_candidates = 100'000;
};

struct ApiResponse {
    int status = 200;
    Json body;
};

/// In-memory registry of uploaded logs and discovery sessions behind the
/// JSON API. Transport-independent; HttpServer binds it to HTTP.
class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();

    ApiResponse handle(std::string_view method, std::string_view path, const std::string& body);

    /// Holds a session's writer lock so tests can observe the 409 path.
    std::unique_lock<std::mutex> hold_session(std::string_view session_id);

    const ServiceOptions& options() const noexcept { return options_; }

private:
    struct LogEntry;
    struct SessionEntry;

    ApiResponse post_log(const Json& body);
    ApiResponse post_session(const Json& body);
    ApiResponse get_session(const std::string& id);
    ApiResponse extend(const std::string& id, const Json& body);
    ApiResponse dashboard(const std::string& id, const std::string& pattern_id);
    ApiResponse export_session(const std::string& id);

    std::shared_ptr<SessionEntry> find_session(const std::string& id) const;

    ServiceOptions options_;
    mutable std::shared_mutex registry_mu_;
    std::map<std::string, std::shared_ptr<LogEntry>> logs_;
    std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
    std::uint64_t next_log_ = 1;
    std::uint64_t next_session_ = 1;
};

/// cpp-httplib front end for a Service.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    /// Binds to an ephemeral port and returns it.
    int bind_any_port(const std::string& host = "127.0.0.1");
    bool bind(const std::string& host, int port);
    /// Blocks until stop().
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace procpat
