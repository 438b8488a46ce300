#pragma once

#include "procpat/extension.hpp"
#include "procpat/interest.hpp"
#include "procpat/log.hpp"
#include "procpat/pareto.hpp"
#include "procpat/partial_order.hpp"
#include "procpat/patterns.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace procpat {

/// Whether the minimum case frequency is applied before or after the front is computed.
enum class FilterMode { PreFront, PostFront };

std::string_view filter_mode_name(FilterMode m) noexcept;
FilterMode parse_filter_mode(std::string_view name);

struct DiscoveryConfig {
    OracleConfig oracle;
    InterestConfig interest;
    std::vector<ExtensionRule> rules = all_rules();
    Quantifier quantifier = Quantifier::Any;
    std::size_t max_iterations = 3;
    std::size_t max_pattern_size = kDefaultMaxPatternSize;
    std::optional<std::size_t> min_case_frequency;
    FilterMode filter_mode = FilterMode::PreFront;
    std::size_t max_instances_per_trace = kDefaultMaxInstancesPerTrace;
    std::size_t max_candidates = 100'000;
    /// Stop automated runs once an iteration contributes no unseen pattern.
    bool stop_on_novelty = true;
    std::uint64_t seed = 0;

    friend bool operator==(const DiscoveryConfig&, const DiscoveryConfig&) = default;
};

struct Iteration {
    std::size_t index = 0;
    /// Sorted by pattern key.
    std::vector<MeasuredPattern> candidates;
    /// Front members in pareto_front order.
    std::vector<std::string> front_ids;
    /// Foundational patterns extended to produce this iteration (empty at 0).
    std::vector<std::string> selected_ids;
    /// Subset of selected_ids that were not on the previous front.
    std::vector<std::string> off_front_selected;
    std::vector<ExtensionRule> rules;
    std::optional<std::size_t> min_case_frequency;
    std::size_t filtered_out = 0;

    const MeasuredPattern* find(std::string_view pattern_id) const;
};

enum class SessionStatus { AwaitingSelection, Extending, Done };
std::string_view status_name(SessionStatus s) noexcept;

/// One user (or automated) selection, enough to replay a session.
struct StepRecord {
    std::vector<std::string> selected_ids;
    std::vector<ExtensionRule> rules;
    std::optional<std::size_t> min_case_frequency;
};

/// Iteration history for one log and one configuration. Not thread-safe;
/// callers serialize mutations.
class DiscoverySession {
public:
    /// Measures every alphabet singleton as iteration 0.
    DiscoverySession(std::shared_ptr<const EventLog> log, DiscoveryConfig cfg);

    /// Extends the selected patterns of the latest iteration. Throws
    /// UnknownPatternId, or NoExtensionPossible after marking the session done.
    const Iteration& step(const std::vector<std::string>& selected_ids,
                          const std::vector<ExtensionRule>& rules,
                          std::optional<std::size_t> min_case_frequency = std::nullopt);

    /// step() with the configured rules and threshold.
    const Iteration& step(const std::vector<std::string>& selected_ids);

    const std::vector<Iteration>& iterations() const noexcept { return iterations_; }
    SessionStatus status() const noexcept { return status_; }
    const DiscoveryConfig& config() const noexcept { return cfg_; }
    const EventLog& log() const noexcept { return *log_; }
    std::shared_ptr<const EventLog> shared_log() const noexcept { return log_; }
    const std::vector<POTrace>& partial_orders() const noexcept { return traces_; }

    /// Latest occurrence of the pattern across iterations.
    const MeasuredPattern* find(std::string_view pattern_id) const;
    InstanceIndex instances(const Pattern& p) const;
    DashboardData dashboard(const Pattern& p) const;

    std::vector<StepRecord> history() const;
    void mark_done() noexcept { status_ = SessionStatus::Done; }

private:
    std::vector<MeasuredPattern> measure_all(const std::vector<Pattern>& patterns) const;
    void finish_iteration(Iteration& it, std::optional<std::size_t> min_case_frequency) const;

    std::shared_ptr<const EventLog> log_;
    DiscoveryConfig cfg_;
    std::vector<POTrace> traces_;
    DistanceContext distance_;
    std::vector<Iteration> iterations_;
    SessionStatus status_ = SessionStatus::AwaitingSelection;
};

/// Patterns whose case count (CC * |L|) is at least `min_case_frequency`.
std::vector<MeasuredPattern> threshold_filter(std::vector<MeasuredPattern> candidates,
                                              std::size_t min_case_frequency);

/// Runs step() on the whole current front until max_iterations iterations
/// exist, no extension is possible, or (when enabled) nothing new appears.
void auto_discover(DiscoverySession& session);
std::vector<Iteration> auto_discover(std::shared_ptr<const EventLog> log, const DiscoveryConfig& cfg);
std::vector<Iteration> auto_discover(const EventLog& log, const DiscoveryConfig& cfg);

/// Union of iteration fronts, first occurrence wins, in iteration order.
std::vector<MeasuredPattern> discovered_patterns(const std::vector<Iteration>& iterations);

/// Every candidate of every iteration, deduplicated by key.
std::vector<MeasuredPattern> all_candidates(const std::vector<Iteration>& iterations);

/// Re-runs a recorded session from iteration 0.
DiscoverySession replay_session(std::shared_ptr<const EventLog> log, const DiscoveryConfig& cfg,
                                const std::vector<StepRecord>& steps);

} // namespace procpat
