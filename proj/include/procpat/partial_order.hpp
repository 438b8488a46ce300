#pragma once

#include "procpat/log.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace procpat {

/// Ordering of an ordered event pair (e, e2) in a partially ordered trace.
enum class RelationKind : std::uint8_t {
    Direct,          // edge e -> e2
    Eventual,        // path e ~> e2 of length >= 2, no edge
    Concurrent,      // no path either way
    InverseDirect,   // edge e2 -> e
    InverseEventual, // path e2 ~> e, no edge
};

RelationKind inverse(RelationKind r) noexcept;
std::string_view relation_name(RelationKind r) noexcept;

struct ConcurrencyRule {
    enum class Kind { StartWindow, SameInterval };

    Kind kind = Kind::StartWindow;
    /// Activities the rule considers; nullopt means every activity.
    std::optional<std::set<std::string>> scope;
    /// Maximum start-time spread inside one group (StartWindow only).
    std::chrono::milliseconds window{0};

    bool applies_to(const std::string& activity) const {
        return !scope || scope->count(activity) > 0;
    }

    friend bool operator==(const ConcurrencyRule&, const ConcurrencyRule&) = default;
};

/// How equal start timestamps not grouped by any rule are ordered.
enum class TiePolicy { Concurrent, Lexicographic };

struct OracleConfig {
    std::vector<ConcurrencyRule> rules;
    TiePolicy tie_policy = TiePolicy::Concurrent;

    friend bool operator==(const OracleConfig&, const OracleConfig&) = default;
};

/// "3d", "12h", "30m", "45s", "250ms"; a bare number is read as seconds.
std::chrono::milliseconds parse_duration(std::string_view text);
std::string format_duration(std::chrono::milliseconds d);

/// Dense square 0/1 matrix.
class BoolMatrix {
public:
    BoolMatrix() = default;
    explicit BoolMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

    std::size_t size() const noexcept { return n_; }
    bool operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v = true) { cells_[i * n_ + j] = v ? 1 : 0; }

    friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// Boolean reachability over paths of length >= 1 (Warshall).
BoolMatrix transitive_closure(const BoolMatrix& adjacency);

/// A trace recast as a block-chain DAG.
///
/// Events are stored block-major: every event of block k precedes every event
/// of block k+1 in index order, so the adjacency matrix is upper triangular.
/// `source_index` maps an event back to its position in the original trace.
class POTrace {
public:
    /// `blocks` partitions [0, activities.size()) and is listed in DAG order.
    static POTrace from_blocks(std::string case_id, const std::vector<std::string>& activities,
                               const std::vector<std::vector<std::size_t>>& blocks,
                               std::vector<std::string> warnings = {});

    const std::string& case_id() const noexcept { return case_id_; }
    std::size_t size() const noexcept { return activities_.size(); }
    const std::string& activity(std::size_t e) const { return activities_.at(e); }
    const std::vector<std::string>& activities() const noexcept { return activities_; }
    std::size_t source_index(std::size_t e) const { return source_.at(e); }
    const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
    std::size_t block_of(std::size_t e) const { return block_of_.at(e); }
    const BoolMatrix& adjacency() const noexcept { return adjacency_; }
    const BoolMatrix& reachability() const noexcept { return reach_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Event indices carrying `label`, ascending; empty when absent.
    const std::vector<std::size_t>& events_with_label(const std::string& label) const;

    /// Unchecked relation lookup; e != e2 and both in range.
    RelationKind relation_unchecked(std::size_t e, std::size_t e2) const {
        return relations_[e * activities_.size() + e2];
    }

private:
    std::string case_id_;
    std::vector<std::string> activities_;
    std::vector<std::size_t> source_;
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<std::size_t> block_of_;
    BoolMatrix adjacency_;
    BoolMatrix reach_;
    std::vector<RelationKind> relations_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> by_label_;
    std::vector<std::string> warnings_;
};

/// Applies the conversion oracle. Rule conflicts resolve first-rule-wins and
/// are reported through POTrace::warnings().
POTrace build_partial_order(const Trace& trace, const OracleConfig& oracle);

/// One POTrace per trace, in the log's canonical order.
std::vector<POTrace> build_partial_orders(const EventLog& log, const OracleConfig& oracle);

/// Checked relation of the ordered pair (e, e2).
RelationKind relation(const POTrace& po, std::size_t e, std::size_t e2);

} // namespace procpat
