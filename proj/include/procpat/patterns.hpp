#pragma once

#include "procpat/log.hpp"
#include "procpat/partial_order.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace procpat {

inline constexpr std::size_t kDefaultMaxPatternSize = 10;
inline constexpr std::size_t kDefaultMaxInstancesPerTrace = 10'000;

/// One entry of a pattern's relation list; `kind` is Direct, Eventual or Concurrent.
struct RelationEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    RelationKind kind = RelationKind::Direct;

    friend bool operator==(const RelationEdge&, const RelationEdge&) = default;
};

/// Labeled node set with a relation for every ordered node pair.
///
/// Patterns are always stored in canonical node order, which is a topological
/// order of the direct/eventual graph, so two isomorphic patterns compare
/// equal member-for-member.
class Pattern {
public:
    /// `relations` is row-major |labels| x |labels|; relation(u, v) describes
    /// the ordered pair and must be the inverse of relation(v, u). The diagonal
    /// is ignored.
    static Pattern make(std::vector<std::string> labels, std::vector<RelationKind> relations,
                        std::optional<std::string> foundational = std::nullopt,
                        std::size_t max_size = kDefaultMaxPatternSize);

    /// Every unordered node pair must appear exactly once in `edges`.
    static Pattern from_edges(std::vector<std::string> labels, const std::vector<RelationEdge>& edges,
                              std::optional<std::string> foundational = std::nullopt,
                              std::size_t max_size = kDefaultMaxPatternSize);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& label(std::size_t n) const { return labels_.at(n); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    RelationKind relation(std::size_t u, std::size_t v) const { return relations_[u * size() + v]; }
    const std::vector<RelationKind>& relation_matrix() const noexcept { return relations_; }

    /// Relations with from < to, in canonical orientation.
    std::vector<RelationEdge> edges() const;

    const std::string& key() const noexcept { return key_; }
    /// 16 hex digits; hash of key().
    const std::string& id() const noexcept { return id_; }
    const std::optional<std::string>& foundational() const noexcept { return foundational_; }

    /// Equality is isomorphism; the foundational link is not part of it.
    friend bool operator==(const Pattern& a, const Pattern& b) { return a.key_ == b.key_; }

private:
    std::vector<std::string> labels_;
    std::vector<RelationKind> relations_;
    std::string key_;
    std::string id_;
    std::optional<std::string> foundational_;
};

Pattern singleton_pattern(const std::string& activity);

/// Canonical form key, recomputed from scratch (minimum over topological
/// node orders, pruned by label/relation twins).
std::string canonical_key(const Pattern& p, std::size_t max_size = kDefaultMaxPatternSize);

/// Stable 64-bit FNV-1a hash of `text` as 16 lowercase hex digits.
std::string content_hash(std::string_view text);

struct PatternInstance {
    std::string case_id;
    /// events[node] = event index in the POTrace.
    std::vector<std::size_t> events;

    friend bool operator==(const PatternInstance&, const PatternInstance&) = default;
    friend auto operator<=>(const PatternInstance& a, const PatternInstance& b) {
        return a.events <=> b.events;
    }
};

/// All injective label- and relation-preserving assignments, sorted by event
/// indices. Throws InstanceCapExceeded when more than `cap` exist.
std::vector<PatternInstance> find_instances(const Pattern& p, const POTrace& po,
                                            std::size_t cap = kDefaultMaxInstancesPerTrace);

struct InstanceIndex {
    std::vector<std::string> case_ids;
    std::vector<std::vector<PatternInstance>> instances;
    /// PC-freq per trace, canonical order.
    std::vector<std::size_t> counts;

    std::size_t total() const;
    std::size_t cases_with_instance() const;
};

InstanceIndex instances_in_log(const Pattern& p, const std::vector<POTrace>& traces,
                               std::size_t cap = kDefaultMaxInstancesPerTrace);
InstanceIndex instances_in_log(const Pattern& p, const EventLog& log, const OracleConfig& oracle,
                               std::size_t cap = kDefaultMaxInstancesPerTrace);

} // namespace procpat
