#include "procpat/partial_order.hpp"

#include "procpat/error.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace procpat {

namespace {

constexpr std::int64_t kDayMs = 86'400'000;

std::int64_t day_of(Timestamp t) {
    const auto ms = t.time_since_epoch().count();
    return ms >= 0 ? ms / kDayMs : -((-ms + kDayMs - 1) / kDayMs);
}

const std::vector<std::size_t> kNoEvents;

} // namespace

RelationKind inverse(RelationKind r) noexcept {
    switch (r) {
    case RelationKind::Direct: return RelationKind::InverseDirect;
    case RelationKind::Eventual: return RelationKind::InverseEventual;
    case RelationKind::Concurrent: return RelationKind::Concurrent;
    case RelationKind::InverseDirect: return RelationKind::Direct;
    case RelationKind::InverseEventual: return RelationKind::Eventual;
    }
    return r;
}

std::string_view relation_name(RelationKind r) noexcept {
    switch (r) {
    case RelationKind::Direct: return "direct";
    case RelationKind::Eventual: return "eventual";
    case RelationKind::Concurrent: return "concurrent";
    case RelationKind::InverseDirect: return "inverse-direct";
    case RelationKind::InverseEventual: return "inverse-eventual";
    }
    return "?";
}

std::chrono::milliseconds parse_duration(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'))
        ++i;
    double amount = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + i, amount);
    if (i == 0 || ec != std::errc{} || ptr != text.data() + i)
        throw Error(Errc::InvalidConfig, "bad duration '" + std::string(text) + "'");
    const std::string_view unit = text.substr(i);
    double scale = 0.0;
    if (unit.empty() || unit == "s")
        scale = 1000.0;
    else if (unit == "ms")
        scale = 1.0;
    else if (unit == "m")
        scale = 60'000.0;
    else if (unit == "h")
        scale = 3'600'000.0;
    else if (unit == "d")
        scale = 86'400'000.0;
    else if (unit == "w")
        scale = 7 * 86'400'000.0;
    else
        throw Error(Errc::InvalidConfig, "bad duration unit in '" + std::string(text) + "'");
    return std::chrono::milliseconds{static_cast<std::int64_t>(amount * scale + 0.5)};
}

std::string format_duration(std::chrono::milliseconds d) {
    const auto ms = d.count();
    struct Unit { std::int64_t size; const char* suffix; };
    for (Unit u : {Unit{7 * kDayMs, "w"}, Unit{kDayMs, "d"}, Unit{3'600'000, "h"},
                   Unit{60'000, "m"}, Unit{1000, "s"}}) {
        if (ms != 0 && ms % u.size == 0)
            return std::to_string(ms / u.size) + u.suffix;
    }
    return std::to_string(ms) + "ms";
}

BoolMatrix transitive_closure(const BoolMatrix& adjacency) {
    BoolMatrix r = adjacency;
    const std::size_t n = r.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r(i, k))
                for (std::size_t j = 0; j < n; ++j)
                    if (r(k, j))
                        r.set(i, j);
    return r;
}

POTrace POTrace::from_blocks(std::string case_id, const std::vector<std::string>& activities,
                             const std::vector<std::vector<std::size_t>>& blocks,
                             std::vector<std::string> warnings) {
    const std::size_t n = activities.size();
    std::vector<bool> seen(n, false);
    POTrace po;
    po.case_id_ = std::move(case_id);
    po.warnings_ = std::move(warnings);
    for (const auto& block : blocks) {
        if (block.empty())
            throw Error(Errc::InvalidArgument, "empty concurrency block");
        std::vector<std::size_t> sorted = block;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> members;
        for (std::size_t src : sorted) {
            if (src >= n || seen[src])
                throw Error(Errc::InvalidArgument, "blocks do not partition the events");
            seen[src] = true;
            members.push_back(po.activities_.size());
            po.activities_.push_back(activities[src]);
            po.source_.push_back(src);
            po.block_of_.push_back(po.blocks_.size());
        }
        po.blocks_.push_back(std::move(members));
    }
    if (po.activities_.size() != n)
        throw Error(Errc::InvalidArgument, "blocks do not cover every event");

    po.adjacency_ = BoolMatrix(n);
    for (std::size_t b = 0; b + 1 < po.blocks_.size(); ++b)
        for (std::size_t from : po.blocks_[b])
            for (std::size_t to : po.blocks_[b + 1])
                po.adjacency_.set(from, to);
    po.reach_ = transitive_closure(po.adjacency_);

    po.relations_.assign(n * n, RelationKind::Concurrent);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            RelationKind r = RelationKind::Concurrent;
            if (po.adjacency_(i, j))
                r = RelationKind::Direct;
            else if (po.reach_(i, j))
                r = RelationKind::Eventual;
            else if (po.adjacency_(j, i))
                r = RelationKind::InverseDirect;
            else if (po.reach_(j, i))
                r = RelationKind::InverseEventual;
            po.relations_[i * n + j] = r;
        }
        po.by_label_[po.activities_[i]].push_back(i);
    }
    return po;
}

const std::vector<std::size_t>& POTrace::events_with_label(const std::string& label) const {
    auto it = by_label_.find(label);
    return it == by_label_.end() ? kNoEvents : it->second;
}

POTrace build_partial_order(const Trace& trace, const OracleConfig& oracle) {
    const auto& events = trace.events;
    const std::size_t n = events.size();
    if (n == 0)
        throw Error(Errc::InvalidArgument, "trace '" + trace.case_id + "' is empty");

    constexpr std::size_t kFree = static_cast<std::size_t>(-1);
    std::vector<std::size_t> block_id(n, kFree);
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::string> warnings;

    auto claim = [&](const std::vector<std::size_t>& group, std::size_t rule_no) {
        if (group.size() < 2)
            return;
        std::vector<std::size_t> free;
        std::set<std::size_t> taken_blocks;
        for (std::size_t e : group) {
            if (block_id[e] == kFree)
                free.push_back(e);
            else
                taken_blocks.insert(block_id[e]);
        }
        if (!taken_blocks.empty()) {
            const bool same_block = free.empty() && taken_blocks.size() == 1 &&
                                    groups[*taken_blocks.begin()].size() == group.size();
            if (!same_block)
                warnings.push_back("RuleConflict: case '" + trace.case_id + "', rule " +
                                   std::to_string(rule_no) +
                                   " overlaps a block formed by an earlier rule; first rule wins");
        }
        if (free.size() < 2)
            return;
        for (std::size_t e : free)
            block_id[e] = groups.size();
        groups.push_back(std::move(free));
    };

    for (std::size_t r = 0; r < oracle.rules.size(); ++r) {
        const ConcurrencyRule& rule = oracle.rules[r];
        if (rule.window.count() < 0)
            throw Error(Errc::InvalidConfig, "negative concurrency window");
        std::vector<std::size_t> scoped;
        for (std::size_t i = 0; i < n; ++i)
            if (rule.applies_to(events[i].activity))
                scoped.push_back(i);
        if (rule.kind == ConcurrencyRule::Kind::StartWindow) {
            std::vector<std::size_t> group;
            for (std::size_t e : scoped) {
                if (!group.empty() && events[e].start - events[group.front()].start > rule.window) {
                    claim(group, r);
                    group.clear();
                }
                group.push_back(e);
            }
            claim(group, r);
        } else {
            std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> by_days;
            std::vector<std::pair<std::int64_t, std::int64_t>> order;
            for (std::size_t e : scoped) {
                const auto key = std::make_pair(day_of(events[e].start), day_of(events[e].end));
                auto& bucket = by_days[key];
                if (bucket.empty())
                    order.push_back(key);
                bucket.push_back(e);
            }
            for (const auto& key : order)
                claim(by_days[key], r);
        }
    }

    if (oracle.tie_policy == TiePolicy::Concurrent) {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            std::vector<std::size_t> tied;
            while (j < n && events[j].start == events[i].start) {
                if (block_id[j] == kFree)
                    tied.push_back(j);
                ++j;
            }
            if (tied.size() >= 2) {
                for (std::size_t e : tied)
                    block_id[e] = groups.size();
                groups.push_back(std::move(tied));
            }
            i = j;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (block_id[i] == kFree) {
            block_id[i] = groups.size();
            groups.push_back({i});
        }
    }

    struct BlockKey {
        Timestamp start;
        std::string label;
        std::size_t first;
    };
    std::vector<BlockKey> keys;
    keys.reserve(groups.size());
    for (const auto& g : groups) {
        BlockKey k{events[g.front()].start, {}, g.front()};
        for (std::size_t e : g) {
            k.start = std::min(k.start, events[e].start);
            k.first = std::min(k.first, e);
        }
        if (oracle.tie_policy == TiePolicy::Lexicographic && g.size() == 1)
            k.label = events[g.front()].activity;
        keys.push_back(std::move(k));
    }
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ka = keys[a];
        const auto& kb = keys[b];
        if (ka.start != kb.start)
            return ka.start < kb.start;
        if (ka.label != kb.label)
            return ka.label < kb.label;
        return ka.first < kb.first;
    });

    std::vector<std::vector<std::size_t>> blocks;
    blocks.reserve(groups.size());
    for (std::size_t g : order)
        blocks.push_back(groups[g]);
    std::vector<std::string> activities;
    activities.reserve(n);
    for (const Event& e : events)
        activities.push_back(e.activity);
    return POTrace::from_blocks(trace.case_id, activities, blocks, std::move(warnings));
}

std::vector<POTrace> build_partial_orders(const EventLog& log, const OracleConfig& oracle) {
    std::vector<POTrace> out;
    out.reserve(log.size());
    for (const Trace& t : log.traces())
        out.push_back(build_partial_order(t, oracle));
    return out;
}

RelationKind relation(const POTrace& po, std::size_t e, std::size_t e2) {
    if (e >= po.size() || e2 >= po.size())
        throw Error(Errc::IndexOutOfRange, "event index out of range for case '" +
                                               po.case_id() + "'");
    if (e == e2)
        throw Error(Errc::InvalidArgument, "relation of an event with itself");
    return po.relation_unchecked(e, e2);
}

} // namespace procpat
