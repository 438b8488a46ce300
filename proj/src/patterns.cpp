#include "procpat/patterns.hpp"

#include "procpat/error.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>

namespace procpat {

namespace {

bool is_forward(RelationKind r) {
    return r == RelationKind::Direct || r == RelationKind::Eventual;
}

char relation_code(RelationKind r) {
    switch (r) {
    case RelationKind::Direct: return 'd';
    case RelationKind::Eventual: return 'e';
    case RelationKind::Concurrent: return 'c';
    case RelationKind::InverseDirect: return 'D';
    case RelationKind::InverseEventual: return 'E';
    }
    return '?';
}

void validate(const std::vector<std::string>& labels, const std::vector<RelationKind>& rel,
              std::size_t max_size) {
    const std::size_t n = labels.size();
    if (n == 0)
        throw Error(Errc::InvalidPattern, "pattern has no nodes");
    if (n > max_size)
        throw Error(Errc::PatternTooLarge, std::to_string(n) + " nodes exceed the limit of " +
                                               std::to_string(max_size));
    if (rel.size() != n * n)
        throw Error(Errc::InvalidPattern, "relation matrix has the wrong size");
    for (const auto& l : labels)
        if (l.empty())
            throw Error(Errc::InvalidPattern, "empty node label");
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (rel[v * n + u] != inverse(rel[u * n + v]))
                throw Error(Errc::InvalidPattern, "relation matrix is not antisymmetric");

    // Kahn's algorithm over the direct/eventual graph.
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (u != v && is_forward(rel[u * n + v]))
                ++indegree[v];
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indegree[v] == 0)
            ready.push_back(v);
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::size_t u = ready.back();
        ready.pop_back();
        ++visited;
        for (std::size_t v = 0; v < n; ++v)
            if (u != v && is_forward(rel[u * n + v]) && --indegree[v] == 0)
                ready.push_back(v);
    }
    if (visited != n)
        throw Error(Errc::InvalidPattern, "direct/eventual relations form a cycle");
}

struct Canonical {
    std::vector<std::size_t> order;
    std::string key;
};

Canonical canonicalize(const std::vector<std::string>& labels, const std::vector<RelationKind>& rel) {
    const std::size_t n = labels.size();
    auto r = [&](std::size_t u, std::size_t v) { return rel[u * n + v]; };

    // Interchangeable nodes: same label, concurrent, identical relations to
    // every other node. Only the lowest-index unplaced twin may be placed next.
    std::vector<std::vector<std::size_t>> lower_twins(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (labels[u] != labels[v] || r(u, v) != RelationKind::Concurrent)
                continue;
            bool same = true;
            for (std::size_t w = 0; w < n && same; ++w)
                if (w != u && w != v && r(u, w) != r(v, w))
                    same = false;
            if (same)
                lower_twins[v].push_back(u);
        }
    }
    std::vector<std::vector<std::size_t>> preds(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (u != v && is_forward(r(u, v)))
                preds[v].push_back(u);

    struct Prefix {
        std::vector<std::size_t> order;
        std::vector<bool> placed;
    };
    using Token = std::pair<std::string, std::string>;

    std::vector<Prefix> frontier{Prefix{{}, std::vector<bool>(n, false)}};
    std::vector<Token> tokens;
    for (std::size_t level = 0; level < n; ++level) {
        std::optional<Token> best;
        std::vector<Prefix> next;
        for (const Prefix& pre : frontier) {
            for (std::size_t c = 0; c < n; ++c) {
                if (pre.placed[c])
                    continue;
                bool ok = std::all_of(preds[c].begin(), preds[c].end(),
                                      [&](std::size_t p) { return pre.placed[p]; }) &&
                          std::all_of(lower_twins[c].begin(), lower_twins[c].end(),
                                      [&](std::size_t t) { return pre.placed[t]; });
                if (!ok)
                    continue;
                Token tok{labels[c], {}};
                tok.second.reserve(pre.order.size());
                for (std::size_t p : pre.order)
                    tok.second.push_back(relation_code(r(p, c)));
                if (best && tok > *best)
                    continue;
                if (!best || tok < *best) {
                    best = std::move(tok);
                    next.clear();
                }
                Prefix ext = pre;
                ext.order.push_back(c);
                ext.placed[c] = true;
                next.push_back(std::move(ext));
            }
        }
        tokens.push_back(*best);
        frontier = std::move(next);
    }

    Canonical out;
    out.order = frontier.front().order;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i)
            out.key.push_back(';');
        out.key += std::to_string(tokens[i].first.size());
        out.key.push_back(':');
        out.key += tokens[i].first;
        out.key.push_back('[');
        out.key += tokens[i].second;
        out.key.push_back(']');
    }
    return out;
}

} // namespace

std::string content_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Pattern Pattern::make(std::vector<std::string> labels, std::vector<RelationKind> relations,
                      std::optional<std::string> foundational, std::size_t max_size) {
    validate(labels, relations, max_size);
    const std::size_t n = labels.size();
    if (n == 1 && foundational)
        throw Error(Errc::InvalidPattern, "a single-node pattern has no foundational pattern");
    for (std::size_t i = 0; i < n; ++i)
        relations[i * n + i] = RelationKind::Concurrent;

    Canonical canon = canonicalize(labels, relations);
    Pattern p;
    p.labels_.reserve(n);
    for (std::size_t i : canon.order)
        p.labels_.push_back(labels[i]);
    p.relations_.assign(n * n, RelationKind::Concurrent);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b)
                p.relations_[a * n + b] = relations[canon.order[a] * n + canon.order[b]];
    p.key_ = std::move(canon.key);
    p.id_ = content_hash(p.key_);
    p.foundational_ = std::move(foundational);
    return p;
}

Pattern Pattern::from_edges(std::vector<std::string> labels, const std::vector<RelationEdge>& edges,
                            std::optional<std::string> foundational, std::size_t max_size) {
    const std::size_t n = labels.size();
    if (n > max_size)
        throw Error(Errc::PatternTooLarge, std::to_string(n) + " nodes exceed the limit of " +
                                               std::to_string(max_size));
    std::vector<RelationKind> rel(n * n, RelationKind::Concurrent);
    std::vector<bool> set(n * n, false);
    for (const RelationEdge& e : edges) {
        if (e.from >= n || e.to >= n || e.from == e.to)
            throw Error(Errc::InvalidPattern, "relation refers to an unknown node");
        if (set[e.from * n + e.to])
            throw Error(Errc::InvalidPattern, "node pair listed twice");
        rel[e.from * n + e.to] = e.kind;
        rel[e.to * n + e.from] = inverse(e.kind);
        set[e.from * n + e.to] = set[e.to * n + e.from] = true;
    }
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (!set[u * n + v])
                throw Error(Errc::InvalidPattern, "node pair without a relation");
    return make(std::move(labels), std::move(rel), std::move(foundational), max_size);
}

std::vector<RelationEdge> Pattern::edges() const {
    std::vector<RelationEdge> out;
    const std::size_t n = size();
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            const RelationKind r = relation(u, v);
            if (r == RelationKind::InverseDirect || r == RelationKind::InverseEventual)
                out.push_back({v, u, inverse(r)});
            else
                out.push_back({u, v, r});
        }
    return out;
}

Pattern singleton_pattern(const std::string& activity) {
    return Pattern::make({activity}, {RelationKind::Concurrent});
}

std::string canonical_key(const Pattern& p, std::size_t max_size) {
    if (p.size() > max_size)
        throw Error(Errc::PatternTooLarge, std::to_string(p.size()) + " nodes exceed the limit of " +
                                               std::to_string(max_size));
    return canonicalize(p.labels(), p.relation_matrix()).key;
}

std::vector<PatternInstance> find_instances(const Pattern& p, const POTrace& po, std::size_t cap) {
    std::vector<PatternInstance> out;
    const std::size_t n = p.size();
    if (n > po.size())
        return out;
    std::vector<const std::vector<std::size_t>*> candidates(n);
    for (std::size_t i = 0; i < n; ++i) {
        candidates[i] = &po.events_with_label(p.label(i));
        if (candidates[i]->empty())
            return out;
    }

    std::vector<std::size_t> assign(n);
    std::vector<std::size_t> cursor(n, 0);
    std::size_t depth = 0;
    // Iterative backtracking; nodes are in topological order.
    while (true) {
        const auto& cand = *candidates[depth];
        bool placed = false;
        while (cursor[depth] < cand.size()) {
            const std::size_t e = cand[cursor[depth]++];
            bool ok = true;
            for (std::size_t j = 0; j < depth && ok; ++j)
                ok = assign[j] != e && po.relation_unchecked(assign[j], e) == p.relation(j, depth);
            if (ok) {
                assign[depth] = e;
                placed = true;
                break;
            }
        }
        if (placed) {
            if (depth + 1 == n) {
                out.push_back(PatternInstance{po.case_id(), assign});
                if (out.size() > cap)
                    throw Error(Errc::InstanceCapExceeded,
                                "case '" + po.case_id() + "' has more than " +
                                    std::to_string(cap) + " instances of pattern " + p.id());
            } else {
                ++depth;
                cursor[depth] = 0;
            }
        } else {
            if (depth == 0)
                break;
            --depth;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t InstanceIndex::total() const {
    std::size_t s = 0;
    for (std::size_t c : counts)
        s += c;
    return s;
}

std::size_t InstanceIndex::cases_with_instance() const {
    return static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

InstanceIndex instances_in_log(const Pattern& p, const std::vector<POTrace>& traces,
                               std::size_t cap) {
    InstanceIndex idx;
    idx.case_ids.reserve(traces.size());
    idx.instances.reserve(traces.size());
    idx.counts.reserve(traces.size());
    for (const POTrace& po : traces) {
        idx.case_ids.push_back(po.case_id());
        idx.instances.push_back(find_instances(p, po, cap));
        idx.counts.push_back(idx.instances.back().size());
    }
    return idx;
}

InstanceIndex instances_in_log(const Pattern& p, const EventLog& log, const OracleConfig& oracle,
                               std::size_t cap) {
    return instances_in_log(p, build_partial_orders(log, oracle), cap);
}

} // namespace procpat
