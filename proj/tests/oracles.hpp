#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library beyond its data types.

#include "procpat/interest.hpp"
#include "procpat/partial_order.hpp"
#include "procpat/patterns.hpp"
#include "procpat/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using namespace procpat;

// Reachability by depth-first search from every node.
inline std::vector<std::vector<bool>> dfs_reach(const BoolMatrix& adj) {
    const std::size_t n = adj.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> stack;
        for (std::size_t v = 0; v < n; ++v)
            if (adj(s, v))
                stack.push_back(v);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            if (reach[s][u])
                continue;
            reach[s][u] = true;
            for (std::size_t v = 0; v < n; ++v)
                if (adj(u, v) && !reach[s][v])
                    stack.push_back(v);
        }
    }
    return reach;
}

inline RelationKind classify(const BoolMatrix& adj, const std::vector<std::vector<bool>>& reach,
                             std::size_t a, std::size_t b) {
    if (adj(a, b))
        return RelationKind::Direct;
    if (adj(b, a))
        return RelationKind::InverseDirect;
    if (reach[a][b])
        return RelationKind::Eventual;
    if (reach[b][a])
        return RelationKind::InverseEventual;
    return RelationKind::Concurrent;
}

// Random block chain over `n` events drawn from `alphabet`.
inline POTrace random_po(Rng& rng, std::size_t n, const std::vector<std::string>& alphabet,
                         const std::string& case_id = "t") {
    std::vector<std::string> acts;
    for (std::size_t i = 0; i < n; ++i)
        acts.push_back(alphabet[rng.below(alphabet.size())]);
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < n; ++i) {
        if (blocks.empty() || rng.bernoulli(0.55))
            blocks.push_back({});
        blocks.back().push_back(i);
    }
    return POTrace::from_blocks(case_id, acts, blocks);
}

// Pattern copied from k random events of a trace, or with random relations.
inline Pattern random_pattern(Rng& rng, const POTrace& po, std::size_t k,
                              const std::vector<std::string>& alphabet) {
    if (po.size() >= k && rng.bernoulli(0.6)) {
        std::vector<std::size_t> ev(po.size());
        for (std::size_t i = 0; i < ev.size(); ++i)
            ev[i] = i;
        rng.shuffle(ev);
        ev.resize(k);
        std::vector<std::string> labels;
        std::vector<RelationKind> rel(k * k, RelationKind::Concurrent);
        for (std::size_t u = 0; u < k; ++u) {
            labels.push_back(po.activity(ev[u]));
            for (std::size_t v = 0; v < k; ++v)
                if (u != v)
                    rel[u * k + v] = relation(po, ev[u], ev[v]);
        }
        return Pattern::make(labels, rel);
    }
    // A random topological order keeps the draw acyclic.
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i)
        labels.push_back(alphabet[rng.below(alphabet.size())]);
    std::vector<RelationKind> rel(k * k, RelationKind::Concurrent);
    for (std::size_t u = 0; u < k; ++u)
        for (std::size_t v = u + 1; v < k; ++v) {
            const auto pick = rng.below(3);
            const RelationKind r = pick == 0   ? RelationKind::Direct
                                   : pick == 1 ? RelationKind::Eventual
                                               : RelationKind::Concurrent;
            rel[u * k + v] = r;
            rel[v * k + u] = inverse(r);
        }
    return Pattern::make(labels, rel);
}

// Every injective node-to-event assignment, checked pair by pair.
inline std::vector<std::vector<std::size_t>> brute_instances(const Pattern& p, const POTrace& po) {
    const auto reach = dfs_reach(po.adjacency());
    const std::size_t k = p.size();
    const std::size_t n = po.size();
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> assign(k);
    std::vector<bool> used(n, false);
    auto rec = [&](auto& self, std::size_t depth) -> void {
        if (depth == k) {
            for (std::size_t u = 0; u < k; ++u) {
                if (po.activity(assign[u]) != p.label(u))
                    return;
                for (std::size_t v = 0; v < k; ++v)
                    if (u != v && classify(po.adjacency(), reach, assign[u], assign[v]) != p.relation(u, v))
                        return;
            }
            out.push_back(assign);
            return;
        }
        for (std::size_t e = 0; e < n; ++e) {
            if (used[e])
                continue;
            used[e] = true;
            assign[depth] = e;
            self(self, depth + 1);
            used[e] = false;
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

inline bool no_worse(double a, double b, Direction d) {
    return d == Direction::Maximize ? a >= b : a <= b;
}

inline bool strictly_better(double a, double b, Direction d) {
    return d == Direction::Maximize ? a > b : a < b;
}

inline std::vector<std::size_t> brute_front(const std::vector<std::vector<double>>& pts,
                                            const std::vector<Direction>& dirs) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
            if (i == j)
                continue;
            bool all = true, any = false;
            for (std::size_t d = 0; d < dirs.size(); ++d) {
                all = all && no_worse(pts[j][d], pts[i][d], dirs[d]);
                any = any || strictly_better(pts[j][d], pts[i][d], dirs[d]);
            }
            dominated = all && any;
        }
        if (!dominated)
            out.push_back(i);
    }
    return out;
}

// rank_i = 1 + #smaller + (#equal - 1) / 2, counted pairwise.
inline std::vector<double> pairwise_ranks(const std::vector<double>& x) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double less = 0, equal = 0;
        for (double v : x) {
            less += v < x[i];
            equal += v == x[i];
        }
        r[i] = 1.0 + less + (equal - 1.0) / 2.0;
    }
    return r;
}

inline double rank_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = pairwise_ranks(x);
    const auto ry = pairwise_ranks(y);
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += rx[i];
        sy += ry[i];
        sxx += rx[i] * rx[i];
        syy += ry[i] * ry[i];
        sxy += rx[i] * ry[i];
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    if (vx == 0 || vy == 0)
        return 0.0;
    return cov / std::sqrt(vx * vy);
}

inline double entropy(const std::vector<std::string>& labels) {
    std::map<std::string, double> c;
    for (const auto& l : labels)
        c[l] += 1;
    double h = 0;
    for (const auto& [k, v] : c) {
        const double p = v / static_cast<double>(labels.size());
        h -= p * std::log2(p);
    }
    return h;
}

inline double info_gain(const std::vector<long long>& f, const std::vector<std::string>& labels) {
    std::map<long long, std::vector<std::string>> groups;
    for (std::size_t i = 0; i < f.size(); ++i)
        groups[f[i]].push_back(labels[i]);
    double cond = 0;
    for (const auto& [v, g] : groups)
        cond += static_cast<double>(g.size()) / static_cast<double>(f.size()) * entropy(g);
    return entropy(labels) - cond;
}

// Keys of every one-node extension of p allowed by `wanted` relations (as seen
// from the instance node), using brute-force instances and DFS relations.
inline std::set<std::string> brute_extensions(const Pattern& p, const std::vector<POTrace>& traces,
                                              const std::set<RelationKind>& wanted, bool all_nodes) {
    std::set<std::string> keys;
    const std::size_t k = p.size();
    for (const auto& po : traces) {
        const auto reach = dfs_reach(po.adjacency());
        for (const auto& inst : brute_instances(p, po)) {
            for (std::size_t e = 0; e < po.size(); ++e) {
                if (std::find(inst.begin(), inst.end(), e) != inst.end())
                    continue;
                bool ok = false;
                for (RelationKind w : wanted) {
                    std::size_t hits = 0;
                    for (std::size_t node : inst)
                        hits += classify(po.adjacency(), reach, node, e) == w;
                    ok = ok || (all_nodes ? hits == k : hits > 0);
                }
                if (!ok)
                    continue;
                std::vector<std::size_t> ev = inst;
                ev.push_back(e);
                std::vector<std::string> labels;
                std::vector<RelationKind> rel((k + 1) * (k + 1), RelationKind::Concurrent);
                for (std::size_t u = 0; u <= k; ++u) {
                    labels.push_back(po.activity(ev[u]));
                    for (std::size_t v = 0; v <= k; ++v)
                        if (u != v)
                            rel[u * (k + 1) + v] = classify(po.adjacency(), reach, ev[u], ev[v]);
                }
                keys.insert(Pattern::make(labels, rel).key());
            }
        }
    }
    return keys;
}

// Pattern left after deleting node `drop`.
inline Pattern without_node(const Pattern& p, std::size_t drop) {
    std::vector<std::string> labels;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (i != drop) {
            keep.push_back(i);
            labels.push_back(p.label(i));
        }
    const std::size_t m = keep.size();
    std::vector<RelationKind> rel(m * m, RelationKind::Concurrent);
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v)
            if (u != v)
                rel[u * m + v] = p.relation(keep[u], keep[v]);
    return Pattern::make(labels, rel);
}

// Every (|p|+1)-node pattern occurring somewhere that has p as an induced
// sub-pattern, found by enumerating event tuples directly.
inline std::set<std::string> brute_supersets(const Pattern& p, const std::vector<POTrace>& traces) {
    std::set<std::string> keys;
    const std::size_t m = p.size() + 1;
    for (const auto& po : traces) {
        const auto reach = dfs_reach(po.adjacency());
        const std::size_t n = po.size();
        if (n < m)
            continue;
        // Ascending index subsets suffice: the pattern is order-free.
        std::vector<std::size_t> pick(m);
        auto rec = [&](auto& self, std::size_t depth, std::size_t from) -> void {
            if (depth == m) {
                std::vector<std::string> labels;
                std::vector<RelationKind> rel(m * m, RelationKind::Concurrent);
                for (std::size_t u = 0; u < m; ++u) {
                    labels.push_back(po.activity(pick[u]));
                    for (std::size_t v = 0; v < m; ++v)
                        if (u != v)
                            rel[u * m + v] = classify(po.adjacency(), reach, pick[u], pick[v]);
                }
                const Pattern q = Pattern::make(labels, rel);
                for (std::size_t drop = 0; drop < m; ++drop)
                    if (without_node(q, drop).key() == p.key()) {
                        keys.insert(q.key());
                        break;
                    }
                return;
            }
            for (std::size_t e = from; e < n; ++e) {
                pick[depth] = e;
                self(self, depth + 1, e + 1);
            }
        };
        rec(rec, 0, 0);
    }
    return keys;
}

} // namespace oracle
