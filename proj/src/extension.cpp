#include "procpat/extension.hpp"

#include "procpat/error.hpp"

#include <algorithm>
#include <map>

namespace procpat {

namespace {

using PatternMap = std::map<std::string, Pattern>;

// Relation the candidate event must have as seen from an instance node.
RelationKind required_relation(ExtensionRule rule) {
    switch (rule) {
    case ExtensionRule::DirectFollow: return RelationKind::Direct;
    case ExtensionRule::DirectPrecede: return RelationKind::InverseDirect;
    case ExtensionRule::Concurrent: return RelationKind::Concurrent;
    case ExtensionRule::EventualFollow: return RelationKind::Eventual;
    case ExtensionRule::EventualPrecede: return RelationKind::InverseEventual;
    case ExtensionRule::DirectContext: break;
    }
    throw Error(Errc::InvalidArgument, "direct-context has no single relation");
}

void check_size(const Pattern& p, std::size_t max_size) {
    if (p.size() + 1 > max_size)
        throw Error(Errc::PatternTooLarge, "extending a " + std::to_string(p.size()) +
                                               "-node pattern exceeds the limit of " +
                                               std::to_string(max_size));
}

void extend_simple(const Pattern& p, const PatternInstance& inst, const POTrace& po,
                   ExtensionRule rule, Quantifier quantifier, std::size_t max_size,
                   PatternMap& out) {
    const RelationKind want = required_relation(rule);
    const std::size_t n = p.size();
    const std::size_t m = n + 1;
    for (std::size_t e = 0; e < po.size(); ++e) {
        if (std::find(inst.events.begin(), inst.events.end(), e) != inst.events.end())
            continue;
        std::size_t hits = 0;
        for (std::size_t node : inst.events)
            if (po.relation_unchecked(node, e) == want)
                ++hits;
        const bool qualifies = quantifier == Quantifier::All ? hits == n : hits > 0;
        if (!qualifies)
            continue;

        std::vector<std::string> labels = p.labels();
        labels.push_back(po.activity(e));
        std::vector<RelationKind> rel(m * m, RelationKind::Concurrent);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                if (u != v)
                    rel[u * m + v] = p.relation(u, v);
        for (std::size_t u = 0; u < n; ++u) {
            const RelationKind r = po.relation_unchecked(inst.events[u], e);
            rel[u * m + n] = r;
            rel[n * m + u] = inverse(r);
        }
        Pattern ext = Pattern::make(std::move(labels), std::move(rel), p.id(), max_size);
        out.try_emplace(ext.key(), std::move(ext));
    }
}

void extend_into(const Pattern& p, const PatternInstance& inst, const POTrace& po,
                 ExtensionRule rule, Quantifier quantifier, std::size_t max_size, PatternMap& out) {
    if (rule == ExtensionRule::DirectContext) {
        for (ExtensionRule r :
             {ExtensionRule::DirectFollow, ExtensionRule::DirectPrecede, ExtensionRule::Concurrent})
            extend_simple(p, inst, po, r, quantifier, max_size, out);
    } else {
        extend_simple(p, inst, po, rule, quantifier, max_size, out);
    }
}

std::vector<Pattern> values_of(PatternMap&& m) {
    std::vector<Pattern> out;
    out.reserve(m.size());
    for (auto& [key, p] : m)
        out.push_back(std::move(p));
    return out;
}

} // namespace

std::string_view rule_name(ExtensionRule rule) noexcept {
    switch (rule) {
    case ExtensionRule::DirectFollow: return "df";
    case ExtensionRule::DirectPrecede: return "dp";
    case ExtensionRule::Concurrent: return "conc";
    case ExtensionRule::EventualFollow: return "ef";
    case ExtensionRule::EventualPrecede: return "ep";
    case ExtensionRule::DirectContext: return "dc";
    }
    return "?";
}

ExtensionRule parse_rule(std::string_view name) {
    for (ExtensionRule r : all_rules())
        if (rule_name(r) == name)
            return r;
    throw Error(Errc::InvalidConfig, "unknown extension rule '" + std::string(name) + "'");
}

std::vector<ExtensionRule> parse_rules(std::string_view text) {
    std::vector<ExtensionRule> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        if (!item.empty())
            out.push_back(parse_rule(item));
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

const std::vector<ExtensionRule>& all_rules() {
    static const std::vector<ExtensionRule> rules{
        ExtensionRule::DirectFollow,   ExtensionRule::DirectPrecede,
        ExtensionRule::Concurrent,     ExtensionRule::EventualFollow,
        ExtensionRule::EventualPrecede, ExtensionRule::DirectContext};
    return rules;
}

std::string_view quantifier_name(Quantifier q) noexcept {
    return q == Quantifier::All ? "all" : "any";
}

Quantifier parse_quantifier(std::string_view name) {
    if (name == "any")
        return Quantifier::Any;
    if (name == "all")
        return Quantifier::All;
    throw Error(Errc::InvalidConfig, "unknown quantifier '" + std::string(name) + "'");
}

std::vector<Pattern> extend_instance(const Pattern& p, const PatternInstance& inst,
                                     const POTrace& po, ExtensionRule rule, Quantifier quantifier,
                                     std::size_t max_size) {
    check_size(p, max_size);
    if (inst.events.size() != p.size())
        throw Error(Errc::InvalidArgument, "instance does not match the pattern's size");
    PatternMap out;
    extend_into(p, inst, po, rule, quantifier, max_size, out);
    return values_of(std::move(out));
}

std::vector<Pattern> extend_from_index(const Pattern& p, const InstanceIndex& index,
                                       const std::vector<POTrace>& traces,
                                       const std::vector<ExtensionRule>& rules,
                                       Quantifier quantifier, std::size_t max_size) {
    check_size(p, max_size);
    if (index.instances.size() != traces.size())
        throw Error(Errc::LengthMismatch, "instance index and trace list differ in length");
    PatternMap out;
    for (std::size_t t = 0; t < traces.size(); ++t)
        for (const PatternInstance& inst : index.instances[t])
            for (ExtensionRule rule : rules)
                extend_into(p, inst, traces[t], rule, quantifier, max_size, out);
    return values_of(std::move(out));
}

std::vector<Pattern> extend_all(const Pattern& p, const std::vector<POTrace>& traces,
                                const std::vector<ExtensionRule>& rules, Quantifier quantifier,
                                std::size_t max_size, std::size_t instance_cap) {
    check_size(p, max_size);
    return extend_from_index(p, instances_in_log(p, traces, instance_cap), traces, rules,
                             quantifier, max_size);
}

std::vector<Pattern> extend_all(const Pattern& p, const EventLog& log, const OracleConfig& oracle,
                                const std::vector<ExtensionRule>& rules, Quantifier quantifier,
                                std::size_t max_size, std::size_t instance_cap) {
    return extend_all(p, build_partial_orders(log, oracle), rules, quantifier, max_size,
                      instance_cap);
}

} // namespace procpat
