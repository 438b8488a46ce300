#pragma once

#include "procpat/patterns.hpp"

#include <string_view>
#include <vector>

namespace procpat {

enum class ExtensionRule {
    DirectFollow,    // "df"
    DirectPrecede,   // "dp"
    Concurrent,      // "conc"
    EventualFollow,  // "ef"
    EventualPrecede, // "ep"
    DirectContext,   // "dc" = df + dp + conc
};

/// Whether the added event must relate to every instance node or to at least one.
enum class Quantifier { Any, All };

std::string_view rule_name(ExtensionRule rule) noexcept;
ExtensionRule parse_rule(std::string_view name);
std::vector<ExtensionRule> parse_rules(std::string_view comma_separated);
const std::vector<ExtensionRule>& all_rules();

std::string_view quantifier_name(Quantifier q) noexcept;
Quantifier parse_quantifier(std::string_view name);

/// One-node extensions of `p` grown from a single instance, sorted by key.
std::vector<Pattern> extend_instance(const Pattern& p, const PatternInstance& inst,
                                     const POTrace& po, ExtensionRule rule, Quantifier quantifier,
                                     std::size_t max_size = kDefaultMaxPatternSize);

/// Union of extend_instance over the given instances, deduplicated by key.
std::vector<Pattern> extend_from_index(const Pattern& p, const InstanceIndex& index,
                                       const std::vector<POTrace>& traces,
                                       const std::vector<ExtensionRule>& rules,
                                       Quantifier quantifier,
                                       std::size_t max_size = kDefaultMaxPatternSize);

std::vector<Pattern> extend_all(const Pattern& p, const std::vector<POTrace>& traces,
                                const std::vector<ExtensionRule>& rules, Quantifier quantifier,
                                std::size_t max_size = kDefaultMaxPatternSize,
                                std::size_t instance_cap = kDefaultMaxInstancesPerTrace);

std::vector<Pattern> extend_all(const Pattern& p, const EventLog& log, const OracleConfig& oracle,
                                const std::vector<ExtensionRule>& rules, Quantifier quantifier,
                                std::size_t max_size = kDefaultMaxPatternSize,
                                std::size_t instance_cap = kDefaultMaxInstancesPerTrace);

} // namespace procpat
