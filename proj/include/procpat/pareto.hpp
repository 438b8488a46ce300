#pragma once

#include "procpat/interest.hpp"
#include "procpat/patterns.hpp"

#include <span>
#include <string>
#include <vector>

namespace procpat {

struct MeasuredPattern {
    Pattern pattern;
    InterestVector interest;
    std::size_t case_count = 0;
    bool oi_degenerate = false;
    bool cd_degenerate = false;
    /// Non-empty when measurement failed; the interest values are then zero.
    std::string error;
    bool front = false;
};

/// No worse in every dimension and strictly better in at least one.
bool dominates(const InterestVector& a, const InterestVector& b);
bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Direction> directions);

/// Indices of the non-dominated points, ascending. Exact comparisons; equal
/// points are all kept.
std::vector<std::size_t> non_dominated(const std::vector<std::vector<double>>& points,
                                       std::span<const Direction> directions);

/// Sets `front` on every item and returns the front members, ordered by
/// descending first dimension, ties by pattern id.
std::vector<MeasuredPattern> pareto_front(std::vector<MeasuredPattern>& items);

} // namespace procpat
