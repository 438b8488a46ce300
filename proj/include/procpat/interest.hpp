#pragma once

#include "procpat/log.hpp"
#include "procpat/patterns.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace procpat {

enum class Direction { Maximize, Minimize };
enum class OiTransform { Raw, Abs };
enum class CdAggregation { PairMean, Literal };

std::string_view direction_name(Direction d) noexcept;
Direction parse_direction(std::string_view name);
std::string_view transform_name(OiTransform t) noexcept;
OiTransform parse_transform(std::string_view name);
std::string_view aggregation_name(CdAggregation a) noexcept;
CdAggregation parse_aggregation(std::string_view name);

/// Interest dimensions in vector order.
inline constexpr std::array<std::string_view, 3> kInterestDimensions{"cc", "oi", "cd"};
std::size_t dimension_index(std::string_view name);

struct InterestVector {
    std::vector<double> values;
    std::vector<Direction> directions;

    double cc() const { return values.at(0); }
    double oi() const { return values.at(1); }
    double cd() const { return values.at(2); }

    friend bool operator==(const InterestVector&, const InterestVector&) = default;
};

/// Maximize CC and OI, minimize CD.
std::vector<Direction> default_directions();

/// A value plus a marker for inputs on which the statistic is undefined.
struct Scored {
    double value = 0.0;
    bool degenerate = false;
};

double case_coverage(std::span<const std::size_t> counts);
double case_coverage(const InstanceIndex& index, const EventLog& log);

/// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks; 0 and degenerate when either side is constant.
Scored spearman(std::span<const double> x, std::span<const double> y);

/// Shannon entropy in bits of the label distribution.
double entropy_bits(std::span<const std::string> labels);

/// H(labels) - H(labels | feature), base 2.
double information_gain(std::span<const std::int64_t> feature, std::span<const std::string> labels);

/// Spearman against a continuous outcome, information gain against a categorical one.
Scored outcome_interest(std::span<const std::size_t> counts, const EventLog& log,
                        OiTransform transform = OiTransform::Raw);
Scored outcome_interest(const InstanceIndex& index, const EventLog& log,
                        OiTransform transform = OiTransform::Raw);

struct DistanceConfig {
    std::vector<std::string> numeric_attributes;
    std::vector<std::string> categorical_attributes;
    CdAggregation aggregation = CdAggregation::PairMean;

    friend bool operator==(const DistanceConfig&, const DistanceConfig&) = default;
};

/// Min-max ranges over a log; missing values impute to the scaled mean.
struct NumericScaling {
    struct Range {
        double min = 0.0;
        double max = 0.0;
        double scaled_mean = 0.0;
    };
    std::map<std::string, Range> ranges;

    double scale(const std::string& attribute, std::optional<double> value) const;
};

NumericScaling fit_scaling(const EventLog& log, const DistanceConfig& cfg);

/// (d_num + d_cat) / (m + 1); d_num is the scaled Euclidean distance divided
/// by sqrt(k), d_cat the number of differing categorical attributes.
double pair_distance(const CaseAttributes& a, const CaseAttributes& b, const DistanceConfig& cfg,
                     const NumericScaling& scaling);

/// Per-log attribute table prepared for repeated case-distance evaluation.
class DistanceContext {
public:
    DistanceContext(const EventLog& log, DistanceConfig cfg);

    const DistanceConfig& config() const noexcept { return cfg_; }
    std::size_t size() const noexcept { return rows_; }
    double pair_distance(std::size_t i, std::size_t j) const;

private:
    DistanceConfig cfg_;
    std::size_t rows_ = 0;
    std::vector<double> numeric_;       // rows_ x k, scaled
    std::vector<std::uint32_t> codes_;  // rows_ x m, interned categories
};

Scored case_distance(std::span<const std::size_t> counts, const DistanceContext& ctx);
Scored case_distance(const InstanceIndex& index, const EventLog& log, const DistanceConfig& cfg);

struct InterestConfig {
    std::vector<Direction> directions = default_directions();
    OiTransform oi_transform = OiTransform::Raw;
    DistanceConfig distance;

    friend bool operator==(const InterestConfig&, const InterestConfig&) = default;
};

struct Measurement {
    InterestVector interest;
    std::size_t case_count = 0;
    bool oi_degenerate = false;
    bool cd_degenerate = false;
};

Measurement measure(std::span<const std::size_t> counts, const EventLog& log,
                    const DistanceContext& distance, const InterestConfig& cfg);

// --- survival statistics ---------------------------------------------------

struct SurvivalSample {
    std::vector<double> times;
    /// true = event observed, false = censored.
    std::vector<bool> observed;
};

struct SurvivalPoint {
    double time = 0.0;
    double survival = 1.0;
    std::size_t at_risk = 0;
    std::size_t events = 0;
    std::size_t censored = 0;
};

/// Product-limit estimate with one point per distinct observed time.
std::vector<SurvivalPoint> kaplan_meier(const SurvivalSample& sample);
double survival_at(const std::vector<SurvivalPoint>& curve, double time);

struct LogRankResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double observed_a = 0.0;
    double expected_a = 0.0;
    double variance = 0.0;
};

LogRankResult log_rank(const SurvivalSample& a, const SurvivalSample& b);

/// Upper tail of the chi-square distribution with one degree of freedom.
double chi_square1_sf(double x);

// --- dashboard -------------------------------------------------------------

struct CategoryShare {
    std::string value;
    std::size_t in_count = 0;
    std::size_t out_count = 0;
    double in_share = 0.0;
    double out_share = 0.0;
};

struct CategoricalSummary {
    std::string attribute;
    std::vector<CategoryShare> shares;
};

struct NumericSummary {
    std::string attribute;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> in_bins;
    std::vector<std::size_t> out_bins;
    std::size_t in_missing = 0;
    std::size_t out_missing = 0;
    std::optional<double> in_median;
    std::optional<double> out_median;
};

struct DashboardData {
    Pattern pattern;
    Measurement measurement;
    std::size_t cases_in = 0;
    std::size_t cases_out = 0;
    OutcomeKind outcome_kind = OutcomeKind::Continuous;
    std::vector<CategoricalSummary> categorical;
    std::vector<NumericSummary> numeric;
    std::optional<double> median_outcome_in;
    std::optional<double> median_outcome_out;
    /// Class shares for categorical outcomes.
    std::optional<CategoricalSummary> outcome_shares;
    std::optional<std::vector<SurvivalPoint>> km_in;
    std::optional<std::vector<SurvivalPoint>> km_out;
    std::optional<LogRankResult> log_rank;
};

inline constexpr std::size_t kDefaultHistogramBins = 20;

std::optional<double> median(std::vector<double> values);

DashboardData dashboard_stats(const Pattern& p, const InstanceIndex& index, const EventLog& log,
                              const InterestConfig& cfg, std::size_t bins = kDefaultHistogramBins);

} // namespace procpat
