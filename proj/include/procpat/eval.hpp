#pragma once

#include "procpat/discovery.hpp"
#include "procpat/log.hpp"
#include "procpat/patterns.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace procpat {

/// Frequency encoding: rows are traces in canonical order, columns patterns.
struct FeatureMatrix {
    std::vector<std::string> case_ids;
    std::vector<std::string> pattern_ids;
    /// Row-major rows() x cols().
    std::vector<std::uint32_t> cells;
    std::vector<std::string> labels;

    std::size_t rows() const noexcept { return case_ids.size(); }
    std::size_t cols() const noexcept { return pattern_ids.size(); }
    std::uint32_t at(std::size_t r, std::size_t c) const { return cells[r * cols() + c]; }
    std::span<const std::uint32_t> row(std::size_t r) const {
        return {cells.data() + r * cols(), cols()};
    }
};

FeatureMatrix encode_features(const std::vector<Pattern>& patterns, const EventLog& log,
                              const std::vector<POTrace>& traces,
                              std::size_t instance_cap = kDefaultMaxInstancesPerTrace);
FeatureMatrix encode_features(const std::vector<Pattern>& patterns, const EventLog& log,
                              const OracleConfig& oracle,
                              std::size_t instance_cap = kDefaultMaxInstancesPerTrace);

void write_feature_csv(const FeatureMatrix& m, std::ostream& out);

struct DTParams {
    std::size_t max_depth = 5;
    std::size_t min_samples_leaf = 2;
    /// Carried for reproducibility records; the CART builder is deterministic.
    std::uint64_t seed = 0;

    friend bool operator==(const DTParams&, const DTParams&) = default;
};

/// Binary CART tree over integer features.
class DecisionTree {
public:
    struct Node {
        /// -1 for a leaf.
        int feature = -1;
        double threshold = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
        std::string label;
        std::size_t samples = 0;
    };

    std::string predict(std::span<const std::uint32_t> row) const;
    std::vector<std::string> predict(const FeatureMatrix& m, std::span<const std::size_t> rows) const;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const;

private:
    friend DecisionTree train_decision_tree(const FeatureMatrix&, std::span<const std::size_t>,
                                            const DTParams&);
    std::vector<Node> nodes_;
};

/// Gini splits at midpoints between distinct values; ties go to the lowest
/// column, then the lowest threshold. Throws SingleClass.
DecisionTree train_decision_tree(const FeatureMatrix& m, std::span<const std::size_t> rows,
                                 const DTParams& params);
DecisionTree train_decision_tree(const FeatureMatrix& m, const DTParams& params);

/// Unweighted mean of per-class F1 over classes seen in either input.
double macro_f1(std::span<const std::string> truth, std::span<const std::string> predicted);

/// Fold number per row, stratified by label; throws InsufficientClassSupport
/// when a class has fewer than k members.
std::vector<std::size_t> stratified_folds(std::span<const std::string> labels, std::size_t k,
                                          std::uint64_t seed);

struct Strategy {
    enum class Kind { Pareto, Single, All };
    Kind kind = Kind::Pareto;
    std::size_t dimension = 0;

    std::string name() const;
    friend bool operator==(const Strategy&, const Strategy&) = default;
};

Strategy parse_strategy(std::string_view name);
std::vector<Strategy> parse_strategies(std::string_view comma_separated);
std::vector<Strategy> default_strategies();

/// Best k candidates along one dimension, ties by pattern id. Throws KTooLarge.
std::vector<MeasuredPattern> top_k_by_dimension(std::vector<MeasuredPattern> candidates,
                                                std::size_t dimension, std::size_t k);

/// Equal-frequency classes "bin0".."bin{n-1}" over a continuous outcome.
EventLog bin_outcome_equal_frequency(const EventLog& log, std::size_t bins);

struct StrategyReport {
    std::string strategy;
    double mean_f1 = 0.0;
    double min_f1 = 0.0;
    double max_f1 = 0.0;
    double mean_features = 0.0;
    std::vector<double> fold_f1;
    std::vector<std::size_t> fold_features;
};

struct EvalReport {
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    std::vector<StrategyReport> strategies;
    /// |pareto features| / |all features| per fold.
    std::vector<double> pareto_all_ratio;
    double mean_pareto_all_ratio = 0.0;

    const StrategyReport* find(std::string_view strategy) const;
};

/// Feature sets derived from one discovery run, per strategy name.
struct FeatureSets {
    std::vector<Iteration> iterations;
    std::map<std::string, std::vector<Pattern>> by_strategy;
    std::size_t pareto_size = 0;
    std::size_t all_size = 0;
};

FeatureSets derive_feature_sets(const EventLog& train, const DiscoveryConfig& cfg,
                                const std::vector<Strategy>& strategies);

EvalReport cross_validate(const EventLog& log, const DiscoveryConfig& cfg,
                          const std::vector<Strategy>& strategies, std::size_t k,
                          std::uint64_t seed, const DTParams& params = {});

void write_eval_csv(const EvalReport& report, std::ostream& out);

} // namespace procpat
