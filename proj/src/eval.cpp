#include "procpat/eval.hpp"

#include "csv.hpp"
#include "procpat/error.hpp"
#include "procpat/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

namespace procpat {

FeatureMatrix encode_features(const std::vector<Pattern>& patterns, const EventLog& log,
                              const std::vector<POTrace>& traces, std::size_t instance_cap) {
    if (traces.size() != log.size())
        throw Error(Errc::LengthMismatch, "partial orders were built over a different log");
    FeatureMatrix m;
    for (const Trace& t : log.traces()) {
        m.case_ids.push_back(t.case_id);
        if (t.outcome.missing())
            m.labels.emplace_back();
        else if (t.outcome.kind == OutcomeKind::Categorical)
            m.labels.push_back(t.outcome.category());
        else
            m.labels.push_back(format_number(t.outcome.number()));
    }
    for (const Pattern& p : patterns)
        m.pattern_ids.push_back(p.id());
    std::set<std::string> unique(m.pattern_ids.begin(), m.pattern_ids.end());
    if (unique.size() != m.pattern_ids.size())
        throw Error(Errc::InvalidArgument, "duplicate pattern in feature set");

    const std::size_t cols = patterns.size();
    m.cells.assign(m.rows() * cols, 0);
    for (std::size_t c = 0; c < cols; ++c) {
        const InstanceIndex idx = instances_in_log(patterns[c], traces, instance_cap);
        for (std::size_t r = 0; r < m.rows(); ++r)
            m.cells[r * cols + c] = static_cast<std::uint32_t>(idx.counts[r]);
    }
    return m;
}

FeatureMatrix encode_features(const std::vector<Pattern>& patterns, const EventLog& log,
                              const OracleConfig& oracle, std::size_t instance_cap) {
    return encode_features(patterns, log, build_partial_orders(log, oracle), instance_cap);
}

void write_feature_csv(const FeatureMatrix& m, std::ostream& out) {
    std::vector<std::string> row{"case_id"};
    row.insert(row.end(), m.pattern_ids.begin(), m.pattern_ids.end());
    row.push_back("label");
    csv::write_row(out, row, ',');
    for (std::size_t r = 0; r < m.rows(); ++r) {
        row.clear();
        row.push_back(m.case_ids[r]);
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(std::to_string(m.at(r, c)));
        row.push_back(m.labels[r]);
        csv::write_row(out, row, ',');
    }
}

// --- decision tree -----------------------------------------------------------

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0)
        return 0.0;
    double s = 0.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        s += p * p;
    }
    return 1.0 - s;
}

struct TreeBuilder {
    const FeatureMatrix& m;
    const DTParams& params;
    std::vector<std::string> classes;            // sorted
    std::vector<std::size_t> class_of_row;       // per matrix row
    std::vector<DecisionTree::Node>& nodes;

    std::size_t build(std::vector<std::size_t> rows, std::size_t depth) {
        const std::size_t k = classes.size();
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t r : rows)
            ++counts[class_of_row[r]];
        const std::size_t majority = static_cast<std::size_t>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
        const std::size_t id = nodes.size();
        nodes.push_back({});
        nodes[id].label = classes[majority];
        nodes[id].samples = rows.size();

        const bool pure = counts[majority] == rows.size();
        if (pure || depth >= params.max_depth || rows.size() < 2 * params.min_samples_leaf)
            return id;

        const std::size_t n = rows.size();
        double best = std::numeric_limits<double>::infinity();
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::pair<std::uint32_t, std::size_t>> column(n);
        std::vector<std::size_t> left(k), right(k);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            for (std::size_t i = 0; i < n; ++i)
                column[i] = {m.at(rows[i], c), class_of_row[rows[i]]};
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first)
                continue;
            std::fill(left.begin(), left.end(), 0);
            right = counts;
            for (std::size_t i = 1; i < n; ++i) {
                ++left[column[i - 1].second];
                --right[column[i - 1].second];
                if (column[i - 1].first == column[i].first)
                    continue;
                if (i < params.min_samples_leaf || n - i < params.min_samples_leaf)
                    continue;
                const double score = (static_cast<double>(i) * gini(left, i) +
                                      static_cast<double>(n - i) * gini(right, n - i)) /
                                     static_cast<double>(n);
                if (score < best - 1e-12) {
                    best = score;
                    best_feature = static_cast<int>(c);
                    best_threshold = (static_cast<double>(column[i - 1].first) +
                                      static_cast<double>(column[i].first)) / 2.0;
                }
            }
        }
        if (best_feature < 0)
            return id;

        std::vector<std::size_t> lrows, rrows;
        for (std::size_t r : rows)
            (m.at(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? lrows : rrows)
                .push_back(r);
        rows.clear();
        rows.shrink_to_fit();
        nodes[id].feature = best_feature;
        nodes[id].threshold = best_threshold;
        const std::size_t l = build(std::move(lrows), depth + 1);
        nodes[id].left = l;
        const std::size_t r = build(std::move(rrows), depth + 1);
        nodes[id].right = r;
        return id;
    }
};

} // namespace

std::string DecisionTree::predict(std::span<const std::uint32_t> row) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0)
        i = row[static_cast<std::size_t>(nodes_[i].feature)] <= nodes_[i].threshold ? nodes_[i].left
                                                                                    : nodes_[i].right;
    return nodes_[i].label;
}

std::vector<std::string> DecisionTree::predict(const FeatureMatrix& m,
                                               std::span<const std::size_t> rows) const {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (std::size_t r : rows)
        out.push_back(predict(m.row(r)));
    return out;
}

std::size_t DecisionTree::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (nodes_[i].feature >= 0) {
            stack.push_back({nodes_[i].left, d + 1});
            stack.push_back({nodes_[i].right, d + 1});
        }
    }
    return deepest;
}

DecisionTree train_decision_tree(const FeatureMatrix& m, std::span<const std::size_t> rows,
                                 const DTParams& params) {
    if (params.max_depth < 1)
        throw Error(Errc::InvalidConfig, "max_depth must be at least 1");
    if (params.min_samples_leaf < 1)
        throw Error(Errc::InvalidConfig, "min_samples_leaf must be at least 1");
    std::set<std::string> present;
    for (std::size_t r : rows) {
        if (r >= m.rows())
            throw Error(Errc::IndexOutOfRange, "training row " + std::to_string(r));
        present.insert(m.labels[r]);
    }
    if (present.size() < 2)
        throw Error(Errc::SingleClass, "training data holds " + std::to_string(present.size()) +
                                           " class(es)");
    DecisionTree tree;
    TreeBuilder b{m, params, {present.begin(), present.end()}, {}, tree.nodes_};
    std::map<std::string, std::size_t> class_index;
    for (std::size_t i = 0; i < b.classes.size(); ++i)
        class_index[b.classes[i]] = i;
    b.class_of_row.assign(m.rows(), 0);
    for (std::size_t r : rows)
        b.class_of_row[r] = class_index[m.labels[r]];
    b.build({rows.begin(), rows.end()}, 0);
    return tree;
}

DecisionTree train_decision_tree(const FeatureMatrix& m, const DTParams& params) {
    std::vector<std::size_t> rows(m.rows());
    std::iota(rows.begin(), rows.end(), 0);
    return train_decision_tree(m, rows, params);
}

double macro_f1(std::span<const std::string> truth, std::span<const std::string> predicted) {
    if (truth.size() != predicted.size())
        throw Error(Errc::LengthMismatch, "truth and prediction differ in length");
    if (truth.empty())
        throw Error(Errc::EmptyInput, "no predictions to score");
    std::set<std::string> classes(truth.begin(), truth.end());
    classes.insert(predicted.begin(), predicted.end());
    double sum = 0.0;
    for (const auto& c : classes) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool t = truth[i] == c;
            const bool p = predicted[i] == c;
            tp += t && p;
            fp += !t && p;
            fn += t && !p;
        }
        const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        sum += precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return sum / static_cast<double>(classes.size());
}

std::vector<std::size_t> stratified_folds(std::span<const std::string> labels, std::size_t k,
                                          std::uint64_t seed) {
    if (k < 2)
        throw Error(Errc::InvalidConfig, "cross-validation needs at least 2 folds");
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[labels[i]].push_back(i);
    for (const auto& [label, members] : by_class)
        if (members.size() < k)
            throw Error(Errc::InsufficientClassSupport,
                        "class '" + label + "' has " + std::to_string(members.size()) +
                            " cases for " + std::to_string(k) + " folds");
    Rng rng(seed);
    std::vector<std::size_t> fold(labels.size(), 0);
    std::size_t next = 0;
    for (auto& [label, members] : by_class) {
        rng.shuffle(members);
        for (std::size_t i : members)
            fold[i] = next++ % k;
    }
    return fold;
}

// --- strategies --------------------------------------------------------------

std::string Strategy::name() const {
    switch (kind) {
    case Kind::Pareto: return "pareto";
    case Kind::All: return "all";
    case Kind::Single: return "single:" + std::string(kInterestDimensions.at(dimension));
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "pareto")
        return {Strategy::Kind::Pareto, 0};
    if (name == "all")
        return {Strategy::Kind::All, 0};
    constexpr std::string_view prefix = "single:";
    if (name.substr(0, prefix.size()) == prefix) {
        const auto dim = name.substr(prefix.size());
        for (std::size_t i = 0; i < kInterestDimensions.size(); ++i)
            if (kInterestDimensions[i] == dim)
                return {Strategy::Kind::Single, i};
    }
    throw Error(Errc::InvalidConfig, "unknown strategy '" + std::string(name) + "'");
}

std::vector<Strategy> parse_strategies(std::string_view text) {
    std::vector<Strategy> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        if (!item.empty())
            out.push_back(parse_strategy(item));
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    if (out.empty())
        throw Error(Errc::InvalidConfig, "no strategy given");
    return out;
}

std::vector<Strategy> default_strategies() {
    return parse_strategies("pareto,single:cc,single:oi,single:cd,all");
}

std::vector<MeasuredPattern> top_k_by_dimension(std::vector<MeasuredPattern> candidates,
                                                std::size_t dimension, std::size_t k) {
    if (k > candidates.size())
        throw Error(Errc::KTooLarge, "k=" + std::to_string(k) + " exceeds " +
                                         std::to_string(candidates.size()) + " candidates");
    if (dimension >= kInterestDimensions.size())
        throw Error(Errc::DimensionMismatch, "no interest dimension " + std::to_string(dimension));
    std::sort(candidates.begin(), candidates.end(),
              [&](const MeasuredPattern& a, const MeasuredPattern& b) {
                  const double x = a.interest.values.at(dimension);
                  const double y = b.interest.values.at(dimension);
                  if (x != y)
                      return a.interest.directions.at(dimension) == Direction::Maximize ? x > y
                                                                                         : x < y;
                  return a.pattern.id() < b.pattern.id();
              });
    candidates.resize(k);
    return candidates;
}

EventLog bin_outcome_equal_frequency(const EventLog& log, std::size_t bins) {
    if (log.outcome_kind() != OutcomeKind::Continuous)
        throw Error(Errc::InvalidConfig, "binning needs a continuous outcome");
    if (bins < 2 || bins > log.size())
        throw Error(Errc::InvalidConfig, "bin count must lie in [2, number of cases]");
    const auto& traces = log.traces();
    std::vector<std::size_t> order(traces.size());
    std::iota(order.begin(), order.end(), 0);
    for (const Trace& t : traces)
        if (t.outcome.missing())
            throw Error(Errc::MissingOutcome, "case '" + t.case_id + "'");
    // Canonical order already breaks ties by case id.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return traces[a].outcome.number() < traces[b].outcome.number();
    });
    std::vector<OutcomeValue> outcomes(traces.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t bin = i * bins / order.size();
        outcomes[order[i]] = OutcomeValue{OutcomeKind::Categorical, "bin" + std::to_string(bin)};
    }
    return log.with_outcomes(OutcomeKind::Categorical, std::move(outcomes));
}

const StrategyReport* EvalReport::find(std::string_view strategy) const {
    for (const auto& s : strategies)
        if (s.strategy == strategy)
            return &s;
    return nullptr;
}

FeatureSets derive_feature_sets(const EventLog& train, const DiscoveryConfig& cfg,
                                const std::vector<Strategy>& strategies) {
    FeatureSets sets;
    sets.iterations = auto_discover(train, cfg);
    const auto pareto = discovered_patterns(sets.iterations);
    const auto all = all_candidates(sets.iterations);
    sets.pareto_size = pareto.size();
    sets.all_size = all.size();
    auto patterns_of = [](const std::vector<MeasuredPattern>& ms) {
        std::vector<Pattern> out;
        out.reserve(ms.size());
        for (const auto& m : ms)
            out.push_back(m.pattern);
        return out;
    };
    for (const Strategy& s : strategies) {
        switch (s.kind) {
        case Strategy::Kind::Pareto:
            sets.by_strategy[s.name()] = patterns_of(pareto);
            break;
        case Strategy::Kind::All:
            sets.by_strategy[s.name()] = patterns_of(all);
            break;
        case Strategy::Kind::Single:
            sets.by_strategy[s.name()] =
                patterns_of(top_k_by_dimension(all, s.dimension, pareto.size()));
            break;
        }
    }
    return sets;
}

EvalReport cross_validate(const EventLog& log, const DiscoveryConfig& cfg,
                          const std::vector<Strategy>& strategies, std::size_t k,
                          std::uint64_t seed, const DTParams& params) {
    if (log.outcome_kind() != OutcomeKind::Categorical)
        throw Error(Errc::InvalidConfig,
                    "evaluation needs a categorical outcome; declare a binning for continuous ones");
    if (strategies.empty())
        throw Error(Errc::InvalidConfig, "no strategy given");
    std::vector<std::string> labels;
    for (const Trace& t : log.traces()) {
        if (t.outcome.missing())
            throw Error(Errc::MissingOutcome, "case '" + t.case_id + "'");
        labels.push_back(t.outcome.category());
    }
    const std::vector<std::size_t> fold_of = stratified_folds(labels, k, seed);
    const std::vector<POTrace> traces = build_partial_orders(log, cfg.oracle);

    EvalReport report;
    report.folds = k;
    report.seed = seed;
    for (const Strategy& s : strategies)
        report.strategies.push_back({s.name()});

    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < fold_of.size(); ++i)
            (fold_of[i] == f ? test : train).push_back(i);
        const FeatureSets sets = derive_feature_sets(log.subset(train), cfg, strategies);
        report.pareto_all_ratio.push_back(
            sets.all_size ? static_cast<double>(sets.pareto_size) / static_cast<double>(sets.all_size)
                          : 0.0);

        std::vector<std::string> truth;
        for (std::size_t i : test)
            truth.push_back(labels[i]);
        for (std::size_t si = 0; si < strategies.size(); ++si) {
            const auto& patterns = sets.by_strategy.at(strategies[si].name());
            const FeatureMatrix m = encode_features(patterns, log, traces, cfg.max_instances_per_trace);
            const DecisionTree tree = train_decision_tree(m, train, params);
            const auto predicted = tree.predict(m, test);
            StrategyReport& r = report.strategies[si];
            r.fold_f1.push_back(macro_f1(truth, predicted));
            r.fold_features.push_back(patterns.size());
        }
    }

    for (StrategyReport& r : report.strategies) {
        r.mean_f1 = std::accumulate(r.fold_f1.begin(), r.fold_f1.end(), 0.0) /
                    static_cast<double>(r.fold_f1.size());
        r.min_f1 = *std::min_element(r.fold_f1.begin(), r.fold_f1.end());
        r.max_f1 = *std::max_element(r.fold_f1.begin(), r.fold_f1.end());
        r.mean_features = static_cast<double>(std::accumulate(r.fold_features.begin(),
                                                              r.fold_features.end(), std::size_t{0})) /
                          static_cast<double>(r.fold_features.size());
    }
    report.mean_pareto_all_ratio =
        std::accumulate(report.pareto_all_ratio.begin(), report.pareto_all_ratio.end(), 0.0) /
        static_cast<double>(report.pareto_all_ratio.size());
    return report;
}

void write_eval_csv(const EvalReport& report, std::ostream& out) {
    out << "strategy,fold,f1,features\n";
    for (const StrategyReport& r : report.strategies)
        for (std::size_t f = 0; f < r.fold_f1.size(); ++f)
            out << r.strategy << ',' << f << ',' << format_number(r.fold_f1[f]) << ','
                << r.fold_features[f] << '\n';
}

} // namespace procpat
