#include "procpat/interest.hpp"

#include "procpat/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace procpat {

std::string_view direction_name(Direction d) noexcept {
    return d == Direction::Maximize ? "max" : "min";
}

Direction parse_direction(std::string_view name) {
    if (name == "max")
        return Direction::Maximize;
    if (name == "min")
        return Direction::Minimize;
    throw Error(Errc::InvalidConfig, "unknown direction '" + std::string(name) + "'");
}

std::string_view transform_name(OiTransform t) noexcept {
    return t == OiTransform::Abs ? "abs" : "raw";
}

OiTransform parse_transform(std::string_view name) {
    if (name == "raw")
        return OiTransform::Raw;
    if (name == "abs")
        return OiTransform::Abs;
    throw Error(Errc::InvalidConfig, "unknown OI transform '" + std::string(name) + "'");
}

std::string_view aggregation_name(CdAggregation a) noexcept {
    return a == CdAggregation::Literal ? "literal" : "pair_mean";
}

CdAggregation parse_aggregation(std::string_view name) {
    if (name == "pair_mean")
        return CdAggregation::PairMean;
    if (name == "literal")
        return CdAggregation::Literal;
    throw Error(Errc::InvalidConfig, "unknown CD aggregation '" + std::string(name) + "'");
}

std::size_t dimension_index(std::string_view name) {
    for (std::size_t i = 0; i < kInterestDimensions.size(); ++i)
        if (kInterestDimensions[i] == name)
            return i;
    throw Error(Errc::InvalidConfig, "unknown interest dimension '" + std::string(name) + "'");
}

std::vector<Direction> default_directions() {
    return {Direction::Maximize, Direction::Maximize, Direction::Minimize};
}

double case_coverage(std::span<const std::size_t> counts) {
    if (counts.empty())
        return 0.0;
    const auto covered = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; });
    return static_cast<double>(covered) / static_cast<double>(counts.size());
}

double case_coverage(const InstanceIndex& index, const EventLog& log) {
    if (index.counts.size() != log.size())
        throw Error(Errc::LengthMismatch, "instance index was built over a different log");
    return case_coverage(index.counts);
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

Scored spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(Errc::LengthMismatch, "spearman inputs of length " + std::to_string(x.size()) +
                                              " and " + std::to_string(y.size()));
    const std::size_t n = x.size();
    if (n < 2)
        return {0.0, true};
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double mean = (static_cast<double>(n) + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        return {0.0, true};
    const double rho = sxy / std::sqrt(sxx * syy);
    return {std::clamp(rho, -1.0, 1.0), false};
}

namespace {

double entropy_of_counts(const std::unordered_map<std::string_view, std::size_t>& counts,
                         std::size_t total) {
    if (total == 0)
        return 0.0;
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        if (c == 0)
            continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

} // namespace

double entropy_bits(std::span<const std::string> labels) {
    std::unordered_map<std::string_view, std::size_t> counts;
    for (const auto& l : labels)
        ++counts[l];
    return entropy_of_counts(counts, labels.size());
}

double information_gain(std::span<const std::int64_t> feature, std::span<const std::string> labels) {
    if (feature.size() != labels.size())
        throw Error(Errc::LengthMismatch, "information gain inputs differ in length");
    if (labels.empty())
        return 0.0;
    std::map<std::int64_t, std::unordered_map<std::string_view, std::size_t>> by_value;
    std::map<std::int64_t, std::size_t> value_totals;
    for (std::size_t i = 0; i < feature.size(); ++i) {
        ++by_value[feature[i]][labels[i]];
        ++value_totals[feature[i]];
    }
    const double n = static_cast<double>(labels.size());
    double conditional = 0.0;
    for (const auto& [v, counts] : by_value)
        conditional += static_cast<double>(value_totals[v]) / n *
                       entropy_of_counts(counts, value_totals[v]);
    const double gain = entropy_bits(labels) - conditional;
    return gain > 0.0 ? gain : 0.0;
}

Scored outcome_interest(std::span<const std::size_t> counts, const EventLog& log,
                        OiTransform transform) {
    if (counts.size() != log.size())
        throw Error(Errc::LengthMismatch, "frequency vector length differs from the log size");
    const auto& traces = log.traces();
    const bool constant =
        std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) == counts.end();
    if (log.outcome_kind() == OutcomeKind::Continuous) {
        std::vector<double> ov, fv;
        ov.reserve(counts.size());
        fv.reserve(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (traces[i].outcome.missing())
                throw Error(Errc::MissingOutcome, "case '" + traces[i].case_id + "'");
            ov.push_back(traces[i].outcome.number());
            fv.push_back(static_cast<double>(counts[i]));
        }
        Scored s = spearman(ov, fv);
        if (transform == OiTransform::Abs)
            s.value = std::fabs(s.value);
        return s;
    }
    std::vector<std::int64_t> feature;
    std::vector<std::string> labels;
    feature.reserve(counts.size());
    labels.reserve(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (traces[i].outcome.missing())
            throw Error(Errc::MissingOutcome, "case '" + traces[i].case_id + "'");
        feature.push_back(static_cast<std::int64_t>(counts[i]));
        labels.push_back(traces[i].outcome.category());
    }
    if (constant)
        return {0.0, true};
    return {information_gain(feature, labels), false};
}

Scored outcome_interest(const InstanceIndex& index, const EventLog& log, OiTransform transform) {
    return outcome_interest(index.counts, log, transform);
}

double NumericScaling::scale(const std::string& attribute, std::optional<double> value) const {
    auto it = ranges.find(attribute);
    if (it == ranges.end())
        throw Error(Errc::InvalidArgument, "no scaling for attribute '" + attribute + "'");
    const Range& r = it->second;
    if (!value)
        return r.scaled_mean;
    if (r.max <= r.min)
        return 0.0;
    return std::clamp((*value - r.min) / (r.max - r.min), 0.0, 1.0);
}

NumericScaling fit_scaling(const EventLog& log, const DistanceConfig& cfg) {
    NumericScaling s;
    for (const auto& a : cfg.numeric_attributes) {
        std::vector<double> seen;
        for (const Trace& t : log.traces()) {
            auto it = t.case_attrs.numeric.find(a);
            if (it == t.case_attrs.numeric.end())
                throw Error(Errc::InvalidConfig, "numeric attribute '" + a + "' is not declared");
            if (it->second)
                seen.push_back(*it->second);
        }
        NumericScaling::Range r;
        if (!seen.empty()) {
            const auto [lo, hi] = std::minmax_element(seen.begin(), seen.end());
            r.min = *lo;
            r.max = *hi;
            double sum = 0.0;
            for (double v : seen)
                sum += r.max > r.min ? (v - r.min) / (r.max - r.min) : 0.0;
            r.scaled_mean = sum / static_cast<double>(seen.size());
        }
        s.ranges.emplace(a, r);
    }
    return s;
}

double pair_distance(const CaseAttributes& a, const CaseAttributes& b, const DistanceConfig& cfg,
                     const NumericScaling& scaling) {
    auto numeric_of = [](const CaseAttributes& c, const std::string& name) -> std::optional<double> {
        auto it = c.numeric.find(name);
        return it == c.numeric.end() ? std::nullopt : it->second;
    };
    auto category_of = [](const CaseAttributes& c, const std::string& name) -> std::string_view {
        auto it = c.categorical.find(name);
        return it == c.categorical.end() ? kMissingCategory : std::string_view(it->second);
    };
    const std::size_t k = cfg.numeric_attributes.size();
    const std::size_t m = cfg.categorical_attributes.size();
    double d_num = 0.0;
    if (k > 0) {
        double sq = 0.0;
        for (const auto& name : cfg.numeric_attributes) {
            const double d =
                scaling.scale(name, numeric_of(a, name)) - scaling.scale(name, numeric_of(b, name));
            sq += d * d;
        }
        d_num = std::sqrt(sq) / std::sqrt(static_cast<double>(k));
    }
    double d_cat = 0.0;
    for (const auto& name : cfg.categorical_attributes)
        if (category_of(a, name) != category_of(b, name))
            d_cat += 1.0;
    return (d_num + d_cat) / static_cast<double>(m + 1);
}

DistanceContext::DistanceContext(const EventLog& log, DistanceConfig cfg)
    : cfg_(std::move(cfg)), rows_(log.size()) {
    const NumericScaling scaling = fit_scaling(log, cfg_);
    const std::size_t k = cfg_.numeric_attributes.size();
    const std::size_t m = cfg_.categorical_attributes.size();
    numeric_.reserve(rows_ * k);
    codes_.reserve(rows_ * m);
    std::vector<std::map<std::string, std::uint32_t>> dictionaries(m);
    for (const Trace& t : log.traces()) {
        for (const auto& name : cfg_.numeric_attributes) {
            auto it = t.case_attrs.numeric.find(name);
            numeric_.push_back(
                scaling.scale(name, it == t.case_attrs.numeric.end() ? std::nullopt : it->second));
        }
        for (std::size_t c = 0; c < m; ++c) {
            const auto& name = cfg_.categorical_attributes[c];
            auto it = t.case_attrs.categorical.find(name);
            if (it == t.case_attrs.categorical.end())
                throw Error(Errc::InvalidConfig,
                            "categorical attribute '" + name + "' is not declared");
            auto [pos, inserted] = dictionaries[c].try_emplace(
                it->second, static_cast<std::uint32_t>(dictionaries[c].size()));
            codes_.push_back(pos->second);
        }
    }
}

double DistanceContext::pair_distance(std::size_t i, std::size_t j) const {
    const std::size_t k = cfg_.numeric_attributes.size();
    const std::size_t m = cfg_.categorical_attributes.size();
    double d_num = 0.0;
    if (k > 0) {
        double sq = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            const double d = numeric_[i * k + a] - numeric_[j * k + a];
            sq += d * d;
        }
        d_num = std::sqrt(sq) / std::sqrt(static_cast<double>(k));
    }
    double d_cat = 0.0;
    for (std::size_t c = 0; c < m; ++c)
        if (codes_[i * m + c] != codes_[j * m + c])
            d_cat += 1.0;
    return (d_num + d_cat) / static_cast<double>(m + 1);
}

Scored case_distance(std::span<const std::size_t> counts, const DistanceContext& ctx) {
    if (counts.size() != ctx.size())
        throw Error(Errc::LengthMismatch, "frequency vector length differs from the log size");
    std::vector<std::size_t> with, without;
    for (std::size_t i = 0; i < counts.size(); ++i)
        (counts[i] > 0 ? with : without).push_back(i);
    if (with.empty() || without.empty())
        return {0.0, true};
    double sum = 0.0;
    for (std::size_t i : with)
        for (std::size_t j : without)
            sum += ctx.pair_distance(i, j);
    if (ctx.config().aggregation == CdAggregation::Literal)
        return {sum / static_cast<double>(counts.size()), false};
    return {sum / (static_cast<double>(with.size()) * static_cast<double>(without.size())), false};
}

Scored case_distance(const InstanceIndex& index, const EventLog& log, const DistanceConfig& cfg) {
    return case_distance(index.counts, DistanceContext(log, cfg));
}

Measurement measure(std::span<const std::size_t> counts, const EventLog& log,
                    const DistanceContext& distance, const InterestConfig& cfg) {
    if (cfg.directions.size() != kInterestDimensions.size())
        throw Error(Errc::DimensionMismatch, "expected one direction per interest dimension");
    Measurement m;
    const Scored oi = outcome_interest(counts, log, cfg.oi_transform);
    const Scored cd = case_distance(counts, distance);
    m.case_count = static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
    m.interest.values = {case_coverage(counts), oi.value, cd.value};
    m.interest.directions = cfg.directions;
    m.oi_degenerate = oi.degenerate;
    m.cd_degenerate = cd.degenerate;
    return m;
}

// --- survival ----------------------------------------------------------------

namespace {

void check_sample(const SurvivalSample& s) {
    if (s.times.size() != s.observed.size())
        throw Error(Errc::LengthMismatch, "survival times and flags differ in length");
    if (s.times.empty())
        throw Error(Errc::EmptyInput, "empty survival sample");
    for (double t : s.times)
        if (!(t > 0.0))
            throw Error(Errc::InvalidArgument, "survival times must be positive");
}

} // namespace

std::vector<SurvivalPoint> kaplan_meier(const SurvivalSample& sample) {
    check_sample(sample);
    const std::size_t n = sample.times.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sample.times[a] < sample.times[b]; });
    std::vector<SurvivalPoint> curve;
    double surv = 1.0;
    std::size_t at_risk = n;
    std::size_t i = 0;
    while (i < n) {
        SurvivalPoint pt;
        pt.time = sample.times[order[i]];
        pt.at_risk = at_risk;
        while (i < n && sample.times[order[i]] == pt.time) {
            if (sample.observed[order[i]])
                ++pt.events;
            else
                ++pt.censored;
            ++i;
        }
        if (pt.events > 0)
            surv *= static_cast<double>(at_risk - pt.events) / static_cast<double>(at_risk);
        pt.survival = surv;
        at_risk -= pt.events + pt.censored;
        curve.push_back(pt);
    }
    return curve;
}

double survival_at(const std::vector<SurvivalPoint>& curve, double time) {
    double s = 1.0;
    for (const SurvivalPoint& p : curve) {
        if (p.time > time)
            break;
        s = p.survival;
    }
    return s;
}

double chi_square1_sf(double x) {
    if (!(x > 0.0))
        return 1.0;
    return std::erfc(std::sqrt(x / 2.0));
}

LogRankResult log_rank(const SurvivalSample& a, const SurvivalSample& b) {
    check_sample(a);
    check_sample(b);
    struct Obs {
        double time;
        bool observed;
        bool in_a;
    };
    std::vector<Obs> all;
    for (std::size_t i = 0; i < a.times.size(); ++i)
        all.push_back({a.times[i], static_cast<bool>(a.observed[i]), true});
    for (std::size_t i = 0; i < b.times.size(); ++i)
        all.push_back({b.times[i], static_cast<bool>(b.observed[i]), false});
    std::sort(all.begin(), all.end(), [](const Obs& x, const Obs& y) { return x.time < y.time; });

    LogRankResult r;
    double n_a = static_cast<double>(a.times.size());
    double n_b = static_cast<double>(b.times.size());
    std::size_t i = 0;
    while (i < all.size()) {
        const double t = all[i].time;
        double d_a = 0, d_b = 0, c_a = 0, c_b = 0;
        while (i < all.size() && all[i].time == t) {
            const Obs& o = all[i];
            if (o.observed)
                (o.in_a ? d_a : d_b) += 1;
            else
                (o.in_a ? c_a : c_b) += 1;
            ++i;
        }
        const double d = d_a + d_b;
        const double n = n_a + n_b;
        if (d > 0) {
            r.observed_a += d_a;
            r.expected_a += d * n_a / n;
            if (n > 1)
                r.variance += d * n_a * n_b * (n - d) / (n * n * (n - 1));
        }
        n_a -= d_a + c_a;
        n_b -= d_b + c_b;
    }
    if (r.variance > 0.0) {
        const double diff = r.observed_a - r.expected_a;
        r.statistic = diff * diff / r.variance;
        r.p_value = chi_square1_sf(r.statistic);
    }
    return r;
}

// --- dashboard ---------------------------------------------------------------

std::optional<double> median(std::vector<double> values) {
    if (values.empty())
        return std::nullopt;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1)
        return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

CategoricalSummary share_table(std::string attribute, const std::vector<std::string>& in,
                               const std::vector<std::string>& out) {
    std::map<std::string, CategoryShare> table;
    for (const auto& v : in)
        ++table[v].in_count;
    for (const auto& v : out)
        ++table[v].out_count;
    CategoricalSummary s{std::move(attribute), {}};
    for (auto& [value, share] : table) {
        share.value = value;
        share.in_share = in.empty() ? 0.0 : static_cast<double>(share.in_count) / in.size();
        share.out_share = out.empty() ? 0.0 : static_cast<double>(share.out_count) / out.size();
        s.shares.push_back(share);
    }
    return s;
}

} // namespace

DashboardData dashboard_stats(const Pattern& p, const InstanceIndex& index, const EventLog& log,
                              const InterestConfig& cfg, std::size_t bins) {
    if (index.counts.size() != log.size())
        throw Error(Errc::LengthMismatch, "instance index was built over a different log");
    if (bins == 0)
        throw Error(Errc::InvalidArgument, "histogram needs at least one bin");
    const auto& traces = log.traces();
    DashboardData d{p, measure(index.counts, log, DistanceContext(log, cfg.distance), cfg)};
    d.outcome_kind = log.outcome_kind();

    std::vector<bool> in(log.size());
    for (std::size_t i = 0; i < log.size(); ++i) {
        in[i] = index.counts[i] > 0;
        (in[i] ? d.cases_in : d.cases_out) += 1;
    }

    for (const auto& name : log.schema().categorical_attributes) {
        std::vector<std::string> vin, vout;
        for (std::size_t i = 0; i < log.size(); ++i)
            (in[i] ? vin : vout).push_back(traces[i].case_attrs.categorical.at(name));
        d.categorical.push_back(share_table(name, vin, vout));
    }

    for (const auto& name : log.schema().numeric_attributes) {
        NumericSummary s;
        s.attribute = name;
        s.in_bins.assign(bins, 0);
        s.out_bins.assign(bins, 0);
        std::vector<double> vin, vout;
        bool first = true;
        for (const Trace& t : traces) {
            const auto v = t.case_attrs.numeric.at(name);
            if (!v)
                continue;
            s.lo = first ? *v : std::min(s.lo, *v);
            s.hi = first ? *v : std::max(s.hi, *v);
            first = false;
        }
        for (std::size_t i = 0; i < log.size(); ++i) {
            const auto v = traces[i].case_attrs.numeric.at(name);
            if (!v) {
                (in[i] ? s.in_missing : s.out_missing) += 1;
                continue;
            }
            std::size_t bin = 0;
            if (s.hi > s.lo)
                bin = std::min(bins - 1, static_cast<std::size_t>((*v - s.lo) / (s.hi - s.lo) *
                                                                  static_cast<double>(bins)));
            (in[i] ? s.in_bins : s.out_bins)[bin] += 1;
            (in[i] ? vin : vout).push_back(*v);
        }
        s.in_median = median(vin);
        s.out_median = median(vout);
        d.numeric.push_back(std::move(s));
    }

    if (log.outcome_kind() == OutcomeKind::Continuous) {
        SurvivalSample sin, sout;
        std::vector<double> oin, oout;
        bool positive = true;
        for (std::size_t i = 0; i < log.size(); ++i) {
            if (traces[i].outcome.missing())
                continue;
            const double v = traces[i].outcome.number();
            positive = positive && v > 0.0;
            SurvivalSample& s = in[i] ? sin : sout;
            s.times.push_back(v);
            s.observed.push_back(traces[i].outcome_observed);
            (in[i] ? oin : oout).push_back(v);
        }
        d.median_outcome_in = median(oin);
        d.median_outcome_out = median(oout);
        if (positive && !sin.times.empty() && !sout.times.empty()) {
            d.km_in = kaplan_meier(sin);
            d.km_out = kaplan_meier(sout);
            d.log_rank = log_rank(sin, sout);
        }
    } else {
        std::vector<std::string> oin, oout;
        for (std::size_t i = 0; i < log.size(); ++i)
            if (!traces[i].outcome.missing())
                (in[i] ? oin : oout).push_back(traces[i].outcome.category());
        d.outcome_shares = share_table(log.schema().outcome_column, oin, oout);
    }
    return d;
}

} // namespace procpat
