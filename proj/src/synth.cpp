#include "procpat/synth.hpp"

#include "procpat/error.hpp"
#include "procpat/rng.hpp"

#include <algorithm>
#include <set>

namespace procpat {

namespace {

using std::chrono::days;

constexpr double kBaseDay = 18262; // 2020-01-01

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(Errc::InvalidConfig, std::string(name) + " must lie in [0, 1]");
}

std::string padded(std::size_t i, std::size_t width) {
    std::string s = std::to_string(i);
    return "c" + std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

} // namespace

std::size_t GroundTruth::planted_count() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const TruthRecord& r) { return r.planted; }));
}

void validate_spec(const PlantSpec& spec) {
    check_probability(spec.plant_probability, "plant_probability");
    check_probability(spec.decoy_probability, "decoy_probability");
    check_probability(spec.noise, "noise");
    check_probability(spec.confound, "confound");
    if (spec.pattern_blocks.empty())
        throw Error(Errc::InvalidConfig, "planted pattern has no blocks");
    std::set<std::string> planted;
    for (const auto& block : spec.pattern_blocks) {
        if (block.empty())
            throw Error(Errc::InvalidConfig, "planted pattern has an empty block");
        for (const auto& label : block)
            if (label.empty() || !planted.insert(label).second)
                throw Error(Errc::InvalidConfig, "planted labels must be non-empty and distinct");
    }
    if (spec.filler_alphabet.empty())
        throw Error(Errc::InvalidConfig, "filler alphabet is empty");
    for (const auto& f : spec.filler_alphabet)
        if (f.empty() || planted.count(f))
            throw Error(Errc::InvalidConfig, "filler label '" + f + "' collides with the pattern");
    if (spec.min_filler > spec.max_filler)
        throw Error(Errc::InvalidConfig, "min_filler exceeds max_filler");
    if (spec.traces == 0)
        throw Error(Errc::InvalidConfig, "at least one trace is required");
    if (spec.positive_class == spec.negative_class)
        throw Error(Errc::InvalidConfig, "class names must differ");
}

Pattern planted_pattern(const PlantSpec& spec) {
    validate_spec(spec);
    std::vector<std::string> labels;
    std::vector<std::size_t> block;
    for (std::size_t b = 0; b < spec.pattern_blocks.size(); ++b)
        for (const auto& label : spec.pattern_blocks[b]) {
            labels.push_back(label);
            block.push_back(b);
        }
    const std::size_t n = labels.size();
    std::vector<RelationKind> rel(n * n, RelationKind::Concurrent);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v || block[u] == block[v])
                continue;
            const std::size_t gap = block[u] < block[v] ? block[v] - block[u] : block[u] - block[v];
            const RelationKind forward = gap == 1 ? RelationKind::Direct : RelationKind::Eventual;
            rel[u * n + v] = block[u] < block[v] ? forward : inverse(forward);
        }
    return Pattern::make(std::move(labels), std::move(rel));
}

LogSchema synth_schema(const PlantSpec& spec) {
    LogSchema s;
    s.outcome_kind = spec.outcome_kind;
    s.numeric_attributes = {"age"};
    s.categorical_attributes = {"segment"};
    return s;
}

OracleConfig synth_oracle() {
    OracleConfig o;
    o.rules.push_back({ConcurrencyRule::Kind::SameInterval, std::nullopt, std::chrono::milliseconds{0}});
    return o;
}

SynthResult generate(const PlantSpec& spec) {
    validate_spec(spec);
    Rng rng(spec.seed);
    const Pattern pattern = planted_pattern(spec);
    std::vector<std::string> planted_labels;
    for (const auto& block : spec.pattern_blocks)
        planted_labels.insert(planted_labels.end(), block.begin(), block.end());

    const std::size_t width = std::to_string(spec.traces - 1).size();
    std::vector<Trace> traces;
    std::vector<TruthRecord> truth;
    traces.reserve(spec.traces);
    truth.reserve(spec.traces);

    for (std::size_t i = 0; i < spec.traces; ++i) {
        TruthRecord rec;
        rec.case_id = padded(i, width);
        rec.planted = rng.bernoulli(spec.plant_probability);

        // Each inner vector is one day; several labels on one day are concurrent.
        std::vector<std::vector<std::string>> days_;
        const auto filler_count =
            static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(spec.min_filler),
                                                 static_cast<std::int64_t>(spec.max_filler)));
        for (std::size_t f = 0; f < filler_count; ++f)
            days_.push_back({spec.filler_alphabet[rng.below(spec.filler_alphabet.size())]});

        std::vector<std::vector<std::string>> insert;
        if (rec.planted) {
            insert = spec.pattern_blocks;
        } else if (planted_labels.size() > 1 && rng.bernoulli(spec.decoy_probability)) {
            rec.decoy = true;
            std::vector<std::string> pool = planted_labels;
            rng.shuffle(pool);
            const auto keep = static_cast<std::size_t>(
                rng.between(1, static_cast<std::int64_t>(pool.size()) - 1));
            for (std::size_t k = 0; k < keep; ++k)
                insert.push_back({pool[k]});
        }
        const auto at = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(days_.size())));
        days_.insert(days_.begin() + static_cast<std::ptrdiff_t>(at), insert.begin(), insert.end());

        Trace t;
        t.case_id = rec.case_id;
        const Timestamp base{days{static_cast<long>(kBaseDay) + static_cast<long>(i % 365)}};
        for (std::size_t d = 0; d < days_.size(); ++d) {
            const Timestamp ts = base + days{d};
            for (const auto& label : days_[d]) {
                if (rec.planted && d >= at && d < at + insert.size())
                    rec.planted_events.push_back(t.events.size());
                t.events.push_back({label, t.case_id, ts, ts, {}});
            }
        }

        const bool skewed = rec.planted && rng.bernoulli(spec.confound);
        const double age = skewed ? static_cast<double>(rng.between(70, 90))
                                  : static_cast<double>(rng.between(20, 90));
        t.case_attrs.numeric["age"] = age;
        t.case_attrs.categorical["segment"] =
            skewed ? "s_plant" : "s" + std::to_string(rng.below(3));

        if (spec.outcome_kind == OutcomeKind::Categorical) {
            std::string label = rec.planted ? spec.positive_class : spec.negative_class;
            if (rng.bernoulli(spec.noise)) {
                rec.noise_redrawn = true;
                label = rng.below(2) ? spec.positive_class : spec.negative_class;
            }
            t.outcome = {OutcomeKind::Categorical, label};
        } else {
            double value = 1.0 + 99.0 * rng.uniform();
            if (rec.planted)
                value += spec.planted_effect;
            if (rng.bernoulli(spec.noise)) {
                rec.noise_redrawn = true;
                value = 1.0 + (99.0 + spec.planted_effect) * rng.uniform();
            }
            t.outcome = {OutcomeKind::Continuous, value};
        }
        traces.push_back(std::move(t));
        truth.push_back(std::move(rec));
    }

    EventLog log(synth_schema(spec), std::move(traces));
    return {std::move(log), GroundTruth{pattern.key(), std::move(truth)}};
}

} // namespace procpat
