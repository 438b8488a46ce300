#pragma once

#include "procpat/log.hpp"
#include "procpat/partial_order.hpp"
#include "procpat/patterns.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace procpat {

/// Recipe for a synthetic log with one planted pattern.
///
/// The pattern is a chain of blocks; labels inside a block share a timestamp
/// and become concurrent, consecutive blocks are directly ordered.
struct PlantSpec {
    std::vector<std::vector<std::string>> pattern_blocks{{"A"}, {"B", "C"}};
    double plant_probability = 0.5;
    /// Chance that an unplanted trace receives a proper subset of the planted
    /// labels in random chain order.
    double decoy_probability = 0.3;
    /// Chance that a case's class is redrawn uniformly after the rule assigned it.
    double noise = 0.05;
    std::string positive_class = "pos";
    std::string negative_class = "neg";
    OutcomeKind outcome_kind = OutcomeKind::Categorical;
    /// Continuous outcomes: base time drawn in [1, 100], planted cases add this.
    double planted_effect = 50.0;
    std::vector<std::string> filler_alphabet{"f0", "f1", "f2", "f3", "f4", "f5"};
    std::size_t min_filler = 2;
    std::size_t max_filler = 6;
    std::size_t traces = 400;
    /// Chance that a planted case draws its attributes from the skewed profile.
    double confound = 0.0;
    std::uint64_t seed = 7;

    friend bool operator==(const PlantSpec&, const PlantSpec&) = default;
};

struct TruthRecord {
    std::string case_id;
    bool planted = false;
    /// Planted events in trace order; empty when not planted.
    std::vector<std::size_t> planted_events;
    bool decoy = false;
    /// Class redrawn by noise (it may still equal the rule's class).
    bool noise_redrawn = false;
};

struct GroundTruth {
    std::string pattern_key;
    std::vector<TruthRecord> records;   // canonical case order
    std::size_t planted_count() const;
};

struct SynthResult {
    EventLog log;
    GroundTruth truth;
};

/// Throws InvalidConfig for probabilities outside [0,1], empty blocks,
/// duplicate labels, or filler labels that collide with planted ones.
void validate_spec(const PlantSpec& spec);

SynthResult generate(const PlantSpec& spec);

Pattern planted_pattern(const PlantSpec& spec);

/// Schema of generated logs: case_id, activity, timestamp, outcome, age, segment.
LogSchema synth_schema(const PlantSpec& spec);

/// Groups each planted block through a same-calendar-day rule.
OracleConfig synth_oracle();

} // namespace procpat
