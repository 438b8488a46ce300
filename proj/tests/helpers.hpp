#pragma once

#include "procpat/error.hpp"
#include "procpat/log.hpp"
#include "procpat/partial_order.hpp"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

inline procpat::EventLog csv_log(const std::string& text, procpat::LogSchema schema = {},
                                 std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    return procpat::parse_event_log(in, schema, warnings);
}

inline procpat::LogSchema continuous_schema() {
    procpat::LogSchema s;
    s.outcome_kind = procpat::OutcomeKind::Continuous;
    return s;
}

// One row per activity, a day apart, all with the same outcome.
inline std::string chain_rows(const std::string& case_id, const std::vector<std::string>& acts,
                              const std::string& outcome, int first_day = 1) {
    std::string out;
    for (std::size_t i = 0; i < acts.size(); ++i) {
        char day[32];
        std::snprintf(day, sizeof day, "2021-01-%02dT08:00:00", first_day + static_cast<int>(i));
        out += case_id + "," + acts[i] + "," + day + "," + outcome + "\n";
    }
    return out;
}

inline const std::string kHeader = "case_id,activity,timestamp,outcome\n";

// Blocks given as label lists; each event index follows the listing order.
inline procpat::POTrace blocks_po(const std::vector<std::vector<std::string>>& blocks,
                                  const std::string& case_id = "t") {
    std::vector<std::string> acts;
    std::vector<std::vector<std::size_t>> idx;
    for (const auto& b : blocks) {
        idx.push_back({});
        for (const auto& a : b) {
            idx.back().push_back(acts.size());
            acts.push_back(a);
        }
    }
    return procpat::POTrace::from_blocks(case_id, acts, idx);
}

// Error code thrown by fn, or InvalidState when nothing was thrown.
template <class F>
procpat::Errc code_of(F&& fn) {
    try {
        fn();
    } catch (const procpat::Error& e) {
        return e.code();
    }
    return procpat::Errc::InvalidState;
}

} // namespace testutil
