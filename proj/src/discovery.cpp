#include "procpat/discovery.hpp"

#include "procpat/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace procpat {

std::string_view filter_mode_name(FilterMode m) noexcept {
    return m == FilterMode::PostFront ? "post_front" : "pre_front";
}

FilterMode parse_filter_mode(std::string_view name) {
    if (name == "pre_front")
        return FilterMode::PreFront;
    if (name == "post_front")
        return FilterMode::PostFront;
    throw Error(Errc::InvalidConfig, "unknown filter mode '" + std::string(name) + "'");
}

std::string_view status_name(SessionStatus s) noexcept {
    switch (s) {
    case SessionStatus::AwaitingSelection: return "awaiting-selection";
    case SessionStatus::Extending: return "extending";
    case SessionStatus::Done: return "done";
    }
    return "?";
}

const MeasuredPattern* Iteration::find(std::string_view pattern_id) const {
    for (const auto& c : candidates)
        if (c.pattern.id() == pattern_id)
            return &c;
    return nullptr;
}

std::vector<MeasuredPattern> threshold_filter(std::vector<MeasuredPattern> candidates,
                                              std::size_t min_case_frequency) {
    std::erase_if(candidates, [&](const MeasuredPattern& m) {
        return m.case_count < min_case_frequency;
    });
    return candidates;
}

DiscoverySession::DiscoverySession(std::shared_ptr<const EventLog> log, DiscoveryConfig cfg)
    : log_(std::move(log)), cfg_(std::move(cfg)),
      traces_(build_partial_orders(*log_, cfg_.oracle)), distance_(*log_, cfg_.interest.distance) {
    if (cfg_.max_iterations < 1)
        throw Error(Errc::InvalidConfig, "max_iterations must be at least 1");
    if (log_->size() == 0)
        throw Error(Errc::EmptyLog, "cannot discover patterns in an empty log");
    for (const Trace& t : log_->traces())
        if (t.outcome.missing())
            throw Error(Errc::MissingOutcome, "case '" + t.case_id + "'");

    std::vector<Pattern> singletons;
    for (const auto& activity : log_->activity_alphabet())
        singletons.push_back(singleton_pattern(activity));
    Iteration it;
    it.index = 0;
    it.candidates = measure_all(singletons);
    finish_iteration(it, cfg_.min_case_frequency);
    iterations_.push_back(std::move(it));
    status_ = iterations_.back().candidates.empty() ? SessionStatus::Done
                                                    : SessionStatus::AwaitingSelection;
}

std::vector<MeasuredPattern> DiscoverySession::measure_all(const std::vector<Pattern>& patterns) const {
    std::vector<MeasuredPattern> out(patterns.size());
    parallel_for(patterns.size(), [&](std::size_t i) {
        MeasuredPattern& m = out[i];
        m.pattern = patterns[i];
        try {
            const InstanceIndex idx =
                instances_in_log(patterns[i], traces_, cfg_.max_instances_per_trace);
            const Measurement meas = measure(idx.counts, *log_, distance_, cfg_.interest);
            m.interest = meas.interest;
            m.case_count = meas.case_count;
            m.oi_degenerate = meas.oi_degenerate;
            m.cd_degenerate = meas.cd_degenerate;
        } catch (const Error& e) {
            m.interest.values.assign(kInterestDimensions.size(), 0.0);
            m.interest.directions = cfg_.interest.directions;
            m.error = e.what();
        }
    });
    return out;
}

void DiscoverySession::finish_iteration(Iteration& it,
                                        std::optional<std::size_t> min_case_frequency) const {
    std::sort(it.candidates.begin(), it.candidates.end(),
              [](const MeasuredPattern& a, const MeasuredPattern& b) {
                  return a.pattern.key() < b.pattern.key();
              });
    it.min_case_frequency = min_case_frequency;
    const std::size_t before = it.candidates.size();
    if (min_case_frequency && cfg_.filter_mode == FilterMode::PreFront)
        it.candidates = threshold_filter(std::move(it.candidates), *min_case_frequency);
    std::vector<MeasuredPattern> front = pareto_front(it.candidates);
    if (min_case_frequency && cfg_.filter_mode == FilterMode::PostFront) {
        it.candidates = threshold_filter(std::move(it.candidates), *min_case_frequency);
        front = threshold_filter(std::move(front), *min_case_frequency);
    }
    it.filtered_out = before - it.candidates.size();
    it.front_ids.clear();
    for (const auto& m : front)
        it.front_ids.push_back(m.pattern.id());
}

const Iteration& DiscoverySession::step(const std::vector<std::string>& selected_ids,
                                        const std::vector<ExtensionRule>& rules,
                                        std::optional<std::size_t> min_case_frequency) {
    if (status_ == SessionStatus::Extending)
        throw Error(Errc::InvalidState, "a step is already in progress");
    if (status_ == SessionStatus::Done)
        throw Error(Errc::NoExtensionPossible, "session is done");
    if (selected_ids.empty())
        throw Error(Errc::InvalidArgument, "no pattern selected");
    if (rules.empty())
        throw Error(Errc::InvalidArgument, "no extension rule selected");

    const Iteration& latest = iterations_.back();
    std::vector<const MeasuredPattern*> selected;
    std::vector<std::string> off_front;
    std::set<std::string> seen_ids;
    for (const auto& id : selected_ids) {
        const MeasuredPattern* m = latest.find(id);
        if (!m)
            throw Error(Errc::UnknownPatternId, "'" + id + "' is not in iteration " +
                                                    std::to_string(latest.index));
        if (!seen_ids.insert(id).second)
            continue;
        if (!m->front)
            off_front.push_back(id);
        selected.push_back(m);
    }
    for (const auto* m : selected)
        if (m->pattern.size() + 1 > cfg_.max_pattern_size)
            throw Error(Errc::PatternTooLarge, "pattern " + m->pattern.id() +
                                                   " cannot grow past " +
                                                   std::to_string(cfg_.max_pattern_size) + " nodes");

    status_ = SessionStatus::Extending;
    try {
        std::map<std::string, Pattern> merged;
        for (const auto* m : selected) {
            const InstanceIndex idx =
                instances_in_log(m->pattern, traces_, cfg_.max_instances_per_trace);
            for (Pattern& p : extend_from_index(m->pattern, idx, traces_, rules, cfg_.quantifier,
                                                cfg_.max_pattern_size))
                merged.try_emplace(p.key(), std::move(p));
        }
        if (merged.empty()) {
            status_ = SessionStatus::Done;
            throw Error(Errc::NoExtensionPossible,
                        "the selected patterns have no extension under the chosen rules");
        }
        if (merged.size() > cfg_.max_candidates)
            throw Error(Errc::InvalidState, std::to_string(merged.size()) +
                                                " candidates exceed the cap of " +
                                                std::to_string(cfg_.max_candidates));
        std::vector<Pattern> patterns;
        patterns.reserve(merged.size());
        for (auto& [key, p] : merged)
            patterns.push_back(std::move(p));

        Iteration it;
        it.index = iterations_.size();
        it.candidates = measure_all(patterns);
        it.selected_ids.reserve(selected.size());
        for (const auto* m : selected)
            it.selected_ids.push_back(m->pattern.id());
        it.off_front_selected = std::move(off_front);
        it.rules = rules;
        finish_iteration(it, min_case_frequency);
        iterations_.push_back(std::move(it));
        status_ = iterations_.back().candidates.empty() ? SessionStatus::Done
                                                        : SessionStatus::AwaitingSelection;
    } catch (const Error& e) {
        if (e.code() != Errc::NoExtensionPossible)
            status_ = SessionStatus::AwaitingSelection;
        throw;
    }
    return iterations_.back();
}

const Iteration& DiscoverySession::step(const std::vector<std::string>& selected_ids) {
    return step(selected_ids, cfg_.rules, cfg_.min_case_frequency);
}

const MeasuredPattern* DiscoverySession::find(std::string_view pattern_id) const {
    for (auto it = iterations_.rbegin(); it != iterations_.rend(); ++it)
        if (const MeasuredPattern* m = it->find(pattern_id))
            return m;
    return nullptr;
}

InstanceIndex DiscoverySession::instances(const Pattern& p) const {
    return instances_in_log(p, traces_, cfg_.max_instances_per_trace);
}

DashboardData DiscoverySession::dashboard(const Pattern& p) const {
    return dashboard_stats(p, instances(p), *log_, cfg_.interest);
}

std::vector<StepRecord> DiscoverySession::history() const {
    std::vector<StepRecord> out;
    for (std::size_t i = 1; i < iterations_.size(); ++i)
        out.push_back({iterations_[i].selected_ids, iterations_[i].rules,
                       iterations_[i].min_case_frequency});
    return out;
}

void auto_discover(DiscoverySession& session) {
    const DiscoveryConfig& cfg = session.config();
    std::set<std::string> seen;
    for (const auto& c : session.iterations().front().candidates)
        seen.insert(c.pattern.key());
    while (session.iterations().size() < cfg.max_iterations &&
           session.status() == SessionStatus::AwaitingSelection) {
        const Iteration& latest = session.iterations().back();
        if (latest.front_ids.empty())
            break;
        try {
            const Iteration& next = session.step(latest.front_ids);
            bool novel = false;
            for (const auto& c : next.candidates)
                novel = seen.insert(c.pattern.key()).second || novel;
            if (cfg.stop_on_novelty && !novel)
                break;
        } catch (const Error& e) {
            if (e.code() == Errc::NoExtensionPossible || e.code() == Errc::PatternTooLarge)
                break;
            throw;
        }
    }
}

std::vector<Iteration> auto_discover(std::shared_ptr<const EventLog> log, const DiscoveryConfig& cfg) {
    DiscoverySession session(std::move(log), cfg);
    auto_discover(session);
    return session.iterations();
}

std::vector<Iteration> auto_discover(const EventLog& log, const DiscoveryConfig& cfg) {
    return auto_discover(std::make_shared<const EventLog>(log), cfg);
}

std::vector<MeasuredPattern> discovered_patterns(const std::vector<Iteration>& iterations) {
    std::vector<MeasuredPattern> out;
    std::set<std::string> keys;
    for (const Iteration& it : iterations)
        for (const auto& id : it.front_ids)
            if (const MeasuredPattern* m = it.find(id); m && keys.insert(m->pattern.key()).second)
                out.push_back(*m);
    return out;
}

std::vector<MeasuredPattern> all_candidates(const std::vector<Iteration>& iterations) {
    std::vector<MeasuredPattern> out;
    std::set<std::string> keys;
    for (const Iteration& it : iterations)
        for (const auto& m : it.candidates)
            if (keys.insert(m.pattern.key()).second)
                out.push_back(m);
    return out;
}

DiscoverySession replay_session(std::shared_ptr<const EventLog> log, const DiscoveryConfig& cfg,
                                const std::vector<StepRecord>& steps) {
    DiscoverySession session(std::move(log), cfg);
    for (const StepRecord& s : steps)
        session.step(s.selected_ids, s.rules, s.min_case_frequency);
    return session;
}

} // namespace procpat
