#include "helpers.hpp"
#include "oracles.hpp"

#include "procpat/discovery.hpp"
#include "procpat/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace procpat;
using testutil::chain_rows;
using testutil::code_of;
using testutil::csv_log;
using testutil::kHeader;

namespace {

std::shared_ptr<const EventLog> shared(EventLog log) {
    return std::make_shared<const EventLog>(std::move(log));
}

std::set<std::string> keys_of(const std::vector<MeasuredPattern>& ms) {
    std::set<std::string> out;
    for (const auto& m : ms)
        out.insert(m.pattern.key());
    return out;
}

const MeasuredPattern& by_label(const Iteration& it, const std::string& label) {
    for (const auto& m : it.candidates)
        if (m.pattern.size() == 1 && m.pattern.label(0) == label)
            return m;
    FAIL("no singleton " << label);
    throw;
}

EventLog small_log() {
    return csv_log(kHeader + chain_rows("c1", {"a", "b", "c"}, "x") + chain_rows("c2", {"a", "c"}, "y") +
                   chain_rows("c3", {"b", "a", "b"}, "x") + chain_rows("c4", {"c", "a"}, "y"));
}

} // namespace

TEST_CASE("iteration zero holds one singleton per activity") {
    DiscoverySession s(shared(small_log()), {});
    REQUIRE(s.iterations().size() == 1);
    const Iteration& it = s.iterations()[0];
    CHECK(it.index == 0);
    REQUIRE(it.candidates.size() == 3);
    for (const auto& m : it.candidates) {
        CHECK(m.pattern.size() == 1);
        CHECK(m.interest.values.size() == 3);
        CHECK(m.error.empty());
    }
    CHECK_FALSE(it.front_ids.empty());
    CHECK(s.status() == SessionStatus::AwaitingSelection);
}

TEST_CASE("activity that determines the outcome is on the front") {
    std::string rows = kHeader;
    for (int i = 0; i < 6; ++i) {
        const bool good = i % 2 == 0;
        rows += chain_rows("c" + std::to_string(i), good ? std::vector<std::string>{"s", "k", "e"}
                                                         : std::vector<std::string>{"s", "e"},
                           good ? "ok" : "bad");
    }
    DiscoverySession s(shared(csv_log(rows)), {});
    const Iteration& it = s.iterations()[0];
    const auto& k = by_label(it, "k");
    CHECK(k.interest.oi() == doctest::Approx(1.0));
    CHECK(std::find(it.front_ids.begin(), it.front_ids.end(), k.pattern.id()) != it.front_ids.end());
}

TEST_CASE("direct-follow extension equals the directly-follows table") {
    Rng rng(41);
    const std::vector<std::string> alphabet{"a", "b", "c", "d"};
    std::string rows = kHeader;
    std::set<std::string> follows;
    for (int t = 0; t < 25; ++t) {
        std::vector<std::string> acts;
        const std::size_t n = 1 + rng.below(5);
        for (std::size_t i = 0; i < n; ++i)
            acts.push_back(alphabet[rng.below(alphabet.size())]);
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (acts[i] == "a")
                follows.insert(acts[i + 1]);
        rows += chain_rows("c" + std::to_string(10 + t), acts, t % 3 ? "x" : "y");
    }
    auto log = csv_log(rows);
    DiscoverySession s(shared(log), {});
    const auto& a = by_label(s.iterations()[0], "a");
    if (follows.empty()) {
        CHECK(code_of([&] { s.step({a.pattern.id()}, {ExtensionRule::DirectFollow}); }) ==
              Errc::NoExtensionPossible);
        return;
    }
    const Iteration& it = s.step({a.pattern.id()}, {ExtensionRule::DirectFollow});
    std::set<std::string> expected;
    for (const auto& x : follows)
        expected.insert(Pattern::make({"a", x}, {RelationKind::Concurrent, RelationKind::Direct,
                                                 RelationKind::InverseDirect, RelationKind::Concurrent})
                            .key());
    CHECK(keys_of(it.candidates) == expected);
}

TEST_CASE("identical two-step chains stop by exhaustion at iteration two") {
    std::string rows = kHeader;
    for (int i = 0; i < 4; ++i)
        rows += chain_rows("c" + std::to_string(i), {"a", "b"}, i % 2 ? "x" : "y");
    DiscoveryConfig cfg;
    cfg.max_iterations = 5;
    const auto its = auto_discover(csv_log(rows), cfg);
    REQUIRE(its.size() == 2);
    const Pattern ab = Pattern::make({"a", "b"}, {RelationKind::Concurrent, RelationKind::Direct,
                                                  RelationKind::InverseDirect, RelationKind::Concurrent});
    for (const auto& m : its[1].candidates)
        CHECK(m.pattern.key() == ab.key());
}

TEST_CASE("one iteration means singletons only") {
    DiscoveryConfig cfg;
    cfg.max_iterations = 1;
    const auto its = auto_discover(small_log(), cfg);
    REQUIRE(its.size() == 1);
    CHECK(code_of([] {
              DiscoveryConfig bad;
              bad.max_iterations = 0;
              DiscoverySession(std::make_shared<const EventLog>(small_log()), bad);
          }) == Errc::InvalidConfig);
}

TEST_CASE("no extension possible marks the session done") {
    std::string rows = kHeader + chain_rows("c1", {"a"}, "x") + chain_rows("c2", {"b"}, "y");
    DiscoverySession s(shared(csv_log(rows)), {});
    const auto& a = by_label(s.iterations()[0], "a");
    CHECK(code_of([&] { s.step({a.pattern.id()}); }) == Errc::NoExtensionPossible);
    CHECK(s.status() == SessionStatus::Done);
    CHECK(s.iterations().size() == 1);
    CHECK(code_of([&] { s.step({a.pattern.id()}); }) == Errc::NoExtensionPossible);
}

TEST_CASE("unknown ids and empty selections are rejected") {
    DiscoverySession s(shared(small_log()), {});
    CHECK(code_of([&] { s.step({"0000000000000000"}); }) == Errc::UnknownPatternId);
    CHECK(code_of([&] { s.step({}); }) == Errc::InvalidArgument);
    CHECK(s.status() == SessionStatus::AwaitingSelection);
    CHECK(s.iterations().size() == 1);
}

TEST_CASE("off-front selections are flagged") {
    DiscoverySession s(shared(small_log()), {});
    const Iteration& first = s.iterations()[0];
    std::vector<std::string> all;
    std::vector<std::string> off;
    for (const auto& m : first.candidates) {
        all.push_back(m.pattern.id());
        if (!m.front)
            off.push_back(m.pattern.id());
    }
    const Iteration& it = s.step(all);
    CHECK(it.selected_ids.size() == all.size());
    CHECK(it.off_front_selected == off);
}

TEST_CASE("threshold filter") {
    std::vector<MeasuredPattern> ms(3);
    ms[0].case_count = 9;
    ms[1].case_count = 10;
    ms[2].case_count = 0;
    CHECK(threshold_filter(ms, 0).size() == 3);
    const auto kept = threshold_filter(ms, 10);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].case_count == 10);
}

TEST_CASE("pre-front and post-front filtering") {
    const SynthResult syn = generate(PlantSpec{});
    DiscoveryConfig cfg;
    cfg.oracle = synth_oracle();
    std::vector<std::size_t> counts;
    const DiscoverySession plain(shared(syn.log), cfg);
    for (const auto& m : plain.iterations()[0].candidates)
        counts.push_back(m.case_count);
    std::sort(counts.begin(), counts.end());
    const std::size_t min = counts[counts.size() / 2];
    cfg.min_case_frequency = min;
    DiscoverySession pre(shared(syn.log), cfg);
    cfg.filter_mode = FilterMode::PostFront;
    DiscoverySession post(shared(syn.log), cfg);
    const Iteration& a = pre.iterations()[0];
    const Iteration& b = post.iterations()[0];
    CHECK(a.filtered_out > 0);
    CHECK(a.filtered_out == b.filtered_out);
    for (const auto& m : a.candidates)
        CHECK(m.case_count >= min);
    // Anything that survives the whole-set front also survives the filtered one.
    for (const auto& id : b.front_ids)
        CHECK(std::find(a.front_ids.begin(), a.front_ids.end(), id) != a.front_ids.end());
    for (const auto& id : b.front_ids)
        CHECK(b.find(id)->case_count >= min);
}

TEST_CASE("candidates grow by one node and link to their foundation") {
    const SynthResult syn = generate(PlantSpec{});
    DiscoveryConfig cfg;
    cfg.oracle = synth_oracle();
    cfg.max_iterations = 3;
    const auto its = auto_discover(syn.log, cfg);
    REQUIRE(its.size() == 3);
    for (std::size_t i = 0; i < its.size(); ++i) {
        for (const auto& m : its[i].candidates) {
            CHECK(m.pattern.size() == i + 1);
            if (i == 0) {
                CHECK_FALSE(m.pattern.foundational());
                continue;
            }
            REQUIRE(m.pattern.foundational());
            const auto& sel = its[i].selected_ids;
            CHECK(std::find(sel.begin(), sel.end(), *m.pattern.foundational()) != sel.end());
        }
        // Front members are never dominated within their own iteration.
        for (const auto& id : its[i].front_ids) {
            const MeasuredPattern* f = its[i].find(id);
            REQUIRE(f);
            for (const auto& c : its[i].candidates)
                CHECK_FALSE(dominates(c.interest, f->interest));
        }
        if (i > 0)
            CHECK(its[i].selected_ids == its[i - 1].front_ids);
    }
    const auto fronts = discovered_patterns(its);
    const auto all = all_candidates(its);
    CHECK(fronts.size() < all.size());
    CHECK(keys_of(fronts).count(syn.truth.pattern_key) == 1);
    bool on_second = false;
    for (const auto& id : its[2].front_ids)
        on_second = on_second || its[2].find(id)->pattern.key() == syn.truth.pattern_key;
    CHECK(on_second);
}

TEST_CASE("replaying the history reproduces every iteration") {
    const SynthResult syn = generate(PlantSpec{.traces = 120, .seed = 3});
    DiscoveryConfig cfg;
    cfg.oracle = synth_oracle();
    auto log = shared(syn.log);
    DiscoverySession s(log, cfg);
    s.step({s.iterations()[0].front_ids.front()}, {ExtensionRule::DirectContext}, 5);
    s.step(s.iterations()[1].front_ids, {ExtensionRule::EventualFollow, ExtensionRule::Concurrent});
    const DiscoverySession r = replay_session(log, cfg, s.history());
    REQUIRE(r.iterations().size() == s.iterations().size());
    for (std::size_t i = 0; i < s.iterations().size(); ++i) {
        const Iteration& a = s.iterations()[i];
        const Iteration& b = r.iterations()[i];
        CHECK(a.front_ids == b.front_ids);
        CHECK(a.selected_ids == b.selected_ids);
        CHECK(a.min_case_frequency == b.min_case_frequency);
        REQUIRE(a.candidates.size() == b.candidates.size());
        for (std::size_t j = 0; j < a.candidates.size(); ++j) {
            CHECK(a.candidates[j].pattern.key() == b.candidates[j].pattern.key());
            CHECK(a.candidates[j].interest == b.candidates[j].interest);
        }
    }
}

TEST_CASE("session lookups and dashboard") {
    DiscoverySession s(shared(small_log()), {});
    const auto& a = by_label(s.iterations()[0], "a");
    CHECK(s.find(a.pattern.id()) != nullptr);
    CHECK(s.find("nope") == nullptr);
    const DashboardData d = s.dashboard(a.pattern);
    CHECK(d.cases_in == 4);
    CHECK(d.cases_out == 0);
    CHECK(d.measurement.cd_degenerate);
}
