#include "helpers.hpp"
#include "oracles.hpp"

#include "procpat/pareto.hpp"
#include "procpat/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace procpat;
using testutil::code_of;

namespace {

const std::vector<Direction> kMMm{Direction::Maximize, Direction::Maximize, Direction::Minimize};

MeasuredPattern item(const std::string& label, std::vector<double> v,
                     std::vector<Direction> dirs = kMMm) {
    MeasuredPattern m{Pattern::make({label}, {RelationKind::Concurrent}), {}};
    m.interest = {std::move(v), std::move(dirs)};
    return m;
}

std::vector<std::vector<double>> random_points(Rng& rng, std::size_t n, std::size_t dims) {
    std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
    // Coarse grid values so ties and duplicates show up.
    for (auto& p : pts)
        for (auto& v : p)
            v = static_cast<double>(rng.below(40)) / 8.0;
    return pts;
}

} // namespace

TEST_CASE("dominance examples") {
    CHECK(dominates(InterestVector{{0.5, 0.5, 0.2}, kMMm}, InterestVector{{0.4, 0.5, 0.3}, kMMm}));
    const InterestVector a{{0.5, 0.5, 0.2}, kMMm};
    CHECK_FALSE(dominates(a, a));
    const std::vector<Direction> mm{Direction::Maximize, Direction::Maximize};
    CHECK_FALSE(dominates(InterestVector{{1, 0}, mm}, InterestVector{{0, 1}, mm}));
    CHECK_FALSE(dominates(InterestVector{{0, 1}, mm}, InterestVector{{1, 0}, mm}));
    CHECK(code_of([&] { dominates(a, InterestVector{{1, 0}, mm}); }) == Errc::DimensionMismatch);
}

TEST_CASE("front of a small set") {
    const std::vector<Direction> mm{Direction::Maximize, Direction::Maximize};
    std::vector<MeasuredPattern> items{item("a", {1, 1}, mm), item("b", {2, 2}, mm), item("c", {0, 3}, mm)};
    const auto front = pareto_front(items);
    REQUIRE(front.size() == 2);
    CHECK(front[0].pattern.label(0) == "b");
    CHECK(front[1].pattern.label(0) == "c");
    CHECK_FALSE(items[0].front);
    CHECK(items[1].front);
    CHECK(items[2].front);
}

TEST_CASE("identical items are all retained, ordered by id") {
    std::vector<MeasuredPattern> items{item("x", {1, 1, 1}), item("y", {1, 1, 1}), item("z", {1, 1, 1})};
    const auto front = pareto_front(items);
    REQUIRE(front.size() == 3);
    for (std::size_t i = 1; i < front.size(); ++i)
        CHECK(front[i - 1].pattern.id() < front[i].pattern.id());
}

TEST_CASE("non-dominated filter equals brute force") {
    Rng rng(17);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t dims = 1 + rng.below(4);
        std::vector<Direction> dirs;
        for (std::size_t d = 0; d < dims; ++d)
            dirs.push_back(rng.below(2) ? Direction::Maximize : Direction::Minimize);
        const auto pts = random_points(rng, 1 + rng.below(200), dims);
        CHECK(non_dominated(pts, dirs) == oracle::brute_front(pts, dirs));
    }
}

TEST_CASE("front properties on random sets") {
    Rng rng(23);
    for (int rep = 0; rep < 30; ++rep) {
        const auto pts = random_points(rng, 150, 3);
        std::vector<MeasuredPattern> items;
        for (std::size_t i = 0; i < pts.size(); ++i)
            items.push_back(item("p" + std::to_string(i), pts[i]));
        const auto front = pareto_front(items);

        for (const auto& a : front)
            for (const auto& b : front)
                CHECK_FALSE(dominates(a.interest, b.interest));
        for (const auto& m : items) {
            if (m.front)
                continue;
            CHECK(std::any_of(front.begin(), front.end(),
                              [&](const MeasuredPattern& f) { return dominates(f.interest, m.interest); }));
        }

        // Idempotence.
        auto again = front;
        const auto front2 = pareto_front(again);
        REQUIRE(front2.size() == front.size());
        for (std::size_t i = 0; i < front.size(); ++i)
            CHECK(front2[i].pattern.id() == front[i].pattern.id());

        // Strictly increasing per-dimension transforms keep membership.
        auto moved = items;
        for (auto& m : moved) {
            auto& v = m.interest.values;
            v[0] = std::exp(v[0]);
            v[1] = 3.0 * v[1] - 1.0;
            v[2] = std::cbrt(v[2]) + 10.0;
        }
        pareto_front(moved);
        for (std::size_t i = 0; i < items.size(); ++i)
            CHECK(moved[i].front == items[i].front);

        // Output order: descending first dimension, ties by id.
        for (std::size_t i = 1; i < front.size(); ++i) {
            const double a = front[i - 1].interest.values[0], b = front[i].interest.values[0];
            CHECK((a > b || (a == b && front[i - 1].pattern.id() < front[i].pattern.id())));
        }
    }
}

TEST_CASE("degenerate zeros participate as values") {
    std::vector<MeasuredPattern> items{item("a", {0.5, 0.0, 0.1}), item("b", {0.5, 0.2, 0.1})};
    items[0].oi_degenerate = true;
    const auto front = pareto_front(items);
    REQUIRE(front.size() == 1);
    CHECK(front[0].pattern.label(0) == "b");
}
