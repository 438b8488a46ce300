#include "helpers.hpp"
#include "oracles.hpp"

#include "procpat/error.hpp"
#include "procpat/patterns.hpp"

#include <doctest.h>

#include <functional>
#include <numeric>

using namespace procpat;
using testutil::blocks_po;

namespace {

constexpr auto D = RelationKind::Direct;
constexpr auto E = RelationKind::Eventual;
constexpr auto C = RelationKind::Concurrent;

Pattern two(const std::string& a, const std::string& b, RelationKind r) {
    return Pattern::make({a, b}, {C, r, inverse(r), C});
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::InvalidState;
}

// Minimum over all node permutations of the serialized labels and relations.
std::string brute_canonical(const Pattern& p) {
    const std::size_t n = p.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    bool first = true;
    do {
        std::string s;
        for (std::size_t i = 0; i < n; ++i)
            s += p.label(perm[i]) + "|";
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    s += static_cast<char>('0' + static_cast<int>(p.relation(perm[i], perm[j])));
        if (first || s < best)
            best = s;
        first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

TEST_CASE("singletons") {
    const auto b = singleton_pattern("b");
    CHECK(b.size() == 1);
    CHECK(b.label(0) == "b");
    CHECK_FALSE(b.foundational());
    CHECK(b.edges().empty());
    CHECK(singleton_pattern("b").id() == b.id());
    CHECK(b.id().size() == 16);
    std::set<std::string> ids;
    for (int i = 0; i < 32; ++i)
        ids.insert(singleton_pattern("t" + std::to_string(i)).id());
    CHECK(ids.size() == 32);
    CHECK(code_of([] { singleton_pattern(""); }) == Errc::InvalidPattern);
}

TEST_CASE("canonical keys") {
    // a->b built with nodes in both orders.
    const auto ab = two("a", "b", D);
    const auto ab_rev = Pattern::make({"b", "a"}, {C, RelationKind::InverseDirect, D, C});
    CHECK(ab.key() == ab_rev.key());
    CHECK(ab.id() == ab_rev.id());
    CHECK(ab.key() != two("b", "a", D).key());
    CHECK(two("a", "b", C).key() == two("b", "a", C).key());
    CHECK(two("a", "b", D).key() != two("a", "b", E).key());
    CHECK(canonical_key(ab) == ab.key());
    // Stored order is topological.
    CHECK(ab_rev.label(0) == "a");
}

TEST_CASE("pattern validation") {
    CHECK(code_of([] { Pattern::make({"a", "b", "c"}, {C, D, RelationKind::InverseDirect,
                                                      RelationKind::InverseDirect, C, D,
                                                      D, RelationKind::InverseDirect, C}); }) ==
          Errc::InvalidPattern);
    CHECK(code_of([] { Pattern::make({"a", "b"}, {C, D, D, C}); }) == Errc::InvalidPattern);
    CHECK(code_of([] { Pattern::make({"a"}, {C}, std::string("x")); }) == Errc::InvalidPattern);
    CHECK(code_of([] { Pattern::make({"a", "b"}, {C, D}); }) == Errc::InvalidPattern);
    CHECK(code_of([] {
              std::vector<std::string> labels(4, "a");
              Pattern::make(labels, std::vector<RelationKind>(16, C), std::nullopt, 3);
          }) == Errc::PatternTooLarge);
    CHECK(code_of([] { Pattern::from_edges({"a", "b"}, {}); }) == Errc::InvalidPattern);
    CHECK(code_of([] { Pattern::from_edges({"a", "b"}, {{0, 1, D}, {1, 0, D}}); }) == Errc::InvalidPattern);
    const auto p = Pattern::from_edges({"a", "b"}, {{0, 1, D}}, std::string("f"));
    CHECK(p == two("a", "b", D));
    CHECK(p.foundational() == std::optional<std::string>("f"));
    CHECK(code_of([&] { canonical_key(p, 1); }) == Errc::PatternTooLarge);
}

TEST_CASE("content hash is FNV-1a 64") {
    CHECK(content_hash("") == "cbf29ce484222325");
    CHECK(content_hash("a") == "af63dc4c8601ec8c");
}

TEST_CASE("canonical key is a congruence on patterns up to three nodes") {
    const std::vector<std::string> alphabet{"a", "b", "c"};
    const std::vector<RelationKind> kinds{D, E, C, RelationKind::InverseDirect, RelationKind::InverseEventual};
    std::vector<Pattern> all;
    for (std::size_t n = 1; n <= 3; ++n) {
        std::size_t label_combos = 1, rel_combos = 1;
        for (std::size_t i = 0; i < n; ++i)
            label_combos *= 3;
        for (std::size_t i = 0; i < n * (n - 1) / 2; ++i)
            rel_combos *= 5;
        for (std::size_t lc = 0; lc < label_combos; ++lc) {
            std::vector<std::string> labels;
            for (std::size_t i = 0, x = lc; i < n; ++i, x /= 3)
                labels.push_back(alphabet[x % 3]);
            for (std::size_t rc = 0; rc < rel_combos; ++rc) {
                std::vector<RelationKind> rel(n * n, C);
                std::size_t x = rc;
                for (std::size_t u = 0; u < n; ++u)
                    for (std::size_t v = u + 1; v < n; ++v, x /= 5) {
                        rel[u * n + v] = kinds[x % 5];
                        rel[v * n + u] = inverse(kinds[x % 5]);
                    }
                try {
                    all.push_back(Pattern::make(labels, rel));
                } catch (const Error& e) {
                    CHECK(e.code() == Errc::InvalidPattern);
                }
            }
        }
    }
    std::map<std::string, std::string> key_to_canon, canon_to_key;
    std::size_t mismatches = 0;
    for (const auto& p : all) {
        const auto canon = brute_canonical(p);
        auto [a, fresh_a] = key_to_canon.emplace(p.key(), canon);
        auto [b, fresh_b] = canon_to_key.emplace(canon, p.key());
        mismatches += a->second != canon;
        mismatches += b->second != p.key();
        CHECK(canonical_key(p) == p.key());
    }
    CHECK(mismatches == 0);
    CHECK(key_to_canon.size() == canon_to_key.size());
}

TEST_CASE("find_instances examples") {
    const auto chain = blocks_po({{"a"}, {"b"}, {"c"}});
    const auto direct = find_instances(two("a", "b", D), chain);
    REQUIRE(direct.size() == 1);
    CHECK(direct[0].events == std::vector<std::size_t>{0, 1});
    CHECK(find_instances(two("a", "c", E), chain).size() == 1);
    CHECK(find_instances(two("a", "c", D), chain).empty());

    const auto po = blocks_po({{"a"}, {"b", "c"}, {"d"}});
    CHECK(find_instances(two("b", "c", C), po).size() == 1);
    CHECK(find_instances(two("b", "c", D), po).empty());
    CHECK(find_instances(singleton_pattern("zz"), po).empty());
}

TEST_CASE("overlapping instances are all counted; the cap throws") {
    const auto po = blocks_po({{"a", "a", "a"}, {"b", "b"}});
    CHECK(find_instances(two("a", "b", D), po).size() == 6);
    CHECK(find_instances(two("a", "a", C), po).size() == 6);
    try {
        find_instances(two("a", "b", D), po, 5);
        FAIL("cap not enforced");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InstanceCapExceeded);
    }
}

TEST_CASE("instances over a log") {
    std::string csv = testutil::kHeader;
    csv += testutil::chain_rows("c1", {"a", "b"}, "x");
    csv += testutil::chain_rows("c2", {"b", "a"}, "x");
    csv += testutil::chain_rows("c3", {"a", "b", "a"}, "y");
    csv += testutil::chain_rows("c4", {"c"}, "y");
    const auto log = testutil::csv_log(csv);
    const auto idx = instances_in_log(two("a", "b", D), log, {});
    CHECK(idx.counts == std::vector<std::size_t>{1, 0, 1, 0});
    CHECK(idx.total() == 2);
    CHECK(idx.cases_with_instance() == 2);
    CHECK(idx.case_ids == std::vector<std::string>{"c1", "c2", "c3", "c4"});
    for (std::size_t i = 0; i < idx.counts.size(); ++i)
        CHECK(idx.instances[i].size() == idx.counts[i]);
    const auto a = instances_in_log(singleton_pattern("a"), log, {});
    CHECK(a.counts == std::vector<std::size_t>{1, 1, 2, 0});
}

TEST_CASE("matcher equals brute force on random traces") {
    Rng rng(99);
    const std::vector<std::string> alphabet{"a", "b", "c"};
    std::size_t nonempty = 0;
    for (int round = 0; round < 600; ++round) {
        const auto po = oracle::random_po(rng, static_cast<std::size_t>(rng.between(1, 7)), alphabet);
        const auto p = oracle::random_pattern(rng, po, static_cast<std::size_t>(rng.between(1, 3)), alphabet);
        const auto got = find_instances(p, po);
        const auto want = oracle::brute_instances(p, po);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i].events == want[i]);
        nonempty += !want.empty();
    }
    CHECK(nonempty > 200);
}
