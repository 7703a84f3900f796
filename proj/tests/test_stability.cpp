#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smlab/census.hpp"
#include "smlab/stability.hpp"
#include "test_util.hpp"

using namespace smlab;
using test::aligned_diagonal;

TEST_CASE("blocking-pair scan on hand-checked matchings") {
    auto p = fixture_profile("example-12");

    // the deferred-acceptance output is stable
    auto good = Matching::from_man_to_woman({2, 0, 1});
    CHECK_FALSE(find_blocking_pair(p, good).has_value());

    // the diagonal is blocked; the least such pair is (m3, w2)
    auto bad = Matching::from_man_to_woman({0, 1, 2});
    auto bp = find_blocking_pair(p, bad);
    REQUIRE(bp.has_value());
    CHECK(bp->man == 2);
    CHECK(bp->woman == 1);

    auto diag = aligned_diagonal(2);
    CHECK_FALSE(find_blocking_pair(diag, Matching::from_man_to_woman({0, 1})).has_value());
}

TEST_CASE("blocking-pair scan rejects mismatched dimensions") {
    auto p = fixture_profile("example-12");
    CHECK_THROWS_AS(find_blocking_pair(p, Matching::from_man_to_woman({0, 1})), DimensionMismatch);
}

TEST_CASE("brute-force enumeration counts stable matchings") {
    CHECK(enumerate_stable(fixture_profile("example-12")).matchings.size() == 1);
    CHECK(enumerate_stable(fixture_profile("thm22-profile-1")).matchings.size() == 2);
    CHECK(enumerate_stable(fixture_profile("thm22-profile-2")).matchings.size() == 2);
    for (int n = 2; n <= 8; ++n) {
        auto set = enumerate_stable(aligned_diagonal(n));
        REQUIRE(set.matchings.size() == 1);
        for (int m = 0; m < n; ++m) CHECK(set.matchings[0].woman_of(m) == m);
    }
}

TEST_CASE("enumeration refuses instances over the ceiling") {
    auto big = aligned_diagonal(9);
    CHECK_THROWS_AS(enumerate_stable(big), InstanceTooLarge);
    try {
        enumerate_stable(big);
    } catch (const InstanceTooLarge& e) {
        CHECK(e.n == 9);
        CHECK(e.ceiling == 8);
    }
    CHECK(enumerate_stable(big, 9).matchings.size() == 1);
}

TEST_CASE("uniqueness verdicts on the fixtures") {
    CHECK(is_usm(fixture_profile("example-5")));
    CHECK(is_usm(fixture_profile("example-12")));
    CHECK_FALSE(is_usm(fixture_profile("thm22-profile-1")));
    CHECK_FALSE(is_usm(fixture_profile("thm22-profile-2")));
}

namespace {

void check_against_enumeration(const PreferenceProfile& p) {
    auto set = enumerate_stable(p);
    auto report = usm_report(p);
    CHECK(report.unique == (set.matchings.size() == 1));
    CHECK(set.contains(report.men_optimal));
    CHECK(set.contains(report.women_optimal));
    // opposition across every ordered pair of stable matchings
    for (const auto& a : set.matchings) {
        for (const auto& b : set.matchings) {
            if (a == b) continue;
            if (side_weakly_prefers(p, Side::Men, a, b)) {
                CHECK(side_weakly_prefers(p, Side::Women, b, a));
            }
        }
    }
}

}  // namespace

TEST_CASE("dual-run uniqueness agrees with enumeration on every size-2 market") {
    for (auto it = enumerate_profiles(2); !it.done(); it.advance()) {
        check_against_enumeration(it.profile());
    }
}

TEST_CASE("dual-run uniqueness agrees with enumeration on sampled markets") {
    for (int n = 3; n <= 8; ++n) {
        const std::uint64_t count = n <= 5 ? 300 : 25;
        for (std::uint64_t i = 0; i < count; ++i) {
            check_against_enumeration(sample_profile(n, 2024 + static_cast<std::uint64_t>(n), i));
        }
    }
}
