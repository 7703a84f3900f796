#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "smlab/census.hpp"
#include "smlab/core.hpp"
#include "test_util.hpp"

using namespace smlab;
using test::profile1;

TEST_CASE("validation accepts well-formed permutation rows") {
    auto p = PreferenceProfile::validated(2, {{0, 1}, {1, 0}}, {{0, 1}, {1, 0}});
    CHECK(p.size() == 2);
    CHECK(p.man_row(1)[0] == 1);

    CHECK_NOTHROW(fixture_profile("example-12"));
}

TEST_CASE("validation rejects malformed rows") {
    CHECK_THROWS_AS(PreferenceProfile::validated(2, {{0, 0}, {1, 0}}, {{0, 1}, {1, 0}}),
                    ValidationError);
    try {
        PreferenceProfile::validated(2, {{0, 0}, {1, 0}}, {{0, 1}, {1, 0}});
    } catch (const ValidationError& e) {
        CHECK(e.kind == ValidationError::Kind::DuplicateEntry);
        CHECK(e.row.side == Side::Men);
        CHECK(e.row.index == 0);
        CHECK(e.value == 0);
    }

    CHECK_THROWS_AS(PreferenceProfile::validated(2, {{0, 2}, {1, 0}}, {{0, 1}, {1, 0}}),
                    ValidationError);
    try {
        PreferenceProfile::validated(2, {{0, 2}, {1, 0}}, {{0, 1}, {1, 0}});
    } catch (const ValidationError& e) {
        CHECK(e.kind == ValidationError::Kind::OutOfRange);
    }

    CHECK_THROWS_AS(PreferenceProfile::validated(2, {{0, 1, 1}, {1, 0}}, {{0, 1}, {1, 0}}),
                    ValidationError);
    CHECK_THROWS_AS(PreferenceProfile::validated(3, {{0, 1, 2}, {1, 0, 2}}, {{0, 1, 2}, {1, 0, 2}}),
                    ValidationError);
}

TEST_CASE("prefers matches the fixture rows") {
    auto ex12 = fixture_profile("example-12");
    // w1 ranks m2 above m1
    CHECK(ex12.prefers(AgentIndex{Side::Women, 0}, 1, 0));
    CHECK_FALSE(ex12.prefers(AgentIndex{Side::Women, 0}, 0, 1));

    auto ex8 = fixture_profile("example-8");
    // m2 ranks w3 above w4
    CHECK(ex8.prefers(AgentIndex{Side::Men, 1}, 2, 3));
}

TEST_CASE("prefers is a strict total order on every row") {
    for (const auto& name : fixture_names()) {
        auto p = fixture_profile(name);
        const int n = p.size();
        for (Side side : {Side::Men, Side::Women}) {
            for (int agent = 0; agent < n; ++agent) {
                for (int a = 0; a < n; ++a) {
                    CHECK_FALSE(p.prefers(side, agent, a, a));
                    for (int b = 0; b < n; ++b) {
                        if (a == b) continue;
                        CHECK(p.prefers(side, agent, a, b) == !p.prefers(side, agent, b, a));
                        for (int c = 0; c < n; ++c) {
                            if (c == a || c == b) continue;
                            if (p.prefers(side, agent, a, b) && p.prefers(side, agent, b, c)) {
                                CHECK(p.prefers(side, agent, a, c));
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("rank tables invert the preference rows") {
    auto p = fixture_profile("example-8");
    for (Side side : {Side::Men, Side::Women}) {
        for (int agent = 0; agent < p.size(); ++agent) {
            auto row = p.row(side, agent);
            for (int pos = 0; pos < p.size(); ++pos) {
                CHECK(p.rank(side, agent, row[static_cast<std::size_t>(pos)]) == pos);
            }
        }
    }
}

TEST_CASE("matching keeps both directions inverse") {
    auto m = Matching::from_man_to_woman({2, 0, 1});
    CHECK(m.woman_of(0) == 2);
    CHECK(m.man_of(2) == 0);
    CHECK(m.partner_of(AgentIndex{Side::Women, 0}) == 1);
    for (int man = 0; man < 3; ++man) CHECK(m.man_of(m.woman_of(man)) == man);

    CHECK_THROWS_AS(Matching::from_man_to_woman({0, 0, 1}), ValidationError);
}

TEST_CASE("relabel with the identity ordering is the identity") {
    auto p = fixture_profile("example-5");
    CHECK(relabel(p, ProfileOrdering::identity(3)) == p);
}

TEST_CASE("relabel with a swap applied twice restores the profile") {
    auto p = fixture_profile("example-12");
    ProfileOrdering swap({1, 0, 2}, {1, 0, 2});
    auto once = relabel(p, swap);
    CHECK_FALSE(once == p);
    CHECK(relabel(once, swap) == p);
}

TEST_CASE("relabel moves whole rows when only men are reordered") {
    auto p = fixture_profile("example-5");
    ProfileOrdering order({1, 0, 2}, {0, 1, 2});
    auto q = relabel(p, order);
    CHECK(std::vector<int>(q.man_row(0).begin(), q.man_row(0).end()) ==
          std::vector<int>(p.man_row(1).begin(), p.man_row(1).end()));
    CHECK(std::vector<int>(q.man_row(1).begin(), q.man_row(1).end()) ==
          std::vector<int>(p.man_row(0).begin(), p.man_row(0).end()));
}

TEST_CASE("relabel commutes with prefers under the renaming") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        auto p = sample_profile(n, 99, static_cast<std::uint64_t>(trial));
        auto men_order = detail::random_permutation(n, rng);
        auto women_order = detail::random_permutation(n, rng);
        ProfileOrdering order(men_order, women_order);
        auto q = relabel(p, order);

        const auto inv_m = detail::inverse_permutation(men_order);
        const auto inv_w = detail::inverse_permutation(women_order);
        for (int m = 0; m < n; ++m) {
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    if (a == b) continue;
                    CHECK(q.prefers(Side::Men, inv_m[static_cast<std::size_t>(m)],
                                    inv_w[static_cast<std::size_t>(a)], inv_w[static_cast<std::size_t>(b)]) ==
                          p.prefers(Side::Men, m, a, b));
                    CHECK(q.prefers(Side::Women, inv_w[static_cast<std::size_t>(m)],
                                    inv_m[static_cast<std::size_t>(a)], inv_m[static_cast<std::size_t>(b)]) ==
                          p.prefers(Side::Women, m, a, b));
                }
            }
        }
        CHECK(relabel(q, order.inverse()) == p);
    }
}

TEST_CASE("relabel rejects mismatched dimensions") {
    auto p = fixture_profile("example-5");
    CHECK_THROWS_AS(relabel(p, ProfileOrdering::identity(2)), DimensionMismatch);
}

TEST_CASE("profiles of size one are allowed") {
    auto p = PreferenceProfile::validated(1, {{0}}, {{0}});
    CHECK(p.size() == 1);
}
