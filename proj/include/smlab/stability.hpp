#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "smlab/core.hpp"
#include "smlab/da.hpp"

namespace smlab {

struct BlockingPair {
    int man;
    int woman;

    friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

// Lowest (man, woman) pair that would both rather be with each other than with
// their assigned partners, or nothing when the matching is stable.
inline std::optional<BlockingPair> find_blocking_pair(const PreferenceProfile& profile,
                                                      const Matching& matching) {
    const int n = profile.size();
    if (matching.size() != n) throw DimensionMismatch(matching.size(), n);
    for (int m = 0; m < n; ++m) {
        const int matched = matching.woman_of(m);
        for (int w = 0; w < n; ++w) {
            if (w == matched) continue;
            if (profile.prefers(Side::Men, m, w, matched) &&
                profile.prefers(Side::Women, w, m, matching.man_of(w))) {
                return BlockingPair{m, w};
            }
        }
    }
    return std::nullopt;
}

inline bool is_stable(const PreferenceProfile& profile, const Matching& matching) {
    return !find_blocking_pair(profile, matching).has_value();
}

struct StableSet {
    std::vector<Matching> matchings;  // lexicographic by man-to-woman map

    bool contains(const Matching& m) const {
        return std::binary_search(matchings.begin(), matchings.end(), m);
    }
};

inline constexpr int kDefaultBruteForceCeiling = 8;

// Trusted oracle: tests every one of the n! matchings against the blocking-pair
// scan. Deliberately has no shortcuts.
inline StableSet enumerate_stable(const PreferenceProfile& profile,
                                  int ceiling = kDefaultBruteForceCeiling) {
    const int n = profile.size();
    if (n > ceiling) throw InstanceTooLarge(n, ceiling);
    StableSet set;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        Matching candidate = Matching::from_man_to_woman(perm);
        if (is_stable(profile, candidate)) set.matchings.push_back(std::move(candidate));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return set;
}

struct UsmReport {
    bool unique = false;
    Matching men_optimal;
    Matching women_optimal;
};

// The two deferred-acceptance runs land on the extreme stable matchings, so the
// stable set is a singleton exactly when they coincide. Scales to any n.
inline UsmReport usm_report(const PreferenceProfile& profile) {
    auto [men_run, women_run] = run_da_dual(profile);
    UsmReport report;
    report.unique = men_run.matching == women_run.matching;
    report.men_optimal = std::move(men_run.matching);
    report.women_optimal = std::move(women_run.matching);
    return report;
}

inline bool is_usm(const PreferenceProfile& profile) { return usm_report(profile).unique; }

// true when every agent on `side` likes matching `a` at least as much as `b`
inline bool side_weakly_prefers(const PreferenceProfile& profile, Side side, const Matching& a,
                                const Matching& b) {
    for (int i = 0; i < profile.size(); ++i) {
        const int pa = side == Side::Men ? a.woman_of(i) : a.man_of(i);
        const int pb = side == Side::Men ? b.woman_of(i) : b.man_of(i);
        if (profile.rank(side, i, pa) > profile.rank(side, i, pb)) return false;
    }
    return true;
}

}  // namespace smlab
