#pragma once

#include <cassert>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "smlab/conditions.hpp"
#include "smlab/core.hpp"
#include "smlab/da.hpp"
#include "smlab/stability.hpp"

namespace smlab {

// ---------------------------------------------------------------------------
// Permutation ranking (lexicographic)

inline std::uint64_t factorial_u64(int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

inline std::vector<int> permutation_from_rank(int n, std::uint64_t rank) {
    std::vector<int> avail(static_cast<std::size_t>(n));
    std::iota(avail.begin(), avail.end(), 0);
    std::vector<int> perm;
    perm.reserve(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        const std::uint64_t f = factorial_u64(i);
        const auto d = static_cast<std::size_t>(rank / f);
        rank %= f;
        perm.push_back(avail[d]);
        avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(d));
    }
    return perm;
}

inline std::uint64_t permutation_rank(std::span<const int> perm) {
    const int n = static_cast<int>(perm.size());
    std::vector<int> avail(static_cast<std::size_t>(n));
    std::iota(avail.begin(), avail.end(), 0);
    std::uint64_t rank = 0;
    for (int i = 0; i < n; ++i) {
        auto it = std::find(avail.begin(), avail.end(), perm[static_cast<std::size_t>(i)]);
        rank += static_cast<std::uint64_t>(it - avail.begin()) * factorial_u64(n - 1 - i);
        avail.erase(it);
    }
    return rank;
}

// ---------------------------------------------------------------------------
// Exhaustive profile space

inline constexpr int kDefaultEnumerationCeiling = 3;
// the cursor arithmetic below runs in 128 bits, which caps exhaustive spaces
inline constexpr int kHardEnumerationCeiling = 6;

namespace detail {
using u128 = unsigned __int128;
}

inline detail::u128 exhaustive_total(int n) {
    if (n > kHardEnumerationCeiling) throw InstanceTooLarge(n, kHardEnumerationCeiling);
    detail::u128 total = 1;
    const std::uint64_t f = factorial_u64(n);
    for (int i = 0; i < 2 * n; ++i) total *= f;
    return total;
}

inline std::vector<std::uint64_t> cursor_from_global(int n, detail::u128 index) {
    const std::uint64_t f = factorial_u64(n);
    std::vector<std::uint64_t> cursor(static_cast<std::size_t>(2 * n), 0);
    for (int i = 2 * n - 1; i >= 0; --i) {
        cursor[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(index % f);
        index /= f;
    }
    return cursor;
}

inline detail::u128 global_from_cursor(int n, std::span<const std::uint64_t> cursor) {
    const std::uint64_t f = factorial_u64(n);
    detail::u128 g = 0;
    for (std::uint64_t d : cursor) g = g * f + d;
    return g;
}

// Visits every profile of size n exactly once, in lexicographic order of the
// 2n permutation ranks (men's rows first, last row least significant).
// Restartable from a serialized cursor.
class ProfileIterator {
public:
    explicit ProfileIterator(int n) : ProfileIterator(n, std::vector<std::uint64_t>(static_cast<std::size_t>(2 * n), 0)) {}

    ProfileIterator(int n, std::vector<std::uint64_t> cursor) : n_(n), ranks_(std::move(cursor)) {
        if (static_cast<int>(ranks_.size()) != 2 * n) {
            throw DimensionMismatch(static_cast<int>(ranks_.size()), 2 * n);
        }
        rows_.reserve(ranks_.size());
        for (std::uint64_t r : ranks_) rows_.push_back(permutation_from_rank(n, r));
    }

    bool done() const { return done_; }

    PreferenceProfile profile() const {
        std::vector<std::vector<int>> men(rows_.begin(), rows_.begin() + n_);
        std::vector<std::vector<int>> women(rows_.begin() + n_, rows_.end());
        return PreferenceProfile::validated(n_, std::move(men), std::move(women));
    }

    void advance() {
        for (int i = 2 * n_ - 1; i >= 0; --i) {
            auto& row = rows_[static_cast<std::size_t>(i)];
            if (std::next_permutation(row.begin(), row.end())) {
                ++ranks_[static_cast<std::size_t>(i)];
                return;
            }
            ranks_[static_cast<std::size_t>(i)] = 0;  // row wrapped to identity, carry on
        }
        done_ = true;
    }

    const std::vector<std::uint64_t>& cursor() const { return ranks_; }

private:
    int n_;
    bool done_ = false;
    std::vector<std::vector<int>> rows_;  // men's rows then women's rows
    std::vector<std::uint64_t> ranks_;
};

inline ProfileIterator enumerate_profiles(int n, bool allow_large = false) {
    if (n > kDefaultEnumerationCeiling && !allow_large) {
        throw InstanceTooLarge(n, kDefaultEnumerationCeiling);
    }
    if (n > kHardEnumerationCeiling) throw InstanceTooLarge(n, kHardEnumerationCeiling);
    return ProfileIterator(n);
}

// ---------------------------------------------------------------------------
// Seeded sampling, uniform over the full profile space

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// unbiased draw from [0, bound)
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / bound * bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
    std::vector<int> row(static_cast<std::size_t>(n));
    std::iota(row.begin(), row.end(), 0);
    for (int i = n - 1; i >= 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
        std::swap(row[static_cast<std::size_t>(i)], row[j]);
    }
    return row;
}

}  // namespace detail

// Sample `index` of the stream identified by (n, seed): every row is an
// independent uniform permutation. Seeding per index keeps the stream
// deterministic while allowing sharded and resumed draws.
inline PreferenceProfile sample_profile(int n, std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 rng(detail::mix64(seed) ^ detail::mix64(detail::mix64(index)));
    std::vector<std::vector<int>> men, women;
    men.reserve(static_cast<std::size_t>(n));
    women.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) men.push_back(detail::random_permutation(n, rng));
    for (int i = 0; i < n; ++i) women.push_back(detail::random_permutation(n, rng));
    return PreferenceProfile::validated(n, std::move(men), std::move(women));
}

inline std::vector<PreferenceProfile> sample_profiles(int n, std::uint64_t count, std::uint64_t seed) {
    std::vector<PreferenceProfile> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(sample_profile(n, seed, i));
    return out;
}

// ---------------------------------------------------------------------------
// Generators

// The churn construction that drives deferred acceptance to both maxima: the
// first n-1 men start at their own column and cycle through the first n-1
// women, the last man sweeps left to right, every woman ranks the man "after"
// her first. Proposals cascade one displacement per round.
inline PreferenceProfile extremal_profile(int n) {
    if (n < 2) throw Error("extremal family requires n >= 2");
    std::vector<std::vector<int>> men, women;
    for (int i = 0; i + 1 < n; ++i) {
        std::vector<int> row;
        for (int k = 0; k + 1 < n; ++k) row.push_back((i + k) % (n - 1));
        row.push_back(n - 1);
        men.push_back(std::move(row));
    }
    {
        std::vector<int> row(static_cast<std::size_t>(n));
        std::iota(row.begin(), row.end(), 0);
        men.push_back(std::move(row));
    }
    for (int j = 0; j < n; ++j) {
        std::vector<int> row;
        for (int k = 1; k <= n; ++k) row.push_back((j + k) % n);
        women.push_back(std::move(row));
    }
    return PreferenceProfile::validated(n, std::move(men), std::move(women));
}

namespace detail {

struct FixtureDef {
    const char* name;
    int n;
    std::vector<std::vector<int>> men;    // 1-based entries, as in the text format
    std::vector<std::vector<int>> women;
};

inline const std::vector<FixtureDef>& fixture_defs() {
    static const std::vector<FixtureDef> defs = {
        {"example-5", 3, {{2, 1, 3}, {1, 2, 3}, {1, 2, 3}}, {{1, 2, 3}, {2, 3, 1}, {3, 2, 1}}},
        {"example-8", 4,
         {{1, 2, 3, 4}, {3, 2, 1, 4}, {3, 1, 2, 4}, {1, 2, 3, 4}},
         {{2, 3, 4, 1}, {3, 4, 1, 2}, {4, 1, 2, 3}, {1, 2, 3, 4}}},
        {"example-12", 3, {{1, 3, 2}, {2, 1, 3}, {1, 2, 3}}, {{2, 1, 3}, {3, 1, 2}, {1, 2, 3}}},
        {"tightness-1", 3, {{3, 1, 2}, {1, 2, 3}, {1, 2, 3}}, {{1, 2, 3}, {2, 3, 1}, {1, 2, 3}}},
        {"tightness-2", 3, {{1, 2, 3}, {2, 1, 3}, {1, 2, 3}}, {{1, 2, 3}, {2, 3, 1}, {1, 2, 3}}},
        {"tightness-3", 3, {{2, 1, 3}, {1, 2, 3}, {1, 2, 3}}, {{1, 2, 3}, {2, 1, 3}, {1, 2, 3}}},
        {"thm22-profile-1", 2, {{1, 2}, {2, 1}}, {{2, 1}, {1, 2}}},
        {"thm22-profile-2", 2, {{2, 1}, {1, 2}}, {{1, 2}, {2, 1}}},
        {"spc-not-maxprop-n2", 2, {{1, 2}, {2, 1}}, {{1, 2}, {2, 1}}},
    };
    return defs;
}

inline std::vector<std::vector<int>> to_zero_based(const std::vector<std::vector<int>>& rows) {
    std::vector<std::vector<int>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<int> r;
        r.reserve(row.size());
        for (int v : row) r.push_back(v - 1);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

inline std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const auto& d : detail::fixture_defs()) names.emplace_back(d.name);
    return names;
}

inline PreferenceProfile fixture_profile(std::string_view name) {
    for (const auto& d : detail::fixture_defs()) {
        if (name == d.name) {
            return PreferenceProfile::validated(d.n, detail::to_zero_based(d.men),
                                                detail::to_zero_based(d.women));
        }
    }
    throw UnknownFixture(std::string(name));
}

// ---------------------------------------------------------------------------
// Per-profile analysis and the machine-checked theorem suite

struct ProfileAnalysis {
    const PreferenceProfile& profile;
    const DaOutcome& men_run;
    const DaOutcome& women_run;
    const RegionLabel& region;
    const StableSet* stable;  // null when enumeration was skipped
};

namespace checks {

inline bool da_output_stable(const ProfileAnalysis& a) {
    return is_stable(a.profile, a.men_run.matching) && is_stable(a.profile, a.women_run.matching);
}

inline bool da_extremes_in_stable_set(const ProfileAnalysis& a) {
    if (!a.stable) return true;
    return a.stable->contains(a.men_run.matching) && a.stable->contains(a.women_run.matching);
}

inline bool usm_matches_stable_set(const ProfileAnalysis& a) {
    if (!a.stable) return true;
    return a.region.usm == (a.stable->matchings.size() == 1);
}

inline bool stable_set_opposition(const ProfileAnalysis& a) {
    if (!a.stable) return true;
    const auto& set = a.stable->matchings;
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
            if (i == j) continue;
            if (side_weakly_prefers(a.profile, Side::Men, set[i], set[j]) &&
                !side_weakly_prefers(a.profile, Side::Women, set[j], set[i])) {
                return false;
            }
        }
    }
    return true;
}

inline bool extreme_opposition(const ProfileAnalysis& a) {
    return side_weakly_prefers(a.profile, Side::Men, a.men_run.matching, a.women_run.matching) &&
           side_weakly_prefers(a.profile, Side::Women, a.women_run.matching, a.men_run.matching);
}

inline bool single_proposal_receiver(const ProfileAnalysis& a) {
    for (const DaOutcome* run : {&a.men_run, &a.women_run}) {
        bool found = false;
        for (auto c : run->per_receiver_proposals) found = found || c == 1;
        if (!found) return false;
    }
    return true;
}

inline bool proposal_round_bounds(const ProfileAnalysis& a) {
    const int n = a.profile.size();
    for (const DaOutcome* run : {&a.men_run, &a.women_run}) {
        if (run->proposal_count < n || run->proposal_count > max_proposals(n)) return false;
        if (run->round_count < 1 || run->round_count > max_rounds(n)) return false;
    }
    return true;
}

inline bool round_capacity_nonincreasing(const ProfileAnalysis& a) {
    for (const DaOutcome* run : {&a.men_run, &a.women_run}) {
        const auto sizes = round_proposal_counts(*run);
        for (std::size_t r = 1; r < sizes.size(); ++r) {
            if (sizes[r] > sizes[r - 1]) return false;
        }
    }
    return true;
}

inline bool maxprop_checker_matches_da(const ProfileAnalysis& a) {
    const int n = a.profile.size();
    return a.region.m_max_prop == (a.men_run.proposal_count == max_proposals(n)) &&
           a.region.w_max_prop == (a.women_run.proposal_count == max_proposals(n));
}

inline bool maxrou_checker_matches_da(const ProfileAnalysis& a) {
    const int n = a.profile.size();
    return a.region.m_max_rou == (a.men_run.round_count == max_rounds(n)) &&
           a.region.w_max_rou == (a.women_run.round_count == max_rounds(n));
}

inline bool maxrou_implies_maxprop(const ProfileAnalysis& a) {
    return (!a.region.m_max_rou || a.region.m_max_prop) &&
           (!a.region.w_max_rou || a.region.w_max_prop);
}

inline bool maxprop_implies_usm(const ProfileAnalysis& a) {
    const bool any = a.region.m_max_prop || a.region.w_max_prop || a.region.m_max_rou || a.region.w_max_rou;
    return !any || a.region.usm;
}

namespace impl {

inline bool trace_structure_one_side(const PreferenceProfile& p, const DaOutcome& run,
                                     Side proposing, bool maxprop) {
    if (!maxprop) return true;
    const int n = p.size();
    if (n == 1) return true;
    // one receiver heard a single proposal, every other receiver heard them all
    int sink = -1;
    for (int r = 0; r < n; ++r) {
        const auto c = run.per_receiver_proposals[static_cast<std::size_t>(r)];
        if (c == 1) {
            if (sink >= 0) return false;
            sink = r;
        } else if (c != n) {
            return false;
        }
    }
    if (sink < 0) return false;
    const Side receiving = opposite(proposing);
    for (int i = 0; i < n; ++i) {
        if (p.row(proposing, i)[static_cast<std::size_t>(n - 1)] != sink) return false;
    }
    for (int r = 0; r < n; ++r) {
        if (r == sink) continue;
        const int top = p.row(receiving, r)[0];
        const int matched = proposing == Side::Men ? run.matching.man_of(r) : run.matching.woman_of(r);
        if (matched != top) return false;
        if (p.row(proposing, top)[static_cast<std::size_t>(n - 2)] != r) return false;
    }
    return true;
}

}  // namespace impl

inline bool maxprop_trace_structure(const ProfileAnalysis& a) {
    return impl::trace_structure_one_side(a.profile, a.men_run, Side::Men, a.region.m_max_prop) &&
           impl::trace_structure_one_side(a.profile, a.women_run, Side::Women, a.region.w_max_prop);
}

inline bool spc_maxprop_disjoint(const ProfileAnalysis& a) {
    if (a.profile.size() < 3) return true;
    return !(a.region.spc && (a.region.m_max_prop || a.region.w_max_prop));
}

inline bool mmaxprop_wmaxprop_disjoint(const ProfileAnalysis& a) {
    if (a.profile.size() < 3) return true;
    return !(a.region.m_max_prop && a.region.w_max_prop);
}

inline bool maxprop_equals_maxrou_small(const ProfileAnalysis& a) {
    const int n = a.profile.size();
    if (n != 2 && n != 3) return true;
    return a.region.m_max_prop == a.region.m_max_rou && a.region.w_max_prop == a.region.w_max_rou;
}

inline bool ncc_implies_spc(const ProfileAnalysis& a) {
    if (!a.region.ncc.has_value()) return true;
    return !*a.region.ncc || a.region.spc;
}

inline bool spc_equals_ncc_n2(const ProfileAnalysis& a) {
    if (a.profile.size() != 2 || !a.region.ncc.has_value()) return true;
    return a.region.spc == *a.region.ncc;
}

inline bool spc_equals_usm_n2(const ProfileAnalysis& a) {
    if (a.profile.size() != 2) return true;
    return a.region.spc == a.region.usm;
}

inline bool maxprop_implies_spc_n2(const ProfileAnalysis& a) {
    if (a.profile.size() != 2) return true;
    return !(a.region.m_max_prop || a.region.w_max_prop) || a.region.spc;
}

inline bool maxprop_top_shared_n2(const ProfileAnalysis& a) {
    if (a.profile.size() != 2) return true;
    const bool men_share = a.profile.man_row(0)[0] == a.profile.man_row(1)[0];
    const bool women_share = a.profile.woman_row(0)[0] == a.profile.woman_row(1)[0];
    return a.region.m_max_prop == men_share && a.region.w_max_prop == women_share &&
           (a.region.m_max_prop && a.region.w_max_prop) == (men_share && women_share);
}

}  // namespace checks

struct TheoremCheck {
    const char* id;
    bool (*holds)(const ProfileAnalysis&);
};

inline const std::vector<TheoremCheck>& theorem_suite() {
    static const std::vector<TheoremCheck> suite = {
        {"da-output-stable", checks::da_output_stable},
        {"da-extremes-in-stable-set", checks::da_extremes_in_stable_set},
        {"usm-matches-stable-set", checks::usm_matches_stable_set},
        {"stable-set-opposition", checks::stable_set_opposition},
        {"extreme-opposition", checks::extreme_opposition},
        {"single-proposal-receiver", checks::single_proposal_receiver},
        {"proposal-round-bounds", checks::proposal_round_bounds},
        {"round-capacity-nonincreasing", checks::round_capacity_nonincreasing},
        {"maxprop-checker-matches-da", checks::maxprop_checker_matches_da},
        {"maxrou-checker-matches-da", checks::maxrou_checker_matches_da},
        {"maxrou-implies-maxprop", checks::maxrou_implies_maxprop},
        {"maxprop-implies-usm", checks::maxprop_implies_usm},
        {"maxprop-trace-structure", checks::maxprop_trace_structure},
        {"spc-maxprop-disjoint", checks::spc_maxprop_disjoint},
        {"mmaxprop-wmaxprop-disjoint", checks::mmaxprop_wmaxprop_disjoint},
        {"maxprop-equals-maxrou-small-n", checks::maxprop_equals_maxrou_small},
        {"ncc-implies-spc", checks::ncc_implies_spc},
        {"spc-equals-ncc-n2", checks::spc_equals_ncc_n2},
        {"spc-equals-usm-n2", checks::spc_equals_usm_n2},
        {"maxprop-implies-spc-n2", checks::maxprop_implies_spc_n2},
        {"maxprop-top-shared-n2", checks::maxprop_top_shared_n2},
    };
    return suite;
}

// ---------------------------------------------------------------------------
// Census tables

struct TheoremViolation {
    std::vector<std::uint64_t> cursor;  // exhaustive: rank vector; sampled: {index}
    std::vector<std::vector<int>> men_rows, women_rows;  // 0-based witness profile
};

struct TheoremFlag {
    bool holds = true;
    std::optional<TheoremViolation> violation;
};

struct CensusTable {
    int n = 0;
    bool exhaustive = true;
    std::uint64_t sample_count = 0;
    std::uint64_t sample_seed = 0;
    bool ncc_evaluated = false;
    bool stable_evaluated = false;
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t> region_counts;     // key: 7-char membership string
    std::map<std::string, std::uint64_t> condition_counts;  // key: condition id
    std::map<std::string, TheoremFlag> theorem_checks;

    bool all_checks_hold() const {
        for (const auto& [id, flag] : theorem_checks) {
            if (!flag.holds) return false;
        }
        return true;
    }

    // shards merge associatively; the surviving witness is the cursor-least one
    void merge_from(CensusTable&& other) {
        assert(n == other.n && exhaustive == other.exhaustive);
        assert(sample_count == other.sample_count && sample_seed == other.sample_seed);
        assert(ncc_evaluated == other.ncc_evaluated && stable_evaluated == other.stable_evaluated);
        total += other.total;
        for (auto& [key, count] : other.region_counts) region_counts[key] += count;
        for (auto& [key, count] : other.condition_counts) condition_counts[key] += count;
        for (auto& [id, flag] : other.theorem_checks) {
            auto& mine = theorem_checks[id];
            if (!flag.holds && (mine.holds || flag.violation->cursor < mine.violation->cursor)) {
                mine = std::move(flag);
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Census runs

struct ExhaustiveMode {};

struct SampledMode {
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
};

using CensusMode = std::variant<ExhaustiveMode, SampledMode>;

enum class StableSetMode { Auto, On, Off };

struct CensusOptions {
    unsigned threads = 0;  // 0: hardware concurrency
    NccMode ncc = NccMode::Auto;
    int ncc_ceiling = kDefaultNccCeiling;
    StableSetMode stable = StableSetMode::Auto;
    int stable_ceiling = kDefaultBruteForceCeiling;
    bool theorem_checks = true;
    std::optional<std::uint64_t> limit;  // stop early after this many profiles
    bool allow_large_exhaustive = false;
};

struct CensusRun {
    CensusTable table;
    // position of the first unvisited profile when stopped by `limit`
    std::optional<std::vector<std::uint64_t>> next_cursor;

    bool finished() const { return !next_cursor.has_value(); }
};

namespace detail {

struct CensusConfig {
    int n;
    bool exhaustive;
    std::uint64_t sample_count = 0;
    std::uint64_t sample_seed = 0;
    bool eval_ncc = false;
    bool eval_stable = false;
    int ncc_ceiling = kDefaultNccCeiling;
    int stable_ceiling = kDefaultBruteForceCeiling;
    bool run_checks = true;
};

inline CensusConfig resolve_census_config(int n, const CensusMode& mode, const CensusOptions& opt) {
    CensusConfig cfg;
    cfg.n = n;
    cfg.exhaustive = std::holds_alternative<ExhaustiveMode>(mode);
    if (const auto* s = std::get_if<SampledMode>(&mode)) {
        cfg.sample_count = s->count;
        cfg.sample_seed = s->seed;
    }
    cfg.eval_ncc = opt.ncc == NccMode::On ||
                   (opt.ncc == NccMode::Auto && n <= std::min(opt.ncc_ceiling, kDefaultEnumerationCeiling));
    cfg.eval_stable = opt.stable == StableSetMode::On ||
                      (opt.stable == StableSetMode::Auto && n <= kDefaultEnumerationCeiling);
    cfg.ncc_ceiling = std::max(opt.ncc_ceiling, cfg.eval_ncc ? n : 0);
    cfg.stable_ceiling = std::max(opt.stable_ceiling, cfg.eval_stable ? n : 0);
    cfg.run_checks = opt.theorem_checks;
    return cfg;
}

inline CensusTable empty_table(const CensusConfig& cfg) {
    CensusTable t;
    t.n = cfg.n;
    t.exhaustive = cfg.exhaustive;
    t.sample_count = cfg.sample_count;
    t.sample_seed = cfg.sample_seed;
    t.ncc_evaluated = cfg.eval_ncc;
    t.stable_evaluated = cfg.eval_stable;
    if (cfg.run_checks) {
        for (const auto& check : theorem_suite()) t.theorem_checks[check.id];
    }
    return t;
}

inline void census_visit(CensusTable& table, const PreferenceProfile& profile,
                         const std::vector<std::uint64_t>& cursor, const CensusConfig& cfg) {
    const auto men_run = run_da(profile, Side::Men);
    const auto women_run = run_da(profile, Side::Women);
    ClassifyOptions copts;
    copts.ncc = cfg.eval_ncc ? NccMode::On : NccMode::Off;
    copts.ncc_ceiling = cfg.ncc_ceiling;
    const RegionLabel region = classify_with_runs(profile, men_run.matching, women_run.matching, copts);

    ++table.total;
    ++table.region_counts[region.bitstring()];
    if (region.usm) ++table.condition_counts["usm"];
    if (region.spc) ++table.condition_counts["spc"];
    if (region.ncc.has_value() && *region.ncc) ++table.condition_counts["ncc"];
    if (region.m_max_prop) ++table.condition_counts["m-maxprop"];
    if (region.w_max_prop) ++table.condition_counts["w-maxprop"];
    if (region.m_max_rou) ++table.condition_counts["m-maxrou"];
    if (region.w_max_rou) ++table.condition_counts["w-maxrou"];

    if (!cfg.run_checks) return;

    StableSet stable;
    const StableSet* stable_ptr = nullptr;
    if (cfg.eval_stable) {
        stable = enumerate_stable(profile, cfg.stable_ceiling);
        stable_ptr = &stable;
    }
    const ProfileAnalysis analysis{profile, men_run, women_run, region, stable_ptr};
    for (const auto& check : theorem_suite()) {
        auto& flag = table.theorem_checks[check.id];
        if (!flag.holds) continue;  // earlier (cursor-least) witness already recorded
        if (!check.holds(analysis)) {
            flag.holds = false;
            flag.violation = TheoremViolation{cursor, profile.rows(Side::Men), profile.rows(Side::Women)};
        }
    }
}

inline CensusTable census_chunk(const CensusConfig& cfg, u128 begin, std::uint64_t count) {
    CensusTable table = empty_table(cfg);
    if (cfg.exhaustive) {
        ProfileIterator it(cfg.n, cursor_from_global(cfg.n, begin));
        for (std::uint64_t k = 0; k < count; ++k, it.advance()) {
            census_visit(table, it.profile(), it.cursor(), cfg);
        }
    } else {
        for (std::uint64_t k = 0; k < count; ++k) {
            const std::uint64_t index = static_cast<std::uint64_t>(begin) + k;
            census_visit(table, sample_profile(cfg.n, cfg.sample_seed, index), {index}, cfg);
        }
    }
    return table;
}

inline CensusRun run_census_from(const CensusConfig& cfg, u128 start, const CensusOptions& opt) {
    const u128 space = cfg.exhaustive ? exhaustive_total(cfg.n) : u128(cfg.sample_count);
    u128 remaining = start < space ? space - start : 0;
    std::uint64_t steps = remaining > u128(std::numeric_limits<std::uint64_t>::max())
                              ? std::numeric_limits<std::uint64_t>::max()
                              : static_cast<std::uint64_t>(remaining);
    if (opt.limit && *opt.limit < steps) steps = *opt.limit;

    unsigned threads = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    if (static_cast<std::uint64_t>(threads) > steps) threads = steps == 0 ? 1 : static_cast<unsigned>(steps);

    std::vector<CensusTable> shards(threads, empty_table(cfg));
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        const std::uint64_t lo = steps / threads * w + std::min<std::uint64_t>(w, steps % threads);
        const std::uint64_t hi = steps / threads * (w + 1) + std::min<std::uint64_t>(w + 1, steps % threads);
        workers.emplace_back([&, w, lo, hi]() {
            try {
                shards[w] = census_chunk(cfg, start + lo, hi - lo);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    CensusRun run;
    run.table = empty_table(cfg);
    for (auto& shard : shards) run.table.merge_from(std::move(shard));
    if (start + steps < space) {
        const u128 next = start + steps;
        run.next_cursor = cfg.exhaustive ? cursor_from_global(cfg.n, next)
                                         : std::vector<std::uint64_t>{static_cast<std::uint64_t>(next)};
    }
    return run;
}

}  // namespace detail

inline CensusRun run_census(int n, const CensusMode& mode, const CensusOptions& opt = {}) {
    if (std::holds_alternative<ExhaustiveMode>(mode)) {
        if (n > kDefaultEnumerationCeiling && !opt.allow_large_exhaustive) {
            throw InstanceTooLarge(n, kDefaultEnumerationCeiling);
        }
        if (n > kHardEnumerationCeiling) throw InstanceTooLarge(n, kHardEnumerationCeiling);
    }
    const auto cfg = detail::resolve_census_config(n, mode, opt);
    return detail::run_census_from(cfg, 0, opt);
}

// Picks up a run where a previous one stopped; merging the partial table with
// the continuation reproduces the single-shot table exactly.
inline CensusRun continue_census(CensusTable partial, std::span<const std::uint64_t> cursor,
                                 const CensusOptions& opt = {}) {
    CensusMode mode;
    detail::u128 start;
    if (partial.exhaustive) {
        mode = ExhaustiveMode{};
        start = global_from_cursor(partial.n, cursor);
    } else {
        mode = SampledMode{partial.sample_count, partial.sample_seed};
        if (cursor.size() != 1) throw Error("sampled census cursor must be a single index");
        start = cursor[0];
    }
    const auto cfg = detail::resolve_census_config(partial.n, mode, opt);
    if (cfg.eval_ncc != partial.ncc_evaluated || cfg.eval_stable != partial.stable_evaluated) {
        throw Error("census resume options disagree with the partial table");
    }
    CensusRun rest = detail::run_census_from(cfg, start, opt);
    partial.merge_from(std::move(rest.table));
    rest.table = std::move(partial);
    return rest;
}

}  // namespace smlab
