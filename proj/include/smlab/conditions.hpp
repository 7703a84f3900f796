#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "smlab/core.hpp"
#include "smlab/stability.hpp"

// Recognizers for the structural conditions on preference profiles:
//
//   m-/w-maxprop  proposing-side deferred acceptance makes the maximum
//                 possible n^2-n+1 proposals
//   m-/w-maxrou   it runs for the maximum possible n^2-2n+2 rounds
//   spc           an ordering pairs agents so that each one prefers its
//                 partner to everything later (iterated fixed-pair removal)
//   ncc           an ordering under which no two agents' preference pointers
//                 cross
//   usm           the profile admits exactly one stable matching
//
// The maxprop/maxrou recognizers never run deferred acceptance. They inspect a
// fixed set of preference positions (each proposer's last and second-to-last
// entries, each receiver's first and second entries, plus proposer tops for
// the round test) and answer in O(n) such lookups; a counter on the position
// view makes that bound checkable. Because only those positions are read, the
// same recognizers run on partial profiles that supply nothing else.

namespace smlab {

enum class Condition { MMaxProp, WMaxProp, MMaxRou, WMaxRou, Spc, Ncc, Usm };

inline const char* condition_id(Condition c) {
    switch (c) {
        case Condition::MMaxProp: return "m-maxprop";
        case Condition::WMaxProp: return "w-maxprop";
        case Condition::MMaxRou: return "m-maxrou";
        case Condition::WMaxRou: return "w-maxrou";
        case Condition::Spc: return "spc";
        case Condition::Ncc: return "ncc";
        case Condition::Usm: return "usm";
    }
    return "?";
}

inline std::optional<Condition> condition_from_id(std::string_view id) {
    for (Condition c : {Condition::MMaxProp, Condition::WMaxProp, Condition::MMaxRou,
                        Condition::WMaxRou, Condition::Spc, Condition::Ncc, Condition::Usm}) {
        if (id == condition_id(c)) return c;
    }
    return std::nullopt;
}

enum class MaxPropFailure { LeastPreferred, Penultimate, SecondPrefAcyclic, OntoTopPrefs };

inline const char* max_prop_failure_id(MaxPropFailure f) {
    switch (f) {
        case MaxPropFailure::LeastPreferred: return "least-preferred";
        case MaxPropFailure::Penultimate: return "penultimate";
        case MaxPropFailure::SecondPrefAcyclic: return "second-pref-acyclic";
        case MaxPropFailure::OntoTopPrefs: return "onto-top-prefs";
    }
    return "?";
}

// Verdict plus a witness that can be replayed against the raw definitions.
struct ConditionReport {
    Condition condition = Condition::Usm;
    bool verdict = false;

    std::optional<ProfileOrdering> ordering;     // witness for a true maxprop/maxrou/spc/ncc
    std::optional<MaxPropFailure> failed;        // first failed condition, checked in order
    std::vector<int> failure_agents;             // agents implicated in the failure
    std::vector<int> cycle;                      // receiver indices, when failed == SecondPrefAcyclic
    std::vector<int> stuck_men, stuck_women;     // surviving sub-population with no fixed pair
    std::optional<Matching> unique_matching;     // usm true
    std::optional<std::pair<Matching, Matching>> extremes;  // usm false: the two distinct optima
    std::optional<std::int64_t> queries;         // position lookups spent (maxprop/maxrou only)
};

// ---------------------------------------------------------------------------
// Position views

// Full-profile view, projected onto a proposing side, with a lookup counter.
class ProfilePositions {
public:
    ProfilePositions(const PreferenceProfile& profile, Side proposing)
        : profile_(&profile), proposing_(proposing) {}

    int size() const { return profile_->size(); }
    int proposer_top(int i) const { return entry(proposing_, i, 0); }
    int proposer_penultimate(int i) const { return entry(proposing_, i, size() - 2); }
    int proposer_last(int i) const { return entry(proposing_, i, size() - 1); }
    int receiver_top(int j) const { return entry(opposite(proposing_), j, 0); }
    int receiver_second(int j) const { return entry(opposite(proposing_), j, 1); }
    std::int64_t queries() const { return queries_; }

private:
    int entry(Side side, int agent, int position) const {
        ++queries_;
        return profile_->row(side, agent)[static_cast<std::size_t>(position)];
    }

    const PreferenceProfile* profile_;
    Side proposing_;
    mutable std::int64_t queries_ = 0;
};

// A market known only at the positions the recognizers consult.
struct PartialMarket {
    int n = 0;
    std::vector<int> proposer_top;
    std::vector<int> proposer_penultimate;  // entries unused when n == 1
    std::vector<int> proposer_last;
    std::vector<int> receiver_top;
    std::vector<int> receiver_second;  // entries unused when n == 1
};

inline PartialMarket partial_market(const PreferenceProfile& profile, Side proposing) {
    const int n = profile.size();
    const Side receiving = opposite(proposing);
    PartialMarket m;
    m.n = n;
    for (int i = 0; i < n; ++i) {
        auto prow = profile.row(proposing, i);
        m.proposer_top.push_back(prow[0]);
        m.proposer_penultimate.push_back(n >= 2 ? prow[static_cast<std::size_t>(n - 2)] : -1);
        m.proposer_last.push_back(prow[static_cast<std::size_t>(n - 1)]);
        auto rrow = profile.row(receiving, i);
        m.receiver_top.push_back(rrow[0]);
        m.receiver_second.push_back(n >= 2 ? rrow[1] : -1);
    }
    return m;
}

class PartialPositions {
public:
    explicit PartialPositions(const PartialMarket& market) : market_(&market) {}

    int size() const { return market_->n; }
    int proposer_top(int i) const { return get(market_->proposer_top, i); }
    int proposer_penultimate(int i) const { return get(market_->proposer_penultimate, i); }
    int proposer_last(int i) const { return get(market_->proposer_last, i); }
    int receiver_top(int j) const { return get(market_->receiver_top, j); }
    int receiver_second(int j) const { return get(market_->receiver_second, j); }
    std::int64_t queries() const { return queries_; }

private:
    int get(const std::vector<int>& v, int i) const {
        ++queries_;
        return v[static_cast<std::size_t>(i)];
    }

    const PartialMarket* market_;
    mutable std::int64_t queries_ = 0;
};

// ---------------------------------------------------------------------------
// Functional-graph helpers (out-degree at most one)

namespace detail {

// Returns one directed cycle, rotated to start at its least vertex, or empty.
// Vertices with active[v] == 0 do not exist; out[v] < 0 means no out-edge.
inline std::vector<int> functional_graph_cycle(const std::vector<int>& out,
                                               const std::vector<char>& active) {
    const int n = static_cast<int>(out.size());
    std::vector<signed char> color(static_cast<std::size_t>(n), 0);  // 0 new, 1 on path, 2 done
    std::vector<int> path;
    for (int s = 0; s < n; ++s) {
        if (!active[static_cast<std::size_t>(s)] || color[static_cast<std::size_t>(s)] != 0) continue;
        path.clear();
        int v = s;
        while (v >= 0 && color[static_cast<std::size_t>(v)] == 0) {
            color[static_cast<std::size_t>(v)] = 1;
            path.push_back(v);
            v = out[static_cast<std::size_t>(v)];
        }
        if (v >= 0 && color[static_cast<std::size_t>(v)] == 1) {
            auto first = std::find(path.begin(), path.end(), v);
            std::vector<int> cycle(first, path.end());
            auto least = std::min_element(cycle.begin(), cycle.end());
            std::rotate(cycle.begin(), least, cycle.end());
            return cycle;
        }
        for (int u : path) color[static_cast<std::size_t>(u)] = 2;
    }
    return {};
}

// Active vertices ordered so every edge points to a later vertex (assumes
// acyclic): sort by distance-to-sink, descending, ties by index.
inline std::vector<int> forward_order(const std::vector<int>& out, const std::vector<char>& active) {
    const int n = static_cast<int>(out.size());
    std::vector<int> depth(static_cast<std::size_t>(n), -1);
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (!active[static_cast<std::size_t>(s)]) continue;
        int v = s;
        stack.clear();
        while (v >= 0 && depth[static_cast<std::size_t>(v)] < 0) {
            stack.push_back(v);
            v = out[static_cast<std::size_t>(v)];
        }
        int d = v < 0 ? 0 : depth[static_cast<std::size_t>(v)] + 1;
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) depth[static_cast<std::size_t>(*it)] = d++;
    }
    std::vector<int> order;
    for (int v = 0; v < n; ++v) {
        if (active[static_cast<std::size_t>(v)]) order.push_back(v);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (depth[static_cast<std::size_t>(a)] != depth[static_cast<std::size_t>(b)]) {
            return depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)];
        }
        return a < b;
    });
    return order;
}

// Result of matching the profile against the three structural conditions for
// a proposal-maximal run. The pairing is forced: the shared last receiver is
// the sink, every other receiver goes with her top proposer, and only the
// order of those pairs is free (any forward order of the second-choice graph).
struct MaxPropAnalysis {
    bool ok = false;
    MaxPropFailure failed = MaxPropFailure::LeastPreferred;
    std::vector<int> failure_agents;
    std::vector<int> cycle;

    int sink = -1;                 // receiver every proposer ranks last
    int leftover = -1;             // proposer who is nobody's top
    std::vector<int> partner;      // receiver -> her top proposer (except sink)
    std::vector<int> slot_order;   // receivers other than the sink, pair order
};

template <class View>
MaxPropAnalysis analyze_max_prop(const View& view) {
    const int n = view.size();
    MaxPropAnalysis a;

    const int sink = view.proposer_last(0);
    for (int i = 1; i < n; ++i) {
        if (view.proposer_last(i) != sink) {
            a.failed = MaxPropFailure::LeastPreferred;
            a.failure_agents = {0, i};
            return a;
        }
    }
    a.sink = sink;

    a.partner.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> paired_receiver(static_cast<std::size_t>(n), -1);  // proposer -> receiver
    for (int w = 0; w < n; ++w) {
        if (w == sink) continue;
        const int t = view.receiver_top(w);
        if (paired_receiver[static_cast<std::size_t>(t)] >= 0 || view.proposer_penultimate(t) != w) {
            a.failed = MaxPropFailure::Penultimate;
            a.failure_agents = {w, t};
            return a;
        }
        paired_receiver[static_cast<std::size_t>(t)] = w;
        a.partner[static_cast<std::size_t>(w)] = t;
    }
    for (int p = 0; p < n; ++p) {
        if (paired_receiver[static_cast<std::size_t>(p)] < 0) a.leftover = p;
    }

    // edge w -> receiver paired with w's second choice; none when the second
    // choice is the leftover proposer
    std::vector<int> out(static_cast<std::size_t>(n), -1);
    std::vector<char> active(static_cast<std::size_t>(n), 0);
    for (int w = 0; w < n; ++w) {
        if (w == sink) continue;
        active[static_cast<std::size_t>(w)] = 1;
        const int s = view.receiver_second(w);
        if (s != a.leftover) out[static_cast<std::size_t>(w)] = paired_receiver[static_cast<std::size_t>(s)];
    }
    a.cycle = functional_graph_cycle(out, active);
    if (!a.cycle.empty()) {
        a.failed = MaxPropFailure::SecondPrefAcyclic;
        return a;
    }
    a.slot_order = forward_order(out, active);
    a.ok = true;
    return a;
}

inline ProfileOrdering witness_ordering(const MaxPropAnalysis& a, int n, Side proposing) {
    std::vector<int> proposers, receivers;
    proposers.reserve(static_cast<std::size_t>(n));
    receivers.reserve(static_cast<std::size_t>(n));
    for (int w : a.slot_order) {
        receivers.push_back(w);
        proposers.push_back(a.partner[static_cast<std::size_t>(w)]);
    }
    receivers.push_back(a.sink);
    proposers.push_back(a.leftover);
    if (proposing == Side::Men) return ProfileOrdering(std::move(proposers), std::move(receivers));
    return ProfileOrdering(std::move(receivers), std::move(proposers));
}

template <class View>
ConditionReport max_prop_report(const View& view, Side proposing, Condition label) {
    const int n = view.size();
    ConditionReport rep;
    rep.condition = label;
    if (n == 1) {
        rep.verdict = true;  // the single proposal is already the maximum
        rep.ordering = ProfileOrdering::identity(1);
        rep.queries = view.queries();
        return rep;
    }
    MaxPropAnalysis a = analyze_max_prop(view);
    rep.verdict = a.ok;
    if (a.ok) {
        rep.ordering = witness_ordering(a, n, proposing);
    } else {
        rep.failed = a.failed;
        rep.failure_agents = std::move(a.failure_agents);
        rep.cycle = std::move(a.cycle);
    }
    if (n == 2) {
        // independent route: with two proposers, maximal proposals happen
        // exactly when they share a top receiver
        const bool shared_top = view.proposer_top(0) == view.proposer_top(1);
        if (shared_top != rep.verdict) throw Error("shared-top route disagrees with structural check");
    }
    rep.queries = view.queries();
    return rep;
}

template <class View>
ConditionReport max_rou_report(const View& view, Side proposing, Condition label) {
    const int n = view.size();
    ConditionReport rep = max_prop_report(view, proposing, label);
    rep.condition = label;
    if (n == 1 || !rep.verdict) {
        rep.queries = view.queries();
        return rep;
    }
    // additionally, every receiver except the sink must be some proposer's top,
    // otherwise the opening round sheds more than one proposer
    const int sink = rep.ordering->order(opposite(proposing)).back();
    std::vector<char> is_top(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) is_top[static_cast<std::size_t>(view.proposer_top(i))] = 1;
    for (int w = 0; w < n; ++w) {
        if (w != sink && !is_top[static_cast<std::size_t>(w)]) {
            rep.verdict = false;
            rep.ordering.reset();
            rep.failed = MaxPropFailure::OntoTopPrefs;
            rep.failure_agents = {w};
            break;
        }
    }
    rep.queries = view.queries();
    return rep;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// maxprop / maxrou

inline ConditionReport is_max_prop(const PreferenceProfile& profile, Side proposing) {
    ProfilePositions view(profile, proposing);
    return detail::max_prop_report(
        view, proposing,
        proposing == Side::Men ? Condition::MMaxProp : Condition::WMaxProp);
}

inline ConditionReport is_max_rou(const PreferenceProfile& profile, Side proposing) {
    ProfilePositions view(profile, proposing);
    return detail::max_rou_report(
        view, proposing, proposing == Side::Men ? Condition::MMaxRou : Condition::WMaxRou);
}

inline ConditionReport is_max_prop(const PartialMarket& market, Side proposing = Side::Men) {
    PartialPositions view(market);
    return detail::max_prop_report(
        view, proposing,
        proposing == Side::Men ? Condition::MMaxProp : Condition::WMaxProp);
}

inline ConditionReport is_max_rou(const PartialMarket& market, Side proposing = Side::Men) {
    PartialPositions view(market);
    return detail::max_rou_report(
        view, proposing, proposing == Side::Men ? Condition::MMaxRou : Condition::WMaxRou);
}

// Replays an ordering against the three structural conditions.
inline bool satisfies_max_prop_conditions_with(const PreferenceProfile& profile, Side proposing,
                                               const ProfileOrdering& ordering) {
    const int n = profile.size();
    if (ordering.size() != n) throw DimensionMismatch(ordering.size(), n);
    if (n == 1) return true;
    const Side receiving = opposite(proposing);
    const auto& proposers = ordering.order(proposing);
    const auto& receivers = ordering.order(receiving);
    const int sink = receivers[static_cast<std::size_t>(n - 1)];
    for (int i = 0; i < n; ++i) {
        if (profile.row(proposing, proposers[static_cast<std::size_t>(i)])[static_cast<std::size_t>(n - 1)] != sink) return false;
    }
    for (int i = 0; i + 1 < n; ++i) {
        const int w = receivers[static_cast<std::size_t>(i)];
        const int m = proposers[static_cast<std::size_t>(i)];
        if (profile.row(receiving, w)[0] != m) return false;
        if (profile.row(proposing, m)[static_cast<std::size_t>(n - 2)] != w) return false;
    }
    std::vector<int> slot_of_proposer(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) slot_of_proposer[static_cast<std::size_t>(proposers[static_cast<std::size_t>(i)])] = i;
    for (int k = 0; k + 1 < n; ++k) {
        const int s = profile.row(receiving, receivers[static_cast<std::size_t>(k)])[1];
        if (slot_of_proposer[static_cast<std::size_t>(s)] <= k) return false;
    }
    return true;
}

inline bool satisfies_max_rou_conditions_with(const PreferenceProfile& profile, Side proposing,
                                              const ProfileOrdering& ordering) {
    if (!satisfies_max_prop_conditions_with(profile, proposing, ordering)) return false;
    const int n = profile.size();
    if (n == 1) return true;
    const int sink = ordering.order(opposite(proposing)).back();
    std::vector<char> is_top(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) is_top[static_cast<std::size_t>(profile.row(proposing, i)[0])] = 1;
    for (int w = 0; w < n; ++w) {
        if (w != sink && !is_top[static_cast<std::size_t>(w)]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Second-preference digraph (explicit form, under a caller-supplied labeling)

// Digraph on the pair slots 1..n-1 of a labeling: an edge from slot i to slot j
// says the receiver at slot i has the proposer at slot j as her second choice.
struct SecondPrefDigraph {
    int vertex_count = 0;
    std::vector<int> out_edge;  // slot -> slot, or -1 when the second choice sits at slot n
};

inline SecondPrefDigraph build_second_pref_digraph(const PreferenceProfile& profile, Side proposing,
                                                   const ProfileOrdering& labeling) {
    const int n = profile.size();
    if (labeling.size() != n) throw DimensionMismatch(labeling.size(), n);
    const Side receiving = opposite(proposing);
    const auto& proposers = labeling.order(proposing);
    const auto& receivers = labeling.order(receiving);
    if (n >= 2) {
        const int sink = receivers[static_cast<std::size_t>(n - 1)];
        for (int i = 0; i < n; ++i) {
            if (profile.row(proposing, proposers[static_cast<std::size_t>(i)])[static_cast<std::size_t>(n - 1)] != sink) {
                throw LabelingInvalid("labeling: proposers do not all rank the slot-n receiver last");
            }
        }
        for (int i = 0; i + 1 < n; ++i) {
            const int w = receivers[static_cast<std::size_t>(i)];
            const int m = proposers[static_cast<std::size_t>(i)];
            if (profile.row(receiving, w)[0] != m ||
                profile.row(proposing, m)[static_cast<std::size_t>(n - 2)] != w) {
                throw LabelingInvalid("labeling: slot " + std::to_string(i + 1) +
                                      " is not a top/penultimate pair");
            }
        }
    }
    SecondPrefDigraph g;
    g.vertex_count = n - 1;
    g.out_edge.assign(static_cast<std::size_t>(n - 1), -1);
    std::vector<int> slot_of_proposer(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) slot_of_proposer[static_cast<std::size_t>(proposers[static_cast<std::size_t>(i)])] = i;
    for (int k = 0; k + 1 < n; ++k) {
        const int s = profile.row(receiving, receivers[static_cast<std::size_t>(k)])[1];
        const int j = slot_of_proposer[static_cast<std::size_t>(s)];
        if (j <= n - 2) g.out_edge[static_cast<std::size_t>(k)] = j;
    }
    return g;
}

inline std::vector<int> digraph_cycle(const SecondPrefDigraph& g) {
    std::vector<char> active(static_cast<std::size_t>(g.vertex_count), 1);
    return detail::functional_graph_cycle(g.out_edge, active);
}

inline bool is_acyclic(const SecondPrefDigraph& g) { return digraph_cycle(g).empty(); }

// ---------------------------------------------------------------------------
// spc

// Greedy fixed-pair elimination: repeatedly remove a mutually-top pair of the
// surviving sub-population (lowest man index when several exist; the verdict
// is choice-independent because fixed pairs stay fixed under removals).
inline ConditionReport is_spc(const PreferenceProfile& profile) {
    const int n = profile.size();
    ConditionReport rep;
    rep.condition = Condition::Spc;
    std::vector<char> alive_m(static_cast<std::size_t>(n), 1), alive_w(static_cast<std::size_t>(n), 1);
    std::vector<int> men_order, women_order;
    auto first_alive = [&](Side side, int agent, const std::vector<char>& alive) {
        for (int x : profile.row(side, agent)) {
            if (alive[static_cast<std::size_t>(x)]) return x;
        }
        return -1;
    };
    for (int step = 0; step < n; ++step) {
        int pick_m = -1, pick_w = -1;
        for (int m = 0; m < n; ++m) {
            if (!alive_m[static_cast<std::size_t>(m)]) continue;
            const int w = first_alive(Side::Men, m, alive_w);
            if (first_alive(Side::Women, w, alive_m) == m) {
                pick_m = m;
                pick_w = w;
                break;
            }
        }
        if (pick_m < 0) {
            rep.verdict = false;
            for (int m = 0; m < n; ++m) {
                if (alive_m[static_cast<std::size_t>(m)]) rep.stuck_men.push_back(m);
            }
            for (int w = 0; w < n; ++w) {
                if (alive_w[static_cast<std::size_t>(w)]) rep.stuck_women.push_back(w);
            }
            return rep;
        }
        men_order.push_back(pick_m);
        women_order.push_back(pick_w);
        alive_m[static_cast<std::size_t>(pick_m)] = 0;
        alive_w[static_cast<std::size_t>(pick_w)] = 0;
    }
    rep.verdict = true;
    rep.ordering = ProfileOrdering(std::move(men_order), std::move(women_order));
    return rep;
}

// Replays an ordering against the raw definition: each m_i prefers w_i to all
// later women and each w_i prefers m_i to all later men.
inline bool satisfies_spc_with(const PreferenceProfile& profile, const ProfileOrdering& ordering) {
    const int n = profile.size();
    if (ordering.size() != n) throw DimensionMismatch(ordering.size(), n);
    for (int i = 0; i < n; ++i) {
        for (int l = i + 1; l < n; ++l) {
            if (!profile.prefers(Side::Men, ordering.men()[static_cast<std::size_t>(i)],
                                 ordering.women()[static_cast<std::size_t>(i)], ordering.women()[static_cast<std::size_t>(l)])) {
                return false;
            }
            if (!profile.prefers(Side::Women, ordering.women()[static_cast<std::size_t>(i)],
                                 ordering.men()[static_cast<std::size_t>(i)], ordering.men()[static_cast<std::size_t>(l)])) {
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// ncc

inline constexpr int kDefaultNccCeiling = 6;

// Both no-crossing clauses for all i<j, k<l under the given orderings.
inline bool satisfies_ncc_with(const PreferenceProfile& profile, const ProfileOrdering& ordering) {
    const int n = profile.size();
    if (ordering.size() != n) throw DimensionMismatch(ordering.size(), n);
    const auto& men = ordering.men();
    const auto& women = ordering.women();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (int l = k + 1; l < n; ++l) {
                    if (profile.prefers(Side::Men, men[static_cast<std::size_t>(i)], women[static_cast<std::size_t>(l)], women[static_cast<std::size_t>(k)]) &&
                        !profile.prefers(Side::Men, men[static_cast<std::size_t>(j)], women[static_cast<std::size_t>(l)], women[static_cast<std::size_t>(k)])) {
                        return false;
                    }
                    if (profile.prefers(Side::Women, women[static_cast<std::size_t>(k)], men[static_cast<std::size_t>(j)], men[static_cast<std::size_t>(i)]) &&
                        !profile.prefers(Side::Women, women[static_cast<std::size_t>(l)], men[static_cast<std::size_t>(j)], men[static_cast<std::size_t>(i)])) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

// Ordering search with a hard ceiling: exponential in the worst case, an
// oracle rather than a scalable recognizer. Profiles that fail the sequential
// condition are rejected outright (this condition refines it); the remaining
// search walks slot assignments for both sides together and drops a partial
// assignment as soon as one clause instance fails.
//
// Restricting the slots to fixed-pair elimination orders would be wrong: some
// profiles have witnesses only outside that family, even though the condition
// implies eliminability.
inline ConditionReport is_ncc(const PreferenceProfile& profile, int ceiling = kDefaultNccCeiling) {
    const int n = profile.size();
    if (n > ceiling) throw InstanceTooLarge(n, ceiling);
    ConditionReport rep;
    rep.condition = Condition::Ncc;

    if (!is_spc(profile).verdict) return rep;

    std::vector<int> men_slots, women_slots;
    men_slots.reserve(static_cast<std::size_t>(n));
    women_slots.reserve(static_cast<std::size_t>(n));
    std::vector<char> alive_m(static_cast<std::size_t>(n), 1), alive_w(static_cast<std::size_t>(n), 1);

    auto clauses_hold_at = [&](int t) {
        // every four-index instance whose largest slot is t
        for (int j = 1; j <= t; ++j) {
            for (int i = 0; i < j; ++i) {
                for (int l = 1; l <= t; ++l) {
                    if (j != t && l != t) continue;
                    for (int k = 0; k < l; ++k) {
                        if (profile.prefers(Side::Men, men_slots[static_cast<std::size_t>(i)], women_slots[static_cast<std::size_t>(l)],
                                            women_slots[static_cast<std::size_t>(k)]) &&
                            !profile.prefers(Side::Men, men_slots[static_cast<std::size_t>(j)], women_slots[static_cast<std::size_t>(l)],
                                             women_slots[static_cast<std::size_t>(k)])) {
                            return false;
                        }
                        if (profile.prefers(Side::Women, women_slots[static_cast<std::size_t>(k)], men_slots[static_cast<std::size_t>(j)],
                                            men_slots[static_cast<std::size_t>(i)]) &&
                            !profile.prefers(Side::Women, women_slots[static_cast<std::size_t>(l)], men_slots[static_cast<std::size_t>(j)],
                                             men_slots[static_cast<std::size_t>(i)])) {
                            return false;
                        }
                    }
                }
            }
        }
        return true;
    };

    std::function<bool()> search = [&]() -> bool {
        const int t = static_cast<int>(men_slots.size());
        if (t == n) return true;
        for (int m = 0; m < n; ++m) {
            if (!alive_m[static_cast<std::size_t>(m)]) continue;
            men_slots.push_back(m);
            alive_m[static_cast<std::size_t>(m)] = 0;
            for (int w = 0; w < n; ++w) {
                if (!alive_w[static_cast<std::size_t>(w)]) continue;
                women_slots.push_back(w);
                alive_w[static_cast<std::size_t>(w)] = 0;
                if (clauses_hold_at(t) && search()) return true;
                alive_w[static_cast<std::size_t>(w)] = 1;
                women_slots.pop_back();
            }
            alive_m[static_cast<std::size_t>(m)] = 1;
            men_slots.pop_back();
        }
        return false;
    };

    rep.verdict = search();
    if (rep.verdict) rep.ordering = ProfileOrdering(std::move(men_slots), std::move(women_slots));
    return rep;
}

// ---------------------------------------------------------------------------
// usm as a condition report

inline ConditionReport usm_condition_report(const PreferenceProfile& profile) {
    UsmReport r = usm_report(profile);
    ConditionReport rep;
    rep.condition = Condition::Usm;
    rep.verdict = r.unique;
    if (r.unique) {
        rep.unique_matching = std::move(r.men_optimal);
    } else {
        rep.extremes = std::make_pair(std::move(r.men_optimal), std::move(r.women_optimal));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// classify

enum class NccMode { Auto, On, Off };

struct ClassifyOptions {
    NccMode ncc = NccMode::Auto;
    int ncc_ceiling = kDefaultNccCeiling;
};

// One cell of the membership diagram over the seven conditions. A missing ncc
// value means the search was skipped, not that the condition fails.
struct RegionLabel {
    bool usm = false;
    bool spc = false;
    std::optional<bool> ncc;
    bool m_max_prop = false;
    bool w_max_prop = false;
    bool m_max_rou = false;
    bool w_max_rou = false;

    // order: usm, spc, ncc, m-maxprop, w-maxprop, m-maxrou, w-maxrou;
    // '-' marks a skipped ncc
    std::string bitstring() const {
        std::string s;
        s.reserve(7);
        s.push_back(usm ? '1' : '0');
        s.push_back(spc ? '1' : '0');
        s.push_back(ncc.has_value() ? (*ncc ? '1' : '0') : '-');
        s.push_back(m_max_prop ? '1' : '0');
        s.push_back(w_max_prop ? '1' : '0');
        s.push_back(m_max_rou ? '1' : '0');
        s.push_back(w_max_rou ? '1' : '0');
        return s;
    }

    friend bool operator==(const RegionLabel&, const RegionLabel&) = default;
};

inline RegionLabel classify_with_runs(const PreferenceProfile& profile, const Matching& men_optimal,
                                      const Matching& women_optimal, const ClassifyOptions& opt = {}) {
    RegionLabel r;
    r.usm = men_optimal == women_optimal;
    r.spc = is_spc(profile).verdict;
    const bool eval_ncc =
        opt.ncc == NccMode::On || (opt.ncc == NccMode::Auto && profile.size() <= opt.ncc_ceiling);
    if (eval_ncc) {
        r.ncc = is_ncc(profile, std::max(opt.ncc_ceiling, profile.size())).verdict;
    }
    r.m_max_prop = is_max_prop(profile, Side::Men).verdict;
    r.w_max_prop = is_max_prop(profile, Side::Women).verdict;
    r.m_max_rou = is_max_rou(profile, Side::Men).verdict;
    r.w_max_rou = is_max_rou(profile, Side::Women).verdict;
    return r;
}

inline RegionLabel classify(const PreferenceProfile& profile, const ClassifyOptions& opt = {}) {
    auto [men_run, women_run] = run_da_dual(profile);
    return classify_with_runs(profile, men_run.matching, women_run.matching, opt);
}

}  // namespace smlab
