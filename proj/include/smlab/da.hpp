#pragma once

#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "smlab/core.hpp"

namespace smlab {

enum class ProposalResult { AcceptedTentatively, Rejected, DisplacedPrevious };

inline const char* proposal_result_id(ProposalResult r) {
    switch (r) {
        case ProposalResult::AcceptedTentatively: return "accepted-tentatively";
        case ProposalResult::Rejected: return "rejected";
        case ProposalResult::DisplacedPrevious: return "displaced-previous";
    }
    return "?";
}

struct ProposalEvent {
    int round;  // 1-based
    AgentIndex proposer;
    AgentIndex target;
    ProposalResult result;
    int displaced = -1;  // proposer-side index unseated on DisplacedPrevious
};

struct DaOutcome {
    Side proposing = Side::Men;
    Matching matching;
    std::int64_t proposal_count = 0;
    int round_count = 0;
    std::vector<std::int64_t> per_receiver_proposals;
    std::vector<ProposalEvent> trace;
};

constexpr std::int64_t max_proposals(std::int64_t n) { return n * n - n + 1; }
constexpr std::int64_t max_rounds(std::int64_t n) { return n * n - 2 * n + 2; }

// Deferred acceptance with full instrumentation. A round is the batch of all
// proposers unmatched when the round opens; within a round they propose in
// ascending index order. The matching is order-independent, the trace is not.
inline DaOutcome run_da(const PreferenceProfile& profile, Side proposing) {
    const int n = profile.size();
    const Side receiving = opposite(proposing);

    std::vector<int> next_choice(static_cast<std::size_t>(n), 0);
    std::vector<int> holder(static_cast<std::size_t>(n), -1);      // receiver -> proposer held
    std::vector<int> engaged_to(static_cast<std::size_t>(n), -1);  // proposer -> receiver
    std::vector<int> batch;
    batch.reserve(static_cast<std::size_t>(n));

    DaOutcome out;
    out.proposing = proposing;
    out.per_receiver_proposals.assign(static_cast<std::size_t>(n), 0);
    out.trace.reserve(static_cast<std::size_t>(max_proposals(n)));

    int round = 0;
    while (true) {
        batch.clear();
        for (int p = 0; p < n; ++p) {
            if (engaged_to[static_cast<std::size_t>(p)] < 0) batch.push_back(p);
        }
        if (batch.empty()) break;
        ++round;
        for (int p : batch) {
            assert(next_choice[static_cast<std::size_t>(p)] < n);
            const int r = profile.row(proposing, p)[static_cast<std::size_t>(next_choice[static_cast<std::size_t>(p)]++)];
            ++out.per_receiver_proposals[static_cast<std::size_t>(r)];
            ++out.proposal_count;
            ProposalEvent ev{round, AgentIndex{proposing, p}, AgentIndex{receiving, r},
                             ProposalResult::Rejected, -1};
            const int held = holder[static_cast<std::size_t>(r)];
            if (held < 0) {
                holder[static_cast<std::size_t>(r)] = p;
                engaged_to[static_cast<std::size_t>(p)] = r;
                ev.result = ProposalResult::AcceptedTentatively;
            } else if (profile.prefers(receiving, r, p, held)) {
                holder[static_cast<std::size_t>(r)] = p;
                engaged_to[static_cast<std::size_t>(p)] = r;
                engaged_to[static_cast<std::size_t>(held)] = -1;
                ev.result = ProposalResult::DisplacedPrevious;
                ev.displaced = held;
            }
            out.trace.push_back(ev);
        }
    }
    out.round_count = round;

    std::vector<int> man_to_woman(static_cast<std::size_t>(n), -1);
    for (int r = 0; r < n; ++r) {
        const int p = holder[static_cast<std::size_t>(r)];
        if (proposing == Side::Men) {
            man_to_woman[static_cast<std::size_t>(p)] = r;
        } else {
            man_to_woman[static_cast<std::size_t>(r)] = p;
        }
    }
    out.matching = Matching::from_man_to_woman(std::move(man_to_woman));
    return out;
}

inline std::pair<DaOutcome, DaOutcome> run_da_dual(const PreferenceProfile& profile) {
    return {run_da(profile, Side::Men), run_da(profile, Side::Women)};
}

inline std::vector<std::int64_t> round_proposal_counts(const DaOutcome& out) {
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(out.round_count), 0);
    for (const auto& ev : out.trace) ++sizes[static_cast<std::size_t>(ev.round - 1)];
    return sizes;
}

}  // namespace smlab
