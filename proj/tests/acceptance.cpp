// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 1 and 2 also drive the installed command-line binary.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "smlab/census.hpp"
#include "smlab/cli.hpp"
#include "smlab/conditions.hpp"
#include "smlab/da.hpp"
#include "smlab/io.hpp"
#include "smlab/stability.hpp"

using namespace smlab;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "[ PASS ]" : "[ FAIL ]") << " criterion " << idx << ": " << name;
    if (!pass && !detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!pass) ++failures;
}

std::string repo_path(const std::string& rel) { return std::string(SMLAB_REPO_DIR) + "/" + rel; }

std::string run_tool(const std::string& args) {
    const std::string cmd = std::string(SMLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
    pclose(pipe);
    return out;
}

template <class F>
double best_of_three_ms(F&& f) {
    double best = 1e18;
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

// ---------------------------------------------------------------------------

bool criterion1() {
    const auto profile = fixture_profile("example-8");
    bool ok = true;
    std::string detail;

    const auto run = run_da(profile, Side::Men);
    ok = ok && run.proposal_count == 13;
    ok = ok && is_max_prop(profile, Side::Men).verdict;
    ok = ok && !is_max_rou(profile, Side::Men).verdict;
    if (!ok) detail = "library verdicts off";

    const double ms = best_of_three_ms([&] {
        volatile bool sink = run_da(profile, Side::Men).proposal_count == 13 &&
                             is_max_prop(profile, Side::Men).verdict &&
                             !is_max_rou(profile, Side::Men).verdict;
        (void)sink;
    });
    if (ms >= 1.0) {
        ok = false;
        detail = "took " + std::to_string(ms) + " ms";
    }

    const auto da_json = json::parse(run_tool("da " + repo_path("data/example8.prof") +
                                              " --proposing men --json"));
    const auto prop_json = json::parse(run_tool("check " + repo_path("data/example8.prof") +
                                                " --condition m-maxprop"));
    const auto rou_json = json::parse(run_tool("check " + repo_path("data/example8.prof") +
                                               " --condition m-maxrou"));
    if (da_json["proposal_count"] != 13 || prop_json["verdict"] != true ||
        rou_json["verdict"] != false) {
        ok = false;
        detail = "command-line outputs off";
    }
    report(1, "13 proposals on the proposal-maximal fixture, recognizers agree", ok, detail);
    return ok;
}

bool criterion2() {
    const auto profile = fixture_profile("example-12");
    bool ok = true;
    std::string detail;

    ok = ok && run_da(profile, Side::Men).proposal_count == 6;
    ok = ok && is_usm(profile);
    ok = ok && !is_spc(profile).verdict;
    ok = ok && !is_max_prop(profile, Side::Men).verdict;
    if (!ok) detail = "library verdicts off";

    const double ms = best_of_three_ms([&] {
        volatile bool sink = run_da(profile, Side::Men).proposal_count == 6 && is_usm(profile) &&
                             !is_spc(profile).verdict && !is_max_prop(profile, Side::Men).verdict;
        (void)sink;
    });
    if (ms >= 1.0) {
        ok = false;
        detail = "took " + std::to_string(ms) + " ms";
    }

    const auto da_json = json::parse(run_tool("da " + repo_path("data/example12.prof") +
                                              " --proposing men --json"));
    if (da_json["proposal_count"] != 6) {
        ok = false;
        detail = "command-line output off";
    }
    report(2, "unique-but-not-sequential fixture: 6 proposals, usm, no spc, no maxprop", ok, detail);
    return ok;
}

bool criterion3() {
    bool ok = true;
    std::string detail;
    const double ms = best_of_three_ms([&] {
        for (int n = 2; n <= 10; ++n) {
            const auto out = run_da(extremal_profile(n), Side::Men);
            if (out.proposal_count != max_proposals(n) || out.round_count != max_rounds(n)) {
                ok = false;
            }
        }
    });
    if (!ok) detail = "bound missed";
    if (ms >= 10.0) {
        ok = false;
        detail = "took " + std::to_string(ms) + " ms";
    }
    report(3, "extremal family attains both bounds exactly for n=2..10", ok, detail);
    return ok;
}

struct CensusCache {
    CensusTable n3;
    std::string n3_bytes;
};

bool criterion4(CensusCache& cache) {
    bool ok = true;
    std::string detail;

    auto run3 = run_census(3, ExhaustiveMode{});
    cache.n3 = run3.table;
    cache.n3_bytes = dump_json(to_json(run3.table));
    for (const char* id : {"maxprop-checker-matches-da", "maxrou-checker-matches-da"}) {
        if (!run3.table.theorem_checks.at(id).holds) {
            ok = false;
            detail = std::string(id) + " violated at n=3";
        }
    }
    for (int n = 4; n <= 6; ++n) {
        auto run = run_census(n, SampledMode{100000, static_cast<std::uint64_t>(1000 + n)});
        for (const char* id : {"maxprop-checker-matches-da", "maxrou-checker-matches-da"}) {
            if (!run.table.theorem_checks.at(id).holds) {
                ok = false;
                detail = std::string(id) + " violated at n=" + std::to_string(n);
            }
        }
    }
    report(4, "recognizer verdicts equal the run-count definitions (46656 + 3x100000 profiles)", ok,
           detail);
    return ok;
}

bool criterion5(const CensusCache& cache) {
    bool ok = true;
    std::string detail;
    const std::vector<std::string> required = {
        "maxrou-implies-maxprop",     "maxprop-implies-usm",
        "spc-maxprop-disjoint",       "mmaxprop-wmaxprop-disjoint",
        "maxprop-equals-maxrou-small-n", "single-proposal-receiver",
        "proposal-round-bounds",      "round-capacity-nonincreasing",
        "extreme-opposition",         "stable-set-opposition",
        "maxprop-trace-structure",    "da-output-stable",
        "da-extremes-in-stable-set",  "usm-matches-stable-set",
    };
    if (cache.n3.total != 46656) {
        ok = false;
        detail = "census incomplete";
    }
    for (const auto& id : required) {
        if (!cache.n3.theorem_checks.at(id).holds) {
            ok = false;
            detail = id + " violated";
        }
    }
    report(5, "theorem suite holds on all 46656 size-3 profiles", ok, detail);
    return ok;
}

bool criterion6() {
    bool ok = true;
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<RegionLabel> labels;
    for (auto it = enumerate_profiles(2); !it.done(); it.advance()) {
        labels.push_back(classify(it.profile()));
    }
    if (labels.size() != 16) ok = false;
    int spc_count = 0, mp_count = 0;
    for (const auto& r : labels) {
        if (r.usm != r.spc || !r.ncc.has_value() || r.spc != *r.ncc) {
            ok = false;
            detail = "usm/spc/ncc memberships differ";
        }
        if (r.m_max_prop != r.m_max_rou || r.w_max_prop != r.w_max_rou) {
            ok = false;
            detail = "maxprop/maxrou memberships differ";
        }
        if (r.m_max_prop && !r.spc) {
            ok = false;
            detail = "maxprop escaped spc";
        }
        spc_count += r.spc ? 1 : 0;
        mp_count += r.m_max_prop ? 1 : 0;
    }
    if (mp_count >= spc_count) {
        ok = false;
        detail = "containment is not strict";
    }

    // the gap fixture sits strictly between the two classes
    const auto gap = fixture_profile("spc-not-maxprop-n2");
    if (!is_spc(gap).verdict || is_max_prop(gap, Side::Men).verdict) {
        ok = false;
        detail = "gap fixture misclassified";
    }

    // top-preference characterization of the proposal-maximal classes
    for (auto it = enumerate_profiles(2); !it.done(); it.advance()) {
        const auto p = it.profile();
        const bool men_share = p.man_row(0)[0] == p.man_row(1)[0];
        const bool women_share = p.woman_row(0)[0] == p.woman_row(1)[0];
        const bool mp = is_max_prop(p, Side::Men).verdict;
        const bool wp = is_max_prop(p, Side::Women).verdict;
        if (mp != men_share || (mp && wp) != (men_share && women_share)) {
            ok = false;
            detail = "top-preference characterization failed";
        }
    }

    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (ms >= 1000.0) {
        ok = false;
        detail = "took " + std::to_string(ms) + " ms";
    }
    report(6, "all 16 size-2 profiles satisfy the small-case identities", ok, detail);
    return ok;
}

bool criterion7() {
    bool ok = true;
    std::string detail;
    std::uint64_t checked = 0;
    for (int n = 1; n <= 3; ++n) {
        for (auto it = ProfileIterator(n); !it.done(); it.advance()) {
            const auto p = it.profile();
            if (is_usm(p) != (enumerate_stable(p).matchings.size() == 1)) {
                ok = false;
                detail = "mismatch at n=" + std::to_string(n);
            }
            ++checked;
        }
    }
    for (int n = 4; n <= 5; ++n) {
        for (std::uint64_t i = 0; i < 10000; ++i) {
            const auto p = sample_profile(n, static_cast<std::uint64_t>(2000 + n), i);
            if (is_usm(p) != (enumerate_stable(p).matchings.size() == 1)) {
                ok = false;
                detail = "mismatch at n=" + std::to_string(n);
            }
            ++checked;
        }
    }
    report(7,
           "dual-run uniqueness equals singleton enumeration on " + std::to_string(checked) +
               " profiles",
           ok, detail);
    return ok;
}

bool criterion8() {
    bool ok = true;
    std::string detail;
    for (int n = 2; n <= 512; ++n) {
        std::vector<PreferenceProfile> subjects;
        subjects.push_back(extremal_profile(n));
        subjects.push_back(sample_profile(n, 4242, static_cast<std::uint64_t>(n)));
        subjects.push_back(sample_profile(n, 4243, static_cast<std::uint64_t>(n)));
        for (const auto& p : subjects) {
            for (Side side : {Side::Men, Side::Women}) {
                const auto prop = is_max_prop(p, side);
                const auto rou = is_max_rou(p, side);
                if (!prop.queries || *prop.queries > 8 * n || !rou.queries ||
                    *rou.queries > 8 * n) {
                    ok = false;
                    detail = "budget exceeded at n=" + std::to_string(n);
                }
            }
        }
    }
    report(8, "recognizers stay within 8n position lookups for every n in 2..512", ok, detail);
    return ok;
}

bool criterion9(const CensusCache& cache) {
    bool ok = true;
    std::string detail;
    try {
        const std::string pinned = read_text_file(repo_path("data/census-n3.json"));
        if (pinned != cache.n3_bytes) {
            ok = false;
            detail = "census output drifted from the pinned table";
        }
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report(9, "exhaustive size-3 census matches the pinned regression table byte for byte", ok,
           detail);
    return ok;
}

}  // namespace

int main() {
    CensusCache cache;
    criterion1();
    criterion2();
    criterion3();
    criterion4(cache);
    criterion5(cache);
    criterion6();
    criterion7();
    criterion8();
    criterion9(cache);
    if (failures == 0) {
        std::cout << "all 9 criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria failed\n";
    return 1;
}
