#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "smlab/census.hpp"
#include "smlab/conditions.hpp"
#include "smlab/core.hpp"
#include "smlab/da.hpp"
#include "smlab/stability.hpp"

namespace smlab {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Profile text format
//
//   # comment to end of line; blank lines ignored
//   n
//   n men's rows, each n whitespace-separated 1-based woman indices,
//     most preferred first
//   n women's rows, same convention with man indices

inline PreferenceProfile parse_profile(std::string_view text) {
    struct TokenLine {
        int line;
        std::vector<long long> values;
    };
    std::vector<TokenLine> lines;
    {
        std::istringstream in{std::string(text)};
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            std::istringstream ls(raw);
            TokenLine tl{line_no, {}};
            std::string tok;
            while (ls >> tok) {
                try {
                    std::size_t used = 0;
                    const long long v = std::stoll(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument(tok);
                    tl.values.push_back(v);
                } catch (const std::exception&) {
                    throw ParseError(line_no, "expected an integer, found \"" + tok + "\"");
                }
            }
            if (!tl.values.empty()) lines.push_back(std::move(tl));
        }
    }

    if (lines.empty()) throw ParseError(1, "missing size line");
    if (lines[0].values.size() != 1) throw ParseError(lines[0].line, "size line must hold a single integer");
    const long long n_raw = lines[0].values[0];
    if (n_raw < 1 || n_raw > 1 << 20) throw ParseError(lines[0].line, "size out of range");
    const int n = static_cast<int>(n_raw);

    if (static_cast<int>(lines.size()) < 1 + 2 * n) {
        throw ParseError(lines.back().line, "expected " + std::to_string(2 * n) +
                                                " preference rows, found " +
                                                std::to_string(lines.size() - 1));
    }
    if (static_cast<int>(lines.size()) > 1 + 2 * n) {
        throw ParseError(lines[static_cast<std::size_t>(1 + 2 * n)].line, "unexpected extra row");
    }

    std::vector<std::vector<int>> men, women;
    std::vector<int> row_line(static_cast<std::size_t>(2 * n));
    for (int r = 0; r < 2 * n; ++r) {
        const auto& tl = lines[static_cast<std::size_t>(1 + r)];
        row_line[static_cast<std::size_t>(r)] = tl.line;
        if (static_cast<int>(tl.values.size()) != n) {
            throw ParseError(tl.line, "row has " + std::to_string(tl.values.size()) +
                                          " entries, expected " + std::to_string(n));
        }
        std::vector<int> row;
        row.reserve(static_cast<std::size_t>(n));
        for (long long v : tl.values) {
            if (v < 1 || v > n) {
                throw ParseError(tl.line, "index " + std::to_string(v) + " outside 1.." + std::to_string(n));
            }
            row.push_back(static_cast<int>(v - 1));
        }
        (r < n ? men : women).push_back(std::move(row));
    }

    try {
        return PreferenceProfile::validated(n, std::move(men), std::move(women));
    } catch (const ValidationError& e) {
        const int r = (e.row.side == Side::Men ? 0 : n) + e.row.index;
        throw ParseError(row_line[static_cast<std::size_t>(r)], e.what());
    }
}

inline std::string render_profile(const PreferenceProfile& profile) {
    std::ostringstream out;
    const int n = profile.size();
    out << n << "\n";
    for (Side side : {Side::Men, Side::Women}) {
        for (int i = 0; i < n; ++i) {
            auto row = profile.row(side, i);
            for (int k = 0; k < n; ++k) out << (k ? " " : "") << row[static_cast<std::size_t>(k)] + 1;
            out << "\n";
        }
    }
    return out.str();
}

inline PreferenceProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open profile file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profile(buf.str());
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// JSON report schemas (keys are emitted in sorted order, so identical inputs
// produce byte-identical documents)

inline json ids_json(const std::vector<int>& indices, Side side) {
    json arr = json::array();
    for (int i : indices) arr.push_back(AgentIndex{side, i}.label());
    return arr;
}

inline json to_json(const Matching& m) {
    json arr = json::array();
    for (int w : m.man_to_woman()) arr.push_back(w + 1);
    return json{{"man_to_woman", arr}};
}

inline json to_json(const ProfileOrdering& o) {
    json men = json::array(), women = json::array();
    for (int m : o.men()) men.push_back(m + 1);
    for (int w : o.women()) women.push_back(w + 1);
    return json{{"men", men}, {"women", women}};
}

inline json to_json(const PreferenceProfile& p) {
    json men = json::array(), women = json::array();
    for (int i = 0; i < p.size(); ++i) {
        json row = json::array();
        for (int w : p.man_row(i)) row.push_back(w + 1);
        men.push_back(std::move(row));
    }
    for (int j = 0; j < p.size(); ++j) {
        json row = json::array();
        for (int m : p.woman_row(j)) row.push_back(m + 1);
        women.push_back(std::move(row));
    }
    return json{{"men", men}, {"n", p.size()}, {"women", women}};
}

inline json to_json(const DaOutcome& out, bool include_trace) {
    json j{{"matching", to_json(out.matching)},
           {"proposal_count", out.proposal_count},
           {"proposing", side_name(out.proposing)},
           {"round_count", out.round_count}};
    j["per_receiver_proposals"] = out.per_receiver_proposals;
    if (include_trace) {
        json trace = json::array();
        for (const auto& ev : out.trace) {
            json e{{"proposer", ev.proposer.label()},
                   {"result", proposal_result_id(ev.result)},
                   {"round", ev.round},
                   {"target", ev.target.label()}};
            if (ev.result == ProposalResult::DisplacedPrevious) {
                e["displaced"] = AgentIndex{ev.proposer.side, ev.displaced}.label();
            }
            trace.push_back(std::move(e));
        }
        j["trace"] = std::move(trace);
    }
    return j;
}

inline json to_json(const ConditionReport& rep) {
    json j{{"condition", condition_id(rep.condition)}, {"verdict", rep.verdict}};
    if (rep.queries) j["queries"] = *rep.queries;

    const Side receiver_side =
        (rep.condition == Condition::WMaxProp || rep.condition == Condition::WMaxRou) ? Side::Men
                                                                                      : Side::Women;
    json witness;
    if (rep.ordering) {
        witness = to_json(*rep.ordering);
        witness["kind"] = "ordering";
    } else if (rep.failed) {
        witness = json{{"failed", max_prop_failure_id(*rep.failed)}, {"kind", "failed-condition"}};
        if (*rep.failed == MaxPropFailure::SecondPrefAcyclic) {
            witness["cycle"] = ids_json(rep.cycle, receiver_side);
        } else if (*rep.failed == MaxPropFailure::LeastPreferred) {
            witness["agents"] = ids_json(rep.failure_agents, opposite(receiver_side));
        } else if (*rep.failed == MaxPropFailure::OntoTopPrefs) {
            witness["agents"] = ids_json(rep.failure_agents, receiver_side);
        } else {
            // the clashing receiver first, then the proposer involved
            witness["agents"] =
                json::array({AgentIndex{receiver_side, rep.failure_agents[0]}.label(),
                             AgentIndex{opposite(receiver_side), rep.failure_agents[1]}.label()});
        }
    } else if (!rep.stuck_men.empty() || !rep.stuck_women.empty()) {
        witness = json{{"kind", "stuck-subpopulation"},
                       {"men", ids_json(rep.stuck_men, Side::Men)},
                       {"women", ids_json(rep.stuck_women, Side::Women)}};
    } else if (rep.unique_matching) {
        witness = to_json(*rep.unique_matching);
        witness["kind"] = "unique-matching";
    } else if (rep.extremes) {
        witness = json{{"kind", "distinct-stable-matchings"},
                       {"men_optimal", to_json(rep.extremes->first)},
                       {"women_optimal", to_json(rep.extremes->second)}};
    }
    j["witness"] = witness.is_null() ? json(nullptr) : witness;
    return j;
}

inline json to_json(const StableSet& set) {
    json arr = json::array();
    for (const auto& m : set.matchings) arr.push_back(to_json(m));
    return json{{"count", set.matchings.size()}, {"matchings", arr}};
}

inline json to_json(const RegionLabel& r) {
    json j{{"m-maxprop", r.m_max_prop}, {"m-maxrou", r.m_max_rou},
           {"region", r.bitstring()},  {"spc", r.spc},
           {"usm", r.usm},             {"w-maxprop", r.w_max_prop},
           {"w-maxrou", r.w_max_rou}};
    j["ncc"] = r.ncc.has_value() ? json(*r.ncc) : json("skipped");
    return j;
}

// ---------------------------------------------------------------------------
// Census tables, checkpoints

inline json to_json(const TheoremViolation& v) {
    json profile{{"men", v.men_rows}, {"women", v.women_rows}};
    for (auto& row : profile["men"]) {
        for (auto& e : row) e = e.get<int>() + 1;
    }
    for (auto& row : profile["women"]) {
        for (auto& e : row) e = e.get<int>() + 1;
    }
    profile["n"] = static_cast<int>(v.men_rows.size());
    return json{{"cursor", v.cursor}, {"profile", profile}};
}

inline json to_json(const CensusTable& t) {
    json mode;
    if (t.exhaustive) {
        mode = json{{"kind", "exhaustive"}};
    } else {
        mode = json{{"count", t.sample_count}, {"kind", "sampled"}, {"seed", t.sample_seed}};
    }
    json checks = json::object();
    for (const auto& [id, flag] : t.theorem_checks) {
        if (flag.holds) {
            checks[id] = json{{"holds", true}};
        } else {
            checks[id] = json{{"holds", false}, {"witness", to_json(*flag.violation)}};
        }
    }
    return json{{"condition_counts", t.condition_counts},
                {"mode", mode},
                {"n", t.n},
                {"ncc", t.ncc_evaluated ? "evaluated" : "skipped"},
                {"region_counts", t.region_counts},
                {"stable_set", t.stable_evaluated ? "evaluated" : "skipped"},
                {"theorem_checks", checks},
                {"total", t.total}};
}

inline CensusTable census_table_from_json(const json& j) {
    CensusTable t;
    t.n = j.at("n").get<int>();
    t.exhaustive = j.at("mode").at("kind").get<std::string>() == "exhaustive";
    if (!t.exhaustive) {
        t.sample_count = j.at("mode").at("count").get<std::uint64_t>();
        t.sample_seed = j.at("mode").at("seed").get<std::uint64_t>();
    }
    t.ncc_evaluated = j.at("ncc").get<std::string>() == "evaluated";
    t.stable_evaluated = j.at("stable_set").get<std::string>() == "evaluated";
    t.total = j.at("total").get<std::uint64_t>();
    for (const auto& [key, value] : j.at("region_counts").items()) {
        t.region_counts[key] = value.get<std::uint64_t>();
    }
    for (const auto& [key, value] : j.at("condition_counts").items()) {
        t.condition_counts[key] = value.get<std::uint64_t>();
    }
    for (const auto& [id, value] : j.at("theorem_checks").items()) {
        TheoremFlag flag;
        flag.holds = value.at("holds").get<bool>();
        if (!flag.holds) {
            const auto& w = value.at("witness");
            TheoremViolation v;
            v.cursor = w.at("cursor").get<std::vector<std::uint64_t>>();
            for (const auto& row : w.at("profile").at("men")) {
                std::vector<int> r;
                for (const auto& e : row) r.push_back(e.get<int>() - 1);
                v.men_rows.push_back(std::move(r));
            }
            for (const auto& row : w.at("profile").at("women")) {
                std::vector<int> r;
                for (const auto& e : row) r.push_back(e.get<int>() - 1);
                v.women_rows.push_back(std::move(r));
            }
            flag.violation = std::move(v);
        }
        t.theorem_checks[id] = std::move(flag);
    }
    return t;
}

inline std::string census_csv(const CensusTable& t) {
    std::ostringstream out;
    out << "region,count\n";
    for (const auto& [region, count] : t.region_counts) out << region << "," << count << "\n";
    return out.str();
}

inline json checkpoint_to_json(const CensusTable& partial, const std::vector<std::uint64_t>& cursor) {
    return json{{"cursor", cursor}, {"table", to_json(partial)}};
}

inline std::pair<CensusTable, std::vector<std::uint64_t>> checkpoint_from_json(const json& j) {
    return {census_table_from_json(j.at("table")),
            j.at("cursor").get<std::vector<std::uint64_t>>()};
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace smlab
