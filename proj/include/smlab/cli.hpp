#pragma once

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smlab/io.hpp"

namespace smlab {

inline int env_brute_ceiling() {
    if (const char* s = std::getenv("SMLAB_BRUTE_CEILING")) {
        try {
            return std::max(1, std::stoi(s));
        } catch (const std::exception&) {
        }
    }
    return kDefaultBruteForceCeiling;
}

namespace cli_detail {

inline ConditionReport evaluate_condition(const PreferenceProfile& p, Condition c, int ncc_ceiling) {
    switch (c) {
        case Condition::MMaxProp: return is_max_prop(p, Side::Men);
        case Condition::WMaxProp: return is_max_prop(p, Side::Women);
        case Condition::MMaxRou: return is_max_rou(p, Side::Men);
        case Condition::WMaxRou: return is_max_rou(p, Side::Women);
        case Condition::Spc: return is_spc(p);
        case Condition::Ncc: return is_ncc(p, ncc_ceiling);
        case Condition::Usm: return usm_condition_report(p);
    }
    throw Error("unreachable condition");
}

inline NccMode parse_ncc_mode(const std::string& s) {
    if (s == "auto") return NccMode::Auto;
    if (s == "on") return NccMode::On;
    if (s == "off") return NccMode::Off;
    throw Error("--ncc must be auto, on or off");
}

inline void emit(const std::string& payload, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << payload;
    } else {
        write_text_file(out_path, payload);
    }
}

inline std::string da_text(const DaOutcome& outcome, bool trace) {
    std::ostringstream os;
    const Side receiving = opposite(outcome.proposing);
    os << "proposing: " << side_name(outcome.proposing) << "\n";
    os << "matching:";
    for (int m = 0; m < outcome.matching.size(); ++m) {
        os << " " << AgentIndex{Side::Men, m}.label() << "-"
           << AgentIndex{Side::Women, outcome.matching.woman_of(m)}.label();
    }
    os << "\nproposals: " << outcome.proposal_count << "\nrounds: " << outcome.round_count << "\n";
    os << "per-receiver proposals:";
    for (std::size_t r = 0; r < outcome.per_receiver_proposals.size(); ++r) {
        os << " " << AgentIndex{receiving, static_cast<int>(r)}.label() << "="
           << outcome.per_receiver_proposals[r];
    }
    os << "\n";
    if (trace) {
        for (const auto& ev : outcome.trace) {
            os << "round " << ev.round << ": " << ev.proposer.label() << " -> " << ev.target.label()
               << " " << proposal_result_id(ev.result);
            if (ev.result == ProposalResult::DisplacedPrevious) {
                os << " (displaced " << AgentIndex{ev.proposer.side, ev.displaced}.label() << ")";
            }
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace cli_detail

// Command dispatch. Exit codes: 0 success, 1 failed --assert or verification
// violation, 2 usage or parse problems, 3 instance over a brute-force ceiling.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"structure lab for stable-marriage preference profiles"};
    app.name("smlab");
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "evaluate structural conditions on a profile");
    std::string check_file, check_condition = "all";
    bool check_assert = false;
    int check_ncc_ceiling = kDefaultNccCeiling;
    check->add_option("file", check_file, "profile file")->required();
    check->add_option("--condition", check_condition,
                      "m-maxprop|w-maxprop|m-maxrou|w-maxrou|spc|ncc|usm|all");
    check->add_flag("--assert", check_assert, "exit 1 when a verdict is false");
    check->add_option("--ncc-ceiling", check_ncc_ceiling, "ncc search size ceiling");

    auto* da = app.add_subcommand("da", "run instrumented deferred acceptance");
    std::string da_file, da_proposing;
    bool da_trace = false, da_json = false;
    da->add_option("file", da_file, "profile file")->required();
    da->add_option("--proposing", da_proposing, "men|women")->required();
    da->add_flag("--trace", da_trace, "include the proposal trace");
    da->add_flag("--json", da_json, "JSON output");

    auto* stable = app.add_subcommand("stable", "enumerate all stable matchings by brute force");
    std::string stable_file;
    int stable_max_n = -1;
    stable->add_option("file", stable_file, "profile file")->required();
    stable->add_option("--max-n", stable_max_n, "enumeration size ceiling");

    auto* classify_cmd = app.add_subcommand("classify", "evaluate all seven conditions at once");
    std::string classify_file, classify_ncc = "auto";
    int classify_ncc_ceiling = kDefaultNccCeiling;
    classify_cmd->add_option("file", classify_file, "profile file")->required();
    classify_cmd->add_option("--ncc", classify_ncc, "auto|on|off");
    classify_cmd->add_option("--ncc-ceiling", classify_ncc_ceiling, "ncc search size ceiling");

    auto* census = app.add_subcommand("census", "classify a whole profile space");
    int census_n = 0;
    bool census_exhaustive = false;
    std::uint64_t census_sample = 0, census_seed = 0, census_limit = 0;
    std::string census_resume, census_out, census_format = "json", census_ncc = "auto";
    unsigned census_threads = 0;
    bool census_allow_large = false;
    auto* census_n_opt = census->add_option("--n", census_n, "market size");
    auto* census_ex = census->add_flag("--exhaustive", census_exhaustive, "visit every profile");
    auto* census_sm = census->add_option("--sample", census_sample, "number of seeded samples");
    census->add_option("--seed", census_seed, "sampling seed");
    auto* census_rs = census->add_option("--resume", census_resume, "checkpoint file to continue");
    census->add_option("--out", census_out, "write output to this path");
    census->add_option("--format", census_format, "json|csv");
    census->add_option("--threads", census_threads, "worker threads (0 = hardware)");
    census->add_option("--ncc", census_ncc, "auto|on|off");
    census->add_option("--limit", census_limit, "pause after this many profiles, emit a checkpoint");
    census->add_flag("--allow-large", census_allow_large, "permit exhaustive runs beyond n=3");
    census_ex->excludes(census_sm);
    census_rs->excludes(census_ex);
    census_rs->excludes(census_sm);
    census_rs->excludes(census_n_opt);

    auto* verify = app.add_subcommand("verify", "machine-check the theorem suite over a profile space");
    int verify_n = 0;
    std::uint64_t verify_sample = 0, verify_seed = 0;
    unsigned verify_threads = 0;
    verify->add_option("--n", verify_n, "market size")->required();
    verify->add_option("--sample", verify_sample, "check seeded samples instead of every profile");
    verify->add_option("--seed", verify_seed, "sampling seed");
    verify->add_option("--threads", verify_threads, "worker threads (0 = hardware)");

    auto* gen = app.add_subcommand("gen", "emit a generated profile in the text format");
    std::string gen_family, gen_name, gen_out;
    int gen_n = 0;
    gen->add_option("--family", gen_family, "extremal|fixture")->required();
    gen->add_option("--n", gen_n, "size for the extremal family");
    gen->add_option("--name", gen_name, "fixture id");
    gen->add_option("--out", gen_out, "write output to this path");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (check->parsed()) {
            const PreferenceProfile p = load_profile(check_file);
            if (check_condition == "all") {
                json all = json::object();
                bool any_false = false;
                for (Condition c : {Condition::MMaxProp, Condition::WMaxProp, Condition::MMaxRou,
                                    Condition::WMaxRou, Condition::Spc, Condition::Ncc,
                                    Condition::Usm}) {
                    if (c == Condition::Ncc && p.size() > check_ncc_ceiling) {
                        all[condition_id(c)] = json{{"condition", "ncc"}, {"skipped", true}};
                        continue;
                    }
                    const ConditionReport rep = cli_detail::evaluate_condition(p, c, check_ncc_ceiling);
                    any_false = any_false || !rep.verdict;
                    all[condition_id(c)] = to_json(rep);
                }
                out << dump_json(all);
                return check_assert && any_false ? 1 : 0;
            }
            const auto c = condition_from_id(check_condition);
            if (!c) {
                err << "error: unknown condition \"" << check_condition << "\"\n";
                return 2;
            }
            const ConditionReport rep = cli_detail::evaluate_condition(p, *c, check_ncc_ceiling);
            out << dump_json(to_json(rep));
            return check_assert && !rep.verdict ? 1 : 0;
        }

        if (da->parsed()) {
            if (da_proposing != "men" && da_proposing != "women") {
                err << "error: --proposing must be men or women\n";
                return 2;
            }
            const PreferenceProfile p = load_profile(da_file);
            const DaOutcome outcome = run_da(p, da_proposing == "men" ? Side::Men : Side::Women);
            out << (da_json ? dump_json(to_json(outcome, da_trace))
                            : cli_detail::da_text(outcome, da_trace));
            return 0;
        }

        if (stable->parsed()) {
            const PreferenceProfile p = load_profile(stable_file);
            const int ceiling = stable_max_n > 0 ? stable_max_n : env_brute_ceiling();
            out << dump_json(to_json(enumerate_stable(p, ceiling)));
            return 0;
        }

        if (classify_cmd->parsed()) {
            const PreferenceProfile p = load_profile(classify_file);
            ClassifyOptions opts;
            opts.ncc = cli_detail::parse_ncc_mode(classify_ncc);
            opts.ncc_ceiling = classify_ncc_ceiling;
            out << dump_json(to_json(classify(p, opts)));
            return 0;
        }

        if (census->parsed()) {
            CensusOptions opt;
            opt.threads = census_threads;
            opt.ncc = cli_detail::parse_ncc_mode(census_ncc);
            opt.allow_large_exhaustive = census_allow_large;
            if (census_limit > 0) opt.limit = census_limit;
            CensusRun run;
            if (!census_resume.empty()) {
                auto [partial, cursor] = checkpoint_from_json(json::parse(read_text_file(census_resume)));
                run = continue_census(std::move(partial), cursor, opt);
            } else {
                if (census_n < 1) {
                    err << "error: census requires --n\n";
                    return 2;
                }
                if (!census_exhaustive && census_sample == 0) {
                    err << "error: census requires --exhaustive or --sample\n";
                    return 2;
                }
                run = census_exhaustive
                          ? run_census(census_n, ExhaustiveMode{}, opt)
                          : run_census(census_n, SampledMode{census_sample, census_seed}, opt);
            }
            if (census_format != "json" && census_format != "csv") {
                err << "error: --format must be json or csv\n";
                return 2;
            }
            std::string payload;
            if (!run.finished()) {
                if (census_format == "csv") {
                    err << "error: a paused census emits a JSON checkpoint, not csv\n";
                    return 2;
                }
                payload = dump_json(checkpoint_to_json(run.table, *run.next_cursor));
                err << "census paused after " << run.table.total
                    << " profiles; continue with --resume\n";
            } else {
                payload = census_format == "csv" ? census_csv(run.table) : dump_json(to_json(run.table));
            }
            cli_detail::emit(payload, census_out, out);
            return 0;
        }

        if (verify->parsed()) {
            CensusOptions opt;
            opt.threads = verify_threads;
            CensusRun run;
            if (verify_sample > 0) {
                run = run_census(verify_n, SampledMode{verify_sample, verify_seed}, opt);
            } else if (verify_n <= kDefaultEnumerationCeiling) {
                run = run_census(verify_n, ExhaustiveMode{}, opt);
            } else {
                err << "error: exhaustive verification beyond n=" << kDefaultEnumerationCeiling
                    << " is impractical; pass --sample\n";
                return 2;
            }
            bool all_hold = true;
            for (const auto& [id, flag] : run.table.theorem_checks) {
                out << "check " << id << ": " << (flag.holds ? "ok" : "VIOLATED") << "\n";
                if (!flag.holds) {
                    all_hold = false;
                    out << dump_json(to_json(*flag.violation));
                }
            }
            out << (all_hold ? "all checks hold" : "VIOLATIONS FOUND") << " over " << run.table.total
                << " profiles (n=" << run.table.n << ", "
                << (run.table.exhaustive ? "exhaustive" : "sampled") << ")\n";
            return all_hold ? 0 : 1;
        }

        if (gen->parsed()) {
            PreferenceProfile p = [&] {
                if (gen_family == "extremal") {
                    if (gen_n < 2) throw Error("gen --family extremal requires --n >= 2");
                    return extremal_profile(gen_n);
                }
                if (gen_family == "fixture") {
                    if (gen_name.empty()) throw Error("gen --family fixture requires --name");
                    return fixture_profile(gen_name);
                }
                throw Error("--family must be extremal or fixture");
            }();
            cli_detail::emit(render_profile(p), gen_out, out);
            return 0;
        }
    } catch (const InstanceTooLarge& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace smlab
