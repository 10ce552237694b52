// Copyright 2026 The mchain authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: runs scenarios against their oracles, verifies
// user chain files, samples worlds, and prints retrodiction reports.
// Exit codes: 0 pass, 1 check failure, 2 input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mchain/serialization.hpp"

namespace {

using namespace mchain;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;

ScenarioSpec resolve_spec(const std::string &arg) {
    if (is_builtin_scenario(arg)) {
        return build_scenario(arg);
    }
    if (std::filesystem::exists(arg)) {
        return load_scenario_file(arg);
    }
    throw std::invalid_argument("'" + arg + "' is neither a built-in scenario nor a scenario file");
}

void write_json_output(const std::string &path, const nlohmann::json &payload) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot write to '" + path + "'");
    }
    out << payload.dump(2) << '\n';
}

std::string format_weight(double w) {
    std::ostringstream s;
    s << w;
    return s.str();
}

void print_table(std::ostream &out, const FiniteProbabilitySpace &table) {
    out << "world distribution over " << table.size() << " outcome tuples:\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << "  " << tuple_label(table.symbol(i)) << "  " << format_weight(table.weight(i)) << "\n";
    }
}

void print_confirming(std::ostream &out, const MeasurementChain &chain, const ConfirmingReport &report) {
    const auto point_name = [&](const ConfirmingPoint &p) {
        return p.system_itself ? chain.layout.factor(0).label() + " (itself)" : chain.layout.factor(p.apparatus).label();
    };
    out << "confirming points: " << chain.layout.factor(0).label() << " -> " << point_name(report.system_point);
    for (std::size_t i = 1; i <= chain.length(); ++i) {
        out << "; " << chain.layout.factor(i).label() << " -> "
            << chain.layout.factor(report.apparatus_points[i - 1]).label();
    }
    out << "\n";
}

/// "(0,F[0],W[init])"-style label of a computational basis index.
std::string basis_label(const ChainLayout &layout, std::size_t flat) {
    std::vector<std::size_t> coords(layout.factor_count());
    for (std::size_t i = layout.factor_count(); i-- > 0;) {
        coords[i] = flat % layout.factor(i).dim();
        flat /= layout.factor(i).dim();
    }
    std::ostringstream s;
    s << '(';
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i > 0) {
            s << ',';
        }
        const FactorSpace &f = layout.factor(i);
        if (!f.is_apparatus()) {
            s << coords[i];
        } else if (coords[i] == f.init_index()) {
            s << f.label() << "[init]";
        } else {
            s << f.label() << '[' << f.outcomes()[coords[i]] << ']';
        }
    }
    s << ')';
    return s.str();
}

void print_state(std::ostream &out, const ChainLayout &layout, const StateVector &v) {
    bool first = true;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (std::abs(v[i]) <= 1e-12) {
            continue;
        }
        out << (first ? "" : " + ");
        first = false;
        out << format_weight(v[i].real());
        if (std::abs(v[i].imag()) > 1e-12) {
            out << (v[i].imag() >= 0 ? "+" : "") << format_weight(v[i].imag()) << "i";
        }
        out << "*" << basis_label(layout, i);
    }
    if (first) {
        out << "0";
    }
}

/// Reports apparatus coordinates that came out constant across the sample,
/// e.g. the pair-measuring observer recording "+" in every repetition.
void print_constant_coordinates(std::ostream &out, const MeasurementChain &chain, const WorldPrefix &world) {
    for (std::size_t i = 1; i <= chain.length(); ++i) {
        std::optional<std::string> constant;
        bool is_constant = true;
        for (std::size_t s : world.symbols) {
            const std::string &value = world.distribution.symbol(s)[i - 1];
            if (!constant.has_value()) {
                constant = value;
            } else if (*constant != value) {
                is_constant = false;
                break;
            }
        }
        if (is_constant && constant.has_value()) {
            out << "apparatus " << chain.layout.factor(i).label() << " records '" << *constant
                << "' in every repetition (" << world.length() << " samples)\n";
        }
    }
}

int cmd_list() {
    for (const std::string &name : builtin_scenario_names()) {
        std::cout << name << "\n";
    }
    return kExitPass;
}

int cmd_run(const std::string &scenario, std::size_t samples, std::uint64_t seed, double tol,
            const std::string &json_path, bool quiet) {
    const ScenarioSpec spec = resolve_spec(scenario);
    const ScenarioReport report = run_scenario(spec, samples, seed, tol);

    std::optional<CompareResult> compare;
    if (is_builtin_scenario(spec.name)) {
        compare = compare_expected(report, expected_report(spec.name));
    }

    bool pass = report.support_ok && report.lln.pass && report.prop1.passed();
    for (const auto &[tuple, entries] : report.agreement) {
        for (const AgreementEntry &e : entries) {
            pass = pass && e.ok;
        }
    }
    if (compare.has_value()) {
        pass = pass && compare->pass;
    }
    if (report.remark1.has_value()) {
        pass = pass && report.remark1->matches_mismatch_exactly;
    }
    if (report.remark2.has_value()) {
        pass = pass && !report.remark2->grouped_family_pvm && report.remark2->contradiction;
    }

    if (!json_path.empty()) {
        write_json_output(json_path, report_to_json(report, compare));
    }
    if (!quiet) {
        std::cout << "scenario: " << report.name << "\n";
        print_table(std::cout, report.table);
        if (compare.has_value()) {
            std::cout << "oracle comparison: " << (compare->pass ? "PASS" : "FAIL") << "\n";
            for (const std::string &diff : compare->diffs) {
                std::cout << "  " << diff << "\n";
            }
        }
        std::cout << "sampled " << report.world.length() << " worlds (seed " << report.world.seed
                  << "): support " << (report.support_ok ? "ok" : "VIOLATED") << ", LLN "
                  << (report.lln.pass ? "pass" : "FAIL") << " (max deviation "
                  << format_weight(report.lln.max_deviation) << ")\n";
        print_constant_coordinates(std::cout, report.chain, report.world);
        print_confirming(std::cout, report.chain, report.confirming);
        bool all_agree = true;
        std::size_t comparisons = 0;
        for (const auto &[tuple, entries] : report.agreement) {
            comparisons += entries.size();
            for (const AgreementEntry &e : entries) {
                all_agree = all_agree && e.ok;
            }
        }
        std::cout << "retrodiction routes: " << comparisons << " comparisons, "
                  << (all_agree ? "all agree" : "DISAGREEMENT") << "\n";
        std::cout << "proposition-1 verification: " << report.prop1.checks_run << " checks, "
                  << report.prop1.violations.size() << " violations\n";
        if (report.remark1.has_value()) {
            std::cout << "two-pin annihilation rate: " << format_weight(report.remark1->rate) << " over "
                      << report.remark1->samples << " samples, matches record mismatch "
                      << (report.remark1->matches_mismatch_exactly ? "exactly" : "INEXACTLY") << "\n";
        }
        if (report.remark2.has_value()) {
            std::cout << "grouped family PVM: " << (report.remark2->grouped_family_pvm ? "yes" : "no")
                      << "; naive-vs-backtracked overlap^2: " << format_weight(report.remark2->overlap_squared)
                      << (report.remark2->contradiction ? " (contradiction flagged)" : "") << "\n";
        }
        std::cout << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? kExitPass : kExitCheckFailure;
}

int cmd_verify(const std::string &scenario, bool quiet) {
    const ScenarioSpec spec = resolve_spec(scenario);
    const MeasurementChain chain{spec.layout, spec.initial, spec.families};
    validate_chain(chain);

    bool pass = true;
    std::string pvm_summary;
    for (const MeasurementFamily &family : spec.families) {
        const bool complete = check_completeness(family);
        const bool pvm = check_pvm(family);
        const bool domain = check_domain_condition(spec.layout, family);
        pass = pass && complete && domain;
        pvm_summary += (pvm_summary.empty() ? "" : " ") + std::string(pvm ? "yes" : "no");
        if (!quiet) {
            std::cout << "family " << family.slot() << " (" << spec.layout.factor(family.slot()).label()
                      << "): completeness " << (complete ? "ok" : "VIOLATED") << "; PVM " << (pvm ? "yes" : "no")
                      << "; domain condition " << (domain ? "ok" : "VIOLATED") << "\n";
        }
    }
    if (!quiet) {
        std::cout << "PVM: " << pvm_summary << "; completeness: " << (pass ? "ok" : "violated")
                  << "; domain condition: " << (pass ? "ok" : "violated") << "\n";
    }
    return pass ? kExitPass : kExitCheckFailure;
}

int cmd_sample(const std::string &scenario, std::size_t samples, std::uint64_t seed, const std::string &json_path) {
    const ScenarioSpec spec = resolve_spec(scenario);
    const MeasurementChain chain = effective_chain(spec);
    const FiniteProbabilitySpace table = world_distribution(compose_chain(chain));
    const WorldPrefix world = sample_worlds(table, samples, seed);
    const std::string lines = world_to_jsonl(world);
    if (json_path.empty()) {
        std::cout << lines;
    } else {
        std::ofstream out(json_path);
        if (!out) {
            throw std::invalid_argument("cannot write to '" + json_path + "'");
        }
        out << lines;
    }
    return kExitPass;
}

int cmd_retrodict(const std::string &scenario, const std::string &json_path, bool quiet) {
    const ScenarioSpec spec = resolve_spec(scenario);
    const MeasurementChain chain = effective_chain(spec);
    const std::vector<Branch> branches = compose_chain(chain);
    const ConfirmingReport confirming = confirming_report(chain);

    std::map<OutcomeTuple, RetrodictedStates> retrodicted;
    std::map<OutcomeTuple, std::vector<AgreementEntry>> agreement;
    bool all_agree = true;
    for (const Branch &b : branches) {
        if (b.weight() <= 1e-12) {
            continue;
        }
        retrodicted.emplace(b.tuple, ru_recursive(chain, b.vector));
        auto entries = cf_ru_agreement(chain, b.vector);
        for (const AgreementEntry &e : entries) {
            all_agree = all_agree && e.ok;
        }
        agreement.emplace(b.tuple, std::move(entries));
    }

    if (!json_path.empty()) {
        nlohmann::json retro_json = nlohmann::json::object();
        for (const auto &[tuple, states] : retrodicted) {
            retro_json[tuple_label(tuple)] = to_json(states);
        }
        nlohmann::json agree_json = nlohmann::json::object();
        for (const auto &[tuple, entries] : agreement) {
            nlohmann::json list = nlohmann::json::array();
            for (const AgreementEntry &e : entries) {
                list.push_back(nlohmann::json{{"target", e.target}, {"step", e.step_j}, {"ok", e.ok}});
            }
            agree_json[tuple_label(tuple)] = std::move(list);
        }
        write_json_output(json_path, nlohmann::json{{"schema_version", kSchemaVersion},
                                                    {"scenario", spec.name},
                                                    {"confirming", to_json(confirming)},
                                                    {"retrodicted", std::move(retro_json)},
                                                    {"agreement", std::move(agree_json)}});
    }
    if (!quiet) {
        std::cout << "scenario: " << spec.name << "\n";
        print_confirming(std::cout, chain, confirming);
        for (const auto &[tuple, states] : retrodicted) {
            std::cout << "branch " << tuple_label(tuple) << ":\n";
            for (std::size_t k = 1; k <= states.total_after_step.size(); ++k) {
                std::cout << "  after measurement " << k << ": ";
                print_state(std::cout, chain.layout, states.after_step(k));
                std::cout << "\n";
            }
        }
        std::cout << "retrodiction routes " << (all_agree ? "agree" : "DISAGREE")
                  << " at every licensed (target, step)\n";
    }
    return all_agree ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"measurement-chain simulator: world distributions, typical-world sampling, confirming points, "
                 "and state retrodiction"};
    app.require_subcommand(1);

    auto *list = app.add_subcommand("list", "List the built-in scenarios");

    std::string scenario;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    double tol = 0.01;
    std::string json_path;
    bool quiet = false;

    auto *run = app.add_subcommand("run", "Run a scenario: derive its table, sample worlds, retrodict states");
    run->add_option("scenario", scenario, "Built-in name or scenario file")->required();
    run->add_option("--samples", samples, "Number of sampled repetitions")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Sampling seed (reproducibility is the point; no wall-clock default)")
        ->required();
    run->add_option("--tol", tol, "Statistical tolerance for the frequency checks")->check(CLI::PositiveNumber);
    run->add_option("--json", json_path, "Write the machine-readable report to this path");
    run->add_flag("--quiet", quiet, "Suppress human-readable output");

    auto *verify = app.add_subcommand("verify", "Check completeness, PVM, and domain condition of a chain");
    verify->add_option("scenario", scenario, "Built-in name or scenario file")->required();
    verify->add_flag("--quiet", quiet, "Suppress human-readable output");

    auto *sample = app.add_subcommand("sample", "Emit sampled worlds as JSON lines");
    sample->add_option("scenario", scenario, "Built-in name or scenario file")->required();
    sample->add_option("--samples", samples, "Number of sampled repetitions")->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "Sampling seed")->required();
    sample->add_option("--json", json_path, "Write the JSON lines to this path instead of stdout");

    auto *retrodict = app.add_subcommand("retrodict", "Print confirming points and per-step retrodicted states");
    retrodict->add_option("scenario", scenario, "Built-in name or scenario file")->required();
    retrodict->add_option("--json", json_path, "Write the machine-readable report to this path");
    retrodict->add_flag("--quiet", quiet, "Suppress human-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (list->parsed()) {
            return cmd_list();
        }
        if (run->parsed()) {
            return cmd_run(scenario, samples, seed, tol, json_path, quiet);
        }
        if (verify->parsed()) {
            return cmd_verify(scenario, quiet);
        }
        if (sample->parsed()) {
            return cmd_sample(scenario, samples, seed, json_path);
        }
        if (retrodict->parsed()) {
            return cmd_retrodict(scenario, json_path, quiet);
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    return kExitInputError;
}
