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

#include "mchain/serialization.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mchain {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string &where, const std::string &what) {
    throw std::invalid_argument(where + ": " + what);
}

/// Strict-parse guard: every present key must be declared.
void expect_keys(const json &obj, const std::string &where, const std::set<std::string> &required,
                 const std::set<std::string> &optional = {}) {
    if (!obj.is_object()) {
        bad(where, "expected a JSON object");
    }
    for (const auto &[key, value] : obj.items()) {
        (void)value;
        if (!required.contains(key) && !optional.contains(key)) {
            bad(where, "unknown key '" + key + "'");
        }
    }
    for (const std::string &key : required) {
        if (!obj.contains(key)) {
            bad(where, "missing key '" + key + "'");
        }
    }
}

}  // namespace

json to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        bad("complex", "expected a two-element [re, im] array");
    }
    return Complex{j[0].get<double>(), j[1].get<double>()};
}

json to_json(const StateVector &v) {
    json out = json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) {
        out.push_back(to_json(v[i]));
    }
    return out;
}

StateVector state_from_json(const json &j) {
    if (!j.is_array() || j.empty()) {
        bad("state", "expected a nonempty array of amplitudes");
    }
    std::vector<Complex> amps;
    amps.reserve(j.size());
    for (const json &a : j) {
        amps.push_back(complex_from_json(a));
    }
    const std::size_t dim = amps.size();
    return StateVector(dim, std::move(amps));
}

json to_json(const Operator &m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(to_json(m(r, c)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

Operator operator_from_json(const json &j) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
        bad("matrix", "expected a nonempty array of rows");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    std::vector<Complex> entries;
    entries.reserve(rows * cols);
    for (const json &row : j) {
        if (!row.is_array() || row.size() != cols) {
            bad("matrix", "ragged rows");
        }
        for (const json &e : row) {
            entries.push_back(complex_from_json(e));
        }
    }
    return Operator(rows, cols, std::move(entries));
}

json to_json(const ChainLayout &layout) {
    json factors = json::array();
    for (std::size_t i = 0; i < layout.factor_count(); ++i) {
        const FactorSpace &f = layout.factor(i);
        json obj{{"label", f.label()}, {"dim", f.dim()}};
        if (f.is_apparatus()) {
            obj["role"] = "apparatus";
            obj["outcomes"] = f.outcomes();
            obj["init_index"] = f.init_index();
            // Canonical final states (basis vectors in alphabet order) are
            // implied; only custom vectors are written.
            bool canonical = f.init_index() == f.outcome_count();
            for (std::size_t m = 0; canonical && m < f.outcome_count(); ++m) {
                canonical = approx_eq(f.final_state(m), StateVector::basis(f.dim(), m), 0.0);
            }
            if (!canonical) {
                json finals = json::object();
                for (std::size_t m = 0; m < f.outcome_count(); ++m) {
                    finals[f.outcomes()[m]] = to_json(f.final_state(m));
                }
                obj["final_states"] = std::move(finals);
            }
        } else {
            obj["role"] = "system";
        }
        factors.push_back(std::move(obj));
    }
    return json{{"factors", std::move(factors)}};
}

ChainLayout layout_from_json(const json &j) {
    expect_keys(j, "layout", {"factors"});
    const json &factors = j.at("factors");
    if (!factors.is_array() || factors.empty()) {
        bad("layout.factors", "expected a nonempty array");
    }
    std::vector<FactorSpace> parsed;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const json &obj = factors[i];
        const std::string where = "layout.factors[" + std::to_string(i) + "]";
        expect_keys(obj, where, {"label", "dim", "role"}, {"outcomes", "init_index", "final_states"});
        const std::string role = obj.at("role").get<std::string>();
        const std::string label = obj.at("label").get<std::string>();
        const std::size_t dim = obj.at("dim").get<std::size_t>();
        if (role == "system") {
            if (obj.contains("outcomes") || obj.contains("init_index") || obj.contains("final_states")) {
                bad(where, "system factors carry no outcome data");
            }
            parsed.push_back(FactorSpace::system(label, dim));
            continue;
        }
        if (role != "apparatus") {
            bad(where, "role must be 'system' or 'apparatus'");
        }
        if (!obj.contains("outcomes")) {
            bad(where, "apparatus factors require 'outcomes'");
        }
        const std::vector<std::string> outcomes = obj.at("outcomes").get<std::vector<std::string>>();
        if (dim != outcomes.size() + 1) {
            bad(where, "apparatus dimension must be the outcome count plus one");
        }
        const std::size_t init_index = obj.contains("init_index")
                                           ? obj.at("init_index").get<std::size_t>()
                                           : outcomes.size();
        if (obj.contains("final_states")) {
            const json &finals_obj = obj.at("final_states");
            std::vector<StateVector> finals;
            for (const std::string &m : outcomes) {
                if (!finals_obj.contains(m)) {
                    bad(where, "final_states missing outcome '" + m + "'");
                }
                finals.push_back(state_from_json(finals_obj.at(m)));
            }
            if (finals_obj.size() != outcomes.size()) {
                bad(where, "final_states has entries outside the alphabet");
            }
            parsed.push_back(FactorSpace::apparatus_with_finals(label, outcomes, std::move(finals), init_index));
        } else if (init_index == outcomes.size()) {
            parsed.push_back(FactorSpace::apparatus(label, outcomes));
        } else {
            std::vector<StateVector> finals;
            for (std::size_t m = 0; m < outcomes.size(); ++m) {
                finals.push_back(StateVector::basis(outcomes.size() + 1, m));
            }
            parsed.push_back(FactorSpace::apparatus_with_finals(label, outcomes, std::move(finals), init_index));
        }
    }
    return ChainLayout(std::move(parsed));
}

json to_json(const MeasurementFamily &family) {
    json matrices = json::object();
    for (std::size_t m = 0; m < family.outcome_count(); ++m) {
        matrices[family.outcomes()[m]] = to_json(family.op(m));
    }
    return json{{"apparatus", family.slot()}, {"outcomes", family.outcomes()}, {"matrices", std::move(matrices)}};
}

MeasurementFamily family_from_json(const json &j) {
    expect_keys(j, "family", {"apparatus", "outcomes", "matrices"});
    const std::size_t slot = j.at("apparatus").get<std::size_t>();
    const std::vector<std::string> outcomes = j.at("outcomes").get<std::vector<std::string>>();
    const json &matrices = j.at("matrices");
    std::vector<Operator> ops;
    for (const std::string &m : outcomes) {
        if (!matrices.contains(m)) {
            bad("family", "matrices missing outcome '" + m + "'");
        }
        ops.push_back(operator_from_json(matrices.at(m)));
    }
    if (matrices.size() != outcomes.size()) {
        bad("family", "matrices has entries outside the alphabet");
    }
    // Deferred so the verify command can load a broken chain and report
    // the completeness violation instead of failing at parse time.
    return MeasurementFamily::deferred(slot, outcomes, std::move(ops));
}

json scenario_to_json(const ScenarioSpec &spec) {
    json families = json::array();
    for (const MeasurementFamily &f : spec.families) {
        families.push_back(to_json(f));
    }
    return json{{"schema_version", kSchemaVersion},
                {"name", spec.name},
                {"layout", to_json(spec.layout)},
                {"initial_state", to_json(spec.initial)},
                {"families", std::move(families)},
                {"mere_system_prefix", spec.mere_system_prefix}};
}

ScenarioSpec scenario_from_json(const json &j) {
    expect_keys(j, "scenario", {"schema_version", "layout", "initial_state", "families"},
                {"name", "mere_system_prefix"});
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
        bad("scenario", "unsupported schema_version");
    }
    ChainLayout layout = layout_from_json(j.at("layout"));
    StateVector initial = state_from_json(j.at("initial_state"));
    const json &families_json = j.at("families");
    if (!families_json.is_array()) {
        bad("scenario.families", "expected an array");
    }
    std::vector<MeasurementFamily> families;
    for (const json &f : families_json) {
        families.push_back(family_from_json(f));
    }
    ScenarioSpec spec{j.contains("name") ? j.at("name").get<std::string>() : std::string("custom"),
                      std::move(layout),
                      std::move(initial),
                      std::move(families),
                      j.contains("mere_system_prefix") ? j.at("mere_system_prefix").get<std::size_t>() : 0};
    // Surface structural problems at load time rather than first use.
    validate_chain(MeasurementChain{spec.layout, spec.initial, spec.families});
    if (spec.mere_system_prefix >= spec.families.size() && spec.mere_system_prefix != 0) {
        bad("scenario", "mere_system_prefix must leave at least one apparatus");
    }
    return spec;
}

ScenarioSpec load_scenario_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open scenario file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument("scenario file '" + path + "': " + e.what());
    }
    return scenario_from_json(j);
}

json to_json(const FiniteProbabilitySpace &fps) {
    json alphabet = json::array();
    json weights = json::object();
    for (std::size_t i = 0; i < fps.size(); ++i) {
        alphabet.push_back(fps.symbol(i));
        weights[tuple_label(fps.symbol(i))] = fps.weight(i);
    }
    return json{{"alphabet", std::move(alphabet)}, {"weights", std::move(weights)}};
}

json to_json(const MLTestFinite &test) {
    json levels = json::object();
    for (const auto &[n, strings] : test.levels) {
        levels[std::to_string(n)] = strings;
    }
    return json{{"levels", std::move(levels)}};
}

MLTestFinite ml_test_from_json(const json &j) {
    expect_keys(j, "ml_test", {"levels"});
    MLTestFinite test;
    for (const auto &[key, strings] : j.at("levels").items()) {
        std::size_t n = 0;
        try {
            n = std::stoul(key);
        } catch (const std::exception &) {
            bad("ml_test.levels", "level keys must be positive integers");
        }
        if (n == 0) {
            bad("ml_test.levels", "level keys must be positive integers");
        }
        test.levels[n] = strings.get<std::vector<SymbolString>>();
    }
    return test;
}

json to_json(const LlnReport &report) {
    json entries = json::array();
    for (const LlnReport::Entry &e : report.entries) {
        entries.push_back(json{{"symbol", e.symbol},
                               {"expected", e.expected},
                               {"empirical", e.empirical},
                               {"deviation", e.deviation}});
    }
    return json{{"pass", report.pass}, {"max_deviation", report.max_deviation}, {"entries", std::move(entries)}};
}

json to_json(const ConfirmingPoint &point) {
    if (point.system_itself) {
        return json{{"kind", "system"}};
    }
    return json{{"kind", "apparatus"}, {"index", point.apparatus}};
}

json to_json(const ConfirmingReport &report) {
    return json{{"system_point", to_json(report.system_point)},
                {"apparatus_points", report.apparatus_points},
                {"system_unchanged_after", report.system_unchanged},
                {"apparatus_unchanged_after", report.apparatus_unchanged}};
}

json to_json(const Prop1Report &report) {
    json violations = json::array();
    for (const Prop1Violation &v : report.violations) {
        violations.push_back(json{{"final_tuple", v.final_tuple},
                                  {"prefix_tuple", v.prefix_tuple},
                                  {"target", v.target},
                                  {"step", v.step_j},
                                  {"detail", v.detail}});
    }
    return json{{"checks_run", report.checks_run}, {"pass", report.passed()}, {"violations", std::move(violations)}};
}

json to_json(const Remark1Report &report) {
    return json{{"samples", report.samples},
                {"annihilated", report.annihilated},
                {"rate", report.rate},
                {"matches_mismatch_exactly", report.matches_mismatch_exactly}};
}

json to_json(const Remark2Report &report) {
    return json{{"grouped_family_complete", report.grouped_family_complete},
                {"grouped_family_pvm", report.grouped_family_pvm},
                {"witness_tuple", report.witness_tuple},
                {"naive_state", to_json(report.naive_state)},
                {"cf_state", to_json(report.cf_state)},
                {"overlap_squared", report.overlap_squared},
                {"contradiction", report.contradiction}};
}

json to_json(const RetrodictedStates &states) {
    json steps = json::array();
    for (const StateVector &s : states.total_after_step) {
        steps.push_back(to_json(s));
    }
    return json{{"total_after_step", std::move(steps)}};
}

json report_to_json(const ScenarioReport &report, const std::optional<CompareResult> &compare) {
    json retrodicted = json::object();
    for (const auto &[tuple, states] : report.retrodicted) {
        retrodicted[tuple_label(tuple)] = to_json(states);
    }
    json agreement = json::object();
    for (const auto &[tuple, entries] : report.agreement) {
        json list = json::array();
        for (const AgreementEntry &e : entries) {
            list.push_back(json{{"target", e.target}, {"step", e.step_j}, {"ok", e.ok}});
        }
        agreement[tuple_label(tuple)] = std::move(list);
    }
    json out{{"schema_version", kSchemaVersion},
             {"scenario", report.name},
             {"samples", report.world.length()},
             {"seed", report.world.seed},
             {"table", to_json(report.table)},
             {"support_ok", report.support_ok},
             {"lln", to_json(report.lln)},
             {"confirming", to_json(report.confirming)},
             {"retrodicted", std::move(retrodicted)},
             {"agreement", std::move(agreement)},
             {"prop1", to_json(report.prop1)}};
    if (report.remark1.has_value()) {
        out["remark1"] = to_json(*report.remark1);
    }
    if (report.remark2.has_value()) {
        out["remark2"] = to_json(*report.remark2);
    }
    if (compare.has_value()) {
        out["compare"] = json{{"pass", compare->pass}, {"diffs", compare->diffs}};
    }
    return out;
}

std::string world_to_jsonl(const WorldPrefix &world) {
    std::ostringstream out;
    for (std::size_t s : world.symbols) {
        out << json(world.distribution.symbol(s)).dump() << '\n';
    }
    return out.str();
}

}  // namespace mchain
