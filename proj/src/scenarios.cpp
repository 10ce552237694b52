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

#include "mchain/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace mchain {

namespace {

void require(bool cond, const std::string &msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector plus_state() {
    StateVector v(2);
    v[0] = Complex{kInvSqrt2, 0.0};
    v[1] = Complex{kInvSqrt2, 0.0};
    return v;
}

/// M^F_0 = |0><0|, M^F_1 = |1><1| on the qubit system.
std::vector<Operator> friend_ops() {
    return {projector_onto(StateVector::basis(2, 0)), projector_onto(StateVector::basis(2, 1))};
}

/// The friend-observing family on the friend's own space: the two final
/// projectors plus the leftover outcome on the init direction.
std::vector<Operator> watcher_ops_on(const FactorSpace &friend_factor) {
    const Operator p0 = projector_onto(friend_factor.final_state(0));
    const Operator p1 = projector_onto(friend_factor.final_state(1));
    Operator rest = projector_complement({p0, p1});
    return {p0, p1, std::move(rest)};
}

/// (1/sqrt2)(|0> (x) |Phi^F[0]> + |1> (x) |Phi^F[1]>): the entangled
/// post-friend state the pair-measuring observer projects onto.
StateVector entangled_plus(const FactorSpace &friend_factor) {
    StateVector v = tensor(StateVector::basis(2, 0), friend_factor.final_state(0)) +
                    tensor(StateVector::basis(2, 1), friend_factor.final_state(1));
    v *= Complex{kInvSqrt2, 0.0};
    return v;
}

StateVector entangled_minus(const FactorSpace &friend_factor) {
    StateVector v = tensor(StateVector::basis(2, 0), friend_factor.final_state(0)) -
                    tensor(StateVector::basis(2, 1), friend_factor.final_state(1));
    v *= Complex{kInvSqrt2, 0.0};
    return v;
}

/// {M^D_+, M^D_-} on the system-friend pair.
std::vector<Operator> pair_ops_on(const FactorSpace &friend_factor) {
    const Operator plus = projector_onto(entangled_plus(friend_factor));
    Operator minus = projector_complement({plus});
    return {plus, std::move(minus)};
}

}  // namespace

const std::vector<std::string> &builtin_scenario_names() {
    static const std::vector<std::string> names{"wigner_friend", "deutsch", "deutsch_mere_f", "wdc", "wdc_mere_f"};
    return names;
}

bool is_builtin_scenario(const std::string &name) {
    for (const std::string &n : builtin_scenario_names()) {
        if (n == name) {
            return true;
        }
    }
    return false;
}

ScenarioSpec build_scenario(const std::string &name) {
    const FactorSpace system = FactorSpace::system("S", 2);
    const FactorSpace friend_f = FactorSpace::apparatus("F", {"0", "1"});

    if (name == "wigner_friend") {
        const FactorSpace watcher = FactorSpace::apparatus("W", {"0", "1", "2"});
        std::vector<Operator> watcher_full;
        for (const Operator &w : watcher_ops_on(friend_f)) {
            watcher_full.push_back(tensor(Operator::identity(2), w));
        }
        ChainLayout layout({system, friend_f, watcher});
        std::vector<MeasurementFamily> families{
            MeasurementFamily(1, friend_f.outcomes(), friend_ops()),
            MeasurementFamily(2, watcher.outcomes(), std::move(watcher_full)),
        };
        return ScenarioSpec{name, std::move(layout), plus_state(), std::move(families), 0};
    }

    if (name == "deutsch" || name == "deutsch_mere_f") {
        const FactorSpace pair_obs = FactorSpace::apparatus("D", {"+", "-"});
        ChainLayout layout({system, friend_f, pair_obs});
        std::vector<MeasurementFamily> families{
            MeasurementFamily(1, friend_f.outcomes(), friend_ops()),
            MeasurementFamily(2, pair_obs.outcomes(), pair_ops_on(friend_f)),
        };
        const std::size_t prefix = name == "deutsch_mere_f" ? 1 : 0;
        return ScenarioSpec{name, std::move(layout), plus_state(), std::move(families), prefix};
    }

    if (name == "wdc" || name == "wdc_mere_f") {
        const FactorSpace watcher = FactorSpace::apparatus("W", {"0", "1", "2"});
        const FactorSpace pair_obs = FactorSpace::apparatus("D", {"+", "-"});
        std::vector<Operator> watcher_full;
        for (const Operator &w : watcher_ops_on(friend_f)) {
            watcher_full.push_back(tensor(Operator::identity(2), w));
        }
        std::vector<Operator> pair_full;
        for (const Operator &d : pair_ops_on(friend_f)) {
            pair_full.push_back(tensor(d, Operator::identity(watcher.dim())));
        }
        ChainLayout layout({system, friend_f, watcher, pair_obs});
        std::vector<MeasurementFamily> families{
            MeasurementFamily(1, friend_f.outcomes(), friend_ops()),
            MeasurementFamily(2, watcher.outcomes(), std::move(watcher_full)),
            MeasurementFamily(3, pair_obs.outcomes(), std::move(pair_full)),
        };
        const std::size_t prefix = name == "wdc_mere_f" ? 1 : 0;
        return ScenarioSpec{name, std::move(layout), plus_state(), std::move(families), prefix};
    }

    throw std::invalid_argument("build_scenario: unknown scenario '" + name + "'");
}

MeasurementChain effective_chain(const ScenarioSpec &spec) {
    MeasurementChain full{spec.layout, spec.initial, spec.families};
    validate_chain(full);
    if (spec.mere_system_prefix == 0) {
        return full;
    }
    const std::size_t p = spec.mere_system_prefix;
    require(p < spec.families.size(), "effective_chain: the mere-system prefix must leave at least one apparatus");

    // Pre-apply the prefix dilations: the pre-evolved composite becomes the
    // system of a shorter chain, and the remaining families keep their
    // matrices with re-based slots.
    const StateVector evolved = evolve_through(spec.layout, spec.initial, spec.families, 1, p);
    std::string label = spec.layout.factor(0).label();
    for (std::size_t i = 1; i <= p; ++i) {
        label += "+" + spec.layout.factor(i).label();
    }
    std::vector<FactorSpace> factors{FactorSpace::system(label, spec.layout.prefix_dim(p + 1))};
    for (std::size_t i = p + 1; i < spec.layout.factor_count(); ++i) {
        factors.push_back(spec.layout.factor(i));
    }
    std::vector<MeasurementFamily> families;
    for (std::size_t k = p + 1; k <= spec.families.size(); ++k) {
        const MeasurementFamily &f = spec.families[k - 1];
        std::vector<Operator> ops;
        for (std::size_t m = 0; m < f.outcome_count(); ++m) {
            ops.push_back(f.op(m));
        }
        families.emplace_back(k - p, f.outcomes(), std::move(ops));
    }
    MeasurementChain merged{ChainLayout(std::move(factors)), evolved, std::move(families)};
    validate_chain(merged);
    return merged;
}

ScenarioReport run_scenario(const ScenarioSpec &spec, std::size_t samples, std::uint64_t seed, double stat_tol,
                            double alg_tol) {
    MeasurementChain chain = effective_chain(spec);
    std::vector<Branch> branches = compose_chain(chain);
    FiniteProbabilitySpace table = world_distribution(branches, alg_tol);
    WorldPrefix world = sample_worlds(table, samples, seed);
    const bool support_ok = check_support(table, world);
    LlnReport lln = check_lln(table, world, stat_tol);
    ConfirmingReport confirming = confirming_report(chain);

    // Projector retrodiction is licensed only for PVM chains; a complete
    // non-PVM chain still gets its table, sampling, and confirming report.
    bool all_pvm = true;
    for (const MeasurementFamily &family : chain.families) {
        all_pvm = all_pvm && check_pvm(family);
    }
    std::map<OutcomeTuple, RetrodictedStates> retrodicted;
    std::map<OutcomeTuple, std::vector<AgreementEntry>> agreement;
    if (all_pvm) {
        for (const Branch &b : branches) {
            if (b.weight() <= 1e-12) {
                continue;
            }
            retrodicted.emplace(b.tuple, ru_recursive(chain, b.vector, alg_tol * 10));
            agreement.emplace(b.tuple, cf_ru_agreement(chain, b.vector, alg_tol * 10));
        }
    }

    Prop1Report prop1 = verify_proposition1(chain, alg_tol);

    std::optional<Remark1Report> remark1;
    std::optional<Remark2Report> remark2;
    if (spec.name == "wdc") {
        remark1 = two_pin_annihilation(chain, world, alg_tol);
        remark2 = demonstrate_naive_ru_failure(chain, alg_tol);
    }

    return ScenarioReport{spec.name,
                          std::move(chain),
                          std::move(branches),
                          std::move(table),
                          std::move(world),
                          support_ok,
                          std::move(lln),
                          std::move(confirming),
                          std::move(retrodicted),
                          std::move(agreement),
                          std::move(prop1),
                          std::move(remark1),
                          std::move(remark2)};
}

int wdc_sign_f(const std::string &k, const std::string &l, const std::string &m) {
    return (k != l && m == "-") ? -1 : 1;
}

int wdc_sign_g(const std::string &l, const std::string &m) {
    return (l == "1" && m == "-") ? -1 : 1;
}

namespace {

ExpectedReport expected_wigner_friend() {
    const ScenarioSpec spec = build_scenario("wigner_friend");
    const ChainLayout &layout = spec.layout;
    const FactorSpace &ff = layout.factor(1);
    const FactorSpace &wf = layout.factor(2);

    std::vector<OutcomeTuple> alphabet;
    std::vector<double> weights;
    for (const std::string &k : ff.outcomes()) {
        for (const std::string &l : wf.outcomes()) {
            alphabet.push_back({k, l});
            weights.push_back(k == l ? 0.5 : 0.0);
        }
    }

    ExpectedReport out{FiniteProbabilitySpace(std::move(alphabet), std::move(weights)),
                       {},
                       {},
                       ConfirmingPoint{false, 1},
                       {1, 2}};
    for (std::size_t k = 0; k < 2; ++k) {
        const OutcomeTuple tuple{ff.outcomes()[k], wf.outcomes()[k]};
        const StateVector sk = StateVector::basis(2, k);
        out.branch_states.emplace(tuple, tensor(tensor(sk, ff.final_state(k)), wf.final_state(k)));
        out.retrodicted.emplace(std::make_pair(tuple, std::size_t{2}),
                                tensor(tensor(sk, ff.final_state(k)), wf.final_state(k)));
        out.retrodicted.emplace(std::make_pair(tuple, std::size_t{1}),
                                tensor(tensor(sk, ff.final_state(k)), wf.init_state()));
    }
    return out;
}

ExpectedReport expected_deutsch() {
    const ScenarioSpec spec = build_scenario("deutsch");
    const ChainLayout &layout = spec.layout;
    const FactorSpace &ff = layout.factor(1);
    const FactorSpace &df = layout.factor(2);

    std::vector<OutcomeTuple> alphabet;
    std::vector<double> weights;
    for (const std::string &k : ff.outcomes()) {
        for (const std::string &l : df.outcomes()) {
            alphabet.push_back({k, l});
            weights.push_back(l == "+" ? 0.5 : 0.0);
        }
    }

    ExpectedReport out{FiniteProbabilitySpace(std::move(alphabet), std::move(weights)),
                       {},
                       {},
                       ConfirmingPoint{false, 2},
                       {2, 2}};
    const StateVector entangled = entangled_plus(ff);
    for (std::size_t k = 0; k < 2; ++k) {
        const OutcomeTuple tuple{ff.outcomes()[k], "+"};
        const StateVector sk = StateVector::basis(2, k);
        out.branch_states.emplace(tuple, tensor(tensor(sk, ff.final_state(k)), df.final_state(0)));
        out.retrodicted.emplace(std::make_pair(tuple, std::size_t{2}),
                                tensor(tensor(sk, ff.final_state(k)), df.final_state(0)));
        out.retrodicted.emplace(std::make_pair(tuple, std::size_t{1}), tensor(entangled, df.init_state()));
    }
    return out;
}

ExpectedReport expected_deutsch_mere_f() {
    const ScenarioSpec spec = build_scenario("deutsch_mere_f");
    const FactorSpace &ff = spec.layout.factor(1);
    const FactorSpace &df = spec.layout.factor(2);

    ExpectedReport out{FiniteProbabilitySpace({{"+"}, {"-"}}, {1.0, 0.0}),
                       {},
                       {},
                       ConfirmingPoint{false, 1},
                       {1}};
    const StateVector branch = tensor(entangled_plus(ff), df.final_state(0));
    out.branch_states.emplace(OutcomeTuple{"+"}, branch);
    out.retrodicted.emplace(std::make_pair(OutcomeTuple{"+"}, std::size_t{1}), branch);
    return out;
}

ExpectedReport expected_wdc() {
    const ScenarioSpec spec = build_scenario("wdc");
    const ChainLayout &layout = spec.layout;
    const FactorSpace &ff = layout.factor(1);
    const FactorSpace &wf = layout.factor(2);
    const FactorSpace &df = layout.factor(3);

    std::vector<OutcomeTuple> alphabet;
    std::vector<double> weights;
    for (const std::string &k : ff.outcomes()) {
        for (const std::string &l : wf.outcomes()) {
            for (const std::string &m : df.outcomes()) {
                alphabet.push_back({k, l, m});
                weights.push_back(l != "2" ? 0.125 : 0.0);
            }
        }
    }

    ExpectedReport out{FiniteProbabilitySpace(std::move(alphabet), std::move(weights)),
                       {},
                       {},
                       ConfirmingPoint{false, 3},
                       {3, 2, 3}};
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t l = 0; l < 2; ++l) {
            for (std::size_t m = 0; m < 2; ++m) {
                const OutcomeTuple tuple{ff.outcomes()[k], wf.outcomes()[l], df.outcomes()[m]};
                const StateVector sk = StateVector::basis(2, k);
                const StateVector sl = StateVector::basis(2, l);
                out.branch_states.emplace(
                    tuple, tensor(tensor(tensor(sk, ff.final_state(k)), wf.final_state(l)), df.final_state(m)));
                out.retrodicted.emplace(
                    std::make_pair(tuple, std::size_t{3}),
                    tensor(tensor(tensor(sk, ff.final_state(k)), wf.final_state(l)), df.final_state(m)));
                out.retrodicted.emplace(
                    std::make_pair(tuple, std::size_t{2}),
                    tensor(tensor(tensor(sl, ff.final_state(l)), wf.final_state(l)), df.init_state()));
                out.retrodicted.emplace(
                    std::make_pair(tuple, std::size_t{1}),
                    tensor(tensor(tensor(sl, ff.final_state(l)), wf.init_state()), df.init_state()));
            }
        }
    }
    return out;
}

ExpectedReport expected_wdc_mere_f() {
    const ScenarioSpec spec = build_scenario("wdc_mere_f");
    const FactorSpace &ff = spec.layout.factor(1);
    const FactorSpace &wf = spec.layout.factor(2);
    const FactorSpace &df = spec.layout.factor(3);

    std::vector<OutcomeTuple> alphabet;
    std::vector<double> weights;
    for (const std::string &l : wf.outcomes()) {
        for (const std::string &m : df.outcomes()) {
            alphabet.push_back({l, m});
            weights.push_back(l != "2" ? 0.25 : 0.0);
        }
    }

    ExpectedReport out{FiniteProbabilitySpace(std::move(alphabet), std::move(weights)),
                       {},
                       {},
                       ConfirmingPoint{false, 2},
                       {1, 2}};
    for (std::size_t l = 0; l < 2; ++l) {
        for (std::size_t m = 0; m < 2; ++m) {
            const OutcomeTuple tuple{wf.outcomes()[l], df.outcomes()[m]};
            const StateVector pair = m == 0 ? entangled_plus(ff) : entangled_minus(ff);
            out.branch_states.emplace(tuple, tensor(tensor(pair, wf.final_state(l)), df.final_state(m)));
            out.retrodicted.emplace(std::make_pair(tuple, std::size_t{2}),
                                    tensor(tensor(pair, wf.final_state(l)), df.final_state(m)));
            const StateVector settled = tensor(StateVector::basis(2, l), ff.final_state(l));
            out.retrodicted.emplace(std::make_pair(tuple, std::size_t{1}),
                                    tensor(tensor(settled, wf.final_state(l)), df.init_state()));
        }
    }
    return out;
}

}  // namespace

ExpectedReport expected_report(const std::string &name) {
    if (name == "wigner_friend") {
        return expected_wigner_friend();
    }
    if (name == "deutsch") {
        return expected_deutsch();
    }
    if (name == "deutsch_mere_f") {
        return expected_deutsch_mere_f();
    }
    if (name == "wdc") {
        return expected_wdc();
    }
    if (name == "wdc_mere_f") {
        return expected_wdc_mere_f();
    }
    throw std::invalid_argument("expected_report: unknown scenario '" + name + "'");
}

CompareResult compare_expected(const ScenarioReport &report, const ExpectedReport &oracle, double tol) {
    CompareResult result;
    const auto fail = [&result](std::string msg) {
        result.pass = false;
        result.diffs.push_back(std::move(msg));
    };

    if (report.table.size() != oracle.table.size()) {
        fail("table: alphabet size mismatch");
    }
    for (std::size_t i = 0; i < oracle.table.size(); ++i) {
        const OutcomeTuple &symbol = oracle.table.symbol(i);
        const double got = report.table.weight(symbol);
        const double expected = oracle.table.weight(i);
        if (std::abs(got - expected) > tol) {
            fail("table entry " + tuple_label(symbol) + ": got " + std::to_string(got) + ", expected " +
                 std::to_string(expected));
        }
    }

    for (const auto &[tuple, expected] : oracle.branch_states) {
        bool found = false;
        for (const Branch &b : report.branches) {
            if (b.tuple != tuple) {
                continue;
            }
            found = true;
            if (!equal_up_to_phase(normalize(b.vector), normalize(expected), tol)) {
                fail("branch state " + tuple_label(tuple) + " differs from the expected state");
            }
        }
        if (!found) {
            fail("branch " + tuple_label(tuple) + " missing from the run");
        }
    }

    for (const auto &[key, expected] : oracle.retrodicted) {
        const auto &[tuple, step] = key;
        const auto it = report.retrodicted.find(tuple);
        if (it == report.retrodicted.end()) {
            fail("retrodiction for " + tuple_label(tuple) + " missing from the run");
            continue;
        }
        if (!equal_up_to_phase(it->second.after_step(step), normalize(expected), tol)) {
            fail("retrodicted state " + tuple_label(tuple) + " after step " + std::to_string(step) +
                 " differs from the expected state");
        }
    }

    if (!(report.confirming.system_point == oracle.system_point)) {
        fail("confirming point for the system differs from the expected point");
    }
    if (report.confirming.apparatus_points != oracle.apparatus_points) {
        fail("apparatus confirming points differ from the expected points");
    }
    return result;
}

}  // namespace mchain
