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

#include <cmath>

#include <doctest.h>

#include "mchain/scenarios.hpp"

using namespace mchain;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_SUITE_BEGIN("scenarios");

TEST_CASE("unknown scenario names are rejected") {
    CHECK_THROWS_AS(build_scenario("wigner"), std::invalid_argument);
    CHECK_THROWS_AS(expected_report("x"), std::invalid_argument);
    CHECK(is_builtin_scenario("wdc"));
    CHECK_FALSE(is_builtin_scenario("wdc "));
}

TEST_CASE("built-in chain shapes") {
    const ScenarioSpec wigner = build_scenario("wigner_friend");
    CHECK(wigner.layout.apparatus_count() == 2);
    CHECK(wigner.layout.factor(1).outcomes() == std::vector<std::string>{"0", "1"});
    CHECK(wigner.layout.factor(2).outcomes() == std::vector<std::string>{"0", "1", "2"});

    const ScenarioSpec wdc = build_scenario("wdc");
    CHECK(wdc.layout.apparatus_count() == 3);
    CHECK(wdc.layout.total_dim() == 72);
    // The pair observer's operators act trivially on the watcher factor.
    CHECK(wdc.families[2].domain_dim() == 24);

    const ScenarioSpec mere = build_scenario("deutsch_mere_f");
    CHECK(mere.mere_system_prefix == 1);
    const MeasurementChain merged = effective_chain(mere);
    CHECK(merged.layout.apparatus_count() == 1);
    CHECK(merged.layout.system().dim() == 6);
    CHECK(merged.layout.system().label() == "S+F");
}

TEST_CASE("every built-in scenario matches its oracle") {
    for (const std::string &name : builtin_scenario_names()) {
        CAPTURE(name);
        const ScenarioReport report = run_scenario(build_scenario(name), 20000, 7);
        const CompareResult result = compare_expected(report, expected_report(name), 1e-10);
        for (const std::string &diff : result.diffs) {
            CAPTURE(diff);
        }
        CHECK(result.pass);
        CHECK(report.support_ok);
        CHECK(report.lln.pass);
        CHECK(report.prop1.passed());
    }
}

TEST_CASE("a perturbed table entry fails the comparison with a named entry") {
    const ScenarioReport report = run_scenario(build_scenario("wigner_friend"), 1000, 3);
    ExpectedReport oracle = expected_report("wigner_friend");
    std::vector<OutcomeTuple> alphabet = oracle.table.alphabet();
    std::vector<double> weights = oracle.table.weights();
    weights[0] += 0.05;  // (0,0)
    weights[4] -= 0.05;  // (1,1), keeping the total at one
    oracle.table = FiniteProbabilitySpace(std::move(alphabet), std::move(weights));
    const CompareResult result = compare_expected(report, oracle, 1e-10);
    CHECK_FALSE(result.pass);
    REQUIRE(!result.diffs.empty());
    CHECK(result.diffs.front().find("table entry (0,0)") != std::string::npos);
}

TEST_CASE("both Deutsch variants produce the same pair-observer statistics") {
    const ScenarioReport full = run_scenario(build_scenario("deutsch"), 50000, 11);
    const ScenarioReport mere = run_scenario(build_scenario("deutsch_mere_f"), 50000, 11);

    // Marginal of the full table over the pair observer equals the
    // mere-friend table.
    const FiniteProbabilitySpace marginal = marginalize(full.table, {1});
    for (std::size_t i = 0; i < mere.table.size(); ++i) {
        CHECK(std::abs(marginal.weight(mere.table.symbol(i)) - mere.table.weight(i)) <= 1e-12);
    }

    // The sampled records agree too: '+' at every repetition in both runs.
    for (std::size_t n = 1; n <= full.world.length(); ++n) {
        CHECK(full.world.tuple_at(n)[1] == "+");
    }
    for (std::size_t n = 1; n <= mere.world.length(); ++n) {
        CHECK(mere.world.tuple_at(n)[0] == "+");
    }
}

TEST_CASE("collaboration marginals match the case-analysis sums") {
    const ScenarioReport report = run_scenario(build_scenario("wdc"), 1000, 5);
    const FiniteProbabilitySpace pairs = marginalize(report.table, {1, 2});
    for (const std::string l : {"0", "1"}) {
        for (const std::string m : {"+", "-"}) {
            CHECK(pairs.weight({l, m}) == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
    CHECK(pairs.weight({"2", "+"}) == doctest::Approx(0.0));
    CHECK(pairs.weight({"2", "-"}) == doctest::Approx(0.0));
}

TEST_CASE("collaboration branch vectors carry the documented signs") {
    const MeasurementChain chain = effective_chain(build_scenario("wdc"));
    for (const Branch &b : compose_chain(chain)) {
        if (b.weight() <= 1e-12) {
            continue;
        }
        const std::size_t k = b.tuple[0] == "1" ? 1 : 0;
        const std::size_t l = b.tuple[1] == "1" ? 1 : 0;
        const std::size_t m = b.tuple[2] == "-" ? 1 : 0;
        StateVector expected = tensor(
            tensor(tensor(StateVector::basis(2, k), chain.layout.factor(1).final_state(k)),
                   chain.layout.factor(2).final_state(l)),
            chain.layout.factor(3).final_state(m));
        const double sign = static_cast<double>(wdc_sign_f(b.tuple[0], b.tuple[1], b.tuple[2]));
        expected *= Complex{sign / (2.0 * std::sqrt(2.0)), 0};
        CHECK(approx_eq(b.vector, expected, 1e-12));
    }
}

TEST_CASE("mere-friend collaboration branch vectors carry the documented signs") {
    const MeasurementChain chain = effective_chain(build_scenario("wdc_mere_f"));
    for (const Branch &b : compose_chain(chain)) {
        if (b.weight() <= 1e-12) {
            continue;
        }
        const std::size_t l = b.tuple[0] == "1" ? 1 : 0;
        const std::size_t m = b.tuple[1] == "-" ? 1 : 0;
        StateVector pair(6);
        pair[0] = Complex{kInvSqrt2, 0};
        pair[4] = Complex{(m == 0 ? 1.0 : -1.0) * kInvSqrt2, 0};
        StateVector expected = tensor(tensor(pair, chain.layout.factor(1).final_state(l)),
                                      chain.layout.factor(2).final_state(m));
        expected *= Complex{static_cast<double>(wdc_sign_g(b.tuple[0], b.tuple[1])) / 2.0, 0};
        CHECK(approx_eq(b.vector, expected, 1e-12));
    }
}

TEST_CASE("the two consistency demonstrations run only on the collaboration scenario") {
    const ScenarioReport wdc = run_scenario(build_scenario("wdc"), 1000, 9);
    REQUIRE(wdc.remark1.has_value());
    REQUIRE(wdc.remark2.has_value());
    CHECK(wdc.remark1->matches_mismatch_exactly);
    CHECK(wdc.remark2->contradiction);

    const ScenarioReport wigner = run_scenario(build_scenario("wigner_friend"), 1000, 9);
    CHECK_FALSE(wigner.remark1.has_value());
    CHECK_FALSE(wigner.remark2.has_value());
}

TEST_CASE("a complete non-PVM chain runs without projector retrodiction") {
    Operator hadamard(2, 2);
    hadamard(0, 0) = hadamard(0, 1) = hadamard(1, 0) = Complex{kInvSqrt2, 0};
    hadamard(1, 1) = Complex{-kInvSqrt2, 0};
    ScenarioSpec spec{"custom",
                      ChainLayout({FactorSpace::system("S", 2), FactorSpace::apparatus("A", {"h"})}),
                      StateVector::basis(2, 0),
                      {MeasurementFamily(1, {"h"}, {hadamard})},
                      0};
    const ScenarioReport report = run_scenario(spec, 100, 1);
    CHECK(report.table.weight({"h"}) == doctest::Approx(1.0));
    CHECK(report.retrodicted.empty());
    CHECK(report.agreement.empty());
    CHECK(report.prop1.passed());
}

TEST_CASE("the mere-system prefix must leave at least one apparatus") {
    ScenarioSpec spec = build_scenario("deutsch");
    spec.mere_system_prefix = 2;
    CHECK_THROWS_AS(effective_chain(spec), std::invalid_argument);
}

TEST_CASE("retrodiction agreement entries exist where the analysis licenses them") {
    const ScenarioReport wigner = run_scenario(build_scenario("wigner_friend"), 1000, 13);
    std::size_t comparisons = 0;
    for (const auto &[tuple, entries] : wigner.agreement) {
        comparisons += entries.size();
        for (const AgreementEntry &e : entries) {
            CHECK(e.ok);
        }
    }
    CHECK(comparisons == 4);  // system and friend, at step 2, per surviving branch

    const ScenarioReport wdc = run_scenario(build_scenario("wdc"), 1000, 13);
    comparisons = 0;
    for (const auto &[tuple, entries] : wdc.agreement) {
        comparisons += entries.size();
        for (const AgreementEntry &e : entries) {
            CHECK(e.ok);
            CHECK(e.target == "W");
            CHECK(e.step_j == 3);
        }
    }
    CHECK(comparisons == 8);  // the watcher, at step 3, per surviving branch
}

TEST_SUITE_END();
