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

#include "mchain/probability.hpp"
#include "mchain/scenarios.hpp"

using namespace mchain;

namespace {

FiniteProbabilitySpace fair_coin() {
    return FiniteProbabilitySpace({{"0"}, {"1"}}, {0.5, 0.5});
}

FiniteProbabilitySpace table_of(const std::string &scenario) {
    return world_distribution(compose_chain(effective_chain(build_scenario(scenario))));
}

}  // namespace

TEST_SUITE_BEGIN("probability");

TEST_CASE("FPS validation: negative weights and broken normalization are rejected") {
    CHECK_THROWS_AS(FiniteProbabilitySpace({{"a"}}, {0.9}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteProbabilitySpace({{"a"}, {"b"}}, {1.2, -0.2}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteProbabilitySpace({{"a"}, {"a"}}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("world_distribution reproduces the three scenario tables") {
    SUBCASE("Wigner: P(k,l) = delta_kl / 2") {
        const FiniteProbabilitySpace p = table_of("wigner_friend");
        REQUIRE(p.size() == 6);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const OutcomeTuple &t = p.symbol(i);
            CHECK(p.weight(i) == doctest::Approx(t[0] == t[1] ? 0.5 : 0.0).epsilon(1e-12));
        }
    }
    SUBCASE("Deutsch: P(k,l) = delta_l,+ / 2") {
        const FiniteProbabilitySpace p = table_of("deutsch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p.weight(i) == doctest::Approx(p.symbol(i)[1] == "+" ? 0.5 : 0.0).epsilon(1e-12));
        }
    }
    SUBCASE("mere-friend collaboration: R(l,m) = 1/4 off the blocked outcome") {
        const FiniteProbabilitySpace p = table_of("wdc_mere_f");
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p.weight(i) == doctest::Approx(p.symbol(i)[0] == "2" ? 0.0 : 0.25).epsilon(1e-12));
        }
    }
}

TEST_CASE("world_distribution rejects branch sets that do not sum to one") {
    const ChainLayout layout({FactorSpace::system("S", 2), FactorSpace::apparatus("A", {"0"})});
    std::vector<Branch> branches{Branch{{"0"}, tensor(StateVector::basis(2, 0), StateVector::basis(3, 0))}};
    branches[0].vector *= Complex{0.5, 0};
    CHECK_THROWS_AS(world_distribution(branches), std::invalid_argument);
}

TEST_CASE("string weights are per-symbol products; the empty string has weight one") {
    const FiniteProbabilitySpace coin = fair_coin();
    CHECK(string_weight(coin, {}) == doctest::Approx(1.0));
    CHECK(string_weight(coin, {0, 1, 0, 1}) == doctest::Approx(1.0 / 16.0));

    const FiniteProbabilitySpace wigner = table_of("wigner_friend");
    const SymbolString two{wigner.symbol_index({"0", "0"}), wigner.symbol_index({"1", "1"})};
    CHECK(string_weight(wigner, two) == doctest::Approx(0.25));
    CHECK_THROWS_AS(string_weight(coin, {7}), std::invalid_argument);
}

TEST_CASE("cylinder measures") {
    const FiniteProbabilitySpace coin = fair_coin();
    CHECK(cylinder_measure(coin, {}) == doctest::Approx(0.0));
    CHECK(cylinder_measure(coin, {{0}, {1}}) == doctest::Approx(1.0));
    CHECK(cylinder_measure(coin, {{0, 0}, {0, 1}}) == doctest::Approx(0.5));
    // Double counting is rejected: {0} covers {0,0}.
    CHECK_THROWS_AS(cylinder_measure(coin, {{0}, {0, 0}}), std::invalid_argument);
}

TEST_CASE("cylinder measure is monotone under prefix-free supersets") {
    const FiniteProbabilitySpace wigner = table_of("wigner_friend");
    const std::size_t a = wigner.symbol_index({"0", "0"});
    const std::size_t b = wigner.symbol_index({"1", "1"});
    std::vector<SymbolString> small{{a}};
    std::vector<SymbolString> big{{a}, {b, a}, {b, b}};
    CHECK(cylinder_measure(wigner, small) <= cylinder_measure(wigner, big));
}

TEST_CASE("validate_representation accepts product weights and rejects broken roots") {
    const FiniteProbabilitySpace coin = fair_coin();
    const auto bernoulli = [&coin](const SymbolString &sigma) { return string_weight(coin, sigma); };
    CHECK(validate_representation(bernoulli, coin.size(), 6));

    // The chain-derived table at length one: the repeated-once distribution.
    const FiniteProbabilitySpace wigner = table_of("wigner_friend");
    const auto once = [&wigner](const SymbolString &sigma) { return string_weight(wigner, sigma); };
    CHECK(validate_representation(once, wigner.size(), 1));

    const auto broken_root = [&coin](const SymbolString &sigma) {
        return sigma.empty() ? 0.9 : string_weight(coin, sigma);
    };
    CHECK_FALSE(validate_representation(broken_root, coin.size(), 2));

    // Additivity violation below the root.
    const auto broken_split = [](const SymbolString &sigma) { return sigma.size() <= 1 ? 1.0 : 0.0; };
    CHECK_FALSE(validate_representation(broken_split, 2, 3));
}

TEST_CASE("marginals of the scenario tables") {
    SUBCASE("Wigner first coordinate is a fair coin") {
        const FiniteProbabilitySpace q = marginalize_first(table_of("wigner_friend"));
        REQUIRE(q.size() == 2);
        CHECK(q.weight({"0"}) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(q.weight({"1"}) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("collaboration marginal over the first record is 1/4 per surviving pair") {
        const FiniteProbabilitySpace r = marginalize(table_of("wdc"), {1, 2});
        for (std::size_t i = 0; i < r.size(); ++i) {
            CHECK(r.weight(i) == doctest::Approx(r.symbol(i)[0] == "2" ? 0.0 : 0.25).epsilon(1e-12));
        }
    }
    SUBCASE("marginal of a product measure recovers its factor") {
        FiniteProbabilitySpace product({{"0", "x"}, {"0", "y"}, {"1", "x"}, {"1", "y"}},
                                       {0.21, 0.09, 0.49, 0.21});
        const FiniteProbabilitySpace q = marginalize_first(product);
        CHECK(q.weight({"0"}) == doctest::Approx(0.3));
        CHECK(q.weight({"1"}) == doctest::Approx(0.7));
    }
}

TEST_CASE("marginal weights are exact group sums (no tolerance)") {
    for (const std::string name : {"wigner_friend", "deutsch", "wdc", "wdc_mere_f"}) {
        const FiniteProbabilitySpace p = table_of(name);
        const FiniteProbabilitySpace q = marginalize_first(p);
        for (std::size_t i = 0; i < q.size(); ++i) {
            double group = 0.0;
            for (std::size_t j = 0; j < p.size(); ++j) {
                if (p.symbol(j)[0] == q.symbol(i)[0]) {
                    group += p.weight(j);
                }
            }
            CHECK(q.weight(i) == group);
        }
    }
}

TEST_CASE("finite-level tests: measure bound and coverage") {
    const FiniteProbabilitySpace coin = fair_coin();
    SUBCASE("level below the bound is accepted") {
        MLTestFinite t;
        t.levels[1] = {{0, 0}};  // measure 1/4 < 1/2
        CHECK(check_ml_test(coin, t));
    }
    SUBCASE("level at full measure is rejected") {
        MLTestFinite t;
        t.levels[1] = {{0}, {1}};  // measure 1 >= 1/2
        CHECK_FALSE(check_ml_test(coin, t));
    }
    SUBCASE("non-prefix-free level is rejected") {
        MLTestFinite t;
        t.levels[2] = {{0}, {0, 1}};
        CHECK_FALSE(check_ml_test(coin, t));
    }
    SUBCASE("support-zero cylinders are valid at any level") {
        const FiniteProbabilitySpace wigner = table_of("wigner_friend");
        MLTestFinite t;
        t.levels[2] = {{wigner.symbol_index({"0", "1"})}};
        CHECK(check_ml_test(wigner, t));
        CHECK(cylinder_measure(wigner, t.levels[2]) == doctest::Approx(0.0));
    }
    SUBCASE("coverage checks prefixes at one level") {
        MLTestFinite t;
        t.levels[1] = {{0, 0}};
        CHECK(covered_at_level(t, {0, 0, 1, 1}, 1));
        CHECK_FALSE(covered_at_level(t, {0, 1, 0, 0}, 1));
        CHECK_FALSE(covered_at_level(t, {0}, 1));       // too short to be covered
        CHECK_FALSE(covered_at_level(t, {0, 0, 1}, 3)); // absent level
    }
}

TEST_SUITE_END();
