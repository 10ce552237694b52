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

#include "mchain/measurement.hpp"
#include "mchain/scenarios.hpp"
#include "mchain/typicality.hpp"

using namespace mchain;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector random_state(const CounterRng &rng, std::uint64_t &ctr, std::size_t dim) {
    StateVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double re = rng.uniform_at(ctr++) * 2 - 1;
        const double im = rng.uniform_at(ctr++) * 2 - 1;
        v[i] = Complex{re, im};
    }
    return v;
}

/// The fused last-two-measurements family of the collaboration chain:
/// complete but not a PVM.
MeasurementFamily grouped_wd_family() {
    const FactorSpace friend_f = FactorSpace::apparatus("F", {"0", "1"});
    const Operator p0 = projector_onto(friend_f.final_state(0));
    const Operator p1 = projector_onto(friend_f.final_state(1));
    const std::vector<Operator> w{p0, p1, Operator::identity(3) - p0 - p1};

    StateVector pair = tensor(StateVector::basis(2, 0), friend_f.final_state(0)) +
                       tensor(StateVector::basis(2, 1), friend_f.final_state(1));
    pair *= Complex{kInvSqrt2, 0};
    const Operator dplus = projector_onto(pair);
    const std::vector<Operator> d{dplus, Operator::identity(6) - dplus};

    std::vector<std::string> outcomes;
    std::vector<Operator> ops;
    for (std::size_t l = 0; l < 3; ++l) {
        for (std::size_t m = 0; m < 2; ++m) {
            outcomes.push_back(std::to_string(l) + (m == 0 ? "+" : "-"));
            ops.push_back(d[m] * tensor(Operator::identity(2), w[l]));
        }
    }
    return MeasurementFamily(2, outcomes, ops);
}

}  // namespace

TEST_SUITE_BEGIN("measurement");

TEST_CASE("completeness: qubit projector family, identity, and the grouped family") {
    const MeasurementChain wigner = effective_chain(build_scenario("wigner_friend"));
    CHECK(check_completeness(wigner.family(1)));
    CHECK(check_completeness(wigner.family(2)));

    const MeasurementFamily identity_family(1, {"only"}, {Operator::identity(4)});
    CHECK(check_completeness(identity_family));

    const MeasurementFamily grouped = grouped_wd_family();
    CHECK(check_completeness(grouped));
    CHECK_FALSE(check_pvm(grouped));
}

TEST_CASE("projector_complement covers the leftover outcome and rejects bad inputs") {
    const Operator p0 = projector_onto(StateVector::basis(3, 0));
    const Operator p1 = projector_onto(StateVector::basis(3, 1));
    const Operator rest = projector_complement({p0, p1});
    CHECK(approx_eq(rest, projector_onto(StateVector::basis(3, 2)), 1e-12));
    // The complement of orthogonal projectors is its own square root.
    CHECK(approx_eq(rest * rest, rest, 1e-12));

    Operator hadamard(2, 2);
    hadamard(0, 0) = hadamard(0, 1) = hadamard(1, 0) = Complex{kInvSqrt2, 0};
    hadamard(1, 1) = Complex{-kInvSqrt2, 0};
    CHECK_THROWS_AS(projector_complement({hadamard}), std::invalid_argument);

    const double s = kInvSqrt2;
    const Operator overlapping = projector_onto(StateVector(3, {Complex{s, 0}, Complex{s, 0}, Complex{}}));
    CHECK_THROWS_AS(projector_complement({p0, overlapping}), std::invalid_argument);
}

TEST_CASE("constructing a non-complete family is rejected unless deferred") {
    const std::vector<Operator> half{Complex{0.5, 0} * Operator::identity(2)};
    CHECK_THROWS_AS(MeasurementFamily(1, {"0"}, half), std::invalid_argument);
    const MeasurementFamily deferred = MeasurementFamily::deferred(1, {"0"}, half);
    CHECK_FALSE(check_completeness(deferred));
}

TEST_CASE("PVM checks on the built-in families") {
    const MeasurementChain wigner = effective_chain(build_scenario("wigner_friend"));
    CHECK(check_pvm(wigner.family(1)));
    CHECK(check_pvm(wigner.family(2)));
    const MeasurementChain deutsch = effective_chain(build_scenario("deutsch"));
    CHECK(check_pvm(deutsch.family(2)));
    // Complete non-projector family: a unitary rotation.
    Operator hadamard(2, 2);
    hadamard(0, 0) = hadamard(0, 1) = hadamard(1, 0) = Complex{kInvSqrt2, 0};
    hadamard(1, 1) = Complex{-kInvSqrt2, 0};
    CHECK_FALSE(check_pvm(MeasurementFamily(1, {"h"}, {hadamard})));
}

TEST_CASE("domain condition holds for the built-ins and fails for an init-reaching operator") {
    const MeasurementChain wigner = effective_chain(build_scenario("wigner_friend"));
    CHECK(check_domain_condition(wigner.layout, wigner.family(2)));

    const MeasurementFamily identity_family(2, {"only"}, {Operator::identity(6)});
    CHECK(check_domain_condition(wigner.layout, identity_family));

    // Swap |Phi^F[0]> with the init direction: completeness survives (a
    // unitary) but the final subspace leaks.
    Operator swap = Operator::identity(3);
    swap(0, 0) = swap(2, 2) = Complex{};
    swap(0, 2) = swap(2, 0) = Complex{1, 0};
    const MeasurementFamily leaky(2, {"only"}, {tensor(Operator::identity(2), swap)});
    CHECK(check_completeness(leaky));
    CHECK_FALSE(check_domain_condition(wigner.layout, leaky));
}

TEST_CASE("measurement_step splits the friend measurement of |+>") {
    const MeasurementChain wigner = effective_chain(build_scenario("wigner_friend"));
    const auto components = measurement_step(wigner.layout, wigner.initial, wigner.family(1));
    REQUIRE(components.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        StateVector expected = tensor(StateVector::basis(2, k), wigner.layout.factor(1).final_state(k));
        expected *= Complex{kInvSqrt2, 0};
        CHECK(approx_eq(components[k], expected, 1e-12));
    }
    // Isometry: components sum to the input norm.
    double total = 0.0;
    for (const StateVector &c : components) {
        total += norm_squared(c);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measurement_step with a single identity outcome appends the final state") {
    const ChainLayout layout({FactorSpace::system("S", 2), FactorSpace::apparatus("A", {"only"})});
    const MeasurementFamily family(1, {"only"}, {Operator::identity(2)});
    const StateVector in = normalize(StateVector(2, {Complex{0.6, 0}, Complex{0.8, 0}}));
    const auto components = measurement_step(layout, in, family);
    REQUIRE(components.size() == 1);
    CHECK(approx_eq(components[0], tensor(in, layout.factor(1).final_state(0)), 1e-12));
}

TEST_CASE("measurement_step on the pair observer gives a zero '-' component") {
    const MeasurementChain deutsch = effective_chain(build_scenario("deutsch"));
    // State after the friend's measurement: the entangled pair state.
    const StateVector pair = evolve_through(deutsch.layout, deutsch.initial, deutsch.families, 1, 1);
    const auto components = measurement_step(deutsch.layout, pair, deutsch.family(2));
    REQUIRE(components.size() == 2);
    CHECK(norm(components[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm(components[1]) <= 1e-12);
}

TEST_CASE("measurement_step rejects an incomplete family") {
    const ChainLayout layout({FactorSpace::system("S", 2), FactorSpace::apparatus("A", {"0"})});
    const MeasurementFamily broken =
        MeasurementFamily::deferred(1, {"0"}, {Complex{0.5, 0} * Operator::identity(2)});
    CHECK_THROWS_AS(measurement_step(layout, StateVector::basis(2, 0), broken), std::invalid_argument);
}

TEST_CASE("compose_chain: Wigner branches live on the diagonal with weight 1/2") {
    const MeasurementChain chain = effective_chain(build_scenario("wigner_friend"));
    const std::vector<Branch> branches = compose_chain(chain);
    REQUIRE(branches.size() == 6);
    for (const Branch &b : branches) {
        if (b.tuple[0] == b.tuple[1]) {
            CHECK(b.weight() == doctest::Approx(0.5).epsilon(1e-12));
        } else {
            CHECK(b.weight() <= 1e-24);
        }
    }
}

TEST_CASE("compose_chain: collaboration branches weigh 1/8 off the blocked outcome") {
    const MeasurementChain chain = effective_chain(build_scenario("wdc"));
    for (const Branch &b : compose_chain(chain)) {
        if (b.tuple[1] == "2") {
            CHECK(b.weight() <= 1e-24);
        } else {
            CHECK(b.weight() == doctest::Approx(0.125).epsilon(1e-12));
        }
    }
}

TEST_CASE("compose_chain with one identity family returns a single full-weight branch") {
    const ChainLayout layout({FactorSpace::system("S", 3), FactorSpace::apparatus("A", {"only"})});
    const MeasurementChain chain{layout, StateVector::basis(3, 1),
                                 {MeasurementFamily(1, {"only"}, {Operator::identity(3)})}};
    const std::vector<Branch> branches = compose_chain(chain);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].weight() == doctest::Approx(1.0));
}

TEST_CASE("extract_composed_operator reproduces the closed forms") {
    SUBCASE("Wigner: M_(k,l) = delta_kl |k><k|") {
        const MeasurementChain chain = effective_chain(build_scenario("wigner_friend"));
        for (const std::string k : {"0", "1"}) {
            for (const std::string l : {"0", "1", "2"}) {
                const Operator m = extract_composed_operator(chain, {k, l});
                const Operator expected = k == l ? projector_onto(StateVector::basis(2, k == "1" ? 1 : 0))
                                                 : Operator::zero(2, 2);
                CHECK(approx_eq(m, expected, 1e-12));
            }
        }
    }
    SUBCASE("Deutsch: M_(k,l) = P_k Q_l") {
        const MeasurementChain chain = effective_chain(build_scenario("deutsch"));
        const StateVector plus = chain.initial;
        const StateVector minus(2, {Complex{kInvSqrt2, 0}, Complex{-kInvSqrt2, 0}});
        for (std::size_t k = 0; k < 2; ++k) {
            const Operator pk = projector_onto(StateVector::basis(2, k));
            CHECK(approx_eq(extract_composed_operator(chain, {std::to_string(k), "+"}),
                            pk * projector_onto(plus), 1e-12));
            CHECK(approx_eq(extract_composed_operator(chain, {std::to_string(k), "-"}),
                            pk * projector_onto(minus), 1e-12));
        }
    }
    SUBCASE("collaboration: M_(k,l,m) = P_k Q_m P_l, zero on the blocked outcome") {
        const MeasurementChain chain = effective_chain(build_scenario("wdc"));
        const StateVector plus = chain.initial;
        const StateVector minus(2, {Complex{kInvSqrt2, 0}, Complex{-kInvSqrt2, 0}});
        const Operator q[2] = {projector_onto(plus), projector_onto(minus)};
        for (std::size_t k = 0; k < 2; ++k) {
            for (std::size_t l = 0; l < 3; ++l) {
                for (std::size_t m = 0; m < 2; ++m) {
                    const OutcomeTuple tuple{std::to_string(k), std::to_string(l), m == 0 ? "+" : "-"};
                    const Operator got = extract_composed_operator(chain, tuple);
                    if (l == 2) {
                        CHECK(max_abs(got) <= 1e-12);
                    } else {
                        const Operator expected = projector_onto(StateVector::basis(2, k)) * q[m] *
                                                  projector_onto(StateVector::basis(2, l));
                        CHECK(approx_eq(got, expected, 1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("isometry: every built-in family preserves summed norms on random states") {
    const CounterRng rng(0x21);
    std::uint64_t ctr = 0;
    for (const std::string &name : builtin_scenario_names()) {
        const MeasurementChain chain = effective_chain(build_scenario(name));
        for (std::size_t slot = 1; slot <= chain.length(); ++slot) {
            const MeasurementFamily &family = chain.family(slot);
            for (int trial = 0; trial < 5; ++trial) {
                const StateVector v = random_state(rng, ctr, family.domain_dim());
                double total = 0.0;
                for (std::size_t m = 0; m < family.outcome_count(); ++m) {
                    total += norm_squared(apply(family.op(m), v));
                }
                CHECK(std::abs(total - norm_squared(v)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("composed operators satisfy their own completeness equation") {
    for (const std::string &name : builtin_scenario_names()) {
        const MeasurementChain chain = effective_chain(build_scenario(name));
        const std::size_t sdim = chain.layout.system().dim();
        Operator acc(sdim, sdim);
        for (const OutcomeTuple &tuple : enumerate_tuples(chain.layout, chain.length())) {
            const Operator m = extract_composed_operator(chain, tuple);
            acc += adjoint(m) * m;
        }
        CHECK(approx_eq(acc, Operator::identity(sdim), 1e-10));
    }
}

TEST_CASE("branch vectors agree with the composed operator applied to the initial state") {
    for (const std::string name : {"wigner_friend", "deutsch", "wdc"}) {
        const MeasurementChain chain = effective_chain(build_scenario(name));
        for (const Branch &b : compose_chain(chain)) {
            StateVector expected = apply(extract_composed_operator(chain, b.tuple), chain.initial);
            for (std::size_t i = 1; i <= chain.length(); ++i) {
                const FactorSpace &f = chain.layout.factor(i);
                expected = tensor(expected, f.final_state(f.outcome_index(b.tuple[i - 1])));
            }
            CHECK(approx_eq(b.vector, expected, 1e-10));
        }
    }
}

TEST_CASE("extending a composed prefix one step matches the one-pass composition") {
    const MeasurementChain chain = effective_chain(build_scenario("wdc"));
    for (std::size_t k = 0; k < chain.length(); ++k) {
        const std::vector<Branch> prefixes = compose_chain_prefix(chain, k);
        const std::vector<Branch> extended = compose_chain_prefix(chain, k + 1);
        const MeasurementFamily &family = chain.family(k + 1);
        const FactorSpace &apparatus = chain.layout.factor(k + 1);

        std::vector<std::size_t> dims;
        for (std::size_t i = 0; i <= k + 1; ++i) {
            dims.push_back(chain.layout.factor(i).dim());
        }
        for (const Branch &target : extended) {
            // Accumulate the (tuple, m) component from every prefix branch.
            StateVector acc(chain.layout.prefix_dim(k + 2));
            const std::size_t m = apparatus.outcome_index(target.tuple[k]);
            for (const Branch &pb : prefixes) {
                const StateVector stepped = measurement_step(chain.layout, pb.vector, family)[m];
                // Project onto the target tuple's final combination.
                StateVector part = stepped;
                std::vector<std::size_t> part_dims = dims;
                for (std::size_t i = k + 1; i >= 1; --i) {
                    const FactorSpace &f = chain.layout.factor(i);
                    part = contract_factor(part, part_dims, i, f.final_state(f.outcome_index(target.tuple[i - 1])));
                    part_dims.pop_back();
                }
                for (std::size_t i = 1; i <= k + 1; ++i) {
                    const FactorSpace &f = chain.layout.factor(i);
                    part = tensor(part, f.final_state(f.outcome_index(target.tuple[i - 1])));
                }
                acc += part;
            }
            CHECK(approx_eq(acc, target.vector, 1e-10));
        }
    }
}

TEST_CASE("validate_chain rejects shape errors") {
    const ChainLayout layout({FactorSpace::system("S", 2), FactorSpace::apparatus("A", {"0", "1"})});
    const std::vector<Operator> ops{projector_onto(StateVector::basis(2, 0)),
                                    projector_onto(StateVector::basis(2, 1))};
    SUBCASE("wrong slot") {
        const MeasurementChain chain{layout, StateVector::basis(2, 0), {MeasurementFamily(2, {"0", "1"}, ops)}};
        CHECK_THROWS_AS(validate_chain(chain), std::invalid_argument);
    }
    SUBCASE("alphabet mismatch") {
        const MeasurementChain chain{layout, StateVector::basis(2, 0), {MeasurementFamily(1, {"a", "b"}, ops)}};
        CHECK_THROWS_AS(validate_chain(chain), std::invalid_argument);
    }
    SUBCASE("non-unit initial state") {
        const MeasurementChain chain{layout, StateVector(2, {Complex{0.5, 0}, Complex{}}),
                                     {MeasurementFamily(1, {"0", "1"}, ops)}};
        CHECK_THROWS_AS(validate_chain(chain), std::invalid_argument);
    }
}

TEST_SUITE_END();
