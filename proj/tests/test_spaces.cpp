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
#include "mchain/spaces.hpp"

using namespace mchain;

namespace {

ChainLayout wigner_layout() {
    return ChainLayout({FactorSpace::system("S", 2), FactorSpace::apparatus("F", {"0", "1"}),
                        FactorSpace::apparatus("W", {"0", "1", "2"})});
}

}  // namespace

TEST_SUITE_BEGIN("spaces");

TEST_CASE("canonical apparatus: finals are leading basis vectors, init is last") {
    const FactorSpace f = FactorSpace::apparatus("F", {"0", "1"});
    CHECK(f.dim() == 3);
    CHECK(f.init_index() == 2);
    CHECK(approx_eq(f.final_state(0), StateVector::basis(3, 0)));
    CHECK(approx_eq(f.final_state(1), StateVector::basis(3, 1)));
    CHECK(approx_eq(f.init_state(), StateVector::basis(3, 2)));
    CHECK(f.outcome_index("1") == 1);
    CHECK_THROWS_AS(f.outcome_index("9"), std::invalid_argument);
}

TEST_CASE("apparatus validation rejects bad alphabets and non-orthonormal finals") {
    CHECK_THROWS_AS(FactorSpace::apparatus("A", {}), std::invalid_argument);
    CHECK_THROWS_AS(FactorSpace::apparatus("A", {"0", "0"}), std::invalid_argument);
    // A final state overlapping the init direction.
    const double s = 1.0 / std::sqrt(2.0);
    CHECK_THROWS_AS(FactorSpace::apparatus_with_finals(
                        "A", {"0"}, {StateVector(2, {Complex{s, 0}, Complex{s, 0}})}, 1),
                    std::invalid_argument);
}

TEST_CASE("layout shape checks") {
    CHECK_THROWS_AS(ChainLayout({FactorSpace::apparatus("A", {"0"})}), std::invalid_argument);
    const ChainLayout layout = wigner_layout();
    CHECK(layout.apparatus_count() == 2);
    CHECK(layout.total_dim() == 24);
    CHECK(layout.prefix_dim(1) == 2);
    CHECK(layout.prefix_dim(2) == 6);
    CHECK(layout.prefix_dim(3) == 24);
}

TEST_CASE("embed_operator pads a prefix operator with identities") {
    const ChainLayout layout = wigner_layout();
    SUBCASE("prefix operator over (S,F) gains I_W") {
        const Operator u = Operator::identity(6);
        CHECK(approx_eq(embed_operator(layout, u, 2), Operator::identity(24)));
    }
    SUBCASE("embedding the identity gives the full identity") {
        CHECK(approx_eq(embed_operator(layout, Operator::identity(2), 1), Operator::identity(24)));
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(embed_operator(layout, Operator::identity(5), 2), std::invalid_argument);
    }
}

TEST_CASE("embed_on_range acts slot-by-slot on product basis states") {
    const ChainLayout layout = wigner_layout();
    // A single-slot operator on F embedded as I_S (x) op (x) I_W.
    Operator shift(3, 3);
    shift(1, 0) = Complex{1, 0};  // maps F[0] to F[1], annihilates the rest
    const Operator embedded = embed_on_range(layout, shift, 1, 1);
    for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t fidx = 0; fidx < 3; ++fidx) {
            for (std::size_t w = 0; w < 4; ++w) {
                const StateVector probe = tensor(tensor(StateVector::basis(2, s), StateVector::basis(3, fidx)),
                                                 StateVector::basis(4, w));
                const StateVector expect =
                    fidx == 0 ? tensor(tensor(StateVector::basis(2, s), StateVector::basis(3, 1)),
                                       StateVector::basis(4, w))
                              : StateVector(24);
                CHECK(approx_eq(apply(embedded, probe), expect, 1e-12));
            }
        }
    }
}

TEST_CASE("final_subspace_projector pins one apparatus outcome") {
    const ChainLayout layout = wigner_layout();
    const Operator p = final_subspace_projector(layout, 1, "0");
    const Operator expected = tensor(tensor(Operator::identity(2), projector_onto(StateVector::basis(3, 0))),
                                     Operator::identity(4));
    CHECK(approx_eq(p, expected));
    CHECK(approx_eq(p * p, p, 1e-12));
    // Trace counts the dimensions of the untouched factors.
    CHECK(approx_eq(trace(p), Complex{8, 0}, 1e-12));
    CHECK_THROWS_AS(final_subspace_projector(layout, 1, "7"), std::invalid_argument);
}

TEST_CASE("joint_projector: empty pins give the identity, bad pin order is rejected") {
    const ChainLayout layout = wigner_layout();
    CHECK(approx_eq(joint_projector(layout, {}), Operator::identity(24)));
    CHECK_THROWS_AS(joint_projector(layout, {{1, "0"}, {1, "1"}}), std::invalid_argument);
    CHECK_THROWS_AS(joint_projector(layout, {{2, "0"}, {1, "1"}}), std::invalid_argument);
}

TEST_CASE("joint projectors are idempotent, Hermitian, and multiplicative over disjoint pins") {
    const ChainLayout layout = wigner_layout();
    const Operator j1 = joint_projector(layout, {{1, "0"}});
    const Operator j2 = joint_projector(layout, {{2, "1"}});
    const Operator both = joint_projector(layout, {{1, "0"}, {2, "1"}});
    CHECK(approx_eq(both, j1 * j2, 1e-12));
    CHECK(approx_eq(both * both, both, 1e-12));
    CHECK(approx_eq(adjoint(both), both, 1e-12));
}

TEST_CASE("projectors for distinct outcomes of one factor annihilate each other") {
    const ChainLayout layout = wigner_layout();
    const Operator a = final_subspace_projector(layout, 2, "0");
    const Operator b = final_subspace_projector(layout, 2, "1");
    CHECK(max_abs(a * b) <= 1e-12);
}

TEST_CASE("two-pin joint projector annihilates the mismatched virtual state") {
    // On the collaboration chain, pinning F and W at different outcomes
    // kills the post-second-measurement virtual state.
    const MeasurementChain chain = effective_chain(build_scenario("wdc"));
    const StateVector virt = virtual_total_state(chain, 2);
    const StateVector mismatched = apply(joint_projector(chain.layout, {{1, "0"}, {2, "1"}}), virt);
    CHECK(norm(mismatched) <= 1e-12);
    const StateVector matched = apply(joint_projector(chain.layout, {{1, "0"}, {2, "0"}}), virt);
    CHECK(norm(matched) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_SUITE_END();
