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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mchain/linalg.hpp"

namespace mchain {

enum class FactorRole { System, Apparatus };

/// One tensor factor of the composite space: the measured system, or one
/// apparatus with a designated init state and an orthonormal family of
/// final (pointer) states, one per outcome.
///
/// Canonical apparatus basis order: final states first, in alphabet order,
/// init last. Apparatus dimension is |outcomes| + 1. All serialized indices
/// follow this order.
class FactorSpace {
  public:
    static FactorSpace system(std::string label, std::size_t dim);
    /// Canonical apparatus: final_states[m] = basis vector m, init = last
    /// basis vector.
    static FactorSpace apparatus(std::string label, std::vector<std::string> outcomes);
    /// Apparatus with custom final-state vectors (pairwise orthonormal and
    /// orthogonal to the init basis direction, checked within tol).
    static FactorSpace apparatus_with_finals(std::string label, std::vector<std::string> outcomes,
                                             std::vector<StateVector> final_states, std::size_t init_index,
                                             double tol = kDefaultTol);

    const std::string &label() const { return label_; }
    std::size_t dim() const { return dim_; }
    FactorRole role() const { return role_; }
    bool is_apparatus() const { return role_ == FactorRole::Apparatus; }

    const std::vector<std::string> &outcomes() const { return outcomes_; }
    std::size_t outcome_count() const { return outcomes_.size(); }
    /// Index of an outcome label in the alphabet; rejects unknown labels.
    std::size_t outcome_index(const std::string &outcome) const;
    std::optional<std::size_t> find_outcome(const std::string &outcome) const;

    const StateVector &final_state(std::size_t outcome_idx) const;
    std::size_t init_index() const { return init_index_; }
    StateVector init_state() const;

  private:
    FactorSpace() = default;

    std::string label_;
    std::size_t dim_ = 0;
    FactorRole role_ = FactorRole::System;
    std::vector<std::string> outcomes_;
    std::vector<StateVector> final_states_;
    std::size_t init_index_ = 0;
};

/// Ordered factors of the total space: one system at position 0 followed by
/// the apparatuses in measurement order. Factor index k >= 1 is the k-th
/// apparatus in the chain.
class ChainLayout {
  public:
    explicit ChainLayout(std::vector<FactorSpace> factors);

    std::size_t factor_count() const { return factors_.size(); }
    std::size_t apparatus_count() const { return factors_.size() - 1; }
    const FactorSpace &factor(std::size_t i) const { return factors_[i]; }
    const FactorSpace &system() const { return factors_[0]; }
    const std::vector<FactorSpace> &factors() const { return factors_; }

    /// Product of factor dimensions over the inclusive index range.
    /// Empty ranges (first > last) have dimension 1.
    std::size_t dim_product(std::size_t first, std::size_t last) const;
    /// Dimension of factors 0..k-1, the domain of the k-th family.
    std::size_t prefix_dim(std::size_t k) const { return k == 0 ? 1 : dim_product(0, k - 1); }
    std::size_t total_dim() const { return dim_product(0, factors_.size() - 1); }

  private:
    std::vector<FactorSpace> factors_;
};

/// Embeds an operator acting on factors 0..k-1 into the full space as
/// op (x) I_{k..n}.
Operator embed_operator(const ChainLayout &layout, const Operator &op, std::size_t k);

/// Embeds an operator acting on the contiguous factor range [first, last]
/// as I_{0..first-1} (x) op (x) I_{last+1..n}.
Operator embed_on_range(const ChainLayout &layout, const Operator &op, std::size_t first, std::size_t last);

/// I_{0..i-1} (x) |Phi^i[m]><Phi^i[m]| (x) I_{i+1..n}: pins apparatus i to
/// the final state of the given outcome.
Operator final_subspace_projector(const ChainLayout &layout, std::size_t factor_index, const std::string &outcome);

/// Product of final-subspace projectors over the pin list; identity for an
/// empty pin list. Pinned factor indices must be strictly increasing and
/// refer to apparatus factors.
Operator joint_projector(const ChainLayout &layout, const std::vector<std::pair<std::size_t, std::string>> &pins);

/// Projector (on factors 0..k-1) onto the subspace where every apparatus
/// factor below k lies in the span of its final states. The system factor
/// is untouched. This is the domain H_S (x) H_1 (x) ... (x) H_{k-1} against
/// which measurement operators are probed.
Operator final_span_projector(const ChainLayout &layout, std::size_t k);

/// Orthonormal basis of the final-restricted subspace of factors 0..k-1:
/// every product of a system basis vector with one final state per
/// apparatus factor below k. Enumerated row-major (system index slowest).
std::vector<StateVector> final_span_basis(const ChainLayout &layout, std::size_t k);

}  // namespace mchain
