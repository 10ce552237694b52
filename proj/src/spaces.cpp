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

#include "mchain/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mchain {

namespace {

void require(bool cond, const std::string &msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

}  // namespace

FactorSpace FactorSpace::system(std::string label, std::size_t dim) {
    require(dim > 0, "FactorSpace: system dimension must be positive");
    FactorSpace f;
    f.label_ = std::move(label);
    f.dim_ = dim;
    f.role_ = FactorRole::System;
    return f;
}

FactorSpace FactorSpace::apparatus(std::string label, std::vector<std::string> outcomes) {
    const std::size_t n = outcomes.size();
    std::vector<StateVector> finals;
    finals.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
        finals.push_back(StateVector::basis(n + 1, m));
    }
    return apparatus_with_finals(std::move(label), std::move(outcomes), std::move(finals), n);
}

FactorSpace FactorSpace::apparatus_with_finals(std::string label, std::vector<std::string> outcomes,
                                               std::vector<StateVector> final_states, std::size_t init_index,
                                               double tol) {
    require(!outcomes.empty(), "FactorSpace: apparatus outcome alphabet must be nonempty");
    std::set<std::string> distinct(outcomes.begin(), outcomes.end());
    require(distinct.size() == outcomes.size(), "FactorSpace: duplicate outcome label");
    require(final_states.size() == outcomes.size(), "FactorSpace: one final state per outcome required");

    const std::size_t dim = outcomes.size() + 1;
    require(init_index < dim, "FactorSpace: init index out of range");
    const StateVector init = StateVector::basis(dim, init_index);
    for (std::size_t a = 0; a < final_states.size(); ++a) {
        require(final_states[a].dim() == dim, "FactorSpace: final state dimension mismatch");
        require(std::abs(norm(final_states[a]) - 1.0) <= tol, "FactorSpace: final state is not unit norm");
        require(std::abs(inner(init, final_states[a])) <= tol,
                "FactorSpace: final state is not orthogonal to the init state");
        for (std::size_t b = a + 1; b < final_states.size(); ++b) {
            require(std::abs(inner(final_states[a], final_states[b])) <= tol,
                    "FactorSpace: final states are not pairwise orthogonal");
        }
    }

    FactorSpace f;
    f.label_ = std::move(label);
    f.dim_ = dim;
    f.role_ = FactorRole::Apparatus;
    f.outcomes_ = std::move(outcomes);
    f.final_states_ = std::move(final_states);
    f.init_index_ = init_index;
    return f;
}

std::size_t FactorSpace::outcome_index(const std::string &outcome) const {
    const auto idx = find_outcome(outcome);
    require(idx.has_value(), "FactorSpace: unknown outcome label '" + outcome + "' on factor '" + label_ + "'");
    return *idx;
}

std::optional<std::size_t> FactorSpace::find_outcome(const std::string &outcome) const {
    const auto it = std::find(outcomes_.begin(), outcomes_.end(), outcome);
    if (it == outcomes_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - outcomes_.begin());
}

const StateVector &FactorSpace::final_state(std::size_t outcome_idx) const {
    require(outcome_idx < final_states_.size(), "FactorSpace: outcome index out of range");
    return final_states_[outcome_idx];
}

StateVector FactorSpace::init_state() const {
    require(is_apparatus(), "FactorSpace: system factor has no init state");
    return StateVector::basis(dim_, init_index_);
}

ChainLayout::ChainLayout(std::vector<FactorSpace> factors) : factors_(std::move(factors)) {
    require(!factors_.empty(), "ChainLayout: at least the system factor is required");
    require(factors_[0].role() == FactorRole::System, "ChainLayout: factor 0 must be the system");
    for (std::size_t i = 1; i < factors_.size(); ++i) {
        require(factors_[i].is_apparatus(), "ChainLayout: factors after the system must be apparatuses");
    }
}

std::size_t ChainLayout::dim_product(std::size_t first, std::size_t last) const {
    if (first > last) {
        return 1;
    }
    require(last < factors_.size(), "ChainLayout: factor index out of range");
    std::size_t d = 1;
    for (std::size_t i = first; i <= last; ++i) {
        d *= factors_[i].dim();
    }
    return d;
}

Operator embed_operator(const ChainLayout &layout, const Operator &op, std::size_t k) {
    require(k >= 1 && k <= layout.factor_count(), "embed_operator: invalid factor count k");
    const std::size_t d = layout.prefix_dim(k);
    require(op.rows() == d && op.cols() == d, "embed_operator: operator does not match factors 0..k-1");
    const std::size_t rest = layout.dim_product(k, layout.factor_count() - 1);
    if (rest == 1) {
        return op;
    }
    return tensor(op, Operator::identity(rest));
}

Operator embed_on_range(const ChainLayout &layout, const Operator &op, std::size_t first, std::size_t last) {
    require(first <= last && last < layout.factor_count(), "embed_on_range: invalid factor range");
    const std::size_t d = layout.dim_product(first, last);
    require(op.rows() == d && op.cols() == d, "embed_on_range: operator does not match the factor range");
    const std::size_t left = first == 0 ? 1 : layout.dim_product(0, first - 1);
    const std::size_t right = layout.dim_product(last + 1, layout.factor_count() - 1);
    Operator out = op;
    if (left > 1) {
        out = tensor(Operator::identity(left), out);
    }
    if (right > 1) {
        out = tensor(out, Operator::identity(right));
    }
    return out;
}

Operator final_subspace_projector(const ChainLayout &layout, std::size_t factor_index, const std::string &outcome) {
    require(factor_index >= 1 && factor_index < layout.factor_count(),
            "final_subspace_projector: factor index is not an apparatus");
    const FactorSpace &f = layout.factor(factor_index);
    const std::size_t m = f.outcome_index(outcome);
    const Operator pin = projector_onto(f.final_state(m));
    return embed_on_range(layout, pin, factor_index, factor_index);
}

Operator joint_projector(const ChainLayout &layout, const std::vector<std::pair<std::size_t, std::string>> &pins) {
    Operator out = Operator::identity(layout.total_dim());
    std::size_t prev = 0;
    bool first = true;
    for (const auto &[factor_index, outcome] : pins) {
        require(first || factor_index > prev, "joint_projector: pinned factor indices must be strictly increasing");
        first = false;
        prev = factor_index;
        out = out * final_subspace_projector(layout, factor_index, outcome);
    }
    return out;
}

Operator final_span_projector(const ChainLayout &layout, std::size_t k) {
    require(k >= 1 && k <= layout.factor_count(), "final_span_projector: invalid factor count k");
    Operator out = Operator::identity(layout.factor(0).dim());
    for (std::size_t i = 1; i < k; ++i) {
        const FactorSpace &f = layout.factor(i);
        Operator span(f.dim(), f.dim());
        for (std::size_t m = 0; m < f.outcome_count(); ++m) {
            span += projector_onto(f.final_state(m));
        }
        out = tensor(out, span);
    }
    return out;
}

std::vector<StateVector> final_span_basis(const ChainLayout &layout, std::size_t k) {
    require(k >= 1 && k <= layout.factor_count(), "final_span_basis: invalid factor count k");
    std::vector<StateVector> basis;
    for (std::size_t s = 0; s < layout.factor(0).dim(); ++s) {
        basis.push_back(StateVector::basis(layout.factor(0).dim(), s));
    }
    for (std::size_t i = 1; i < k; ++i) {
        const FactorSpace &f = layout.factor(i);
        std::vector<StateVector> extended;
        extended.reserve(basis.size() * f.outcome_count());
        for (const StateVector &left : basis) {
            for (std::size_t m = 0; m < f.outcome_count(); ++m) {
                extended.push_back(tensor(left, f.final_state(m)));
            }
        }
        basis = std::move(extended);
    }
    return basis;
}

}  // namespace mchain
