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

#include "mchain/measurement.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mchain {

namespace {

void require(bool cond, const std::string &msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

}  // namespace

std::string tuple_label(const OutcomeTuple &tuple) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << tuple[i];
    }
    out << ')';
    return out.str();
}

MeasurementFamily::MeasurementFamily(std::size_t slot, std::vector<std::string> outcomes,
                                     std::vector<Operator> operators, double tol)
    : MeasurementFamily(deferred(slot, std::move(outcomes), std::move(operators))) {
    require(check_completeness(*this, tol), "MeasurementFamily: completeness equation violated");
}

MeasurementFamily MeasurementFamily::deferred(std::size_t slot, std::vector<std::string> outcomes,
                                              std::vector<Operator> operators) {
    require(slot >= 1, "MeasurementFamily: slot must be >= 1");
    require(!outcomes.empty(), "MeasurementFamily: outcome alphabet must be nonempty");
    require(outcomes.size() == operators.size(), "MeasurementFamily: one operator per outcome required");
    const std::size_t d = operators.front().rows();
    for (const Operator &m : operators) {
        require(m.rows() == d && m.cols() == d, "MeasurementFamily: operators must share a square dimension");
    }
    MeasurementFamily f;
    f.slot_ = slot;
    f.outcomes_ = std::move(outcomes);
    f.operators_ = std::move(operators);
    return f;
}

const Operator &MeasurementFamily::op(const std::string &outcome) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        if (outcomes_[i] == outcome) {
            return operators_[i];
        }
    }
    throw std::invalid_argument("MeasurementFamily: unknown outcome label '" + outcome + "'");
}

void validate_chain(const MeasurementChain &chain, double tol) {
    require(chain.families.size() == chain.layout.apparatus_count(),
            "MeasurementChain: one family per apparatus factor required");
    require(chain.initial.dim() == chain.layout.system().dim(),
            "MeasurementChain: initial state must live on the system factor");
    require(std::abs(norm(chain.initial) - 1.0) <= tol, "MeasurementChain: initial state must be unit norm");
    for (std::size_t k = 1; k <= chain.families.size(); ++k) {
        const MeasurementFamily &f = chain.family(k);
        require(f.slot() == k, "MeasurementChain: family slots must increase strictly from 1");
        require(f.outcomes() == chain.layout.factor(k).outcomes(),
                "MeasurementChain: family alphabet must match the apparatus factor");
        require(f.domain_dim() == chain.layout.prefix_dim(k),
                "MeasurementChain: family operators must act on factors 0..k-1");
    }
}

Operator projector_complement(const std::vector<Operator> &projectors, double tol) {
    require(!projectors.empty(), "projector_complement: at least one projector required");
    const std::size_t d = projectors.front().rows();
    Operator sum(d, d);
    for (std::size_t a = 0; a < projectors.size(); ++a) {
        const Operator &p = projectors[a];
        require(p.rows() == d && p.cols() == d, "projector_complement: projectors must share a square dimension");
        require(approx_eq(p, adjoint(p), tol) && approx_eq(p * p, p, tol),
                "projector_complement: input is not a projector");
        for (std::size_t b = a + 1; b < projectors.size(); ++b) {
            require(max_abs(p * projectors[b]) <= tol, "projector_complement: projectors are not orthogonal");
        }
        sum += p;
    }
    return Operator::identity(d) - sum;
}

bool check_completeness(const MeasurementFamily &family, double tol) {
    const std::size_t d = family.domain_dim();
    Operator acc(d, d);
    for (std::size_t m = 0; m < family.outcome_count(); ++m) {
        acc += adjoint(family.op(m)) * family.op(m);
    }
    return approx_eq(acc, Operator::identity(d), tol);
}

bool check_pvm(const MeasurementFamily &family, double tol) {
    const std::size_t d = family.domain_dim();
    Operator sum(d, d);
    for (std::size_t a = 0; a < family.outcome_count(); ++a) {
        const Operator &ma = family.op(a);
        if (!approx_eq(ma, adjoint(ma), tol)) {
            return false;
        }
        sum += ma;
        for (std::size_t b = 0; b < family.outcome_count(); ++b) {
            const Operator expected = a == b ? ma : Operator::zero(d, d);
            if (!approx_eq(ma * family.op(b), expected, tol)) {
                return false;
            }
        }
    }
    return approx_eq(sum, Operator::identity(d), tol);
}

bool check_domain_condition(const ChainLayout &layout, const MeasurementFamily &family, double tol) {
    const std::size_t k = family.slot();
    require(family.domain_dim() == layout.prefix_dim(k),
            "check_domain_condition: family does not act on factors 0..k-1");
    const Operator outside = Operator::identity(layout.prefix_dim(k)) - final_span_projector(layout, k);
    for (std::size_t m = 0; m < family.outcome_count(); ++m) {
        for (const StateVector &probe : final_span_basis(layout, k)) {
            const StateVector image = apply(family.op(m), probe);
            if (max_abs(apply(outside, image)) > tol) {
                return false;
            }
        }
    }
    return true;
}

std::vector<StateVector> measurement_step(const ChainLayout &layout, const StateVector &state,
                                          const MeasurementFamily &family, double tol) {
    require(check_completeness(family, tol), "measurement_step: family violates the completeness equation");
    require(state.dim() == family.domain_dim(), "measurement_step: state does not live on factors 0..k-1");
    const FactorSpace &apparatus = layout.factor(family.slot());
    require(apparatus.outcomes() == family.outcomes(),
            "measurement_step: family alphabet must match the apparatus factor");
    std::vector<StateVector> components;
    components.reserve(family.outcome_count());
    for (std::size_t m = 0; m < family.outcome_count(); ++m) {
        components.push_back(tensor(apply(family.op(m), state), apparatus.final_state(m)));
    }
    return components;
}

StateVector evolve_through(const ChainLayout &layout, const StateVector &state,
                           const std::vector<MeasurementFamily> &families, std::size_t first_slot,
                           std::size_t last_slot) {
    StateVector current = state;
    for (std::size_t k = first_slot; k <= last_slot; ++k) {
        const MeasurementFamily &family = families[k - 1];
        StateVector next(current.dim() * layout.factor(k).dim());
        for (const StateVector &component : measurement_step(layout, current, family)) {
            next += component;
        }
        current = std::move(next);
    }
    return current;
}

StateVector virtual_total_state(const MeasurementChain &chain, std::size_t k) {
    require(k <= chain.length(), "virtual_total_state: step index exceeds chain length");
    StateVector state = evolve_through(chain.layout, chain.initial, chain.families, 1, k);
    for (std::size_t i = k + 1; i <= chain.length(); ++i) {
        state = tensor(state, chain.layout.factor(i).init_state());
    }
    return state;
}

StateVector contract_factor(const StateVector &state, const std::vector<std::size_t> &dims, std::size_t factor_index,
                            const StateVector &bra) {
    require(factor_index < dims.size(), "contract_factor: factor index out of range");
    require(bra.dim() == dims[factor_index], "contract_factor: bra dimension mismatch");
    std::size_t total = 1;
    for (std::size_t d : dims) {
        total *= d;
    }
    require(state.dim() == total, "contract_factor: state does not match the factor dimensions");

    std::size_t right = 1;
    for (std::size_t i = factor_index + 1; i < dims.size(); ++i) {
        right *= dims[i];
    }
    const std::size_t mid = dims[factor_index];
    const std::size_t left = total / (mid * right);

    StateVector out(left * right);
    for (std::size_t l = 0; l < left; ++l) {
        for (std::size_t m = 0; m < mid; ++m) {
            const Complex weight = std::conj(bra[m]);
            if (weight == Complex{}) {
                continue;
            }
            const std::size_t base = (l * mid + m) * right;
            for (std::size_t r = 0; r < right; ++r) {
                out[l * right + r] += weight * state[base + r];
            }
        }
    }
    return out;
}

StateVector branch_system_part(const ChainLayout &layout, const Branch &branch) {
    const std::size_t k = branch.tuple.size();
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i <= k; ++i) {
        dims.push_back(layout.factor(i).dim());
    }
    StateVector part = branch.vector;
    for (std::size_t i = k; i >= 1; --i) {
        const FactorSpace &f = layout.factor(i);
        part = contract_factor(part, dims, i, f.final_state(f.outcome_index(branch.tuple[i - 1])));
        dims.pop_back();
    }
    return part;
}

std::vector<OutcomeTuple> enumerate_tuples(const ChainLayout &layout, std::size_t n_apparatuses) {
    std::vector<OutcomeTuple> tuples{OutcomeTuple{}};
    for (std::size_t k = 1; k <= n_apparatuses; ++k) {
        const std::vector<std::string> &outcomes = layout.factor(k).outcomes();
        std::vector<OutcomeTuple> extended;
        extended.reserve(tuples.size() * outcomes.size());
        for (const OutcomeTuple &prefix : tuples) {
            for (const std::string &m : outcomes) {
                OutcomeTuple t = prefix;
                t.push_back(m);
                extended.push_back(std::move(t));
            }
        }
        tuples = std::move(extended);
    }
    return tuples;
}

std::vector<std::size_t> tuple_indices(const ChainLayout &layout, const OutcomeTuple &tuple) {
    require(tuple.size() <= layout.apparatus_count(), "tuple_indices: tuple longer than the chain");
    std::vector<std::size_t> indices;
    indices.reserve(tuple.size());
    for (std::size_t k = 1; k <= tuple.size(); ++k) {
        indices.push_back(layout.factor(k).outcome_index(tuple[k - 1]));
    }
    return indices;
}

std::vector<Branch> compose_chain_prefix(const MeasurementChain &chain, std::size_t k, double tol) {
    validate_chain(chain, tol);
    require(k <= chain.length(), "compose_chain_prefix: prefix length exceeds chain length");
    for (std::size_t j = 1; j <= k; ++j) {
        require(check_domain_condition(chain.layout, chain.family(j), tol),
                "compose_chain: family violates the final-subspace domain condition");
    }
    const StateVector evolved = evolve_through(chain.layout, chain.initial, chain.families, 1, k);

    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i <= k; ++i) {
        dims.push_back(chain.layout.factor(i).dim());
    }

    std::vector<Branch> branches;
    double total_weight = 0.0;
    for (const OutcomeTuple &tuple : enumerate_tuples(chain.layout, k)) {
        // Contract each apparatus factor against its final state, right to
        // left so factor indices stay valid, leaving the system part.
        StateVector part = evolved;
        std::vector<std::size_t> part_dims = dims;
        for (std::size_t i = k; i >= 1; --i) {
            const FactorSpace &f = chain.layout.factor(i);
            part = contract_factor(part, part_dims, i, f.final_state(f.outcome_index(tuple[i - 1])));
            part_dims.pop_back();
        }
        StateVector vector = part;
        for (std::size_t i = 1; i <= k; ++i) {
            const FactorSpace &f = chain.layout.factor(i);
            vector = tensor(vector, f.final_state(f.outcome_index(tuple[i - 1])));
        }
        total_weight += norm_squared(vector);
        branches.push_back(Branch{tuple, std::move(vector)});
    }
    if (std::abs(total_weight - norm_squared(chain.initial)) > tol) {
        throw std::invalid_argument("compose_chain: branch weights do not sum to the input norm; chain incomplete");
    }
    return branches;
}

std::vector<Branch> compose_chain(const MeasurementChain &chain, double tol) {
    return compose_chain_prefix(chain, chain.length(), tol);
}

Operator extract_composed_operator(const MeasurementChain &chain, const OutcomeTuple &tuple, double tol) {
    require(tuple.size() == chain.length(), "extract_composed_operator: tuple length must match the chain");
    const std::size_t sdim = chain.layout.system().dim();
    Operator composed(sdim, sdim);
    for (std::size_t col = 0; col < sdim; ++col) {
        MeasurementChain basis_chain{chain.layout, StateVector::basis(sdim, col), chain.families};
        for (const Branch &branch : compose_chain(basis_chain, tol)) {
            if (branch.tuple != tuple) {
                continue;
            }
            // Strip the final apparatus states to recover M_tuple e_col.
            StateVector part = branch.vector;
            std::vector<std::size_t> dims;
            for (std::size_t i = 0; i <= chain.length(); ++i) {
                dims.push_back(chain.layout.factor(i).dim());
            }
            for (std::size_t i = chain.length(); i >= 1; --i) {
                const FactorSpace &f = chain.layout.factor(i);
                part = contract_factor(part, dims, i, f.final_state(f.outcome_index(tuple[i - 1])));
                dims.pop_back();
            }
            for (std::size_t row = 0; row < sdim; ++row) {
                composed(row, col) = part[row];
            }
        }
    }
    return composed;
}

}  // namespace mchain
