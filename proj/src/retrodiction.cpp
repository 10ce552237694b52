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

#include "mchain/retrodiction.hpp"

#include <cmath>
#include <stdexcept>

#include "mchain/errors.hpp"

namespace mchain {

namespace {

void require(bool cond, const std::string &msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

std::vector<std::size_t> factor_dims(const ChainLayout &layout) {
    std::vector<std::size_t> dims;
    dims.reserve(layout.factor_count());
    for (std::size_t i = 0; i < layout.factor_count(); ++i) {
        dims.push_back(layout.factor(i).dim());
    }
    return dims;
}

/// Basis of H_S (x) H_1 (x) ... (x) H_{j-1} with apparatus slot `pin`
/// restricted to the single final state of outcome pin_m.
std::vector<StateVector> pinned_final_basis(const ChainLayout &layout, std::size_t j, std::size_t pin,
                                            std::size_t pin_m) {
    std::vector<StateVector> basis;
    for (std::size_t s = 0; s < layout.factor(0).dim(); ++s) {
        basis.push_back(StateVector::basis(layout.factor(0).dim(), s));
    }
    for (std::size_t i = 1; i < j; ++i) {
        const FactorSpace &f = layout.factor(i);
        std::vector<StateVector> extended;
        for (const StateVector &left : basis) {
            if (i == pin) {
                extended.push_back(tensor(left, f.final_state(pin_m)));
            } else {
                for (std::size_t m = 0; m < f.outcome_count(); ++m) {
                    extended.push_back(tensor(left, f.final_state(m)));
                }
            }
        }
        basis = std::move(extended);
    }
    return basis;
}

/// |Phi^pin[m]><Phi^pin[m]| embedded at slot `pin` within factors 0..j-1.
Operator pin_projector_on_prefix(const ChainLayout &layout, std::size_t j, std::size_t pin, std::size_t pin_m) {
    Operator out = projector_onto(layout.factor(pin).final_state(pin_m));
    const std::size_t left = layout.dim_product(0, pin - 1);
    const std::size_t right = pin + 1 <= j - 1 ? layout.dim_product(pin + 1, j - 1) : 1;
    out = tensor(Operator::identity(left), out);
    if (right > 1) {
        out = tensor(out, Operator::identity(right));
    }
    return out;
}

}  // namespace

bool system_unchanged_after(const MeasurementChain &chain, std::size_t j, double tol) {
    require(j >= 1 && j <= chain.length(), "system_unchanged_after: step index out of range");
    const ChainLayout &layout = chain.layout;
    const MeasurementFamily &family = chain.family(j);
    const std::vector<StateVector> basis = final_span_basis(layout, j);
    const std::size_t sdim = layout.factor(0).dim();
    const std::size_t fdim = basis.size() / sdim;  // final combinations of factors 1..j-1
    const Operator outside = Operator::identity(layout.prefix_dim(j)) - final_span_projector(layout, j);

    for (std::size_t m = 0; m < family.outcome_count(); ++m) {
        // Coefficients of each image in the restricted basis; basis index
        // is s * fdim + f with the system coordinate slowest.
        std::vector<std::vector<Complex>> coeff(basis.size(), std::vector<Complex>(basis.size()));
        for (std::size_t col = 0; col < basis.size(); ++col) {
            const StateVector image = apply(family.op(m), basis[col]);
            if (max_abs(apply(outside, image)) > tol) {
                return false;  // image leaves the final subspaces
            }
            for (std::size_t row = 0; row < basis.size(); ++row) {
                coeff[row][col] = inner(basis[row], image);
            }
        }
        // Candidate K from the first system-basis block; the identity
        // M = I_S (x) K must then hold entrywise.
        for (std::size_t s = 0; s < sdim; ++s) {
            for (std::size_t sp = 0; sp < sdim; ++sp) {
                for (std::size_t f = 0; f < fdim; ++f) {
                    for (std::size_t fp = 0; fp < fdim; ++fp) {
                        const Complex expected = s == sp ? coeff[fp][f] : Complex{};
                        if (!approx_eq(coeff[sp * fdim + fp][s * fdim + f], expected, tol)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    return true;
}

bool apparatus_unchanged_after(const MeasurementChain &chain, std::size_t i, std::size_t j, double tol) {
    require(i >= 1 && i < j && j <= chain.length(), "apparatus_unchanged_after: requires 1 <= i < j <= n");
    const ChainLayout &layout = chain.layout;
    const MeasurementFamily &family = chain.family(j);
    const std::size_t prefix = layout.prefix_dim(j);
    for (std::size_t mi = 0; mi < layout.factor(i).outcome_count(); ++mi) {
        const Operator escape = Operator::identity(prefix) - pin_projector_on_prefix(layout, j, i, mi);
        for (std::size_t mj = 0; mj < family.outcome_count(); ++mj) {
            for (const StateVector &probe : pinned_final_basis(layout, j, i, mi)) {
                if (max_abs(apply(escape, apply(family.op(mj), probe))) > tol) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool system_confirmed_before(const MeasurementChain &chain, std::size_t j, double tol) {
    require(j >= 1 && j <= chain.length(), "system_confirmed_before: step index out of range");
    for (std::size_t k = j; k <= chain.length(); ++k) {
        if (!system_unchanged_after(chain, k, tol)) {
            return false;
        }
    }
    return true;
}

bool apparatus_confirmed_before(const MeasurementChain &chain, std::size_t i, std::size_t j, double tol) {
    require(i >= 1 && i < j && j <= chain.length(), "apparatus_confirmed_before: requires 1 <= i < j <= n");
    for (std::size_t k = j; k <= chain.length(); ++k) {
        if (!apparatus_unchanged_after(chain, i, k, tol)) {
            return false;
        }
    }
    return true;
}

ConfirmingPoint confirming_point_for_system(const MeasurementChain &chain, double tol) {
    for (std::size_t j = 1; j <= chain.length(); ++j) {
        if (system_confirmed_before(chain, j, tol)) {
            // min of the confirmed set: the system itself when even the
            // first measurement leaves it alone, else the apparatus before.
            if (j == 1) {
                return ConfirmingPoint{true, 0};
            }
            return ConfirmingPoint{false, j - 1};
        }
    }
    return ConfirmingPoint{false, chain.length()};
}

std::size_t confirming_point_for_apparatus(const MeasurementChain &chain, std::size_t i, double tol) {
    require(i >= 1 && i <= chain.length(), "confirming_point_for_apparatus: apparatus index out of range");
    for (std::size_t j = i + 1; j <= chain.length(); ++j) {
        if (apparatus_confirmed_before(chain, i, j, tol)) {
            return j - 1;
        }
    }
    return chain.length();
}

ConfirmingReport confirming_report(const MeasurementChain &chain, double tol) {
    const std::size_t n = chain.length();
    ConfirmingReport report;
    report.system_point = confirming_point_for_system(chain, tol);
    report.system_unchanged.resize(n);
    report.apparatus_unchanged.assign(n, std::vector<bool>(n, false));
    for (std::size_t j = 1; j <= n; ++j) {
        report.system_unchanged[j - 1] = system_unchanged_after(chain, j, tol);
        for (std::size_t i = 1; i < j; ++i) {
            report.apparatus_unchanged[i - 1][j - 1] = apparatus_unchanged_after(chain, i, j, tol);
        }
    }
    for (std::size_t i = 1; i <= n; ++i) {
        report.apparatus_points.push_back(confirming_point_for_apparatus(chain, i, tol));
    }
    return report;
}

std::optional<ProductBranch> decompose_product_branch(const MeasurementChain &chain, const StateVector &total,
                                                      std::size_t active, double tol) {
    const ChainLayout &layout = chain.layout;
    const std::size_t n = chain.length();
    require(active <= n, "decompose_product_branch: active prefix exceeds the chain");
    require(total.dim() == layout.total_dim(), "decompose_product_branch: state does not live on the total space");
    if (norm_squared(total) <= tol * tol) {
        return std::nullopt;
    }

    StateVector v = total;
    std::vector<std::size_t> dims = factor_dims(layout);
    // Apparatuses beyond the active prefix must still sit in their init
    // states; contraction against a unit bra preserves the norm exactly
    // when the factor is pinned to it.
    for (std::size_t idx = n; idx >= active + 1; --idx) {
        const double before = norm_squared(v);
        StateVector w = contract_factor(v, dims, idx, layout.factor(idx).init_state());
        if (before - norm_squared(w) > tol * before) {
            return std::nullopt;
        }
        v = std::move(w);
        dims.pop_back();
    }

    std::vector<std::size_t> outcome_indices(active);
    for (std::size_t idx = active; idx >= 1; --idx) {
        const FactorSpace &f = layout.factor(idx);
        const double before = norm_squared(v);
        bool pinned = false;
        for (std::size_t m = 0; m < f.outcome_count(); ++m) {
            StateVector w = contract_factor(v, dims, idx, f.final_state(m));
            if (before - norm_squared(w) <= tol * before) {
                outcome_indices[idx - 1] = m;
                v = std::move(w);
                pinned = true;
                break;
            }
        }
        if (!pinned) {
            return std::nullopt;
        }
        dims.pop_back();
    }

    ProductBranch out;
    out.system_part = std::move(v);
    out.outcome_indices = std::move(outcome_indices);
    for (std::size_t i = 1; i <= active; ++i) {
        out.tuple.push_back(layout.factor(i).outcomes()[out.outcome_indices[i - 1]]);
    }
    return out;
}

std::optional<StateVector> extract_factor_state(const std::vector<std::size_t> &dims, const StateVector &state,
                                                std::size_t factor_index, double tol) {
    require(factor_index < dims.size(), "extract_factor_state: factor index out of range");
    std::size_t right = 1;
    for (std::size_t i = factor_index + 1; i < dims.size(); ++i) {
        right *= dims[i];
    }
    const std::size_t d = dims[factor_index];
    require(state.dim() % (d * right) == 0, "extract_factor_state: state does not match the factor dimensions");
    const std::size_t left = state.dim() / (d * right);
    const std::size_t rest = left * right;

    const auto at = [&](std::size_t a, std::size_t b) {
        const std::size_t l = b / right;
        const std::size_t r = b % right;
        return state[(l * d + a) * right + r];
    };

    std::size_t pa = 0, pb = 0;
    double best = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < rest; ++b) {
            const double mag = std::abs(at(a, b));
            if (mag > best) {
                best = mag;
                pa = a;
                pb = b;
            }
        }
    }
    if (best <= tol) {
        return std::nullopt;
    }
    // Rank-1 cross-ratio identity against the pivot row/column.
    const Complex pivot = at(pa, pb);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < rest; ++b) {
            if (!approx_eq(at(a, b) * pivot, at(a, pb) * at(pa, b), tol)) {
                return std::nullopt;
            }
        }
    }
    StateVector factor(d);
    for (std::size_t a = 0; a < d; ++a) {
        factor[a] = at(a, pb);
    }
    return normalize(factor);
}

StateVector backtrack_cf(const MeasurementChain &chain, const StateVector &final_total, RetrodictionQuery query,
                         std::size_t j, double tol) {
    const auto branch = decompose_product_branch(chain, final_total, chain.length(), tol);
    require(branch.has_value(), "backtrack_cf: final state is not a product branch");
    if (query.system) {
        require(system_confirmed_before(chain, j, tol),
                "backtrack_cf: the system is not confirmed before this measurement; the inference is not licensed");
        return normalize(branch->system_part);
    }
    const std::size_t i = query.apparatus;
    require(i >= 1 && i < j && j <= chain.length(), "backtrack_cf: apparatus query requires 1 <= i < j <= n");
    require(apparatus_confirmed_before(chain, i, j, tol),
            "backtrack_cf: the apparatus is not confirmed before this measurement; the inference is not licensed");
    return chain.layout.factor(i).final_state(branch->outcome_indices[i - 1]);
}

StateVector ru_step(const MeasurementChain &chain, const StateVector &final_total, std::size_t active,
                    bool require_pvm, double tol) {
    require(active >= 1 && active <= chain.length(), "ru_step: active prefix out of range");
    if (require_pvm) {
        for (std::size_t k = 1; k <= active; ++k) {
            if (!check_pvm(chain.family(k), tol)) {
                throw PVMRequiredError("ru_step: family at slot " + std::to_string(k) +
                                       " is not a PVM; projector retrodiction is not applicable");
            }
        }
    }
    const auto branch = decompose_product_branch(chain, final_total, active, tol);
    require(branch.has_value(), "ru_step: state is not a product branch over the active prefix");

    std::vector<std::pair<std::size_t, std::string>> pins;
    for (std::size_t i = 1; i < active; ++i) {
        if (apparatus_unchanged_after(chain, i, active, tol)) {
            pins.emplace_back(i, branch->tuple[i - 1]);
        }
    }
    const StateVector virt = virtual_total_state(chain, active - 1);
    const StateVector projected = apply(joint_projector(chain.layout, pins), virt);
    if (norm(projected) <= kZeroTol) {
        throw ZeroStateError("ru_step: projected virtual state is numerically zero");
    }
    return normalize(projected);
}

RetrodictedStates ru_recursive(const MeasurementChain &chain, const StateVector &final_total, double tol) {
    const std::size_t n = chain.length();
    require(n >= 1, "ru_recursive: empty chain");
    RetrodictedStates out;
    out.total_after_step.resize(n, StateVector(1));
    out.total_after_step[n - 1] = normalize(final_total);

    StateVector current = out.total_after_step[n - 1];
    for (std::size_t active = n; active >= 2; --active) {
        StateVector earlier = ru_step(chain, current, active, true, tol);
        out.total_after_step[active - 2] = earlier;
        if (active - 1 >= 2 && !decompose_product_branch(chain, earlier, active - 1, tol).has_value()) {
            throw RecursionBlockedError(
                "ru_recursive: the state after measurement " + std::to_string(active - 1) +
                " is not a product branch; the recursion does not extend to earlier steps");
        }
        current = std::move(earlier);
    }

    const std::vector<std::size_t> dims = factor_dims(chain.layout);
    for (const StateVector &total : out.total_after_step) {
        std::vector<std::optional<StateVector>> per_factor;
        per_factor.reserve(dims.size());
        for (std::size_t i = 0; i < dims.size(); ++i) {
            per_factor.push_back(extract_factor_state(dims, total, i, tol));
        }
        out.factor_states.push_back(std::move(per_factor));
    }
    return out;
}

std::vector<AgreementEntry> cf_ru_agreement(const MeasurementChain &chain, const StateVector &final_total,
                                            double tol) {
    const std::size_t n = chain.length();
    const std::vector<std::size_t> dims = factor_dims(chain.layout);
    const RetrodictedStates rs = ru_recursive(chain, final_total, tol);

    std::vector<AgreementEntry> entries;
    const auto compare = [&](RetrodictionQuery query, std::size_t j, const std::string &target) {
        const StateVector cf = backtrack_cf(chain, final_total, query, j, tol);
        std::optional<StateVector> ru;
        if (j == 1) {
            ru = query.system ? std::optional<StateVector>(chain.initial) : std::nullopt;
        } else {
            const std::size_t factor = query.system ? 0 : query.apparatus;
            ru = extract_factor_state(dims, rs.after_step(j - 1), factor, tol);
        }
        entries.push_back(AgreementEntry{target, j, ru.has_value() && equal_up_to_phase(cf, *ru, tol)});
    };

    for (std::size_t j = 1; j <= n; ++j) {
        if (system_confirmed_before(chain, j, tol)) {
            compare(RetrodictionQuery::for_system(), j, "system");
        }
    }
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            if (apparatus_confirmed_before(chain, i, j, tol)) {
                compare(RetrodictionQuery::for_apparatus(i), j, chain.layout.factor(i).label());
            }
        }
    }
    return entries;
}

Prop1Report verify_proposition1(const MeasurementChain &chain, double tol) {
    for (const MeasurementFamily &family : chain.families) {
        require(check_domain_condition(chain.layout, family),
                "verify_proposition1: a family violates the final-subspace domain condition");
    }
    const std::size_t n = chain.length();
    const double weight_floor = 1e-12;
    const double reach_floor = 1e-8;

    struct Target {
        bool system;
        std::size_t apparatus;
        std::string label;
    };
    // (target, step) pairs licensed by the confirmed-before predicates.
    std::vector<std::pair<Target, std::size_t>> licensed;
    for (std::size_t j = 1; j <= n; ++j) {
        if (system_confirmed_before(chain, j)) {
            licensed.push_back({Target{true, 0, "system"}, j});
        }
    }
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            if (apparatus_confirmed_before(chain, i, j)) {
                licensed.push_back({Target{false, i, chain.layout.factor(i).label()}, j});
            }
        }
    }

    Prop1Report report;
    const std::vector<Branch> finals = compose_chain(chain);

    std::size_t last_j = 0;
    std::vector<Branch> prefixes;
    std::vector<StateVector> forwarded;
    for (const auto &[target, j] : licensed) {
        if (j != last_j) {
            prefixes = compose_chain_prefix(chain, j - 1);
            forwarded.clear();
            for (const Branch &pb : prefixes) {
                forwarded.push_back(pb.weight() > weight_floor
                                        ? evolve_through(chain.layout, pb.vector, chain.families, j, n)
                                        : StateVector(chain.layout.total_dim()));
            }
            last_j = j;
        }
        for (const Branch &fb : finals) {
            if (fb.weight() <= weight_floor) {
                continue;
            }
            const StateVector fb_system = normalize(branch_system_part(chain.layout, fb));
            for (std::size_t p = 0; p < prefixes.size(); ++p) {
                const Branch &pb = prefixes[p];
                if (pb.weight() <= weight_floor) {
                    continue;
                }
                // Component of the forward-evolved prefix branch at the
                // final tuple; zero means this intermediate cannot lead
                // to that record, so the claim is vacuous along it.
                StateVector component = forwarded[p];
                std::vector<std::size_t> dims = factor_dims(chain.layout);
                for (std::size_t idx = n; idx >= 1; --idx) {
                    const FactorSpace &f = chain.layout.factor(idx);
                    component = contract_factor(component, dims, idx,
                                                f.final_state(f.outcome_index(fb.tuple[idx - 1])));
                    dims.pop_back();
                }
                if (norm(component) <= reach_floor) {
                    continue;
                }
                ++report.checks_run;
                if (target.system) {
                    const StateVector pb_system = normalize(branch_system_part(chain.layout, pb));
                    if (!equal_up_to_phase(pb_system, fb_system, tol)) {
                        report.violations.push_back(Prop1Violation{
                            fb.tuple, pb.tuple, target.label, j,
                            "system state before the step differs from the final branch"});
                    }
                } else if (pb.tuple[target.apparatus - 1] != fb.tuple[target.apparatus - 1]) {
                    report.violations.push_back(Prop1Violation{
                        fb.tuple, pb.tuple, target.label, j,
                        "apparatus record before the step differs from the final branch"});
                }
            }
        }
    }
    return report;
}

Remark1Report two_pin_annihilation(const MeasurementChain &chain, const WorldPrefix &world, double tol) {
    require(chain.length() >= 2, "two_pin_annihilation: chain must have at least two apparatuses");
    const FactorSpace &first = chain.layout.factor(1);
    const FactorSpace &second = chain.layout.factor(2);
    const StateVector virt = virtual_total_state(chain, 2);

    // Only |Omega_1| x |Omega_2| distinct pin pairs exist; resolve each once.
    std::vector<std::vector<bool>> annihilates(first.outcome_count(), std::vector<bool>(second.outcome_count()));
    for (std::size_t a = 0; a < first.outcome_count(); ++a) {
        for (std::size_t b = 0; b < second.outcome_count(); ++b) {
            const Operator proj = joint_projector(
                chain.layout, {{1, first.outcomes()[a]}, {2, second.outcomes()[b]}});
            annihilates[a][b] = norm(apply(proj, virt)) <= tol;
        }
    }

    Remark1Report report;
    report.samples = world.length();
    report.matches_mismatch_exactly = true;
    for (std::size_t s : world.symbols) {
        const OutcomeTuple &tuple = world.distribution.symbol(s);
        require(tuple.size() >= 2, "two_pin_annihilation: world tuples must cover the first two apparatuses");
        const std::size_t a = first.outcome_index(tuple[0]);
        const std::size_t b = second.outcome_index(tuple[1]);
        const bool zero = annihilates[a][b];
        if (zero) {
            ++report.annihilated;
        }
        if (zero != (tuple[0] != tuple[1])) {
            report.matches_mismatch_exactly = false;
        }
    }
    report.rate = report.samples == 0 ? 0.0 : static_cast<double>(report.annihilated) / static_cast<double>(report.samples);
    return report;
}

Remark2Report demonstrate_naive_ru_failure(const MeasurementChain &chain, double tol) {
    require(chain.length() == 3, "demonstrate_naive_ru_failure: expects the three-apparatus collaboration chain");
    const ChainLayout &layout = chain.layout;
    const std::size_t sdim = layout.factor(0).dim();
    const std::size_t fdim = layout.factor(1).dim();
    const std::size_t wdim = layout.factor(2).dim();
    const std::size_t sf = sdim * fdim;

    // The slot-2 family must act on the second apparatus alone and the
    // slot-3 family on the system pair alone; extract those blocks and
    // verify the claimed tensor structure.
    std::vector<Operator> w_ops;
    for (std::size_t l = 0; l < chain.family(2).outcome_count(); ++l) {
        const Operator &full = chain.family(2).op(l);
        Operator w(fdim, fdim);
        for (std::size_t a = 0; a < fdim; ++a) {
            for (std::size_t b = 0; b < fdim; ++b) {
                w(a, b) = full(a, b);
            }
        }
        require(approx_eq(full, tensor(Operator::identity(sdim), w), tol),
                "demonstrate_naive_ru_failure: slot-2 family is not of the form I_S (x) W");
        w_ops.push_back(std::move(w));
    }
    std::vector<Operator> d_ops;
    for (std::size_t m = 0; m < chain.family(3).outcome_count(); ++m) {
        const Operator &full = chain.family(3).op(m);
        Operator d(sf, sf);
        for (std::size_t a = 0; a < sf; ++a) {
            for (std::size_t b = 0; b < sf; ++b) {
                d(a, b) = full(a * wdim, b * wdim);
            }
        }
        require(approx_eq(full, tensor(d, Operator::identity(wdim)), tol),
                "demonstrate_naive_ru_failure: slot-3 family is not of the form D (x) I_W");
        d_ops.push_back(std::move(d));
    }

    // Grouped family: the second and third measurements fused into one,
    // with outcome pairs as the alphabet.
    std::vector<std::string> grouped_outcomes;
    std::vector<Operator> grouped_ops;
    for (std::size_t l = 0; l < w_ops.size(); ++l) {
        for (std::size_t m = 0; m < d_ops.size(); ++m) {
            grouped_outcomes.push_back(layout.factor(2).outcomes()[l] + layout.factor(3).outcomes()[m]);
            grouped_ops.push_back(d_ops[m] * tensor(Operator::identity(sdim), w_ops[l]));
        }
    }
    MeasurementFamily grouped = MeasurementFamily::deferred(2, grouped_outcomes, grouped_ops);

    Remark2Report report;
    report.grouped_family_complete = check_completeness(grouped, tol);
    report.grouped_family_pvm = check_pvm(grouped, tol);

    const ChainLayout grouped_layout(std::vector<FactorSpace>{
        layout.factor(0), layout.factor(1),
        FactorSpace::apparatus(layout.factor(2).label() + "+" + layout.factor(3).label(), grouped_outcomes)});
    const MeasurementChain grouped_chain{grouped_layout, chain.initial,
                                         std::vector<MeasurementFamily>{chain.family(1), grouped}};

    // Any realized record exhibits the contradiction; take the first.
    StateVector grouped_final(grouped_layout.total_dim());
    OutcomeTuple grouped_tuple;
    for (const Branch &b : compose_chain(grouped_chain)) {
        if (b.weight() > 1e-12) {
            grouped_final = b.vector;
            grouped_tuple = b.tuple;
            break;
        }
    }
    require(!grouped_tuple.empty(), "demonstrate_naive_ru_failure: grouped chain has no realized branch");

    // Naive rule: projector retrodiction without the PVM premise.
    const StateVector naive_total = ru_step(grouped_chain, grouped_final, 2, /*require_pvm=*/false, tol);
    std::vector<std::size_t> grouped_dims{sdim, fdim, grouped_layout.factor(2).dim()};
    StateVector naive_sf = contract_factor(naive_total, grouped_dims, 2, grouped_layout.factor(2).init_state());
    report.naive_state = normalize(naive_sf);

    // Backtracking route on the original three-step chain, conditioned on
    // the same records.
    OutcomeTuple full_tuple{grouped_tuple[0], std::string(), std::string()};
    for (const std::string &l : layout.factor(2).outcomes()) {
        for (const std::string &m : layout.factor(3).outcomes()) {
            if (l + m == grouped_tuple[1]) {
                full_tuple[1] = l;
                full_tuple[2] = m;
            }
        }
    }
    StateVector full_final(layout.total_dim());
    for (const Branch &b : compose_chain(chain)) {
        if (b.tuple == full_tuple) {
            full_final = b.vector;
        }
    }
    const RetrodictedStates rs = ru_recursive(chain, full_final, tol);
    std::vector<std::size_t> dims = factor_dims(layout);
    StateVector cf_total = rs.after_step(1);
    StateVector cf_sf = contract_factor(cf_total, dims, 3, layout.factor(3).init_state());
    dims.pop_back();
    cf_sf = contract_factor(cf_sf, dims, 2, layout.factor(2).init_state());
    report.cf_state = normalize(cf_sf);

    report.witness_tuple = full_tuple;
    report.overlap_squared = std::norm(inner(report.naive_state, report.cf_state));
    report.contradiction = std::abs(report.overlap_squared - 1.0) > tol;
    return report;
}

}  // namespace mchain
