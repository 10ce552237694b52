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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mchain/measurement.hpp"

namespace mchain {

/// Tolerance for probability normalization checks. All table values in the
/// built-in scenarios are dyadic rationals and round-trip exactly in binary
/// floating point; drift is rounding-only.
inline constexpr double kProbTol = 1e-10;

/// A finite string over an FPS alphabet, as indices into the alphabet.
using SymbolString = std::vector<std::size_t>;

/// A finite probability space: an outcome-tuple alphabet with one
/// nonnegative weight per symbol, summing to one.
class FiniteProbabilitySpace {
  public:
    FiniteProbabilitySpace(std::vector<OutcomeTuple> alphabet, std::vector<double> weights, double tol = kProbTol);

    std::size_t size() const { return alphabet_.size(); }
    const std::vector<OutcomeTuple> &alphabet() const { return alphabet_; }
    const OutcomeTuple &symbol(std::size_t i) const { return alphabet_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    double weight(const OutcomeTuple &symbol) const;
    const std::vector<double> &weights() const { return weights_; }
    std::size_t symbol_index(const OutcomeTuple &symbol) const;

    /// Indices of symbols with strictly positive weight.
    std::vector<std::size_t> support() const;

  private:
    std::vector<OutcomeTuple> alphabet_;
    std::vector<double> weights_;
    std::map<OutcomeTuple, std::size_t> index_;
};

/// The world distribution of a chain: one weight per outcome tuple, equal
/// to the squared norm of the tuple's branch vector. Rejects branch sets
/// whose weights do not sum to one within tol (an incomplete chain).
FiniteProbabilitySpace world_distribution(const std::vector<Branch> &branches, double tol = kProbTol);

/// Product weight P(sigma) of a string of symbols; the empty string has
/// weight one.
double string_weight(const FiniteProbabilitySpace &fps, const SymbolString &sigma);

/// True iff no string in the set is a proper prefix of another (equal
/// strings count as prefixes).
bool is_prefix_free(const std::vector<SymbolString> &strings);

/// Bernoulli measure of the union of cylinders over a prefix-free string
/// set; the empty set has measure zero. Rejects non-prefix-free sets,
/// which would double count.
double cylinder_measure(const FiniteProbabilitySpace &fps, const std::vector<SymbolString> &strings);

/// Checks the probability-measure-representation conditions for r on all
/// strings up to length max_len over an alphabet of the given size:
/// r(lambda) == 1 and r(sigma) == sum_a r(sigma a) within tol.
bool validate_representation(const std::function<double(const SymbolString &)> &r, std::size_t alphabet_size,
                             std::size_t max_len, double tol = kProbTol);

/// Projects tuple symbols onto the given component positions and sums
/// weights of symbols that collide. keep_positions must be nonempty,
/// strictly increasing, and within every tuple's length.
FiniteProbabilitySpace marginalize(const FiniteProbabilitySpace &fps, const std::vector<std::size_t> &keep_positions);

/// Marginal onto the first tuple component.
FiniteProbabilitySpace marginalize_first(const FiniteProbabilitySpace &fps);

/// A Martin-Lof test held at finitely many levels: level n carries a
/// prefix-free string set whose cylinder measure must be below 2^-n.
/// This is an explicit finite container; recursively enumerable tests and
/// universal tests are not representable at desk scale, so escaping the
/// supplied levels never certifies that a sequence is Martin-Lof random.
struct MLTestFinite {
    std::map<std::size_t, std::vector<SymbolString>> levels;
};

/// Verifies prefix-freeness and the 2^-n measure bound at every level.
bool check_ml_test(const FiniteProbabilitySpace &fps, const MLTestFinite &test);

/// True iff some string in level n is a prefix of the given sequence.
bool covered_at_level(const MLTestFinite &test, const SymbolString &prefix, std::size_t n);

}  // namespace mchain
