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

#include "mchain/probability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mchain {

namespace {

void require(bool cond, const std::string &msg) {
    if (!cond) {
        throw std::invalid_argument(msg);
    }
}

}  // namespace

FiniteProbabilitySpace::FiniteProbabilitySpace(std::vector<OutcomeTuple> alphabet, std::vector<double> weights,
                                               double tol)
    : alphabet_(std::move(alphabet)), weights_(std::move(weights)) {
    require(!alphabet_.empty(), "FiniteProbabilitySpace: alphabet must be nonempty");
    require(alphabet_.size() == weights_.size(), "FiniteProbabilitySpace: one weight per symbol required");
    double total = 0.0;
    for (double w : weights_) {
        require(std::isfinite(w) && w >= 0.0, "FiniteProbabilitySpace: weights must be finite and nonnegative");
        total += w;
    }
    require(std::abs(total - 1.0) <= tol, "FiniteProbabilitySpace: weights must sum to one");
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
        const bool inserted = index_.emplace(alphabet_[i], i).second;
        require(inserted, "FiniteProbabilitySpace: duplicate symbol in alphabet");
    }
}

double FiniteProbabilitySpace::weight(const OutcomeTuple &symbol) const {
    return weights_[symbol_index(symbol)];
}

std::size_t FiniteProbabilitySpace::symbol_index(const OutcomeTuple &symbol) const {
    const auto it = index_.find(symbol);
    require(it != index_.end(), "FiniteProbabilitySpace: unknown symbol " + tuple_label(symbol));
    return it->second;
}

std::vector<std::size_t> FiniteProbabilitySpace::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] > 0.0) {
            out.push_back(i);
        }
    }
    return out;
}

FiniteProbabilitySpace world_distribution(const std::vector<Branch> &branches, double tol) {
    require(!branches.empty(), "world_distribution: no branches");
    std::vector<OutcomeTuple> alphabet;
    std::vector<double> weights;
    alphabet.reserve(branches.size());
    weights.reserve(branches.size());
    for (const Branch &b : branches) {
        alphabet.push_back(b.tuple);
        weights.push_back(b.weight());
    }
    return FiniteProbabilitySpace(std::move(alphabet), std::move(weights), tol);
}

double string_weight(const FiniteProbabilitySpace &fps, const SymbolString &sigma) {
    double acc = 1.0;
    for (std::size_t s : sigma) {
        require(s < fps.size(), "string_weight: symbol index outside the alphabet");
        acc *= fps.weight(s);
    }
    return acc;
}

bool is_prefix_free(const std::vector<SymbolString> &strings) {
    for (std::size_t i = 0; i < strings.size(); ++i) {
        for (std::size_t j = 0; j < strings.size(); ++j) {
            if (i == j) {
                continue;
            }
            const SymbolString &a = strings[i];
            const SymbolString &b = strings[j];
            if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin())) {
                return false;
            }
        }
    }
    return true;
}

double cylinder_measure(const FiniteProbabilitySpace &fps, const std::vector<SymbolString> &strings) {
    require(is_prefix_free(strings), "cylinder_measure: string set is not prefix-free");
    double acc = 0.0;
    for (const SymbolString &sigma : strings) {
        acc += string_weight(fps, sigma);
    }
    return acc;
}

bool validate_representation(const std::function<double(const SymbolString &)> &r, std::size_t alphabet_size,
                             std::size_t max_len, double tol) {
    require(alphabet_size > 0, "validate_representation: alphabet must be nonempty");
    if (std::abs(r(SymbolString{}) - 1.0) > tol) {
        return false;
    }
    std::vector<SymbolString> frontier{SymbolString{}};
    for (std::size_t len = 0; len < max_len; ++len) {
        std::vector<SymbolString> next;
        next.reserve(frontier.size() * alphabet_size);
        for (const SymbolString &sigma : frontier) {
            double children = 0.0;
            for (std::size_t a = 0; a < alphabet_size; ++a) {
                SymbolString extended = sigma;
                extended.push_back(a);
                children += r(extended);
                next.push_back(std::move(extended));
            }
            if (std::abs(children - r(sigma)) > tol) {
                return false;
            }
        }
        frontier = std::move(next);
    }
    return true;
}

FiniteProbabilitySpace marginalize(const FiniteProbabilitySpace &fps, const std::vector<std::size_t> &keep_positions) {
    require(!keep_positions.empty(), "marginalize: keep at least one tuple position");
    for (std::size_t i = 1; i < keep_positions.size(); ++i) {
        require(keep_positions[i - 1] < keep_positions[i], "marginalize: positions must be strictly increasing");
    }
    std::vector<OutcomeTuple> alphabet;
    std::vector<double> weights;
    std::map<OutcomeTuple, std::size_t> index;
    for (std::size_t i = 0; i < fps.size(); ++i) {
        const OutcomeTuple &full = fps.symbol(i);
        OutcomeTuple projected;
        projected.reserve(keep_positions.size());
        for (std::size_t pos : keep_positions) {
            require(pos < full.size(), "marginalize: position outside the tuple");
            projected.push_back(full[pos]);
        }
        const auto it = index.find(projected);
        if (it == index.end()) {
            index.emplace(projected, alphabet.size());
            alphabet.push_back(std::move(projected));
            weights.push_back(fps.weight(i));
        } else {
            weights[it->second] += fps.weight(i);
        }
    }
    return FiniteProbabilitySpace(std::move(alphabet), std::move(weights));
}

FiniteProbabilitySpace marginalize_first(const FiniteProbabilitySpace &fps) {
    return marginalize(fps, {0});
}

bool check_ml_test(const FiniteProbabilitySpace &fps, const MLTestFinite &test) {
    for (const auto &[n, strings] : test.levels) {
        if (n == 0 || !is_prefix_free(strings)) {
            return false;
        }
        if (cylinder_measure(fps, strings) >= std::ldexp(1.0, -static_cast<int>(n))) {
            return false;
        }
    }
    return true;
}

bool covered_at_level(const MLTestFinite &test, const SymbolString &prefix, std::size_t n) {
    const auto it = test.levels.find(n);
    if (it == test.levels.end()) {
        return false;
    }
    for (const SymbolString &sigma : it->second) {
        if (sigma.size() <= prefix.size() && std::equal(sigma.begin(), sigma.end(), prefix.begin())) {
            return true;
        }
    }
    return false;
}

}  // namespace mchain
