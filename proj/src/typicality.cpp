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

#include "mchain/typicality.hpp"

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

}  // namespace

WorldPrefix sample_worlds(const FiniteProbabilitySpace &fps, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "sample_worlds: at least one draw required");
    const std::vector<std::size_t> support = fps.support();
    require(!support.empty(), "sample_worlds: distribution has empty support");

    std::vector<double> cumulative;
    cumulative.reserve(support.size());
    double total = 0.0;
    for (std::size_t idx : support) {
        total += fps.weight(idx);
        cumulative.push_back(total);
    }

    const CounterRng rng(seed);
    std::vector<std::size_t> symbols;
    symbols.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform_at(i) * total;
        std::size_t lo = 0;
        std::size_t hi = support.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (u < cumulative[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        symbols.push_back(support[lo]);
    }
    return WorldPrefix{std::move(symbols), seed, fps};
}

bool check_support(const FiniteProbabilitySpace &fps, const WorldPrefix &world) {
    for (std::size_t s : world.symbols) {
        if (s >= fps.size() || !(fps.weight(s) > 0.0)) {
            return false;
        }
    }
    return true;
}

LlnReport check_lln(const FiniteProbabilitySpace &fps, const WorldPrefix &world, double tol) {
    require(world.length() > 0, "check_lln: empty world prefix");
    std::vector<std::size_t> counts(fps.size(), 0);
    for (std::size_t s : world.symbols) {
        require(s < fps.size(), "check_lln: world symbol outside the alphabet");
        ++counts[s];
    }
    LlnReport report;
    report.pass = true;
    for (std::size_t i = 0; i < fps.size(); ++i) {
        LlnReport::Entry entry;
        entry.symbol = fps.symbol(i);
        entry.expected = fps.weight(i);
        entry.empirical = static_cast<double>(counts[i]) / static_cast<double>(world.length());
        entry.deviation = std::abs(entry.empirical - entry.expected);
        report.max_deviation = std::max(report.max_deviation, entry.deviation);
        if (entry.deviation > tol) {
            report.pass = false;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

WorldPrefix marginalize_world(const WorldPrefix &world, const std::vector<std::size_t> &keep_positions) {
    FiniteProbabilitySpace marginal = marginalize(world.distribution, keep_positions);
    std::vector<std::size_t> symbols;
    symbols.reserve(world.length());
    for (std::size_t s : world.symbols) {
        const OutcomeTuple &full = world.distribution.symbol(s);
        OutcomeTuple projected;
        projected.reserve(keep_positions.size());
        for (std::size_t pos : keep_positions) {
            projected.push_back(full[pos]);
        }
        symbols.push_back(marginal.symbol_index(projected));
    }
    return WorldPrefix{std::move(symbols), world.seed, std::move(marginal)};
}

StateVector branch_state_at(const MeasurementChain &chain, const WorldPrefix &world, std::size_t n) {
    require(n >= 1 && n <= world.length(), "branch_state_at: repetition index out of range");
    const OutcomeTuple &tuple = world.tuple_at(n);
    for (const Branch &branch : compose_chain(chain)) {
        if (branch.tuple == tuple) {
            return normalize(branch.vector);
        }
    }
    throw std::invalid_argument("branch_state_at: tuple " + tuple_label(tuple) + " is not a chain outcome");
}

}  // namespace mchain
