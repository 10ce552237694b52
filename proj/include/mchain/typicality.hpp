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

#include <cstdint>
#include <vector>

#include "mchain/measurement.hpp"
#include "mchain/probability.hpp"

namespace mchain {

/// Counter-based generator: output i depends only on (key, i), so draws
/// can be computed in any order or sharded across workers and reassembled
/// in index order without changing the stream. The mixer is the splitmix64
/// finalizer; output is platform-independent by construction (pure 64-bit
/// integer arithmetic).
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ kKeyTweak)) {}

    /// The i-th raw 64-bit word of the stream.
    std::uint64_t word_at(std::uint64_t counter) const { return mix(key_ ^ mix(counter + kCounterTweak)); }

    /// The i-th uniform double in [0, 1), from the top 53 bits.
    double uniform_at(std::uint64_t counter) const {
        return static_cast<double>(word_at(counter) >> 11) * 0x1.0p-53;
    }

    /// A derived generator with an independent stream.
    CounterRng split(std::uint64_t stream) const {
        CounterRng child(0);
        child.key_ = mix(key_ + mix(stream ^ kSplitTweak));
        return child;
    }

  private:
    static constexpr std::uint64_t kKeyTweak = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kCounterTweak = 0xbf58476d1ce4e5b9ULL;
    static constexpr std::uint64_t kSplitTweak = 0x94d049bb133111ebULL;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

/// A finite sampled prefix of a world: outcome tuples drawn i.i.d. from a
/// world distribution, with the RNG provenance that reproduces them.
struct WorldPrefix {
    std::vector<std::size_t> symbols;  // indices into the distribution's alphabet
    std::uint64_t seed = 0;
    FiniteProbabilitySpace distribution;

    std::size_t length() const { return symbols.size(); }
    const OutcomeTuple &tuple_at(std::size_t n) const { return distribution.symbol(symbols[n - 1]); }
};

/// Draws n i.i.d. tuples from the distribution, deterministic given the
/// seed. Inverse-CDF over the positive-weight support only: a zero-weight
/// tuple is never emitted. Pseudorandom sampling stands in for the
/// typicality postulate; almost every sequence under the Bernoulli measure
/// satisfies the law of large numbers and the support property checked
/// below, and those are the consequences this artifact exercises. No
/// finite procedure can certify Martin-Lof randomness itself.
WorldPrefix sample_worlds(const FiniteProbabilitySpace &fps, std::size_t n, std::uint64_t seed);

/// True iff every tuple of the prefix has strictly positive weight.
bool check_support(const FiniteProbabilitySpace &fps, const WorldPrefix &world);

/// Per-symbol comparison of empirical frequencies against the distribution.
struct LlnReport {
    struct Entry {
        OutcomeTuple symbol;
        double expected = 0.0;
        double empirical = 0.0;
        double deviation = 0.0;
    };
    std::vector<Entry> entries;
    double max_deviation = 0.0;
    bool pass = false;
};

/// Law-of-large-numbers check: every |empirical - P(a)| <= tol.
LlnReport check_lln(const FiniteProbabilitySpace &fps, const WorldPrefix &world, double tol);

/// Maps a sampled world through a tuple-component projection, yielding the
/// matching prefix over the marginal distribution.
WorldPrefix marginalize_world(const WorldPrefix &world, const std::vector<std::size_t> &keep_positions);

/// The normalized branch state of the chain for the world's n-th tuple
/// (1-based): the per-repetition post-measurement state of Postulate 5's
/// final clause. Throws ZeroStateError on a zero branch, which signals a
/// support violation.
StateVector branch_state_at(const MeasurementChain &chain, const WorldPrefix &world, std::size_t n);

}  // namespace mchain
