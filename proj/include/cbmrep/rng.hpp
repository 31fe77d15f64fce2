// Copyright 2026 The cbmrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBMREP_RNG_HPP
#define CBMREP_RNG_HPP

#include <cstdint>

namespace cbmrep {

namespace detail {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Splittable counter-based random stream keyed by (seed, trial, lane, slot).
/// Streams with distinct keys are independent, so trials and sites can be
/// drawn in any order, on any number of threads, with identical results.
class CounterRng {
  public:
    CounterRng() : state_(0) {}

    CounterRng(uint64_t seed, uint64_t trial, uint64_t lane, uint64_t slot) {
        uint64_t h = detail::mix64(seed ^ 0x8e1f0c107f6e3d25ULL);
        h = detail::mix64(h ^ detail::mix64(trial));
        h = detail::mix64(h ^ detail::mix64(lane * 0x9ddfea08eb382d69ULL + 1));
        state_ = detail::mix64(h ^ detail::mix64(slot * 0xc2b2ae3d27d4eb4fULL + 1));
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        if (p <= 0.0) {
            return false;
        }
        return next_unit() < p;
    }

    bool coin() {
        return (next_u64() & 1ULL) != 0;
    }

  private:
    uint64_t state_;
};

}  // namespace cbmrep

#endif
