/*
   Copyright 2026 The coarseqmc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef CQMC_KEYED_RNG_HPP
#define CQMC_KEYED_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace cqmc {

/// Counter-based random stream. The stream is a pure function of its key
/// (e.g. master seed, replication, dimension, row), so draws never depend on
/// evaluation order or thread schedule. Output is the SplitMix64 finalizer
/// applied to key + counter * golden-ratio increment.
class KeyedStream {
public:
    using result_type = std::uint64_t;

    KeyedStream(std::initializer_list<std::uint64_t> key) {
        for (std::uint64_t part : key) state_ = mix(state_ ^ mix(part + kIncrement));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(state_ + (++counter_) * kIncrement); }

    /// Uniform integer in [0, bound), bound > 0, by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = max() - max() % bound;
        for (;;) {
            std::uint64_t r = (*this)();
            if (r < limit) return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t kIncrement = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0x243F6A8885A308D3ULL;
    std::uint64_t counter_ = 0;
};

}  // namespace cqmc

#endif  // CQMC_KEYED_RNG_HPP
