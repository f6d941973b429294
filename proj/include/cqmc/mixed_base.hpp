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

#ifndef CQMC_MIXED_BASE_HPP
#define CQMC_MIXED_BASE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cqmc/field.hpp"

namespace cqmc {

/// One coordinate of a mixed base: radix prime^exponent, digits taken in the prime.
struct BaseComponent {
    std::uint32_t prime = 2;
    std::uint32_t exponent = 1;

    /// prime^exponent
    std::uint64_t radix() const;

    friend bool operator==(const BaseComponent&, const BaseComponent&) = default;
};

/**
 * Per-dimension bases (p_1^{e_1}, ..., p_d^{e_d}).
 *
 * Halton is (p_1, ..., p_d) with distinct primes; a coarse base for a digital
 * sequence in base b is (b^{e_1}, ..., b^{e_d}); the usual base has every e_j = 1.
 */
class MixedBase {
public:
    MixedBase() = default;
    explicit MixedBase(std::vector<BaseComponent> dims);

    static MixedBase uniform(std::uint32_t prime, std::size_t d);
    static MixedBase coarse(std::uint32_t prime, std::span<const std::uint32_t> exponents);
    static MixedBase halton(std::span<const std::uint32_t> primes);

    std::size_t size() const { return dims_.size(); }
    const BaseComponent& operator[](std::size_t j) const { return dims_[j]; }
    const std::vector<BaseComponent>& components() const { return dims_; }

    /// True when every dimension shares one prime.
    bool digital() const;
    /// The shared prime; throws unless digital().
    std::uint32_t common_prime() const;
    std::vector<std::uint32_t> exponents() const;
    /// Same primes with every exponent set to 1.
    MixedBase usual() const;

    std::string describe() const;

    friend bool operator==(const MixedBase&, const MixedBase&) = default;

private:
    std::vector<BaseComponent> dims_;
};

/// Digits of one coordinate in base `prime`, most significant first.
struct DigitCoordinate {
    std::uint32_t prime = 2;
    std::vector<Digit> digits;

    /// psi(digits) = sum_i digits[i] * prime^-(i+1), truncated to double.
    double value() const;
    /// Integer formed by the first `count` digits.
    std::uint64_t leading(std::size_t count) const;

    friend bool operator==(const DigitCoordinate&, const DigitCoordinate&) = default;
};

/// A point as exact per-coordinate digit arrays.
struct DigitPoint {
    std::vector<DigitCoordinate> coords;

    std::size_t dimension() const { return coords.size(); }
    const DigitCoordinate& operator[](std::size_t j) const { return coords[j]; }
    DigitCoordinate& operator[](std::size_t j) { return coords[j]; }
    std::vector<double> values() const;

    friend bool operator==(const DigitPoint&, const DigitPoint&) = default;
};

/// Digits of a / prime^count for 0 <= a < prime^count.
DigitCoordinate coordinate_from_integer(std::uint32_t prime, std::uint64_t a, std::size_t count);

}  // namespace cqmc

#endif  // CQMC_MIXED_BASE_HPP
