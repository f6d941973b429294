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

#include "cqmc/mixed_base.hpp"

#include <stdexcept>

namespace cqmc {

std::uint64_t BaseComponent::radix() const {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exponent; ++i) {
        if (r > UINT64_MAX / prime) throw std::overflow_error("BaseComponent::radix: overflow");
        r *= prime;
    }
    return r;
}

MixedBase::MixedBase(std::vector<BaseComponent> dims) : dims_(std::move(dims)) {
    for (const auto& c : dims_) {
        PrimeBase check(c.prime);
        (void)check;
        if (c.exponent < 1) throw std::invalid_argument("MixedBase: exponent must be >= 1");
    }
}

MixedBase MixedBase::uniform(std::uint32_t prime, std::size_t d) {
    return MixedBase(std::vector<BaseComponent>(d, BaseComponent{prime, 1}));
}

MixedBase MixedBase::coarse(std::uint32_t prime, std::span<const std::uint32_t> exponents) {
    std::vector<BaseComponent> dims;
    for (std::uint32_t e : exponents) dims.push_back({prime, e});
    return MixedBase(std::move(dims));
}

MixedBase MixedBase::halton(std::span<const std::uint32_t> primes) {
    std::vector<BaseComponent> dims;
    for (std::uint32_t p : primes) dims.push_back({p, 1});
    return MixedBase(std::move(dims));
}

bool MixedBase::digital() const {
    for (const auto& c : dims_)
        if (c.prime != dims_.front().prime) return false;
    return true;
}

std::uint32_t MixedBase::common_prime() const {
    if (dims_.empty() || !digital()) throw std::invalid_argument("MixedBase: no common prime");
    return dims_.front().prime;
}

std::vector<std::uint32_t> MixedBase::exponents() const {
    std::vector<std::uint32_t> e;
    for (const auto& c : dims_) e.push_back(c.exponent);
    return e;
}

MixedBase MixedBase::usual() const {
    std::vector<BaseComponent> dims = dims_;
    for (auto& c : dims) c.exponent = 1;
    return MixedBase(std::move(dims));
}

std::string MixedBase::describe() const {
    std::string s = "(";
    for (std::size_t j = 0; j < dims_.size(); ++j) {
        if (j) s += ",";
        s += std::to_string(dims_[j].prime);
        if (dims_[j].exponent != 1) s += "^" + std::to_string(dims_[j].exponent);
    }
    return s + ")";
}

double DigitCoordinate::value() const {
    // leading digits as an integer a / prime^m with prime^m <= 2^53, so the
    // quotient is correctly rounded and stays below 1
    constexpr std::uint64_t kLimit = std::uint64_t{1} << 53;
    std::uint64_t a = 0, scale = 1;
    for (Digit x : digits) {
        if (scale > kLimit / prime) break;
        a = a * prime + x;
        scale *= prime;
    }
    return double(a) / double(scale);
}

std::uint64_t DigitCoordinate::leading(std::size_t count) const {
    if (count > digits.size()) throw std::out_of_range("DigitCoordinate::leading: resolution exceeds precision");
    std::uint64_t a = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (a > (UINT64_MAX - digits[i]) / prime) throw std::overflow_error("DigitCoordinate::leading: overflow");
        a = a * prime + digits[i];
    }
    return a;
}

std::vector<double> DigitPoint::values() const {
    std::vector<double> v;
    v.reserve(coords.size());
    for (const auto& c : coords) v.push_back(c.value());
    return v;
}

DigitCoordinate coordinate_from_integer(std::uint32_t prime, std::uint64_t a, std::size_t count) {
    DigitCoordinate c{prime, std::vector<Digit>(count, 0)};
    for (std::size_t i = count; i-- > 0;) {
        c.digits[i] = Digit(a % prime);
        a /= prime;
    }
    if (a != 0) throw std::out_of_range("coordinate_from_integer: value does not fit in the digit count");
    return c;
}

}  // namespace cqmc
