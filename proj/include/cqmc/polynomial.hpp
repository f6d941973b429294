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

#ifndef CQMC_POLYNOMIAL_HPP
#define CQMC_POLYNOMIAL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqmc/field.hpp"

namespace cqmc {

/**
 * Polynomial over a prime field F_b, coefficients in ascending degree order.
 *
 * The coefficient list is trimmed so the last entry is nonzero; the zero
 * polynomial has an empty list and degree -1.
 */
class Polynomial {
public:
    explicit Polynomial(PrimeBase base) : base_(base) {}
    Polynomial(PrimeBase base, std::vector<Digit> coefficients);

    static Polynomial monomial(PrimeBase base, int degree, Digit coefficient = 1);
    static Polynomial constant(PrimeBase base, Digit c) { return monomial(base, 0, c); }

    /// Inverse of encode(): coefficients are the base-b digits of code.
    static Polynomial from_code(PrimeBase base, std::uint64_t code);

    /// Parses the ascending coefficient string used on the command line, e.g.
    /// "1101" is 1 + x + x^3 over F_2. Bases above 10 separate coefficients with '.'.
    static Polynomial parse(PrimeBase base, std::string_view text);

    PrimeBase base() const { return base_; }
    int degree() const { return int(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
    Digit coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Digit{0}; }
    const std::vector<Digit>& coefficients() const { return coeffs_; }

    /// Sum of coeff_i * b^i; the canonical within-degree ordering key.
    std::uint64_t encode() const;

    /// Ascending coefficient string (inverse of parse).
    std::string to_string() const;
    /// Human-readable form such as "x^3+x+1".
    std::string pretty() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();

    PrimeBase base_;
    std::vector<Digit> coeffs_;
};

Polynomial operator+(const Polynomial& a, const Polynomial& c);
Polynomial operator-(const Polynomial& a, const Polynomial& c);
Polynomial operator*(const Polynomial& a, const Polynomial& c);

inline Polynomial poly_mul(const Polynomial& a, const Polynomial& c) { return a * c; }

/// Quotient and remainder of a by a nonzero m.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& m);
Polynomial poly_mod(const Polynomial& a, const Polynomial& m);
/// Monic gcd (zero if both inputs are zero).
Polynomial gcd(Polynomial a, Polynomial c);
Polynomial powmod(const Polynomial& a, std::uint64_t exponent, const Polynomial& m);
Polynomial pow(const Polynomial& a, unsigned exponent);

/// Irreducibility of a monic polynomial of degree >= 1: gcd(x^(b^i) - x, p) = 1
/// for every i <= deg(p) / 2.
bool is_irreducible(const Polynomial& p);

/// Primitivity of a monic irreducible polynomial of degree e: x has order
/// b^e - 1 modulo p. p = x is not primitive (x is not a unit).
bool is_primitive(const Polynomial& p);

/// Distinct prime factors of n, ascending, by trial division.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

enum class PolyKind { all, irreducible, primitive };

/// Monic polynomials of one degree, ascending by encode().
std::vector<Polynomial> enumerate_monic(PrimeBase base, int degree, PolyKind kind);

}  // namespace cqmc

#endif  // CQMC_POLYNOMIAL_HPP
