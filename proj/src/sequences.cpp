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

#include "cqmc/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace cqmc {

namespace {

constexpr int kMaxPolyDegree = 20;

/// Smallest c >= 1 with base^c >= n.
std::size_t digits_for(std::uint64_t base, std::uint64_t n) {
    std::size_t c = 1;
    std::uint64_t cap = base;
    while (cap < n) {
        if (cap > UINT64_MAX / base) return c + 1;
        cap *= base;
        ++c;
    }
    return c;
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (r > UINT64_MAX / base) return UINT64_MAX;
        r *= base;
    }
    return r;
}

/// Base-b digits needed to resolve at least `bits` binary digits.
unsigned digits_for_bits(std::uint32_t prime, unsigned bits) {
    return unsigned(std::ceil(double(bits) / std::log2(double(prime)) - 1e-12));
}

}  // namespace

std::vector<Digit> laurent_coefficients(const Polynomial& y, const Polynomial& p, unsigned t, std::size_t count) {
    if (y.base() != p.base()) throw std::invalid_argument("laurent_coefficients: mismatched bases");
    if (p.is_zero()) throw std::invalid_argument("laurent_coefficients: zero denominator");
    const Polynomial denom = pow(p, t);
    if (y.degree() >= denom.degree()) throw std::invalid_argument("laurent_coefficients: improper fraction");
    // x^count * y = Q * p^t + R, and Q = sum_{r=1..count} a_r x^(count - r)
    const Polynomial shifted = y * Polynomial::monomial(y.base(), int(count));
    const Polynomial q = divmod(shifted, denom).first;
    std::vector<Digit> a(count);
    for (std::size_t r = 1; r <= count; ++r) a[r - 1] = q.coeff(count - r);
    return a;
}

std::vector<FieldMatrix> niederreiter_matrices(std::span<const Polynomial> polys, std::span<const std::size_t> rows,
                                               std::size_t cols) {
    if (polys.empty()) throw std::invalid_argument("niederreiter_matrices: no polynomials");
    if (rows.size() != polys.size()) throw std::invalid_argument("niederreiter_matrices: one row count per polynomial required");
    const PrimeBase field = polys.front().base();
    for (const auto& p : polys) {
        if (p.base() != field) throw std::invalid_argument("niederreiter_matrices: mismatched bases");
        if (!p.is_monic() || p.degree() < 1) throw std::invalid_argument("niederreiter_matrices: polynomials must be monic of degree >= 1");
    }
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (std::size_t j = i + 1; j < polys.size(); ++j)
            if (gcd(polys[i], polys[j]).degree() != 0)
                throw std::invalid_argument("niederreiter_matrices: polynomials " + polys[i].pretty() + " and " +
                                            polys[j].pretty() + " are not coprime");

    std::vector<FieldMatrix> out;
    out.reserve(polys.size());
    for (std::size_t j = 0; j < polys.size(); ++j) {
        const Polynomial& p = polys[j];
        const std::size_t e = std::size_t(p.degree());
        FieldMatrix c(field, rows[j], cols);
        for (std::size_t k = 1; k <= rows[j]; ++k) {
            const std::size_t t = (k - 1) / e + 1;
            const Polynomial y = Polynomial::monomial(field, int(t * e - k));
            const auto a = laurent_coefficients(y, p, unsigned(t), cols);
            for (std::size_t r = 0; r < cols; ++r) c.set(k - 1, r, a[r]);
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<FieldMatrix> niederreiter_matrices(std::span<const Polynomial> polys, std::size_t rows, std::size_t cols) {
    std::vector<std::size_t> r(polys.size(), rows);
    return niederreiter_matrices(polys, r, cols);
}

std::vector<Polynomial> sobol_polys(std::size_t d) {
    if (d == 0) throw std::invalid_argument("sobol_polys: d must be >= 1");
    const PrimeBase f2(2);
    std::vector<Polynomial> out{Polynomial::monomial(f2, 1)};
    for (int degree = 1; out.size() < d; ++degree) {
        if (degree > kMaxPolyDegree) throw std::invalid_argument("sobol_polys: dimension exceeds the enumerable supply");
        for (auto& p : enumerate_monic(f2, degree, PolyKind::primitive)) {
            if (out.size() == d) break;
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<Polynomial> full_niederreiter_polys(std::size_t d, PrimeBase base) {
    if (d == 0) throw std::invalid_argument("full_niederreiter_polys: d must be >= 1");
    std::vector<Polynomial> out;
    for (int degree = 1; out.size() < d; ++degree) {
        if (degree > kMaxPolyDegree) throw std::invalid_argument("full_niederreiter_polys: dimension exceeds the enumerable supply");
        for (auto& p : enumerate_monic(base, degree, PolyKind::irreducible)) {
            if (out.size() == d) break;
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<std::uint32_t> first_primes(std::size_t d) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t q = 2; out.size() < d; ++q)
        if (is_prime(q)) out.push_back(q);
    return out;
}

DigitPoint digital_point(std::span<const FieldMatrix> matrices, std::uint64_t k, PrimeBase base) {
    DigitPoint pt;
    if (matrices.empty()) return pt;
    const std::size_t cols = matrices.front().cols();
    std::vector<Digit> kappa(cols, 0);
    std::uint64_t rest = k;
    for (std::size_t i = 0; i < cols && rest != 0; ++i) {
        kappa[i] = Digit(rest % base.value());
        rest /= base.value();
    }
    if (rest != 0) throw std::out_of_range("digital_point: index exceeds the matrix capacity");
    for (const auto& c : matrices) {
        if (c.base() != base || c.cols() != cols) throw std::invalid_argument("digital_point: inconsistent matrices");
        pt.coords.push_back({base.value(), multiply(c, kappa)});
    }
    return pt;
}

DigitPoint halton_point(std::span<const std::uint32_t> primes, std::uint64_t k, std::span<const std::size_t> precisions) {
    if (precisions.size() != primes.size()) throw std::invalid_argument("halton_point: one precision per prime required");
    std::set<std::uint32_t> seen(primes.begin(), primes.end());
    if (seen.size() != primes.size()) throw std::invalid_argument("halton_point: repeated primes");
    DigitPoint pt;
    for (std::size_t j = 0; j < primes.size(); ++j) {
        const std::uint32_t p = primes[j];
        DigitCoordinate c{p, std::vector<Digit>(precisions[j], 0)};
        std::uint64_t rest = k;
        for (std::size_t i = 0; i < precisions[j] && rest != 0; ++i) {
            c.digits[i] = Digit(rest % p);
            rest /= p;
        }
        if (rest != 0) throw std::out_of_range("halton_point: index needs more digits than the precision");
        pt.coords.push_back(std::move(c));
    }
    return pt;
}

std::vector<std::size_t> default_precision(std::span<const std::uint32_t> exponents, unsigned bits) {
    std::vector<std::size_t> k;
    for (std::uint32_t e : exponents) k.push_back(std::size_t(e) * ((bits + e - 1) / e));
    return k;
}

Family parse_family(const std::string& name) {
    if (name == "sobol") return Family::sobol;
    if (name == "niederreiter" || name == "full_niederreiter") return Family::full_niederreiter;
    if (name == "custom" || name == "custom_niederreiter") return Family::custom_niederreiter;
    if (name == "halton") return Family::halton;
    throw std::invalid_argument("unknown sequence family '" + name + "'");
}

std::string to_string(Family f) {
    switch (f) {
        case Family::sobol: return "sobol";
        case Family::full_niederreiter: return "niederreiter";
        case Family::custom_niederreiter: return "custom";
        case Family::halton: return "halton";
    }
    return "?";
}

std::vector<DigitPoint> PointSequence::points(std::uint64_t n) const {
    std::vector<DigitPoint> out;
    out.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) out.push_back(point(k));
    return out;
}

DigitalSequence::DigitalSequence(PrimeBase field, std::vector<Polynomial> polys, std::vector<std::size_t> precision,
                                 std::uint64_t max_points)
    : field_(field), polys_(std::move(polys)) {
    if (polys_.empty()) throw std::invalid_argument("DigitalSequence: no polynomials");
    if (precision.size() != polys_.size()) throw std::invalid_argument("DigitalSequence: one precision per dimension required");
    std::vector<std::uint32_t> exps;
    for (const auto& p : polys_) exps.push_back(std::uint32_t(p.degree()));
    base_ = MixedBase::coarse(field.value(), exps);
    precision_ = std::move(precision);
    const std::size_t cols = digits_for(field.value(), std::max<std::uint64_t>(max_points, 2));
    capacity_ = saturating_pow(field.value(), cols);
    matrices_ = niederreiter_matrices(polys_, precision_, cols);

    packable_ = field.value() == 2 && cols <= 64 &&
                std::all_of(precision_.begin(), precision_.end(), [](std::size_t k) { return k <= 64; });
    if (packable_)
        for (const auto& c : matrices_) columns_.push_back(gf2::packed_columns(c));
}

DigitPoint DigitalSequence::point(std::uint64_t k) const { return digital_point(matrices_, k, field_); }

void DigitalSequence::point_packed(std::uint64_t k, std::span<std::uint64_t> out) const {
    if (!packable_) throw std::logic_error("DigitalSequence::point_packed: sequence is not packable");
    if (k >= capacity_) throw std::out_of_range("DigitalSequence::point_packed: index exceeds capacity");
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        std::uint64_t w = 0;
        const auto& cols = columns_[j];
        for (std::uint64_t rest = k, r = 0; rest != 0; rest >>= 1, ++r)
            if (rest & 1U) w ^= cols[r];
        out[j] = w;
    }
}

HaltonSequence::HaltonSequence(std::vector<std::uint32_t> primes, std::vector<std::size_t> precision)
    : primes_(std::move(primes)) {
    if (primes_.empty()) throw std::invalid_argument("HaltonSequence: no primes");
    if (precision.size() != primes_.size()) throw std::invalid_argument("HaltonSequence: one precision per prime required");
    std::set<std::uint32_t> seen(primes_.begin(), primes_.end());
    if (seen.size() != primes_.size()) throw std::invalid_argument("HaltonSequence: repeated primes");
    base_ = MixedBase::halton(primes_);
    precision_ = std::move(precision);
    capacity_ = UINT64_MAX;
    for (std::size_t j = 0; j < primes_.size(); ++j) capacity_ = std::min(capacity_, saturating_pow(primes_[j], precision_[j]));
}

DigitPoint HaltonSequence::point(std::uint64_t k) const { return halton_point(primes_, k, precision_); }

std::unique_ptr<PointSequence> make_sequence(const SequenceSpec& spec) {
    switch (spec.family) {
        case Family::halton: {
            auto primes = first_primes(spec.dimension);
            std::vector<std::size_t> k;
            for (std::uint32_t p : primes) k.push_back(digits_for_bits(p, spec.precision));
            return std::make_unique<HaltonSequence>(std::move(primes), std::move(k));
        }
        case Family::sobol:
        case Family::full_niederreiter:
        case Family::custom_niederreiter: {
            const PrimeBase field(spec.base);
            std::vector<Polynomial> polys;
            if (spec.family == Family::sobol) {
                if (spec.base != 2) throw std::invalid_argument("make_sequence: Sobol' sequences are base 2");
                polys = sobol_polys(spec.dimension);
            } else if (spec.family == Family::full_niederreiter) {
                polys = full_niederreiter_polys(spec.dimension, field);
            } else {
                polys = spec.polys;
                if (polys.empty()) throw std::invalid_argument("make_sequence: custom family needs base polynomials");
            }
            std::vector<std::uint32_t> exps;
            for (const auto& p : polys) exps.push_back(std::uint32_t(std::max(p.degree(), 1)));
            auto k = default_precision(exps, digits_for_bits(spec.base, spec.precision));
            return std::make_unique<DigitalSequence>(field, std::move(polys), std::move(k), spec.max_points);
        }
    }
    throw std::invalid_argument("make_sequence: unknown family");
}

MixedBase resolve_base(const SequenceSpec& spec) {
    if (spec.family == Family::halton) {
        const auto primes = first_primes(spec.dimension);
        return MixedBase::halton(primes);
    }
    std::vector<Polynomial> polys;
    if (spec.family == Family::sobol) {
        if (spec.base != 2) throw std::invalid_argument("resolve_base: Sobol' sequences are base 2");
        polys = sobol_polys(spec.dimension);
    } else if (spec.family == Family::full_niederreiter) {
        polys = full_niederreiter_polys(spec.dimension, PrimeBase(spec.base));
    } else {
        polys = spec.polys;
    }
    std::vector<std::uint32_t> exps;
    for (const auto& p : polys) exps.push_back(std::uint32_t(std::max(p.degree(), 1)));
    return MixedBase::coarse(spec.base, exps);
}

}  // namespace cqmc
