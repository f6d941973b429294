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

#include "cqmc/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace cqmc {

namespace {

void require_same_base(const Polynomial& a, const Polynomial& c) {
    if (a.base() != c.base()) throw std::invalid_argument("Polynomial: mismatched bases");
}

std::uint64_t checked_pow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > UINT64_MAX / b) throw std::overflow_error("b^e does not fit in 64 bits");
        r *= b;
    }
    return r;
}

}  // namespace

Polynomial::Polynomial(PrimeBase base, std::vector<Digit> coefficients) : base_(base), coeffs_(std::move(coefficients)) {
    for (Digit c : coeffs_)
        if (c >= base_.value()) throw std::invalid_argument("Polynomial: coefficient out of range");
    trim();
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::monomial(PrimeBase base, int degree, Digit coefficient) {
    if (degree < 0) throw std::invalid_argument("Polynomial::monomial: negative degree");
    std::vector<Digit> c(std::size_t(degree) + 1, 0);
    c.back() = Digit(coefficient % base.value());
    return Polynomial(base, std::move(c));
}

Polynomial Polynomial::from_code(PrimeBase base, std::uint64_t code) {
    std::vector<Digit> c;
    while (code != 0) {
        c.push_back(Digit(code % base.value()));
        code /= base.value();
    }
    return Polynomial(base, std::move(c));
}

Polynomial Polynomial::parse(PrimeBase base, std::string_view text) {
    std::vector<Digit> c;
    auto push = [&](std::string_view tok) {
        if (tok.empty()) throw std::invalid_argument("Polynomial::parse: empty coefficient");
        unsigned v = 0;
        for (char ch : tok) {
            if (ch < '0' || ch > '9') throw std::invalid_argument("Polynomial::parse: bad character in '" + std::string(text) + "'");
            v = v * 10 + unsigned(ch - '0');
            if (v >= base.value()) throw std::invalid_argument("Polynomial::parse: coefficient out of range in '" + std::string(text) + "'");
        }
        c.push_back(Digit(v));
    };
    if (text.find('.') != std::string_view::npos || base.value() > 10) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t dot = text.find('.', start);
            if (dot == std::string_view::npos) dot = text.size();
            push(text.substr(start, dot - start));
            start = dot + 1;
        }
    } else {
        for (std::size_t i = 0; i < text.size(); ++i) push(text.substr(i, 1));
    }
    if (c.empty()) throw std::invalid_argument("Polynomial::parse: empty string");
    return Polynomial(base, std::move(c));
}

std::uint64_t Polynomial::encode() const {
    std::uint64_t code = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        if (code > (UINT64_MAX - coeffs_[i]) / base_.value()) throw std::overflow_error("Polynomial::encode: overflow");
        code = code * base_.value() + coeffs_[i];
    }
    return code;
}

std::string Polynomial::to_string() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    const bool dotted = base_.value() > 10;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (dotted && i) s += '.';
        s += std::to_string(unsigned(coeffs_[i]));
    }
    return s;
}

std::string Polynomial::pretty() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        const unsigned c = coeffs_[i];
        if (c == 0) continue;
        if (!s.empty()) s += '+';
        if (i == 0) {
            s += std::to_string(c);
            continue;
        }
        if (c != 1) s += std::to_string(c);
        s += 'x';
        if (i > 1) s += '^' + std::to_string(i);
    }
    return s;
}

Polynomial operator+(const Polynomial& a, const Polynomial& c) {
    require_same_base(a, c);
    const PrimeBase f = a.base();
    std::vector<Digit> r(std::max(a.coefficients().size(), c.coefficients().size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.add(a.coeff(i), c.coeff(i));
    return Polynomial(f, std::move(r));
}

Polynomial operator-(const Polynomial& a, const Polynomial& c) {
    require_same_base(a, c);
    const PrimeBase f = a.base();
    std::vector<Digit> r(std::max(a.coefficients().size(), c.coefficients().size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.sub(a.coeff(i), c.coeff(i));
    return Polynomial(f, std::move(r));
}

Polynomial operator*(const Polynomial& a, const Polynomial& c) {
    require_same_base(a, c);
    if (a.is_zero() || c.is_zero()) return Polynomial(a.base());
    const std::uint32_t p = a.base().value();
    const auto& x = a.coefficients();
    const auto& y = c.coefficients();
    std::vector<std::uint32_t> acc(x.size() + y.size() - 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) acc[i + j] = (acc[i + j] + std::uint32_t(x[i]) * y[j]) % p;
    }
    std::vector<Digit> r(acc.begin(), acc.end());
    return Polynomial(a.base(), std::move(r));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& m) {
    require_same_base(a, m);
    if (m.is_zero()) throw std::domain_error("divmod: division by the zero polynomial");
    const PrimeBase f = a.base();
    if (a.degree() < m.degree()) return {Polynomial(f), a};
    std::vector<Digit> rem = a.coefficients();
    const auto& div = m.coefficients();
    const std::size_t dm = div.size() - 1;
    const Digit lead_inv = f.inv(div.back());
    std::vector<Digit> quot(rem.size() - dm, 0);
    for (std::size_t i = rem.size(); i-- > dm;) {
        const Digit q = f.mul(rem[i], lead_inv);
        if (q == 0) continue;
        quot[i - dm] = q;
        for (std::size_t j = 0; j <= dm; ++j) rem[i - dm + j] = f.sub(rem[i - dm + j], f.mul(q, div[j]));
    }
    rem.resize(dm);
    return {Polynomial(f, std::move(quot)), Polynomial(f, std::move(rem))};
}

Polynomial poly_mod(const Polynomial& a, const Polynomial& m) { return divmod(a, m).second; }

Polynomial gcd(Polynomial a, Polynomial c) {
    require_same_base(a, c);
    while (!c.is_zero()) {
        Polynomial r = poly_mod(a, c);
        a = std::move(c);
        c = std::move(r);
    }
    if (a.is_zero()) return a;
    const Digit inv = a.base().inv(a.coefficients().back());
    return a * Polynomial::constant(a.base(), inv);
}

Polynomial powmod(const Polynomial& a, std::uint64_t exponent, const Polynomial& m) {
    Polynomial result = poly_mod(Polynomial::constant(a.base(), 1), m);
    Polynomial base = poly_mod(a, m);
    while (exponent != 0) {
        if (exponent & 1U) result = poly_mod(result * base, m);
        exponent >>= 1;
        if (exponent != 0) base = poly_mod(base * base, m);
    }
    return result;
}

Polynomial pow(const Polynomial& a, unsigned exponent) {
    Polynomial result = Polynomial::constant(a.base(), 1);
    for (unsigned i = 0; i < exponent; ++i) result = result * a;
    return result;
}

bool is_irreducible(const Polynomial& p) {
    if (!p.is_monic()) throw std::invalid_argument("is_irreducible: polynomial is not monic");
    if (p.degree() < 1) throw std::invalid_argument("is_irreducible: degree must be >= 1");
    const PrimeBase f = p.base();
    const Polynomial x = Polynomial::monomial(f, 1);
    Polynomial power = poly_mod(x, p);  // x^(b^i) mod p
    for (int i = 1; i <= p.degree() / 2; ++i) {
        power = powmod(power, f.value(), p);
        if (gcd(power - x, p).degree() != 0) return false;
    }
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q <= n / q; ++q) {
        if (n % q != 0) continue;
        out.push_back(q);
        while (n % q == 0) n /= q;
    }
    if (n > 1) out.push_back(n);
    return out;
}

bool is_primitive(const Polynomial& p) {
    if (!is_irreducible(p)) throw std::invalid_argument("is_primitive: polynomial is reducible");
    if (p.coeff(0) == 0) return false;
    const PrimeBase f = p.base();
    const std::uint64_t order = checked_pow(f.value(), unsigned(p.degree())) - 1;
    const Polynomial x = Polynomial::monomial(f, 1);
    const Polynomial one = Polynomial::constant(f, 1);
    if (powmod(x, order, p) != one) return false;
    for (std::uint64_t q : prime_factors(order))
        if (powmod(x, order / q, p) == one) return false;
    return true;
}

std::vector<Polynomial> enumerate_monic(PrimeBase base, int degree, PolyKind kind) {
    if (degree < 1) throw std::invalid_argument("enumerate_monic: degree must be >= 1");
    const std::uint64_t lead = checked_pow(base.value(), unsigned(degree));
    std::vector<Polynomial> out;
    for (std::uint64_t low = 0; low < lead; ++low) {
        Polynomial p = Polynomial::from_code(base, lead + low);
        if (kind != PolyKind::all) {
            // a zero constant term means x divides p
            if (p.coeff(0) == 0 && degree > 1) continue;
            if (!is_irreducible(p)) continue;
            if (kind == PolyKind::primitive && !is_primitive(p)) continue;
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace cqmc
