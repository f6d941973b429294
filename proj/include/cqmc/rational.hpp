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

#ifndef CQMC_RATIONAL_HPP
#define CQMC_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cqmc {

using int128 = __int128;
using uint128 = unsigned __int128;

namespace detail {

inline int128 abs128(int128 a) { return a < 0 ? -a : a; }

inline int128 gcd128(int128 a, int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        int128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("cqmc::Rational: 128-bit overflow in multiplication");
    return r;
}

inline int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("cqmc::Rational: 128-bit overflow in addition");
    return r;
}

inline std::string to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    uint128 u = neg ? uint128(-(v + 1)) + 1 : uint128(v);
    std::string s;
    while (u != 0) {
        s.insert(s.begin(), char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.insert(s.begin(), '-');
    return s;
}

}  // namespace detail

/// Exact rational number over 128-bit integers, always kept reduced with a
/// positive denominator. Any intermediate overflow throws std::overflow_error.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(int128 num, int128 den) : num_(num), den_(den) {
        if (den_ == 0) throw std::domain_error("cqmc::Rational: zero denominator");
        normalize();
    }

    static Rational from_int128(int128 n) { return Rational(n, 1); }

    int128 num() const { return num_; }
    int128 den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    double to_double() const { return double(num_) / double(den_); }
    explicit operator double() const { return to_double(); }

    /// "p/q", or "p" when the value is an integer.
    std::string str() const {
        if (den_ == 1) return detail::to_string(num_);
        return detail::to_string(num_) + "/" + detail::to_string(den_);
    }

    /// Accepts "p", "p/q" and finite decimals such as "-0.125" or "3e-2".
    static Rational parse(std::string_view text);

    Rational operator-() const { return Rational(-num_, den_, raw_tag{}); }

    Rational& operator+=(const Rational& o) {
        int128 g = detail::gcd128(den_, o.den_);
        int128 lhs = detail::checked_mul(num_, o.den_ / g);
        int128 rhs = detail::checked_mul(o.num_, den_ / g);
        num_ = detail::checked_add(lhs, rhs);
        den_ = detail::checked_mul(den_, o.den_ / g);
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        int128 g1 = detail::gcd128(num_, o.den_);
        int128 g2 = detail::gcd128(o.num_, den_);
        if (g1 == 0) g1 = 1;
        if (g2 == 0) g2 = 1;
        num_ = detail::checked_mul(num_ / g1, o.num_ / g2);
        den_ = detail::checked_mul(den_ / g2, o.den_ / g1);
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw std::domain_error("cqmc::Rational: division by zero");
        return *this *= Rational(o.den_, o.num_);
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int128 lhs = detail::checked_mul(a.num_, b.den_);
        int128 rhs = detail::checked_mul(b.num_, a.den_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    struct raw_tag {};
    Rational(int128 num, int128 den, raw_tag) : num_(num), den_(den) {}

    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        int128 g = detail::gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    int128 num_ = 0;
    int128 den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> Rational { throw std::invalid_argument("cqmc::Rational: cannot parse '" + std::string(text) + "'"); };
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.empty()) return fail();

    auto parse_decimal = [&](std::string_view s) -> Rational {
        bool neg = false;
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
            neg = s.front() == '-';
            s.remove_prefix(1);
        }
        int exponent = 0;
        if (auto pos = s.find_first_of("eE"); pos != std::string_view::npos) {
            std::string_view ex = s.substr(pos + 1);
            s = s.substr(0, pos);
            bool eneg = false;
            if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
                eneg = ex.front() == '-';
                ex.remove_prefix(1);
            }
            if (ex.empty()) fail();
            for (char c : ex) {
                if (c < '0' || c > '9') fail();
                exponent = exponent * 10 + (c - '0');
                if (exponent > 60) fail();
            }
            if (eneg) exponent = -exponent;
        }
        int128 mantissa = 0;
        int frac_digits = 0;
        bool seen_point = false, seen_digit = false;
        for (char c : s) {
            if (c == '.') {
                if (seen_point) fail();
                seen_point = true;
                continue;
            }
            if (c < '0' || c > '9') fail();
            seen_digit = true;
            mantissa = detail::checked_add(detail::checked_mul(mantissa, 10), c - '0');
            if (seen_point) ++frac_digits;
        }
        if (!seen_digit) fail();
        exponent -= frac_digits;
        int128 scale = 1;
        for (int i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) scale = detail::checked_mul(scale, 10);
        Rational r = exponent >= 0 ? Rational(detail::checked_mul(mantissa, scale), 1) : Rational(mantissa, scale);
        return neg ? -r : r;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational p = parse_decimal(trim(text.substr(0, slash)));
        Rational q = parse_decimal(trim(text.substr(slash + 1)));
        if (!p.is_integer() || !q.is_integer()) fail();
        return Rational(p.num(), q.num());
    }
    return parse_decimal(text);
}

}  // namespace cqmc

#endif  // CQMC_RATIONAL_HPP
