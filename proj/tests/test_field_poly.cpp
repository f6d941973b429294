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

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "cqmc/field.hpp"
#include "cqmc/polynomial.hpp"
#include "support.hpp"

using namespace cqmc;

namespace {

const PrimeBase F2(2);

Polynomial P2(const char* s) { return Polynomial::parse(F2, s); }

Polynomial random_poly(PrimeBase f, int max_degree, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> deg(-1, max_degree);
    std::uniform_int_distribution<unsigned> coef(0, f.value() - 1);
    const int n = deg(rng);
    std::vector<Digit> c(std::size_t(n + 1));
    for (auto& x : c) x = Digit(coef(rng));
    return Polynomial(f, std::move(c));
}

// trial division by every monic polynomial of degree 1..deg/2
bool irreducible_by_division(const Polynomial& p) {
    const PrimeBase f = p.base();
    for (int e = 1; e <= p.degree() / 2; ++e)
        for (const auto& q : enumerate_monic(f, e, PolyKind::all))
            if (poly_mod(p, q).is_zero()) return false;
    return true;
}

// order of x modulo p by repeated multiplication
std::uint64_t order_of_x(const Polynomial& p) {
    const PrimeBase f = p.base();
    const Polynomial x = Polynomial::monomial(f, 1);
    const Polynomial one = Polynomial::constant(f, 1);
    Polynomial y = poly_mod(x, p);
    for (std::uint64_t k = 1;; ++k) {
        if (y == one) return k;
        y = poly_mod(y * x, p);
    }
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace

TEST(PrimeField, Arithmetic) {
    const PrimeBase f(17);
    EXPECT_EQ(f.add(5, 13), 1);
    EXPECT_EQ(f.sub(5, 13), 9);
    EXPECT_EQ(f.mul(5, 13), 14);
    EXPECT_EQ(f.inv(5), 7);
    for (Digit a = 1; a < 17; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1);
    EXPECT_THROW(f.inv(0), std::domain_error);
}

TEST(PrimeField, RejectsComposite) {
    EXPECT_THROW(PrimeBase(4), std::invalid_argument);
    EXPECT_THROW(PrimeBase(1), std::invalid_argument);
    EXPECT_NO_THROW(PrimeBase(61));
}

TEST(Polynomial, Products) {
    EXPECT_EQ(P2("11") * P2("11"), P2("101"));
    EXPECT_EQ(P2("111") * P2("11"), P2("1001"));
    EXPECT_EQ(P2("1101") * Polynomial::constant(F2, 1), P2("1101"));
    EXPECT_EQ(P2("1101").pretty(), "x^3+x+1");
    EXPECT_EQ(Polynomial::from_code(F2, 11), P2("1101"));
    EXPECT_EQ(P2("1101").encode(), 11u);
}

TEST(Polynomial, RingLaws) {
    std::mt19937_64 rng(7);
    for (std::uint32_t b : {2u, 3u, 5u}) {
        const PrimeBase f(b);
        for (int i = 0; i < 200; ++i) {
            const auto a = random_poly(f, 8, rng), c = random_poly(f, 8, rng), e = random_poly(f, 8, rng);
            EXPECT_EQ(a * c, c * a);
            EXPECT_EQ((a * c) * e, a * (c * e));
            EXPECT_EQ(a * (c + e), a * c + a * e);
            Polynomial m = random_poly(f, 6, rng);
            if (m.is_zero()) continue;
            EXPECT_EQ(poly_mod(a * m + c, m), poly_mod(c, m));
            const auto [q, r] = divmod(a, m);
            EXPECT_EQ(q * m + r, a);
            EXPECT_LT(r.degree(), m.degree());
        }
    }
}

TEST(Polynomial, ParseRoundTrip) {
    const PrimeBase f(13);
    const auto p = Polynomial::parse(f, "1.0.12");
    EXPECT_EQ(p.degree(), 2);
    EXPECT_EQ(p.coeff(2), 12);
    EXPECT_EQ(Polynomial::parse(f, p.to_string()), p);
    EXPECT_THROW(Polynomial::parse(F2, "12"), std::invalid_argument);
}

TEST(Irreducible, Examples) {
    EXPECT_TRUE(is_irreducible(P2("111")));
    EXPECT_FALSE(is_irreducible(P2("001")));
    EXPECT_TRUE(is_primitive(P2("11")));
    EXPECT_FALSE(is_primitive(P2("11111")));
    EXPECT_FALSE(is_primitive(P2("01")));
}

TEST(Irreducible, AgreesWithTrialDivision) {
    for (std::uint32_t b : {2u, 3u}) {
        const PrimeBase f(b);
        for (int n = 1; n <= (b == 2 ? 9 : 5); ++n)
            for (const auto& p : enumerate_monic(f, n, PolyKind::all))
                ASSERT_EQ(is_irreducible(p), irreducible_by_division(p)) << p.pretty() << " over F_" << b;
    }
}

TEST(Primitive, AgreesWithOrderOfX) {
    for (std::uint32_t b : {2u, 3u}) {
        const PrimeBase f(b);
        for (int n = 1; n <= (b == 2 ? 10 : 5); ++n)
            for (const auto& p : enumerate_monic(f, n, PolyKind::irreducible)) {
                const bool oracle = p.coeff(0) != 0 && order_of_x(p) == ipow(b, unsigned(n)) - 1;
                ASSERT_EQ(is_primitive(p), oracle) << p.pretty();
            }
    }
}

TEST(Enumerate, SmallDegrees) {
    auto two = enumerate_monic(F2, 2, PolyKind::irreducible);
    ASSERT_EQ(two.size(), 1u);
    EXPECT_EQ(two[0], P2("111"));
    auto three = enumerate_monic(F2, 3, PolyKind::primitive);
    ASSERT_EQ(three.size(), 2u);
    EXPECT_EQ(three[0], P2("1101"));
    EXPECT_EQ(three[1], P2("1011"));
    auto one = enumerate_monic(F2, 1, PolyKind::all);
    ASSERT_EQ(one.size(), 2u);
    EXPECT_EQ(one[0], P2("01"));
    EXPECT_EQ(one[1], P2("11"));
}

TEST(Enumerate, AscendingCodes) {
    for (int n = 1; n <= 8; ++n) {
        const auto v = enumerate_monic(F2, n, PolyKind::irreducible);
        for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LT(v[i - 1].encode(), v[i].encode());
    }
}

TEST(Enumerate, DegreeTableOverF2) {
    const unsigned irreducible[] = {2, 1, 2, 3, 6, 9, 18, 30, 56, 99, 186, 335, 630, 1161};
    const unsigned primitive[] = {1, 1, 2, 2, 6, 6, 18, 16, 48, 60, 176, 144, 630, 756};
    for (int n = 1; n <= 14; ++n) {
        EXPECT_EQ(enumerate_monic(F2, n, PolyKind::irreducible).size(), irreducible[n - 1]) << "degree " << n;
        EXPECT_EQ(enumerate_monic(F2, n, PolyKind::primitive).size(), primitive[n - 1]) << "degree " << n;
    }
}

TEST(Enumerate, GaussCount) {
    const std::map<std::uint32_t, int> limit{{2, 12}, {3, 7}, {5, 5}};
    for (auto [b, top] : limit) {
        const PrimeBase f(b);
        std::vector<std::uint64_t> count(std::size_t(top) + 1);
        for (int n = 1; n <= top; ++n) count[std::size_t(n)] = enumerate_monic(f, n, PolyKind::irreducible).size();
        for (int n = 1; n <= top; ++n) {
            std::uint64_t s = 0;
            for (int m = 1; m <= n; ++m)
                if (n % m == 0) s += std::uint64_t(m) * count[std::size_t(m)];
            EXPECT_EQ(s, ipow(b, unsigned(n))) << "b=" << b << " n=" << n;
        }
    }
}

TEST(FieldMatrix, RankAndProduct) {
    const PrimeBase f3(3);
    const FieldMatrix a(f3, 2, 2, {1, 2, 2, 1});
    EXPECT_FALSE(is_invertible(a));
    EXPECT_EQ(rank(a), 1u);
    const FieldMatrix i = FieldMatrix::identity(f3, 2);
    EXPECT_EQ(a * i, a);
    const std::vector<Digit> x{1, 1};
    EXPECT_EQ(multiply(a, x), (std::vector<Digit>{0, 0}));
}

TEST(RandomNonsingular, OneByOneOverF2) {
    KeyedStream rng{1, 2};
    for (int i = 0; i < 50; ++i) EXPECT_EQ(random_nonsingular(F2, 1, rng), FieldMatrix::identity(F2, 1));
}

TEST(RandomNonsingular, UniformOverGL) {
    const std::size_t group_order[] = {0, 1, 6, 168};
    for (std::size_t e = 2; e <= 3; ++e) {
        const auto all = all_nonsingular(F2, e);
        ASSERT_EQ(all.size(), group_order[e]);
        std::map<std::vector<Digit>, std::size_t> slot;
        for (std::size_t i = 0; i < all.size(); ++i) slot[all[i].entries()] = i;
        std::vector<std::uint64_t> counts(all.size());
        KeyedStream rng{2024, e};
        for (int i = 0; i < 100000; ++i) {
            const auto m = random_nonsingular(F2, e, rng);
            ASSERT_TRUE(is_invertible(m));
            ++counts[slot.at(m.entries())];
        }
        EXPECT_LT(support::chi2_uniform(counts), support::chi2_critical(double(all.size() - 1), 0.001)) << "e=" << e;
    }
}

TEST(RandomNonsingular, OddPrimeIsInvertible) {
    const PrimeBase f5(5);
    KeyedStream rng{9};
    for (int i = 0; i < 200; ++i) EXPECT_TRUE(is_invertible(random_nonsingular(f5, 4, rng)));
    EXPECT_EQ(all_nonsingular(PrimeBase(3), 2).size(), 48u);
}

TEST(Packed, MatchesByteArithmetic) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 1 + rng() % 64, cols = 1 + rng() % 64;
        FieldMatrix m(F2, rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m.set(i, j, Digit(rng() & 1));
        std::vector<Digit> x(cols);
        for (auto& v : x) v = Digit(rng() & 1);
        const auto y = multiply(m, x);
        EXPECT_EQ(gf2::unpack(gf2::PackedRows(m).apply(gf2::pack(x)), rows), y);
        std::uint64_t acc = 0;
        const auto columns = gf2::packed_columns(m);
        for (std::size_t j = 0; j < cols; ++j)
            if (x[j]) acc ^= columns[j];
        EXPECT_EQ(gf2::unpack(acc, rows), y);
    }
}
