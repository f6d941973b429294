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

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "cqmc/equidist.hpp"
#include "cqmc/scramble.hpp"
#include "cqmc/sequences.hpp"
#include "support.hpp"

using namespace cqmc;

namespace {

const PrimeBase F2(2);

DigitCoordinate coord(std::uint32_t p, std::vector<Digit> d) { return DigitCoordinate{p, std::move(d)}; }

SequenceSpec sobol(std::size_t d, std::uint64_t n) {
    SequenceSpec s;
    s.dimension = d;
    s.max_points = n;
    return s;
}

}  // namespace

TEST(DimensionScramble, HandExample) {
    const DimensionScramble s(FieldMatrix::identity(F2, 2), {1, 0}, 1);
    EXPECT_EQ(s.apply(coord(2, {0, 1})).digits, (std::vector<Digit>{1, 1}));
    EXPECT_EQ(s.apply_naive(coord(2, {0, 1})).digits, (std::vector<Digit>{1, 1}));
    const DimensionScramble id(FieldMatrix::identity(PrimeBase(3), 3), {0, 0, 0}, 1);
    EXPECT_EQ(id.apply(coord(3, {2, 0, 1})), coord(3, {2, 0, 1}));
}

TEST(DimensionScramble, RejectsInvalidStates) {
    FieldMatrix upper = FieldMatrix::identity(F2, 2);
    upper.set(0, 1, 1);
    EXPECT_THROW(DimensionScramble(upper, {0, 0}, 1), std::invalid_argument);
    EXPECT_NO_THROW(DimensionScramble(upper, {0, 0}, 2));
    FieldMatrix singular(F2, 2, 2, {1, 1, 1, 1});
    EXPECT_THROW(DimensionScramble(singular, {0, 0}, 2), std::invalid_argument);
    FieldMatrix zero_diag = FieldMatrix::identity(PrimeBase(3), 2);
    zero_diag.set(1, 1, 0);
    EXPECT_THROW(DimensionScramble(zero_diag, {0, 0}, 1), std::invalid_argument);
    EXPECT_THROW(DimensionScramble(FieldMatrix::identity(F2, 3), {0, 0}, 1), std::invalid_argument);
    EXPECT_THROW(DimensionScramble(FieldMatrix::identity(F2, 3), {0, 0, 0}, 2), std::invalid_argument);
}

TEST(SampleUsual, LowerTriangularUnitDiagonalInBaseTwo) {
    const auto base = MixedBase::uniform(2, 3);
    const std::vector<std::size_t> prec{32, 32, 32};
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        const auto s = sample_usual(base, prec, 5, rep, 1);
        for (std::size_t i = 0; i < 32; ++i) {
            EXPECT_EQ(s.matrix()(i, i), 1);
            for (std::size_t l = i + 1; l < 32; ++l) EXPECT_EQ(s.matrix()(i, l), 0);
        }
    }
}

TEST(SampleUsual, EntryMarginalsUniform) {
    const auto base = MixedBase::uniform(3, 1);
    const std::vector<std::size_t> prec{6};
    std::vector<std::uint64_t> below(3), diag(2), shift(3);
    for (std::uint64_t rep = 0; rep < 10000; ++rep) {
        const auto s = sample_usual(base, prec, 17, rep, 0);
        ++below[s.matrix()(4, 1)];
        ++diag[s.matrix()(3, 3) - 1];
        ++shift[s.shift()[5]];
    }
    const double crit2 = support::chi2_critical(2, 0.001), crit1 = support::chi2_critical(1, 0.001);
    EXPECT_LT(support::chi2_uniform(below), crit2);
    EXPECT_LT(support::chi2_uniform(diag), crit1);
    EXPECT_LT(support::chi2_uniform(shift), crit2);
}

TEST(SampleUsual, DimensionsIndependent) {
    const auto base = MixedBase::uniform(2, 2);
    const std::vector<std::size_t> prec{8, 8};
    std::vector<std::uint64_t> joint(4);
    for (std::uint64_t rep = 0; rep < 10000; ++rep) {
        const auto a = sample_usual(base, prec, 3, rep, 0);
        const auto c = sample_usual(base, prec, 3, rep, 1);
        ++joint[2 * a.matrix()(5, 2) + c.matrix()(5, 2)];
    }
    EXPECT_LT(support::chi2_uniform(joint), support::chi2_critical(3, 0.001));
}

TEST(SampleCoarse, UnitBlocksReproduceUsual) {
    const auto base = MixedBase::uniform(2, 3);
    const std::vector<std::size_t> prec{16, 16, 16};
    for (std::uint64_t rep = 0; rep < 10; ++rep)
        for (std::size_t j = 0; j < 3; ++j) {
            const auto u = sample_usual(base, prec, 42, rep, j);
            const auto c = sample_coarse(base, prec, 42, rep, j);
            EXPECT_EQ(u.matrix(), c.matrix());
            EXPECT_EQ(u.shift(), c.shift());
        }
}

TEST(SampleCoarse, DiagonalBlocksInvertibleAndUniform) {
    const std::vector<std::uint32_t> e{2};
    const auto base = MixedBase::coarse(2, e);
    const std::vector<std::size_t> prec{8};
    const auto group = all_nonsingular(F2, 2);
    std::map<std::vector<Digit>, std::size_t> slot;
    for (std::size_t i = 0; i < group.size(); ++i) slot[group[i].entries()] = i;
    std::vector<std::uint64_t> counts(group.size());
    for (std::uint64_t rep = 0; rep < 6000; ++rep) {
        const auto s = sample_coarse(base, prec, 8, rep, 0);
        EXPECT_EQ(s.block(), 2u);
        for (std::size_t blk = 0; blk < 4; ++blk) {
            FieldMatrix d(F2, 2, 2);
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c) d.set(r, c, s.matrix()(2 * blk + r, 2 * blk + c));
            ASSERT_TRUE(is_invertible(d));
            if (blk == 1) ++counts[slot.at(d.entries())];
        }
    }
    EXPECT_LT(support::chi2_uniform(counts), support::chi2_critical(5, 0.001));
}

TEST(SampleCoarse, RoundsPrecisionToBlocks) {
    const std::vector<std::uint32_t> e{7};
    const std::vector<std::size_t> prec{32};
    EXPECT_EQ(sample_coarse(MixedBase::coarse(2, e), prec, 1, 0, 0).precision(), 35u);
}

TEST(SampleCoarse, HaltonBaseIsAnError) {
    const std::vector<std::uint32_t> primes{2, 3};
    const std::vector<std::size_t> prec{8, 8};
    EXPECT_THROW(sample_state(ScrambleMode::coarse, MixedBase::halton(primes), prec, 1, 0), std::invalid_argument);
    EXPECT_NO_THROW(sample_state(ScrambleMode::usual, MixedBase::halton(primes), prec, 1, 0));
}

TEST(Apply, InjectiveOnDigitGrid) {
    for (std::uint32_t b : {2u, 3u}) {
        const std::size_t K = b == 2 ? 6 : 4;
        const std::vector<std::uint32_t> e{2};
        const auto base = MixedBase::coarse(b, e);
        const std::vector<std::size_t> prec{K};
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < K; ++i) total *= b;
        for (ScrambleMode mode : {ScrambleMode::usual, ScrambleMode::coarse}) {
            const auto state = sample_state(mode, base, prec, 99, 1);
            std::set<std::vector<Digit>> images;
            for (std::uint64_t a = 0; a < total; ++a) {
                DigitPoint x{{coordinate_from_integer(b, a, K)}};
                images.insert(state.apply(x)[0].digits);
            }
            EXPECT_EQ(images.size(), total);
        }
    }
}

TEST(Apply, Nested) {
    std::mt19937_64 rng(4);
    const std::vector<std::uint32_t> e{3};
    const auto base = MixedBase::coarse(2, e);
    const std::vector<std::size_t> prec{12};
    for (ScrambleMode mode : {ScrambleMode::usual, ScrambleMode::coarse}) {
        const std::size_t unit = mode == ScrambleMode::coarse ? 3 : 1;
        for (std::uint64_t rep = 0; rep < 20; ++rep) {
            const auto s = sample_state(mode, base, prec, 1, rep).dims[0];
            DigitCoordinate x{2, std::vector<Digit>(12)};
            for (auto& d : x.digits) d = Digit(rng() & 1);
            for (std::size_t keep = unit; keep < 12; keep += unit) {
                DigitCoordinate z = x;
                for (std::size_t i = keep; i < 12; ++i) z.digits[i] = Digit(rng() & 1);
                const auto a = s.apply(x), c = s.apply(z);
                EXPECT_TRUE(std::equal(a.digits.begin(), a.digits.begin() + long(keep), c.digits.begin()));
            }
        }
    }
}

TEST(Apply, LeadingDigitUniform) {
    const std::vector<std::uint32_t> e{2};
    const std::vector<std::size_t> prec{8};
    for (std::uint32_t b : {2u, 3u}) {
        const auto base = MixedBase::coarse(b, e);
        const DigitPoint x{{coordinate_from_integer(b, 5, 8)}};
        std::vector<std::uint64_t> lead(b), block(b * b);
        for (std::uint64_t rep = 0; rep < 10000; ++rep) {
            ++lead[sample_state(ScrambleMode::usual, base, prec, 2, rep).apply(x)[0].leading(1)];
            ++block[sample_state(ScrambleMode::coarse, base, prec, 2, rep).apply(x)[0].leading(2)];
        }
        EXPECT_LT(support::chi2_uniform(lead), support::chi2_critical(b - 1, 0.001));
        EXPECT_LT(support::chi2_uniform(block), support::chi2_critical(b * b - 1, 0.001));
    }
}

TEST(Apply, PointUnbiased) {
    // with a zero tail the scrambled point is uniform on the grid corners, mean 1/2 - 2^-K / 2
    const std::vector<std::uint32_t> e{4};
    const auto base = MixedBase::coarse(2, e);
    const std::vector<std::size_t> prec{8};
    const DigitPoint x{{coordinate_from_integer(2, 77, 8)}};
    const double target = 0.5 - std::ldexp(1.0, -9);
    for (ScrambleMode mode : {ScrambleMode::usual, ScrambleMode::coarse}) {
        double s = 0.0, sq = 0.0;
        const int R = 10000;
        for (int rep = 0; rep < R; ++rep) {
            const double v = sample_state(mode, base, prec, 6, std::uint64_t(rep)).apply(x)[0].value();
            s += v;
            sq += v * v;
        }
        const double mean = s / R, se = std::sqrt((sq / R - mean * mean) / (R - 1));
        EXPECT_LT(std::fabs(mean - target), 4 * se) << to_string(mode);
    }
}

TEST(Apply, PackedMatchesNaive) {
    std::mt19937_64 rng(12);
    const std::vector<std::uint32_t> e{1, 5, 7};
    const auto base = MixedBase::coarse(2, e);
    const std::vector<std::size_t> prec{32, 35, 35};
    for (ScrambleMode mode : {ScrambleMode::usual, ScrambleMode::coarse}) {
        const auto state = sample_state(mode, base, prec, 3, 4);
        for (const auto& s : state.dims) {
            ASSERT_TRUE(s.packed());
            for (int i = 0; i < 50; ++i) {
                DigitCoordinate x{2, std::vector<Digit>(s.precision())};
                for (auto& d : x.digits) d = Digit(rng() & 1);
                EXPECT_EQ(s.apply(x), s.apply_naive(x));
                EXPECT_EQ(gf2::unpack(s.apply_packed(gf2::pack(x.digits)), s.precision()), s.apply_naive(x).digits);
            }
        }
    }
}

TEST(ScrambledSequence, FastPathMatchesDigits) {
    const auto seq = make_sequence(sobol(12, 1u << 10));
    for (ScrambleMode mode : {ScrambleMode::none, ScrambleMode::usual, ScrambleMode::coarse}) {
        const ScrambledSequence s(*seq, sample_state(mode, seq->base(), seq->precision(), 10, 2));
        EXPECT_TRUE(s.fast());
        std::vector<double> v(12);
        for (std::uint64_t k : {0ull, 1ull, 500ull, 1023ull}) {
            s.values(k, v);
            EXPECT_EQ(v, s.point(k).values()) << to_string(mode) << " k=" << k;
        }
    }
}

TEST(ScrambledSequence, Deterministic) {
    const auto seq = make_sequence(sobol(5, 256));
    const auto a = sample_state(ScrambleMode::coarse, seq->base(), seq->precision(), 77, 3);
    const auto c = sample_state(ScrambleMode::coarse, seq->base(), seq->precision(), 77, 3);
    const auto other = sample_state(ScrambleMode::coarse, seq->base(), seq->precision(), 77, 4);
    const ScrambledSequence sa(*seq, a), sc(*seq, c), so(*seq, other);
    EXPECT_EQ(sa.point(100), sc.point(100));
    EXPECT_NE(sa.point(100), so.point(100));
}

TEST(ScrambledSequence, CoarsePreservesNet) {
    for (std::size_t d = 1; d <= 4; ++d) {
        const auto seq = make_sequence(sobol(d, 1u << 10));
        const auto ex = seq->base().exponents();
        const std::vector<unsigned> e(ex.begin(), ex.end());
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const ScrambledSequence s(*seq, sample_state(ScrambleMode::coarse, seq->base(), seq->precision(), seed, 0));
            std::vector<DigitPoint> pts;
            for (std::uint64_t k = 0; k < 1024; ++k) pts.push_back(s.point(k));
            for (unsigned m : {4u, 7u, 10u})
                ASSERT_TRUE(is_net(std::span<const DigitPoint>(pts.data(), std::size_t(1) << m), 0, e, m, F2).ok)
                    << "d=" << d << " seed=" << seed << " m=" << m;
        }
    }
}

TEST(ScrambledSequence, UsualPreservesUsualBaseNet) {
    for (std::size_t d = 2; d <= 4; ++d) {
        const auto seq = make_sequence(sobol(d, 1u << 10));
        unsigned t = 0;
        for (auto x : seq->base().exponents()) t += x - 1;
        const std::vector<unsigned> ones(d, 1);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const ScrambledSequence s(*seq, sample_state(ScrambleMode::usual, seq->base(), seq->precision(), seed, 0));
            std::vector<DigitPoint> pts;
            for (std::uint64_t k = 0; k < 1024; ++k) pts.push_back(s.point(k));
            EXPECT_TRUE(is_net(pts, t, ones, 10, F2).ok) << "d=" << d << " seed=" << seed;
        }
    }
}

TEST(ScrambleMode, Parse) {
    EXPECT_EQ(parse_scramble_mode("coarse"), ScrambleMode::coarse);
    EXPECT_EQ(to_string(ScrambleMode::usual), "usual");
    EXPECT_THROW(parse_scramble_mode("nested"), std::invalid_argument);
}
