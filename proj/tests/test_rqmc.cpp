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
#include <random>
#include <sstream>

#include "cqmc/rqmc.hpp"
#include "support.hpp"
#include "json.hpp"

using namespace cqmc;

namespace {

std::vector<RmseRow> power_rows(double exponent) {
    std::vector<RmseRow> rows;
    for (unsigned m = 1; m <= 14; ++m) {
        RmseRow r;
        r.m = m;
        r.n = std::uint64_t{1} << m;
        r.rmse = std::pow(double(r.n), exponent);
        rows.push_back(r);
    }
    return rows;
}

std::unique_ptr<PointSequence> sobol(std::size_t d, unsigned m) {
    SequenceSpec s;
    s.dimension = d;
    s.max_points = std::uint64_t{1} << m;
    return make_sequence(s);
}

GridFunction<Rational> random_cells(std::size_t d, unsigned K, std::mt19937_64& rng) {
    std::vector<Rational> v(std::size_t(1) << (K * d));
    for (auto& x : v) x = Rational(int128(std::int64_t(rng() % 13) - 6), int128(1 + rng() % 4));
    return GridFunction<Rational>(MixedBase::uniform(2, d), std::vector<unsigned>(d, K), std::move(v),
                                  Provenance::exact_cell_constant);
}

std::vector<DigitPoint> random_digits(std::size_t n, std::size_t d, unsigned K, std::mt19937_64& rng) {
    std::vector<DigitPoint> pts(n);
    for (auto& x : pts)
        for (std::size_t j = 0; j < d; ++j) {
            DigitCoordinate c{2, std::vector<Digit>(K)};
            for (auto& v : c.digits) v = Digit(rng() & 1);
            x.coords.push_back(c);
        }
    return pts;
}

}  // namespace

TEST(Integrands, Values) {
    const auto f = linear37();
    std::vector<double> x(37, 0.0);
    EXPECT_EQ(f.f(x), 0.0);
    std::fill(x.begin(), x.end(), std::nextafter(1.0, 0.0));
    EXPECT_NEAR(f.f(x), 37.0, 1e-12);
    EXPECT_EQ(f.exact, 18.5);

    const auto g = weighted100();
    std::vector<double> y(100, 0.0);
    EXPECT_EQ(g.f(y), 0.0);
    std::fill(y.begin(), y.end(), 0.5);
    double p = 1.0;
    for (int j = 1; j <= 100; ++j) p *= 1.0 + (0.5 * std::exp(0.5) - 1.0) / double(j * j);
    EXPECT_NEAR(g.f(y), p, 1e-14);
    EXPECT_EQ(g.exact, 1.0);

    EXPECT_THROW(integrand_by_name("genz"), std::invalid_argument);
    EXPECT_EQ(integrand_names().size(), 2u);
}

TEST(Integrands, CornerMean) {
    const std::vector<double> h37(37, 1.0 / 8.0);
    EXPECT_EQ(linear37().corner_mean(h37), 37 * (0.5 - 1.0 / 16.0));

    // direct corner sums of x e^x on a 1024-cell grid
    const double h = 1.0 / 1024.0;
    double s = 0.0;
    for (int a = 0; a < 1024; ++a) s += a * h * std::exp(a * h);
    s *= h;
    double p = 1.0;
    for (int j = 1; j <= 100; ++j) p *= 1.0 + (s - 1.0) / double(j * j);
    EXPECT_NEAR(weighted100().corner_mean(std::vector<double>(100, h)), p, 1e-5);
    EXPECT_EQ(weighted100().corner_mean(std::vector<double>(100, 0.0)), 1.0);
}

TEST(Estimate, ConstantIsExact) {
    const Integrand c{"const", 3, [](std::span<const double>) { return 2.5; }, 2.5, [](std::span<const double>) { return 2.5; }};
    const auto seq = sobol(3, 6);
    for (ScrambleMode mode : {ScrambleMode::none, ScrambleMode::usual, ScrambleMode::coarse})
        EXPECT_EQ(estimate(c, *seq, mode, 6, 3, 1), 2.5);
}

TEST(Estimate, DeterministicQmcBound) {
    const auto seq = sobol(37, 14);
    const double e = estimate(linear37(), *seq, ScrambleMode::none, 14, 0, 0);
    EXPECT_LE(std::fabs(e - 18.5), 37.0 * std::ldexp(1.0, -14));
}

TEST(Estimate, DimensionMismatch) {
    const auto seq = sobol(5, 4);
    EXPECT_THROW(estimate(linear37(), *seq, ScrambleMode::usual, 4, 0, 0), std::invalid_argument);
}

TEST(Estimate, PrefixesMatchSingleRuns) {
    const auto seq = sobol(37, 8);
    const auto all = prefix_estimates(linear37(), *seq, ScrambleMode::coarse, 2, 8, 11, 4);
    for (unsigned m = 2; m <= 8; ++m) EXPECT_EQ(all[m - 2], estimate(linear37(), *seq, ScrambleMode::coarse, m, 11, 4));
}

TEST(Estimate, WeightedUnbiased) {
    const auto seq = sobol(100, 4);
    const int R = 2000;
    for (ScrambleMode mode : {ScrambleMode::usual, ScrambleMode::coarse}) {
        double s = 0.0, sq = 0.0;
        for (int r = 0; r < R; ++r) {
            const double v = estimate(weighted100(), *seq, mode, 4, 5, std::uint64_t(r));
            s += v;
            sq += v * v;
        }
        const double mean = s / R, se = std::sqrt((sq / R - mean * mean) / (R - 1));
        EXPECT_LT(std::fabs(mean - estimator_mean(weighted100(), *seq)), 4 * se) << to_string(mode);
        EXPECT_LT(std::fabs(mean - 1.0), 4 * se) << to_string(mode);
    }
}

TEST(Experiment, NoneHasZeroSpread) {
    ExperimentConfig cfg;
    cfg.mode = ScrambleMode::none;
    cfg.m_max = 6;
    cfg.reps = 5;
    const auto rows = rmse_experiment(cfg);
    const auto seq = sobol(37, 6);
    for (const auto& r : rows) {
        const double e = estimate(linear37(), *seq, ScrambleMode::none, r.m, 0, 0);
        EXPECT_EQ(r.rmse, std::fabs(e - 18.5));
        EXPECT_EQ(r.estimate_stderr, 0.0);
        EXPECT_EQ(r.mean_estimate, e);
    }
}

TEST(Experiment, DeterministicAcrossThreads) {
    ExperimentConfig cfg;
    cfg.mode = ScrambleMode::coarse;
    cfg.m_max = 8;
    cfg.reps = 12;
    cfg.seed = 9;
    std::ostringstream a, c;
    cfg.threads = 1;
    write_csv(a, rmse_experiment(cfg));
    cfg.threads = 4;
    write_csv(c, rmse_experiment(cfg));
    EXPECT_EQ(a.str(), c.str());
    EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "m,n,rmse,rmse_stderr,mean_estimate");
}

TEST(Experiment, JsonMirror) {
    ExperimentConfig cfg;
    cfg.m_max = 3;
    cfg.reps = 3;
    const auto rows = rmse_experiment(cfg);
    std::ostringstream out;
    write_json(out, rows, cfg);
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j["rows"].size(), 3u);
    EXPECT_EQ(j["rows"][2]["n"], 8);
    EXPECT_EQ(j["mode"], "usual");
}

TEST(Experiment, RejectsSingleReplication) {
    ExperimentConfig cfg;
    cfg.reps = 1;
    EXPECT_THROW(rmse_experiment(cfg), std::invalid_argument);
}

TEST(Experiment, UsualBeatsCoarseOffBlocks) {
    // at m = 6 most coordinates have blocks of 5 to 7 digits, so the coarse scramble stratifies less
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        ExperimentConfig cfg;
        cfg.m_min = 6;
        cfg.m_max = 6;
        cfg.reps = 40;
        cfg.seed = seed;
        const double usual = rmse_experiment(cfg)[0].rmse;
        cfg.mode = ScrambleMode::coarse;
        const double coarse = rmse_experiment(cfg)[0].rmse;
        EXPECT_LT(usual, coarse) << "seed " << seed;
    }
}

TEST(Fit, Slopes) {
    EXPECT_NEAR(slope_fit(power_rows(-1.0), 8, 14), -1.0, 1e-12);
    EXPECT_NEAR(slope_fit(power_rows(-1.5), 8, 14), -1.5, 1e-12);
    EXPECT_THROW(slope_fit(power_rows(-1.0), 8, 9), std::invalid_argument);
    auto zero = power_rows(-1.0);
    zero[9].rmse = 0.0;
    EXPECT_THROW(slope_fit(zero, 8, 14), std::domain_error);
}

TEST(Fit, DropScore) {
    EXPECT_NEAR(drop_score(power_rows(-1.0), 7), 0.0, 1e-12);
    auto rows = power_rows(-1.0);
    for (auto& r : rows)
        if (r.m >= 7) r.rmse /= 16.0;
    // one drop of 5 and one of 1 on the period, unit drops elsewhere
    EXPECT_NEAR(drop_score(rows, 7), 2.0, 1e-12);
    EXPECT_THROW(drop_score(rows, 0), std::invalid_argument);
}

TEST(VarianceIdentity, ConstantFunction) {
    const GridFunction<Rational> f(MixedBase::uniform(2, 2), {2, 2}, std::vector<Rational>(16, Rational(3)),
                                   Provenance::exact_cell_constant);
    const auto pts = support::prefix(Family::sobol, 2, 4);
    const std::vector<std::uint32_t> e{1, 1};
    const auto r = variance_identity_check(f, pts, ScrambleMode::usual, e);
    EXPECT_EQ(r.left, Rational(0));
    EXPECT_EQ(r.right, Rational(0));
    EXPECT_EQ(r.mean, Rational(3));
}

TEST(VarianceIdentity, IndicatorOnVanDerCorput) {
    const GridFunction<Rational> f(MixedBase::uniform(2, 1), {2}, {Rational(1), Rational(1), Rational(0), Rational(0)},
                                   Provenance::exact_cell_constant);
    const auto pts = support::prefix(Family::sobol, 1, 2);
    const std::vector<std::uint32_t> e{1};
    const auto r = variance_identity_check(f, pts, ScrambleMode::usual, e);
    EXPECT_EQ(r.states, 8u);
    EXPECT_EQ(r.left, Rational(0));
    EXPECT_EQ(r.right, Rational(0));
    EXPECT_EQ(r.mean, Rational(1, 2));
}

TEST(VarianceIdentity, RandomInstances) {
    std::mt19937_64 rng(47);
    const std::vector<std::uint32_t> ones{1, 1};
    for (int trial = 0; trial < 12; ++trial) {
        const unsigned K = 2 + unsigned(trial % 2);
        const auto f = random_cells(2, K, rng);
        const auto pts = trial % 3 ? support::prefix(Family::sobol, 2, 1 + rng() % 8) : random_digits(1 + rng() % 8, 2, K, rng);
        const auto r = variance_identity_check(f, pts, ScrambleMode::usual, ones);
        EXPECT_EQ(r.states, K == 2 ? 64u : 4096u);
        EXPECT_EQ(r.left, r.right) << r.left << " vs " << r.right;
        EXPECT_EQ(r.mean, f.mean());
    }
}

TEST(VarianceIdentity, CoarseInstances) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 12; ++trial) {
        const std::vector<std::uint32_t> e{1, std::uint32_t(trial % 2 ? 2 : 1)};
        const auto f = random_cells(2, 2, rng);
        const auto pts = random_digits(1 + rng() % 8, 2, 2, rng);
        const auto r = variance_identity_check(f, pts, ScrambleMode::coarse, e);
        EXPECT_EQ(r.left, r.right) << r.left << " vs " << r.right;
    }
}

TEST(VarianceIdentity, StateCounts) {
    const PrimeBase f2(2);
    EXPECT_EQ(all_block_affine(f2, 3, 1).size(), 64u);
    EXPECT_EQ(all_block_affine(f2, 2, 2).size(), 24u);
    EXPECT_EQ(all_block_affine(PrimeBase(3), 2, 1).size(), 2u * 2u * 3u * 9u);
    EXPECT_THROW(all_block_affine(f2, 3, 2), std::invalid_argument);
    for (const auto& s : all_block_affine(f2, 4, 2)) EXPECT_EQ(s.block(), 2u);
}
