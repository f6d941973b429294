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


#ifndef CQMC_RQMC_HPP
#define CQMC_RQMC_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cqmc/anova.hpp"
#include "cqmc/scramble.hpp"
#include "cqmc/sequences.hpp"

namespace cqmc {

struct Integrand {
    std::string id;
    std::size_t dimension = 0;
    std::function<double(std::span<const double>)> f;
    /// Exact integral over the unit cube.
    double exact = 0.0;
    /// Mean of f over the corners of a grid with spacing h[j] in coordinate j.
    std::function<double(std::span<const double> h)> corner_mean;
};

/// f(x) = x_1 + ... + x_37, integral 37/2.
Integrand linear37();
/// g(x) = prod_{j=1}^{100} (1 + (x_j e^{x_j} - 1) / j^2), integral 1.
Integrand weighted100();
Integrand integrand_by_name(const std::string& id);
std::vector<std::string> integrand_names();

/// Expectation of a scrambled estimate: points carry K_j digits and a zero
/// tail, so they are uniform on the corners of the p_j^-K_j grid.
double estimator_mean(const Integrand& f, const PointSequence& seq);

/// b^m for digital sequences, 2^m for Halton.
std::uint64_t point_count(const PointSequence& seq, unsigned m);

/// Equal-weight average of f over the first point_count(m) points under the
/// scramble state of replication rep.
double estimate(const Integrand& f, const PointSequence& seq, ScrambleMode mode, unsigned m, std::uint64_t seed,
                std::uint64_t rep);

/// Estimates for every m in [m_min, m_max] from one scramble state, reusing prefix sums.
std::vector<double> prefix_estimates(const Integrand& f, const PointSequence& seq, ScrambleMode mode, unsigned m_min,
                                     unsigned m_max, std::uint64_t seed, std::uint64_t rep);

struct ExperimentConfig {
    SequenceSpec spec;
    ScrambleMode mode = ScrambleMode::usual;
    unsigned m_min = 1;
    unsigned m_max = 14;
    std::size_t reps = 100;
    std::uint64_t seed = 0;
    std::string integrand = "linear37";
    /// 0 means worker_count().
    std::size_t threads = 0;
};

struct RmseRow {
    unsigned m = 0;
    std::uint64_t n = 0;
    double rmse = 0.0;
    double rmse_stderr = 0.0;
    double mean_estimate = 0.0;
    /// Standard error of mean_estimate.
    double estimate_stderr = 0.0;
};

/// CQMC_THREADS if set, else the hardware concurrency.
std::size_t worker_count();

/// RMSE against the exact integral over R replications per m. Rows are in m
/// order and independent of the thread count.
std::vector<RmseRow> rmse_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& out, std::span<const RmseRow> rows);
void write_json(std::ostream& out, std::span<const RmseRow> rows, const ExperimentConfig& cfg);

/// Least-squares slope of log2 rmse against m over rows with m in [m_lo, m_hi].
double slope_fit(std::span<const RmseRow> rows, unsigned m_lo, unsigned m_hi);

/// Mean of log2 rmse(m-1) - log2 rmse(m) over m divisible by period, minus
/// the same mean over the other m.
double drop_score(std::span<const RmseRow> rows, unsigned period);

struct VarianceIdentityReport {
    /// Exact variance of the estimator over every scramble state.
    Rational left;
    /// sum_{u,k} G_{u,k}(P_n) / n * sigma^2_{u,k}
    Rational right;
    Rational mean;
    std::uint64_t states = 0;

    bool equal() const { return left == right; }
};

/**
 * Exhaustive check of the variance identity on a tiny instance.
 *
 * f is cell-constant on the base-b digit grid with K_j = L_j digits (a
 * GridFunction with exponents 1). Points are given as base-b digits and
 * truncated to K_j. Usual mode enumerates every lower-triangular M with
 * nonzero diagonal and every shift; coarse mode enumerates block
 * lower-triangular M with nonsingular e_j x e_j diagonal blocks. The right
 * side is evaluated in the matching base, (b, ..., b) or (b^{e_1}, ..., b^{e_d}).
 */
VarianceIdentityReport variance_identity_check(const GridFunction<Rational>& f, std::span<const DigitPoint> points,
                                               ScrambleMode mode, std::span<const std::uint32_t> exponents);

/// Every block lower-triangular K x K scramble of one coordinate.
std::vector<DimensionScramble> all_block_affine(PrimeBase field, std::size_t precision, std::size_t block);

}  // namespace cqmc

#endif  // CQMC_RQMC_HPP
