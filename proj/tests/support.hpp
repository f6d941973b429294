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

#ifndef CQMC_TESTS_SUPPORT_HPP
#define CQMC_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "cqmc/anova.hpp"
#include "cqmc/sequences.hpp"

namespace cqmc::support {

/// Upper critical value of the chi-squared distribution at significance alpha.
inline double chi2_critical(double dof, double alpha) {
    boost::math::chi_squared_distribution<double> dist(dof);
    return boost::math::quantile(boost::math::complement(dist, alpha));
}

/// Pearson statistic of observed counts against equal expected counts.
inline double chi2_uniform(std::span<const std::uint64_t> counts) {
    double total = 0.0;
    for (auto c : counts) total += double(c);
    const double expected = total / double(counts.size());
    double s = 0.0;
    for (auto c : counts) s += (double(c) - expected) * (double(c) - expected) / expected;
    return s;
}

inline std::vector<DigitPoint> prefix(Family family, std::size_t d, std::uint64_t n, std::uint32_t base = 2) {
    SequenceSpec spec;
    spec.family = family;
    spec.dimension = d;
    spec.base = base;
    spec.max_points = n < 2 ? 2 : n;
    return make_sequence(spec)->points(n);
}

inline GridFunction<Rational> random_grid(const MixedBase& base, std::vector<unsigned> levels, std::mt19937_64& rng) {
    std::uint64_t n = 1;
    for (std::size_t j = 0; j < base.size(); ++j)
        for (unsigned l = 0; l < levels[j]; ++l) n *= base[j].radix();
    std::vector<Rational> v;
    for (std::uint64_t c = 0; c < n; ++c) v.emplace_back(int128(std::int64_t(rng() % 41) - 20), int128(1 + rng() % 6));
    return GridFunction<Rational>(base, std::move(levels), std::move(v), Provenance::exact_cell_constant);
}

// a random small base with d <= 3 and at most 4096 cells
inline GridFunction<Rational> random_instance(std::mt19937_64& rng) {
    for (;;) {
        const std::size_t d = 1 + rng() % 3;
        std::vector<BaseComponent> comps;
        const int kind = int(rng() % 3);
        const std::uint32_t primes[] = {2, 3, 5};
        for (std::size_t j = 0; j < d; ++j) {
            if (kind == 0) comps.push_back({2, 1});
            if (kind == 1) comps.push_back({2, std::uint32_t(1 + rng() % 2)});
            if (kind == 2) comps.push_back({primes[j], 1});
        }
        std::vector<unsigned> levels;
        std::uint64_t cells = 1;
        for (std::size_t j = 0; j < d; ++j) {
            levels.push_back(1 + unsigned(rng() % 3));
            for (unsigned l = 0; l < levels.back(); ++l) cells *= comps[j].radix();
        }
        if (cells <= 4096) return random_grid(MixedBase(comps), levels, rng);
    }
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t d) {
    std::vector<std::vector<std::size_t>> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
        std::vector<std::size_t> u;
        for (std::size_t j = 0; j < d; ++j)
            if (mask >> j & 1) u.push_back(j);
        out.push_back(u);
    }
    return out;
}

}  // namespace cqmc::support

#endif  // CQMC_TESTS_SUPPORT_HPP
