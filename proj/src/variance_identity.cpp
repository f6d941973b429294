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


#include <numeric>
#include <stdexcept>

#include "cqmc/gain.hpp"
#include "cqmc/rqmc.hpp"

namespace cqmc {

namespace {

constexpr std::uint64_t kStateLimit = std::uint64_t{1} << 24;

std::uint64_t bounded_product(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > kStateLimit / b) throw std::length_error("variance identity: too many scramble states to enumerate");
    return a * b;
}

}  // namespace

std::vector<DimensionScramble> all_block_affine(PrimeBase field, std::size_t precision, std::size_t block) {
    if (block == 0 || precision % block != 0)
        throw std::invalid_argument("all_block_affine: precision must be a positive multiple of the block size");
    const std::uint32_t b = field.value();
    const std::size_t blocks = precision / block;
    const auto diag = all_nonsingular(field, block);
    std::size_t free_entries = precision;
    for (std::size_t t = 0; t < blocks; ++t) free_entries += block * t * block;
    std::uint64_t total = 1;
    for (std::size_t t = 0; t < blocks; ++t) total = bounded_product(total, diag.size());
    for (std::size_t i = 0; i < free_entries; ++i) total = bounded_product(total, b);

    std::vector<DimensionScramble> out;
    out.reserve(total);
    std::vector<std::size_t> diag_pick(blocks, 0);
    std::vector<Digit> free(free_entries, 0);
    for (std::uint64_t s = 0; s < total; ++s) {
        FieldMatrix m(field, precision, precision);
        std::size_t f = 0;
        for (std::size_t t = 0; t < blocks; ++t) {
            const FieldMatrix& dblk = diag[diag_pick[t]];
            for (std::size_t i = 0; i < block; ++i) {
                for (std::size_t l = 0; l < t * block; ++l) m.set(t * block + i, l, free[f++]);
                for (std::size_t l = 0; l < block; ++l) m.set(t * block + i, t * block + l, dblk(i, l));
            }
        }
        std::vector<Digit> shift(free.begin() + std::ptrdiff_t(f), free.end());
        out.emplace_back(std::move(m), std::move(shift), block);

        std::size_t a = 0;
        while (a < free.size() && ++free[a] == b) free[a++] = 0;
        if (a < free.size()) continue;
        std::size_t t = 0;
        while (t < blocks && ++diag_pick[t] == diag.size()) diag_pick[t++] = 0;
    }
    return out;
}

VarianceIdentityReport variance_identity_check(const GridFunction<Rational>& f, std::span<const DigitPoint> points,
                                               ScrambleMode mode, std::span<const std::uint32_t> exponents) {
    if (mode == ScrambleMode::none) throw std::invalid_argument("variance_identity_check: needs a random scramble");
    const MixedBase& grid_base = f.base();
    if (!grid_base.digital()) throw std::invalid_argument("variance_identity_check: grid needs a common prime");
    for (const auto& c : grid_base.components())
        if (c.exponent != 1) throw std::invalid_argument("variance_identity_check: grid must be in digits (exponents 1)");
    const std::size_t d = f.dimension();
    if (exponents.size() != d) throw std::invalid_argument("variance_identity_check: one exponent per coordinate required");
    if (points.empty()) throw std::invalid_argument("variance_identity_check: no points");
    const PrimeBase field(grid_base.common_prime());
    const std::uint64_t n = points.size();

    std::vector<DigitPoint> pts(points.begin(), points.end());
    for (auto& x : pts) {
        if (x.dimension() != d) throw std::invalid_argument("variance_identity_check: point dimension mismatch");
        for (std::size_t j = 0; j < d; ++j) {
            if (x[j].prime != field.value()) throw std::invalid_argument("variance_identity_check: point base mismatch");
            x[j].digits.resize(f.levels()[j], 0);
        }
    }

    // scrambled cell coordinate of every point under every state, per dimension
    std::vector<std::vector<std::uint64_t>> cells(d);
    std::vector<std::uint64_t> counts(d);
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t block = mode == ScrambleMode::coarse ? exponents[j] : 1;
        const auto states = all_block_affine(field, f.levels()[j], block);
        counts[j] = states.size();
        total = bounded_product(total, counts[j]);
        cells[j].resize(states.size() * n);
        for (std::size_t s = 0; s < states.size(); ++s)
            for (std::uint64_t i = 0; i < n; ++i) cells[j][s * n + i] = states[s].apply(pts[i][j]).leading(f.levels()[j]);
    }

    // integer cell values over a common denominator
    int128 den = 1;
    for (const auto& v : f.values()) den = den / detail::gcd128(den, v.den()) * v.den();
    std::vector<int128> scaled;
    scaled.reserve(f.size());
    for (const auto& v : f.values()) scaled.push_back(detail::checked_mul(v.num(), den / v.den()));

    int128 sum = 0, sum_sq = 0;
    std::vector<std::uint64_t> pick(d, 0);
    for (std::uint64_t s = 0; s < total; ++s) {
        int128 est = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            std::uint64_t flat = 0;
            for (std::size_t j = 0; j < d; ++j) flat = flat * f.side(j) + cells[j][pick[j] * n + i];
            est = detail::checked_add(est, scaled[flat]);
        }
        sum = detail::checked_add(sum, est);
        sum_sq = detail::checked_add(sum_sq, detail::checked_mul(est, est));
        std::size_t j = 0;
        while (j < d && ++pick[j] == counts[j]) pick[j++] = 0;
    }
    const int128 scale = detail::checked_mul(int128(n), den);
    const Rational mean_num(sum, int128(total));
    VarianceIdentityReport report;
    report.states = total;
    report.mean = mean_num / Rational(scale, 1);
    report.left = (Rational(sum_sq, int128(total)) - mean_num * mean_num) / (Rational(scale, 1) * Rational(scale, 1));

    std::vector<std::uint32_t> e(d, 1);
    if (mode == ScrambleMode::coarse) e.assign(exponents.begin(), exponents.end());
    const GridFunction<Rational> g = f.as_coarse(e);
    const NestedAnova<Rational> anova(g);
    const auto table = anova.sigma_table();
    Rational right(0);
    for (const auto& entry : table.entries) {
        if (entry.sigma2.is_zero()) continue;
        const GainQuery q{entry.u, entry.k, n};
        right += gain_via_counts(pts, q, g.base()) * entry.sigma2 / Rational(int128(n), 1);
    }
    report.right = right;
    return report;
}

}  // namespace cqmc
