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


#include "cqmc/equidist.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace cqmc {

namespace {

std::uint64_t checked_power(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
        if (r > UINT64_MAX / b) throw std::overflow_error("power does not fit in 64 bits");
        r *= b;
    }
    return r;
}

void decode_flat(std::uint64_t flat, std::span<const std::uint64_t> radices, CellIndex& cell) {
    cell.assign(radices.size(), 0);
    for (std::size_t j = radices.size(); j-- > 0;) {
        cell[j] = flat % radices[j];
        flat /= radices[j];
    }
}

}  // namespace

CellIndex cell_index(const DigitPoint& x, std::span<const unsigned> k, const MixedBase& base) {
    if (x.dimension() != base.size() || k.size() != base.size())
        throw std::invalid_argument("cell_index: dimension mismatch");
    CellIndex a(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) {
        if (x[j].prime != base[j].prime) throw std::invalid_argument("cell_index: digit base differs from the cell base");
        const std::size_t count = std::size_t(base[j].exponent) * k[j];
        if (count > x[j].digits.size()) throw std::out_of_range("cell_index: resolution exceeds precision");
        a[j] = x[j].leading(count);
    }
    return a;
}

std::uint64_t cell_total(std::span<const unsigned> k, const MixedBase& base) {
    if (k.size() != base.size()) throw std::invalid_argument("cell_total: dimension mismatch");
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < k.size(); ++j) {
        const std::uint64_t r = checked_power(base[j].radix(), k[j]);
        if (total > UINT64_MAX / r) throw std::overflow_error("cell_total: too many cells");
        total *= r;
    }
    return total;
}

std::uint64_t flat_cell(const CellIndex& cell, std::span<const unsigned> k, const MixedBase& base) {
    std::uint64_t flat = 0;
    for (std::size_t j = 0; j < k.size(); ++j) flat = flat * checked_power(base[j].radix(), k[j]) + cell[j];
    return flat;
}

std::vector<std::uint64_t> cell_counts(std::span<const DigitPoint> points, std::span<const unsigned> k,
                                       const MixedBase& base) {
    const std::uint64_t total = cell_total(k, base);
    if (total > (std::uint64_t{1} << 28)) throw std::length_error("cell_counts: too many cells to tabulate");
    std::vector<std::uint64_t> counts(total, 0);
    for (const auto& x : points) ++counts[flat_cell(cell_index(x, k, base), k, base)];
    return counts;
}

NetReport is_net(std::span<const DigitPoint> points, unsigned t, std::span<const unsigned> e, unsigned m, PrimeBase b,
                 const NetOptions& options) {
    const std::uint64_t n = checked_power(b.value(), m);
    if (points.size() != n) throw std::invalid_argument("is_net: point count must be b^m");
    if (t > m) throw std::invalid_argument("is_net: t must not exceed m");
    const std::size_t d = e.size();
    for (unsigned ej : e)
        if (ej == 0) throw std::invalid_argument("is_net: block exponents must be >= 1");
    const unsigned budget = m - t;

    // leading digits at the finest admissible resolution of each coordinate
    std::vector<unsigned> finest(d);
    std::vector<std::vector<std::uint64_t>> lead(d, std::vector<std::uint64_t>(n));
    for (std::size_t j = 0; j < d; ++j) {
        finest[j] = budget / e[j];
        const std::size_t digits = std::size_t(e[j]) * finest[j];
        for (std::uint64_t i = 0; i < n; ++i) {
            const DigitPoint& x = points[i];
            if (x.dimension() != d) throw std::invalid_argument("is_net: point dimension mismatch");
            if (x[j].prime != b.value()) throw std::invalid_argument("is_net: point base mismatch");
            if (digits > x[j].digits.size()) throw std::out_of_range("is_net: resolution exceeds precision");
            lead[j][i] = x[j].leading(digits);
        }
    }

    NetReport report;
    std::vector<std::uint64_t> counts;
    std::vector<std::uint64_t> divisors(d), radices(d);
    auto check = [&](const std::vector<unsigned>& k) {
        ++report.checked;
        unsigned used = 0;
        std::uint64_t cells = 1;
        for (std::size_t j = 0; j < d; ++j) {
            used += e[j] * k[j];
            radices[j] = checked_power(b.value(), std::uint64_t(e[j]) * k[j]);
            divisors[j] = checked_power(b.value(), std::uint64_t(e[j]) * (finest[j] - k[j]));
            cells *= radices[j];
        }
        const std::uint64_t expected = checked_power(b.value(), m - used);
        counts.assign(cells, 0);
        for (std::uint64_t i = 0; i < n; ++i) {
            std::uint64_t flat = 0;
            for (std::size_t j = 0; j < d; ++j) flat = flat * radices[j] + lead[j][i] / divisors[j];
            ++counts[flat];
        }
        for (std::uint64_t c = 0; c < cells; ++c) {
            if (counts[c] == expected) continue;
            NetViolation v{k, {}, counts[c], expected};
            decode_flat(c, radices, v.cell);
            report.ok = false;
            report.witness = std::move(v);
            return false;
        }
        return true;
    };
    auto maximal = [&](const std::vector<unsigned>& k) {
        unsigned used = 0;
        for (std::size_t j = 0; j < d; ++j) used += e[j] * k[j];
        for (std::size_t j = 0; j < d; ++j)
            if (used + e[j] <= budget) return false;
        return true;
    };

    std::vector<unsigned> k(d, 0);
    if (options.sample_k > 0) {
        for (std::size_t s = 0; s < options.sample_k; ++s) {
            KeyedStream rng{options.seed, std::uint64_t(s)};
            std::fill(k.begin(), k.end(), 0U);
            unsigned left = budget;
            for (;;) {
                std::vector<std::size_t> open;
                for (std::size_t j = 0; j < d; ++j)
                    if (e[j] <= left) open.push_back(j);
                if (open.empty()) break;
                const std::size_t j = open[rng.below(open.size())];
                ++k[j];
                left -= e[j];
            }
            if (!check(k)) return report;
        }
        return report;
    }

    std::function<bool(std::size_t, unsigned)> walk = [&](std::size_t j, unsigned left) -> bool {
        if (j == d) return (options.all_k || maximal(k)) ? check(k) : true;
        for (unsigned kj = 0; kj * e[j] <= left; ++kj) {
            k[j] = kj;
            if (!walk(j + 1, left - kj * e[j])) return false;
        }
        k[j] = 0;
        return true;
    };
    walk(0, budget);
    return report;
}

bool is_equidistributed_prefix(const PointSequence& seq, const MixedBase& base, std::span<const unsigned> k,
                               std::uint64_t r_max) {
    const std::uint64_t block = cell_total(k, base);
    if (r_max > 0 && block > seq.capacity() / r_max) throw std::out_of_range("is_equidistributed_prefix: beyond capacity");
    std::vector<char> seen(block);
    for (std::uint64_t r = 0; r < r_max; ++r) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::uint64_t i = r * block; i < (r + 1) * block; ++i) {
            const std::uint64_t c = flat_cell(cell_index(seq.point(i), k, base), k, base);
            if (seen[c]) return false;
            seen[c] = 1;
        }
    }
    return true;
}

unsigned measure_t(std::span<const DigitPoint> points, std::span<const unsigned> e, unsigned m, PrimeBase b) {
    for (unsigned t = 0; t < m; ++t)
        if (is_net(points, t, e, m, b).ok) return t;
    return m;
}

}  // namespace cqmc
