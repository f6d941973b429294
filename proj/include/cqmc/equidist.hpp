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


#ifndef CQMC_EQUIDIST_HPP
#define CQMC_EQUIDIST_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cqmc/field.hpp"
#include "cqmc/mixed_base.hpp"
#include "cqmc/sequences.hpp"

namespace cqmc {

/// a_j = floor(x_j * b_j^{k_j}) per dimension.
using CellIndex = std::vector<std::uint64_t>;

/// Exact cell of x at resolution k: a_j is the integer formed by the first
/// e_j * k_j base-p_j digits.
CellIndex cell_index(const DigitPoint& x, std::span<const unsigned> k, const MixedBase& base);

/// Row-major position of a cell (dimension 1 slowest) among prod b_j^{k_j} cells.
std::uint64_t flat_cell(const CellIndex& cell, std::span<const unsigned> k, const MixedBase& base);
/// prod_j b_j^{k_j}; throws on 64-bit overflow.
std::uint64_t cell_total(std::span<const unsigned> k, const MixedBase& base);

/// Points per cell at resolution k, indexed by flat_cell.
std::vector<std::uint64_t> cell_counts(std::span<const DigitPoint> points, std::span<const unsigned> k,
                                       const MixedBase& base);

struct NetViolation {
    std::vector<unsigned> k;
    CellIndex cell;
    std::uint64_t count = 0;
    std::uint64_t expected = 0;
};

struct NetReport {
    bool ok = true;
    std::optional<NetViolation> witness;
    /// Number of resolution vectors examined.
    std::uint64_t checked = 0;
};

struct NetOptions {
    /// 0 checks every maximal admissible k; otherwise this many random maximal k.
    std::size_t sample_k = 0;
    std::uint64_t seed = 0;
    /// Also check non-maximal k (implied by the maximal ones).
    bool all_k = false;
};

/**
 * (t, e, m, d)-net check in base b: every elementary interval in base
 * (b^{e_1}, ..., b^{e_d}) with sum_j e_j k_j <= m - t holds exactly
 * b^{m - sum_j e_j k_j} points, which is b^t for the finest admissible k.
 */
NetReport is_net(std::span<const DigitPoint> points, unsigned t, std::span<const unsigned> e, unsigned m, PrimeBase b,
                 const NetOptions& options = {});

/// Every run x_{rB}, ..., x_{(r+1)B-1}, r < r_max, meets each k-cell once, B = prod b_j^{k_j}.
bool is_equidistributed_prefix(const PointSequence& seq, const MixedBase& base, std::span<const unsigned> k,
                               std::uint64_t r_max);

/// Smallest t in 0..m for which is_net passes.
unsigned measure_t(std::span<const DigitPoint> points, std::span<const unsigned> e, unsigned m, PrimeBase b);

}  // namespace cqmc

#endif  // CQMC_EQUIDIST_HPP
