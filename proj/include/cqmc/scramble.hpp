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


#ifndef CQMC_SCRAMBLE_HPP
#define CQMC_SCRAMBLE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqmc/field.hpp"
#include "cqmc/mixed_base.hpp"
#include "cqmc/sequences.hpp"

namespace cqmc {

enum class ScrambleMode { none, usual, coarse };

ScrambleMode parse_scramble_mode(const std::string& name);
std::string to_string(ScrambleMode mode);

/**
 * Affine digit map y = M x + delta for one coordinate.
 *
 * M is block lower-triangular with square diagonal blocks of size `block`
 * that are nonsingular. block = 1 is the usual affine matrix scramble; block = e_j
 * is the coarse scramble in base b^{e_j}.
 */
class DimensionScramble {
public:
    DimensionScramble(FieldMatrix matrix, std::vector<Digit> shift, std::size_t block);

    std::uint32_t prime() const { return matrix_.base().value(); }
    std::size_t block() const { return block_; }
    std::size_t precision() const { return shift_.size(); }
    const FieldMatrix& matrix() const { return matrix_; }
    const std::vector<Digit>& shift() const { return shift_; }

    DigitCoordinate apply(const DigitCoordinate& x) const;
    /// Byte arithmetic only, never the packed path.
    DigitCoordinate apply_naive(const DigitCoordinate& x) const;

    /// Packed base-2 form, available when b = 2 and K <= 64.
    bool packed() const { return rows_.has_value(); }
    std::uint64_t apply_packed(std::uint64_t x) const { return rows_->apply(x) ^ packed_shift_; }
    const gf2::PackedRows& packed_rows() const { return *rows_; }
    std::uint64_t packed_shift() const { return packed_shift_; }

private:
    FieldMatrix matrix_;
    std::vector<Digit> shift_;
    std::size_t block_;
    std::optional<gf2::PackedRows> rows_;
    std::uint64_t packed_shift_ = 0;
};

struct ScrambleState {
    ScrambleMode mode = ScrambleMode::none;
    /// Empty when mode is none.
    std::vector<DimensionScramble> dims;

    DigitPoint apply(const DigitPoint& x) const;
};

/// One block-affine coordinate scramble with K digits (K a multiple of block),
/// keyed by (seed, rep, dim, block row).
DimensionScramble sample_block_affine(PrimeBase field, std::size_t precision, std::size_t block, std::uint64_t seed,
                                      std::uint64_t rep, std::size_t dim);

DimensionScramble sample_usual(const MixedBase& base, std::span<const std::size_t> precision, std::uint64_t seed,
                               std::uint64_t rep, std::size_t dim);
/// Precision is rounded up to whole blocks of e_dim digits.
DimensionScramble sample_coarse(const MixedBase& base, std::span<const std::size_t> precision, std::uint64_t seed,
                                std::uint64_t rep, std::size_t dim);

ScrambleState sample_state(ScrambleMode mode, const MixedBase& base, std::span<const std::size_t> precision,
                           std::uint64_t seed, std::uint64_t rep);

DigitPoint apply(const ScrambleState& state, const DigitPoint& x);

/// A point sequence composed with one scramble state. Digits the state
/// covers beyond the sequence precision are zeros.
class ScrambledSequence {
public:
    ScrambledSequence(const PointSequence& seq, ScrambleState state);

    DigitPoint point(std::uint64_t k) const;
    void values(std::uint64_t k, std::span<double> out) const;

    std::size_t dimension() const { return seq_->dimension(); }
    const ScrambleState& state() const { return state_; }
    /// True when values() runs on composed packed columns.
    bool fast() const { return fast_; }

private:
    const PointSequence* seq_;
    ScrambleState state_;
    bool fast_ = false;
    std::vector<std::vector<std::uint64_t>> columns_;
    std::vector<std::uint64_t> shifts_;
};

}  // namespace cqmc

#endif  // CQMC_SCRAMBLE_HPP
