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


#include "cqmc/scramble.hpp"

#include <stdexcept>

namespace cqmc {

ScrambleMode parse_scramble_mode(const std::string& name) {
    if (name == "none") return ScrambleMode::none;
    if (name == "usual") return ScrambleMode::usual;
    if (name == "coarse") return ScrambleMode::coarse;
    throw std::invalid_argument("unknown scramble mode '" + name + "'");
}

std::string to_string(ScrambleMode mode) {
    switch (mode) {
        case ScrambleMode::none: return "none";
        case ScrambleMode::usual: return "usual";
        case ScrambleMode::coarse: return "coarse";
    }
    return "?";
}

DimensionScramble::DimensionScramble(FieldMatrix matrix, std::vector<Digit> shift, std::size_t block)
    : matrix_(std::move(matrix)), shift_(std::move(shift)), block_(block) {
    const std::size_t k = shift_.size();
    if (block_ == 0) throw std::invalid_argument("DimensionScramble: block size must be >= 1");
    if (matrix_.rows() != k || matrix_.cols() != k) throw std::invalid_argument("DimensionScramble: matrix must be K x K");
    if (k % block_ != 0) throw std::invalid_argument("DimensionScramble: precision is not a whole number of blocks");
    const PrimeBase f = matrix_.base();
    for (Digit s : shift_)
        if (s >= f.value()) throw std::invalid_argument("DimensionScramble: shift digit out of range");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = (i / block_ + 1) * block_; l < k; ++l)
            if (matrix_(i, l) != 0) throw std::invalid_argument("DimensionScramble: matrix is not block lower-triangular");
    for (std::size_t t = 0; t < k; t += block_) {
        FieldMatrix diag(f, block_, block_);
        for (std::size_t i = 0; i < block_; ++i)
            for (std::size_t l = 0; l < block_; ++l) diag.set(i, l, matrix_(t + i, t + l));
        if (!is_invertible(diag)) throw std::invalid_argument("DimensionScramble: singular diagonal block");
    }
    if (f.value() == 2 && k <= 64) {
        rows_.emplace(matrix_);
        packed_shift_ = gf2::pack(shift_);
    }
}

DigitCoordinate DimensionScramble::apply_naive(const DigitCoordinate& x) const {
    if (x.prime != prime()) throw std::invalid_argument("DimensionScramble::apply: base mismatch");
    if (x.digits.size() != precision()) throw std::invalid_argument("DimensionScramble::apply: precision mismatch");
    std::vector<Digit> y = multiply(matrix_, x.digits);
    const PrimeBase f = matrix_.base();
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = f.add(y[i], shift_[i]);
    return {x.prime, std::move(y)};
}

DigitCoordinate DimensionScramble::apply(const DigitCoordinate& x) const {
    if (!packed()) return apply_naive(x);
    if (x.prime != prime()) throw std::invalid_argument("DimensionScramble::apply: base mismatch");
    if (x.digits.size() != precision()) throw std::invalid_argument("DimensionScramble::apply: precision mismatch");
    return {x.prime, gf2::unpack(apply_packed(gf2::pack(x.digits)), precision())};
}

DigitPoint ScrambleState::apply(const DigitPoint& x) const {
    if (mode == ScrambleMode::none) return x;
    if (x.dimension() != dims.size()) throw std::invalid_argument("ScrambleState::apply: dimension mismatch");
    DigitPoint y;
    y.coords.reserve(dims.size());
    for (std::size_t j = 0; j < dims.size(); ++j) y.coords.push_back(dims[j].apply(x[j]));
    return y;
}

DigitPoint apply(const ScrambleState& state, const DigitPoint& x) { return state.apply(x); }

DimensionScramble sample_block_affine(PrimeBase field, std::size_t precision, std::size_t block, std::uint64_t seed,
                                      std::uint64_t rep, std::size_t dim) {
    if (block == 0 || precision % block != 0)
        throw std::invalid_argument("sample_block_affine: precision must be a positive multiple of the block size");
    const std::uint32_t b = field.value();
    FieldMatrix m(field, precision, precision);
    std::vector<Digit> shift(precision);
    for (std::size_t t = 0; t < precision; t += block) {
        KeyedStream rng{seed, rep, std::uint64_t(dim), std::uint64_t(t / block)};
        const FieldMatrix diag = random_nonsingular(field, block, rng);
        for (std::size_t i = 0; i < block; ++i) {
            for (std::size_t l = 0; l < t; ++l) m.set(t + i, l, Digit(rng.below(b)));
            for (std::size_t l = 0; l < block; ++l) m.set(t + i, t + l, diag(i, l));
        }
        for (std::size_t i = 0; i < block; ++i) shift[t + i] = Digit(rng.below(b));
    }
    return DimensionScramble(std::move(m), std::move(shift), block);
}

DimensionScramble sample_usual(const MixedBase& base, std::span<const std::size_t> precision, std::uint64_t seed,
                               std::uint64_t rep, std::size_t dim) {
    if (dim >= base.size() || dim >= precision.size()) throw std::out_of_range("sample_usual: dimension out of range");
    return sample_block_affine(PrimeBase(base[dim].prime), precision[dim], 1, seed, rep, dim);
}

DimensionScramble sample_coarse(const MixedBase& base, std::span<const std::size_t> precision, std::uint64_t seed,
                                std::uint64_t rep, std::size_t dim) {
    if (!base.digital()) throw std::invalid_argument("sample_coarse: coarse scrambling needs a common prime");
    if (dim >= base.size() || dim >= precision.size()) throw std::out_of_range("sample_coarse: dimension out of range");
    const std::size_t e = base[dim].exponent;
    const std::size_t k = e * ((precision[dim] + e - 1) / e);
    return sample_block_affine(PrimeBase(base[dim].prime), k, e, seed, rep, dim);
}

ScrambleState sample_state(ScrambleMode mode, const MixedBase& base, std::span<const std::size_t> precision,
                           std::uint64_t seed, std::uint64_t rep) {
    if (precision.size() != base.size()) throw std::invalid_argument("sample_state: one precision per dimension required");
    ScrambleState s{mode, {}};
    if (mode == ScrambleMode::none) return s;
    if (mode == ScrambleMode::coarse && !base.digital())
        throw std::invalid_argument("sample_state: coarse scrambling needs a common prime");
    s.dims.reserve(base.size());
    for (std::size_t j = 0; j < base.size(); ++j)
        s.dims.push_back(mode == ScrambleMode::usual ? sample_usual(base, precision, seed, rep, j)
                                                     : sample_coarse(base, precision, seed, rep, j));
    return s;
}

ScrambledSequence::ScrambledSequence(const PointSequence& seq, ScrambleState state) : seq_(&seq), state_(std::move(state)) {
    const std::size_t d = seq.dimension();
    if (state_.mode != ScrambleMode::none) {
        if (state_.dims.size() != d) throw std::invalid_argument("ScrambledSequence: dimension mismatch");
        for (std::size_t j = 0; j < d; ++j) {
            if (state_.dims[j].prime() != seq.base()[j].prime)
                throw std::invalid_argument("ScrambledSequence: base mismatch");
            if (state_.dims[j].precision() < seq.precision()[j])
                throw std::invalid_argument("ScrambledSequence: scramble precision below sequence precision");
        }
    }
    const auto* digital = dynamic_cast<const DigitalSequence*>(&seq);
    if (digital == nullptr || !digital->packable()) return;
    for (const auto& s : state_.dims)
        if (!s.packed()) return;
    fast_ = true;
    columns_.resize(d);
    shifts_.assign(d, 0);
    for (std::size_t j = 0; j < d; ++j) {
        columns_[j] = digital->packed_columns(j);
        if (state_.mode == ScrambleMode::none) continue;
        const auto& s = state_.dims[j];
        for (auto& c : columns_[j]) c = s.packed_rows().apply(c);
        shifts_[j] = s.packed_shift();
    }
}

DigitPoint ScrambledSequence::point(std::uint64_t k) const {
    DigitPoint x = seq_->point(k);
    if (state_.mode == ScrambleMode::none) return x;
    for (std::size_t j = 0; j < x.dimension(); ++j) x[j].digits.resize(state_.dims[j].precision(), 0);
    return state_.apply(x);
}

void ScrambledSequence::values(std::uint64_t k, std::span<double> out) const {
    if (out.size() != dimension()) throw std::invalid_argument("ScrambledSequence::values: output size mismatch");
    if (!fast_) {
        const DigitPoint x = point(k);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = x[j].value();
        return;
    }
    if (k >= seq_->capacity()) throw std::out_of_range("ScrambledSequence::values: index exceeds capacity");
    for (std::size_t j = 0; j < out.size(); ++j) {
        std::uint64_t w = shifts_[j];
        const auto& cols = columns_[j];
        for (std::uint64_t rest = k, r = 0; rest != 0; rest >>= 1, ++r)
            if (rest & 1U) w ^= cols[r];
        out[j] = double(w >> 11) * 0x1.0p-53;
    }
}

}  // namespace cqmc
