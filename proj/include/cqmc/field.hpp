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

#ifndef CQMC_FIELD_HPP
#define CQMC_FIELD_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cqmc/keyed_rng.hpp"

namespace cqmc {

using Digit = std::uint8_t;

bool is_prime(std::uint64_t n);

/// Prime field F_b with 2 <= b <= 64. Elements are the integers 0..b-1, so the
/// digit bijection is the identity.
class PrimeBase {
public:
    static constexpr std::uint32_t kMaxPrime = 64;

    explicit PrimeBase(std::uint32_t b);

    std::uint32_t value() const { return b_; }

    Digit add(Digit a, Digit c) const { return Digit((a + c) % b_); }
    Digit sub(Digit a, Digit c) const { return Digit((a + b_ - c) % b_); }
    Digit mul(Digit a, Digit c) const { return Digit((std::uint32_t(a) * c) % b_); }
    Digit neg(Digit a) const { return Digit((b_ - a) % b_); }
    Digit inv(Digit a) const;

    friend bool operator==(PrimeBase, PrimeBase) = default;

private:
    std::uint32_t b_;
};

/// Dense matrix over F_b, row-major bytes.
class FieldMatrix {
public:
    FieldMatrix(PrimeBase base, std::size_t rows, std::size_t cols);
    FieldMatrix(PrimeBase base, std::size_t rows, std::size_t cols, std::vector<Digit> entries);

    static FieldMatrix identity(PrimeBase base, std::size_t n);

    PrimeBase base() const { return base_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Digit operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, Digit v);

    std::span<const Digit> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }
    const std::vector<Digit>& entries() const { return entries_; }

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    PrimeBase base_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Digit> entries_;
};

FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b);

/// y = A x over F_b. x.size() must equal A.cols().
std::vector<Digit> multiply(const FieldMatrix& a, std::span<const Digit> x);

std::size_t rank(const FieldMatrix& a);
bool is_invertible(const FieldMatrix& a);

/// Uniform sample from GL(e, F_b) by rejection: draw i.i.d. uniform entries
/// until the matrix is nonsingular.
FieldMatrix random_nonsingular(PrimeBase base, std::size_t e, KeyedStream& rng);

/// All e x e nonsingular matrices over F_b, in lexicographic order of entries.
/// Only intended for tiny e (b^(e*e) candidates are scanned).
std::vector<FieldMatrix> all_nonsingular(PrimeBase base, std::size_t e);

namespace gf2 {

/// Digit i (0-based, most significant first) of a packed base-2 vector lives at
/// bit 63 - i, so the word read as a fraction of 2^64 is the point's value.
constexpr std::uint64_t digit_mask(std::size_t i) { return std::uint64_t{1} << (63 - i); }

std::uint64_t pack(std::span<const Digit> digits);
std::vector<Digit> unpack(std::uint64_t word, std::size_t count);

/// Matrix over F_2 with at most 64 columns, one packed word per row.
struct PackedRows {
    std::size_t cols = 0;
    std::vector<std::uint64_t> rows;

    explicit PackedRows(const FieldMatrix& m);

    /// y_i = parity(row_i & x), packed in the same layout.
    std::uint64_t apply(std::uint64_t x) const;
};

/// Columns of a matrix over F_2 with at most 64 rows, one packed word per column.
std::vector<std::uint64_t> packed_columns(const FieldMatrix& m);

}  // namespace gf2

}  // namespace cqmc

#endif  // CQMC_FIELD_HPP
