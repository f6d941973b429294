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

#include "cqmc/field.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <utility>

namespace cqmc {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

PrimeBase::PrimeBase(std::uint32_t b) : b_(b) {
    if (b < 2 || b > kMaxPrime || !is_prime(b))
        throw std::invalid_argument("PrimeBase: " + std::to_string(b) + " is not a prime in [2, 64]");
}

Digit PrimeBase::inv(Digit a) const {
    if (a % b_ == 0) throw std::domain_error("PrimeBase::inv: zero has no inverse");
    // a^(b-2) by square and multiply
    Digit result = 1, base = a;
    for (std::uint32_t e = b_ - 2; e != 0; e >>= 1) {
        if (e & 1U) result = mul(result, base);
        base = mul(base, base);
    }
    return result;
}

FieldMatrix::FieldMatrix(PrimeBase base, std::size_t rows, std::size_t cols)
    : base_(base), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

FieldMatrix::FieldMatrix(PrimeBase base, std::size_t rows, std::size_t cols, std::vector<Digit> entries)
    : base_(base), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) throw std::invalid_argument("FieldMatrix: entry count != rows * cols");
    for (Digit v : entries_)
        if (v >= base_.value()) throw std::invalid_argument("FieldMatrix: entry out of range for the field");
}

FieldMatrix FieldMatrix::identity(PrimeBase base, std::size_t n) {
    FieldMatrix m(base, n, n);
    for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
    return m;
}

void FieldMatrix::set(std::size_t i, std::size_t j, Digit v) {
    if (v >= base_.value()) throw std::invalid_argument("FieldMatrix::set: entry out of range for the field");
    entries_[i * cols_ + j] = v;
}

FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.base() != b.base()) throw std::invalid_argument("FieldMatrix product: mismatched fields");
    if (a.cols() != b.rows()) throw std::invalid_argument("FieldMatrix product: shape mismatch");
    const std::uint32_t p = a.base().value();
    std::vector<Digit> out(a.rows() * b.cols());
    std::vector<std::uint32_t> acc(b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::fill(acc.begin(), acc.end(), 0U);
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const std::uint32_t s = a(i, l);
            if (s == 0) continue;
            auto brow = b.row(l);
            for (std::size_t j = 0; j < b.cols(); ++j) acc[j] = (acc[j] + s * brow[j]) % p;
        }
        for (std::size_t j = 0; j < b.cols(); ++j) out[i * b.cols() + j] = Digit(acc[j]);
    }
    return FieldMatrix(a.base(), a.rows(), b.cols(), std::move(out));
}

std::vector<Digit> multiply(const FieldMatrix& a, std::span<const Digit> x) {
    if (x.size() != a.cols()) throw std::invalid_argument("multiply: vector length != matrix columns");
    const std::uint32_t p = a.base().value();
    std::vector<Digit> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        std::uint32_t acc = 0;
        for (std::size_t j = 0; j < r.size(); ++j) acc = (acc + std::uint32_t(r[j]) * x[j]) % p;
        y[i] = Digit(acc);
    }
    return y;
}

std::size_t rank(const FieldMatrix& a) {
    const PrimeBase f = a.base();
    std::vector<Digit> m = a.entries();
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot * cols + c] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m[pivot * cols + j], m[r * cols + j]);
        const Digit inv = f.inv(m[r * cols + c]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            const Digit factor = f.mul(m[i * cols + c], inv);
            if (factor == 0) continue;
            for (std::size_t j = c; j < cols; ++j) m[i * cols + j] = f.sub(m[i * cols + j], f.mul(factor, m[r * cols + j]));
        }
        ++r;
    }
    return r;
}

bool is_invertible(const FieldMatrix& a) { return a.rows() == a.cols() && rank(a) == a.rows(); }

FieldMatrix random_nonsingular(PrimeBase base, std::size_t e, KeyedStream& rng) {
    if (e == 0) throw std::invalid_argument("random_nonsingular: size must be >= 1");
    std::vector<Digit> entries(e * e);
    for (;;) {
        for (Digit& v : entries) v = Digit(rng.below(base.value()));
        FieldMatrix m(base, e, e, entries);
        if (is_invertible(m)) return m;
    }
}

std::vector<FieldMatrix> all_nonsingular(PrimeBase base, std::size_t e) {
    const std::size_t cells = e * e;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < cells; ++i) {
        total *= base.value();
        if (total > (std::uint64_t{1} << 24)) throw std::invalid_argument("all_nonsingular: too many candidates");
    }
    std::vector<FieldMatrix> out;
    std::vector<Digit> entries(cells);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (std::size_t i = cells; i-- > 0;) {
            entries[i] = Digit(c % base.value());
            c /= base.value();
        }
        FieldMatrix m(base, e, e, entries);
        if (is_invertible(m)) out.push_back(std::move(m));
    }
    return out;
}

namespace gf2 {

std::uint64_t pack(std::span<const Digit> digits) {
    if (digits.size() > 64) throw std::invalid_argument("gf2::pack: more than 64 digits");
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < digits.size(); ++i)
        if (digits[i] & 1U) w |= digit_mask(i);
    return w;
}

std::vector<Digit> unpack(std::uint64_t word, std::size_t count) {
    std::vector<Digit> d(count);
    for (std::size_t i = 0; i < count; ++i) d[i] = (word & digit_mask(i)) ? 1 : 0;
    return d;
}

PackedRows::PackedRows(const FieldMatrix& m) : cols(m.cols()), rows(m.rows()) {
    if (m.base().value() != 2) throw std::invalid_argument("gf2::PackedRows: matrix is not over F_2");
    if (m.cols() > 64 || m.rows() > 64) throw std::invalid_argument("gf2::PackedRows: more than 64 rows or columns");
    for (std::size_t i = 0; i < m.rows(); ++i) rows[i] = pack(m.row(i));
}

std::uint64_t PackedRows::apply(std::uint64_t x) const {
    std::uint64_t y = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (std::popcount(rows[i] & x) & 1) y |= digit_mask(i);
    return y;
}

std::vector<std::uint64_t> packed_columns(const FieldMatrix& m) {
    if (m.base().value() != 2) throw std::invalid_argument("gf2::packed_columns: matrix is not over F_2");
    if (m.rows() > 64) throw std::invalid_argument("gf2::packed_columns: more than 64 rows");
    std::vector<std::uint64_t> cols(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j)) cols[j] |= digit_mask(i);
    return cols;
}

}  // namespace gf2

}  // namespace cqmc
