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

#ifndef CQMC_SEQUENCES_HPP
#define CQMC_SEQUENCES_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cqmc/field.hpp"
#include "cqmc/mixed_base.hpp"
#include "cqmc/polynomial.hpp"

namespace cqmc {

/// First `count` coefficients a_1, a_2, ... of y / p^t in F_b((1/x)), where
/// y / p^t = sum_r a_r x^-r. Requires deg y < t * deg p.
std::vector<Digit> laurent_coefficients(const Polynomial& y, const Polynomial& p, unsigned t, std::size_t count);

/**
 * Generating matrices of the generalized Niederreiter sequence.
 *
 * Row k (1-based, output digit) of C_j holds the Laurent coefficients of
 * x^(t e - k) / p_j^t with e = deg p_j and t = ceil(k / e); column r is the
 * r-th input digit. Polynomials must be monic and pairwise coprime.
 */
std::vector<FieldMatrix> niederreiter_matrices(std::span<const Polynomial> polys, std::span<const std::size_t> rows,
                                               std::size_t cols);
std::vector<FieldMatrix> niederreiter_matrices(std::span<const Polynomial> polys, std::size_t rows, std::size_t cols);

/// [x] followed by the primitive polynomials over F_2 by degree, ascending code within a degree.
std::vector<Polynomial> sobol_polys(std::size_t d);
/// The first d monic irreducible polynomials over F_b by degree, ascending code within a degree.
std::vector<Polynomial> full_niederreiter_polys(std::size_t d, PrimeBase base);
/// The first d primes.
std::vector<std::uint32_t> first_primes(std::size_t d);

/// Digits of psi(C_j k) for each matrix; precision per dimension is the matrix row count.
DigitPoint digital_point(std::span<const FieldMatrix> matrices, std::uint64_t k, PrimeBase base);

/// Radical inverse of k in base primes[j] with precisions[j] digits.
DigitPoint halton_point(std::span<const std::uint32_t> primes, std::uint64_t k, std::span<const std::size_t> precisions);

/// K_j = e_j * ceil(bits / e_j) digits: at least `bits` digits, whole blocks.
std::vector<std::size_t> default_precision(std::span<const std::uint32_t> exponents, unsigned bits);

enum class Family { sobol, full_niederreiter, custom_niederreiter, halton };

Family parse_family(const std::string& name);
std::string to_string(Family f);

struct SequenceSpec {
    Family family = Family::sobol;
    std::size_t dimension = 1;
    /// Field prime for digital families.
    std::uint32_t base = 2;
    /// Base polynomials for custom_niederreiter.
    std::vector<Polynomial> polys;
    /// Resolution target in bits; converted to base-p digits and rounded up to whole blocks.
    unsigned precision = 32;
    /// Largest number of points that will be requested; sizes the matrices.
    std::uint64_t max_points = std::uint64_t{1} << 20;
};

/// A deterministic point sequence with exact digit output.
class PointSequence {
public:
    virtual ~PointSequence() = default;

    virtual DigitPoint point(std::uint64_t k) const = 0;

    /// The base in which the sequence is equidistributed: (b^{e_j}) for digital
    /// sequences, the primes for Halton.
    const MixedBase& base() const { return base_; }
    const std::vector<std::size_t>& precision() const { return precision_; }
    std::size_t dimension() const { return base_.size(); }
    /// Number of points addressable without wrapping.
    std::uint64_t capacity() const { return capacity_; }

    std::vector<DigitPoint> points(std::uint64_t n) const;

protected:
    MixedBase base_;
    std::vector<std::size_t> precision_;
    std::uint64_t capacity_ = 0;
};

class DigitalSequence final : public PointSequence {
public:
    DigitalSequence(PrimeBase field, std::vector<Polynomial> polys, std::vector<std::size_t> precision, std::uint64_t max_points);

    DigitPoint point(std::uint64_t k) const override;

    PrimeBase field() const { return field_; }
    const std::vector<Polynomial>& polys() const { return polys_; }
    const std::vector<FieldMatrix>& matrices() const { return matrices_; }

    /// Packed base-2 output: word j holds coordinate j as a 64-bit fraction.
    /// Only for b = 2 and precision <= 64.
    bool packable() const { return packable_; }
    void point_packed(std::uint64_t k, std::span<std::uint64_t> out) const;
    const std::vector<std::uint64_t>& packed_columns(std::size_t j) const { return columns_[j]; }

private:
    PrimeBase field_;
    std::vector<Polynomial> polys_;
    std::vector<FieldMatrix> matrices_;
    bool packable_ = false;
    std::vector<std::vector<std::uint64_t>> columns_;
};

class HaltonSequence final : public PointSequence {
public:
    HaltonSequence(std::vector<std::uint32_t> primes, std::vector<std::size_t> precision);

    DigitPoint point(std::uint64_t k) const override;
    const std::vector<std::uint32_t>& primes() const { return primes_; }

private:
    std::vector<std::uint32_t> primes_;
};

std::unique_ptr<PointSequence> make_sequence(const SequenceSpec& spec);

/// The base a spec's sequence is equidistributed in, without building matrices.
MixedBase resolve_base(const SequenceSpec& spec);

}  // namespace cqmc

#endif  // CQMC_SEQUENCES_HPP
