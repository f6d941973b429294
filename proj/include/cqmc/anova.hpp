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


#ifndef CQMC_ANOVA_HPP
#define CQMC_ANOVA_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "cqmc/equidist.hpp"
#include "cqmc/mixed_base.hpp"
#include "cqmc/rational.hpp"

namespace cqmc {

enum class Provenance { exact_cell_constant, sampled };

namespace detail {

inline std::uint64_t grid_side(const BaseComponent& c, unsigned level) {
    std::uint64_t s = 1;
    const std::uint64_t r = c.radix();
    for (unsigned i = 0; i < level; ++i) {
        if (s > (std::uint64_t{1} << 40) / r) throw std::length_error("grid: too many cells");
        s *= r;
    }
    return s;
}

template <class Scalar>
Scalar from_count(std::uint64_t n) {
    return Scalar(static_cast<std::int64_t>(n));
}

}  // namespace detail

/**
 * A function on [0,1)^d given by its averages on the cells of the product
 * grid prod_j b_j^{L_j}. Values are row-major with coordinate 1 slowest and
 * cell a_j covering [a_j / b_j^{L_j}, (a_j + 1) / b_j^{L_j}).
 */
template <class Scalar>
class GridFunction {
public:
    GridFunction(MixedBase base, std::vector<unsigned> levels, std::vector<Scalar> values,
                 Provenance provenance = Provenance::exact_cell_constant)
        : base_(std::move(base)), levels_(std::move(levels)), values_(std::move(values)), provenance_(provenance) {
        if (levels_.size() != base_.size()) throw std::invalid_argument("GridFunction: one level per coordinate required");
        std::uint64_t n = 1;
        for (std::size_t j = 0; j < levels_.size(); ++j) {
            sides_.push_back(detail::grid_side(base_[j], levels_[j]));
            if (n > (std::uint64_t{1} << 40) / sides_.back()) throw std::length_error("GridFunction: too many cells");
            n *= sides_.back();
        }
        if (values_.size() != n) throw std::invalid_argument("GridFunction: value count must equal the cell count");
    }

    const MixedBase& base() const { return base_; }
    const std::vector<unsigned>& levels() const { return levels_; }
    const std::vector<Scalar>& values() const { return values_; }
    Provenance provenance() const { return provenance_; }
    std::size_t dimension() const { return base_.size(); }
    std::uint64_t size() const { return values_.size(); }
    /// b_j^{L_j}
    std::uint64_t side(std::size_t j) const { return sides_[j]; }

    std::uint64_t cell_of(const DigitPoint& x) const {
        return flat_cell(cell_index(x, levels_, base_), levels_, base_);
    }
    const Scalar& operator()(const DigitPoint& x) const { return values_[cell_of(x)]; }

    Scalar mean() const {
        Scalar s(0);
        for (const auto& v : values_) s += v;
        return s / detail::from_count<Scalar>(values_.size());
    }
    Scalar variance() const {
        const Scalar mu = mean();
        Scalar s(0);
        for (const auto& v : values_) s += (v - mu) * (v - mu);
        return s / detail::from_count<Scalar>(values_.size());
    }

    /// The same function read in the usual base: exponents 1, levels e_j L_j.
    GridFunction as_usual() const {
        std::vector<unsigned> levels;
        for (std::size_t j = 0; j < levels_.size(); ++j) levels.push_back(levels_[j] * base_[j].exponent);
        return GridFunction(base_.usual(), std::move(levels), values_, provenance_);
    }

    /// The same values read in a coarser common-prime base; levels are divided by e_j.
    GridFunction as_coarse(std::span<const std::uint32_t> exponents) const {
        if (!base_.digital() || exponents.size() != levels_.size())
            throw std::invalid_argument("GridFunction::as_coarse: needs a common prime and one exponent per coordinate");
        std::vector<unsigned> levels;
        for (std::size_t j = 0; j < levels_.size(); ++j) {
            const unsigned digits = levels_[j] * base_[j].exponent;
            if (exponents[j] == 0 || digits % exponents[j] != 0)
                throw std::invalid_argument("GridFunction::as_coarse: levels are not whole blocks");
            levels.push_back(digits / exponents[j]);
        }
        return GridFunction(MixedBase::coarse(base_.common_prime(), exponents), std::move(levels), values_, provenance_);
    }

private:
    MixedBase base_;
    std::vector<unsigned> levels_;
    std::vector<Scalar> values_;
    Provenance provenance_;
    std::vector<std::uint64_t> sides_;
};

inline GridFunction<double> to_double(const GridFunction<Rational>& f) {
    std::vector<double> v;
    v.reserve(f.size());
    for (const auto& r : f.values()) v.push_back(r.to_double());
    return GridFunction<double>(f.base(), f.levels(), std::move(v), f.provenance());
}

struct QuadratureGrid {
    GridFunction<double> grid;
    /// max over cells of |8-node average - 16-node average|
    double error_estimate = 0.0;
};

namespace detail {

template <int N>
double cell_average(const std::function<double(std::span<const double>)>& f, std::span<const double> lo,
                    std::span<const double> hi) {
    const std::size_t d = lo.size();
    std::vector<double> x(d);
    std::function<double(std::size_t)> nest = [&](std::size_t j) -> double {
        if (j == d) return f(x);
        auto inner = [&](double t) {
            x[j] = t;
            return nest(j + 1);
        };
        return boost::math::quadrature::gauss<double, N>::integrate(inner, lo[j], hi[j]) / (hi[j] - lo[j]);
    };
    return nest(0);
}

}  // namespace detail

/// Cell averages of a callback by tensor Gauss-Legendre quadrature with 8
/// nodes per axis; the 16-node rule supplies the error estimate.
inline QuadratureGrid quadrature_grid(MixedBase base, std::vector<unsigned> levels,
                                      const std::function<double(std::span<const double>)>& f) {
    const std::size_t d = base.size();
    if (levels.size() != d) throw std::invalid_argument("quadrature_grid: one level per coordinate required");
    std::vector<std::uint64_t> sides;
    std::uint64_t n = 1;
    for (std::size_t j = 0; j < d; ++j) {
        sides.push_back(detail::grid_side(base[j], levels[j]));
        n *= sides.back();
    }
    std::vector<double> values(n);
    std::vector<double> lo(d), hi(d);
    double err = 0.0;
    for (std::uint64_t c = 0; c < n; ++c) {
        std::uint64_t rest = c;
        for (std::size_t j = d; j-- > 0;) {
            const std::uint64_t a = rest % sides[j];
            rest /= sides[j];
            lo[j] = double(a) / double(sides[j]);
            hi[j] = double(a + 1) / double(sides[j]);
        }
        values[c] = detail::cell_average<8>(f, lo, hi);
        err = std::max(err, std::abs(values[c] - detail::cell_average<16>(f, lo, hi)));
    }
    return {GridFunction<double>(std::move(base), std::move(levels), std::move(values), Provenance::sampled), err};
}

template <class Scalar>
struct SigmaEntry {
    std::vector<std::size_t> u;
    std::vector<unsigned> k;
    Scalar sigma2;
};

template <class Scalar>
struct SigmaTable {
    std::vector<SigmaEntry<Scalar>> entries;

    Scalar total() const {
        Scalar s(0);
        for (const auto& e : entries) s += e.sigma2;
        return s;
    }
    /// Zero for keys outside the table (resolutions past the grid levels).
    Scalar at(const std::vector<std::size_t>& u, const std::vector<unsigned>& k) const {
        for (const auto& e : entries)
            if (e.u == u && e.k == k) return e.sigma2;
        return Scalar(0);
    }
};

/**
 * Nested ANOVA decomposition of a grid function in its own base. u holds
 * 0-based coordinates in increasing order; k holds one resolution per member
 * of u; a subset v of u is a bitmask over positions in u.
 *
 * Box averages are cached per resolution vector, so one instance must not be
 * shared between threads.
 */
template <class Scalar>
class NestedAnova {
public:
    explicit NestedAnova(const GridFunction<Scalar>& f) : f_(f) {
        const std::size_t d = f_.dimension();
        coords_.assign(d, std::vector<std::uint64_t>(f_.size()));
        for (std::uint64_t c = 0; c < f_.size(); ++c) {
            std::uint64_t rest = c;
            for (std::size_t j = d; j-- > 0;) {
                coords_[j][c] = rest % f_.side(j);
                rest /= f_.side(j);
            }
        }
    }

    const GridFunction<Scalar>& function() const { return f_; }

    /// Averages of f over the boxes of resolution r (r_j <= L_j), row-major.
    const std::vector<Scalar>& box_means(const std::vector<unsigned>& r) const {
        auto it = cache_.find(r);
        if (it != cache_.end()) return it->second;
        const std::size_t d = f_.dimension();
        std::vector<std::uint64_t> radix(d), div(d);
        std::uint64_t boxes = 1;
        for (std::size_t j = 0; j < d; ++j) {
            if (r[j] > f_.levels()[j]) throw std::out_of_range("NestedAnova: resolution beyond the grid");
            radix[j] = detail::grid_side(f_.base()[j], r[j]);
            div[j] = f_.side(j) / radix[j];
            boxes *= radix[j];
        }
        std::vector<Scalar> sums(boxes, Scalar(0));
        for (std::uint64_t c = 0; c < f_.size(); ++c) sums[box_of(c, radix, div)] += f_.values()[c];
        const Scalar per_box = detail::from_count<Scalar>(f_.size() / boxes);
        for (auto& s : sums) s /= per_box;
        return cache_.emplace(r, std::move(sums)).first->second;
    }

    /// Resolution vector of BOX_{u,v,k}, clamped at the grid levels.
    std::vector<unsigned> resolution(const std::vector<std::size_t>& u, std::uint64_t v, const std::vector<unsigned>& k) const {
        check(u, k);
        std::vector<unsigned> r(f_.dimension(), 0);
        for (std::size_t a = 0; a < u.size(); ++a)
            r[u[a]] = std::min(k[a] + unsigned((v >> a) & 1U), f_.levels()[u[a]]);
        return r;
    }

    Scalar tilde_beta_cell(const std::vector<std::size_t>& u, std::uint64_t v, const std::vector<unsigned>& k,
                           std::uint64_t cell) const {
        const auto r = resolution(u, v, k);
        const auto& means = box_means(r);
        std::vector<std::uint64_t> radix, div;
        split(r, radix, div);
        return means[box_of(cell, radix, div)];
    }

    Scalar tilde_beta(const std::vector<std::size_t>& u, std::uint64_t v, const std::vector<unsigned>& k,
                      const DigitPoint& x) const {
        return tilde_beta_cell(u, v, k, f_.cell_of(x));
    }

    /// beta_{u,k} on every cell of the grid.
    std::vector<Scalar> beta_on_grid(const std::vector<std::size_t>& u, const std::vector<unsigned>& k) const {
        check(u, k);
        std::vector<Scalar> out(f_.size(), Scalar(0));
        const std::uint64_t subsets = std::uint64_t{1} << u.size();
        for (std::uint64_t v = 0; v < subsets; ++v) {
            const bool negative = (u.size() - std::size_t(std::popcount(v))) % 2 == 1;
            const auto r = resolution(u, v, k);
            const auto& means = box_means(r);
            std::vector<std::uint64_t> radix, div;
            split(r, radix, div);
            for (std::uint64_t c = 0; c < f_.size(); ++c) {
                const Scalar& m = means[box_of(c, radix, div)];
                if (negative)
                    out[c] -= m;
                else
                    out[c] += m;
            }
        }
        return out;
    }

    Scalar beta(const std::vector<std::size_t>& u, const std::vector<unsigned>& k, const DigitPoint& x) const {
        check(u, k);
        const std::uint64_t cell = f_.cell_of(x);
        Scalar s(0);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << u.size()); ++v) {
            const Scalar t = tilde_beta_cell(u, v, k, cell);
            if ((u.size() - std::size_t(std::popcount(v))) % 2 == 1)
                s -= t;
            else
                s += t;
        }
        return s;
    }

    /// Var beta_{u,k}: the grid mean of beta^2 (beta has mean zero for nonempty u).
    Scalar sigma2(const std::vector<std::size_t>& u, const std::vector<unsigned>& k) const {
        const auto b = beta_on_grid(u, k);
        Scalar s(0);
        for (const auto& x : b) s += x * x;
        return s / detail::from_count<Scalar>(b.size());
    }

    /// sigma^2_{u,k} for every nonempty u and every k with k_j < L_j.
    SigmaTable<Scalar> sigma_table() const {
        SigmaTable<Scalar> table;
        const std::size_t d = f_.dimension();
        if (d > 20) throw std::length_error("sigma_table: too many coordinates");
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
            std::vector<std::size_t> u;
            bool empty = false;
            for (std::size_t j = 0; j < d; ++j)
                if ((mask >> j) & 1U) {
                    u.push_back(j);
                    if (f_.levels()[j] == 0) empty = true;
                }
            if (empty) continue;
            std::vector<unsigned> k(u.size(), 0);
            for (;;) {
                table.entries.push_back({u, k, sigma2(u, k)});
                std::size_t a = 0;
                while (a < u.size() && ++k[a] == f_.levels()[u[a]]) k[a++] = 0;
                if (a == u.size()) break;
            }
        }
        return table;
    }

private:
    void check(const std::vector<std::size_t>& u, const std::vector<unsigned>& k) const {
        if (u.size() != k.size()) throw std::invalid_argument("NestedAnova: one resolution per coordinate of u required");
        for (std::size_t a = 0; a < u.size(); ++a) {
            if (u[a] >= f_.dimension()) throw std::out_of_range("NestedAnova: coordinate outside the grid");
            if (a > 0 && u[a] <= u[a - 1]) throw std::invalid_argument("NestedAnova: u must be strictly increasing");
        }
    }

    void split(const std::vector<unsigned>& r, std::vector<std::uint64_t>& radix, std::vector<std::uint64_t>& div) const {
        radix.resize(r.size());
        div.resize(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) {
            radix[j] = detail::grid_side(f_.base()[j], r[j]);
            div[j] = f_.side(j) / radix[j];
        }
    }

    std::uint64_t box_of(std::uint64_t cell, const std::vector<std::uint64_t>& radix, const std::vector<std::uint64_t>& div) const {
        std::uint64_t b = 0;
        for (std::size_t j = 0; j < radix.size(); ++j) b = b * radix[j] + coords_[j][cell] / div[j];
        return b;
    }

    const GridFunction<Scalar>& f_;
    std::vector<std::vector<std::uint64_t>> coords_;
    mutable std::map<std::vector<unsigned>, std::vector<Scalar>> cache_;
};

/// Digitwise x ⊖ y in base b: digit i is (x_i - y_i) mod b.
inline DigitCoordinate digit_subtract(const DigitCoordinate& x, const DigitCoordinate& y) {
    if (x.prime != y.prime || x.digits.size() != y.digits.size())
        throw std::invalid_argument("digit_subtract: operands differ in base or precision");
    DigitCoordinate z{x.prime, std::vector<Digit>(x.digits.size())};
    for (std::size_t i = 0; i < z.digits.size(); ++i) z.digits[i] = Digit((x.digits[i] + x.prime - y.digits[i]) % x.prime);
    return z;
}

/// wal_h(x) = exp(2 pi i / b * sum_i eta_i xi_{i+1}), eta_i the base-b digits of h (least significant first).
inline std::complex<double> walsh(std::uint64_t h, const DigitCoordinate& x) {
    const std::uint32_t b = x.prime;
    std::uint64_t phase = 0;
    for (std::size_t i = 0; h != 0; ++i, h /= b) {
        const std::uint64_t eta = h % b;
        if (eta != 0 && i < x.digits.size()) phase += eta * x.digits[i];
    }
    const double angle = 2.0 * std::numbers::pi * double(phase % b) / double(b);
    return {std::cos(angle), std::sin(angle)};
}

/**
 * Walsh coefficients of a grid function in a common prime base b with
 * exponents 1, and the Walsh-series ANOVA components
 * beta'_l(x) = sum_{h in L_l} fhat(h) wal_h(x).
 */
class WalshAnova {
public:
    explicit WalshAnova(const GridFunction<double>& f) : f_(f) {
        const MixedBase& base = f_.base();
        if (!base.digital()) throw std::invalid_argument("WalshAnova: needs a common prime base");
        for (const auto& c : base.components())
            if (c.exponent != 1) throw std::invalid_argument("WalshAnova: base must have exponents 1");
        b_ = base.common_prime();
        const std::size_t d = f_.dimension();
        std::vector<DigitPoint> corners(f_.size());
        for (std::uint64_t c = 0; c < f_.size(); ++c) corners[c] = corner(c);
        coeffs_.assign(f_.size(), {0.0, 0.0});
        std::vector<std::uint64_t> h(d);
        for (std::uint64_t hc = 0; hc < f_.size(); ++hc) {
            unflatten(hc, h);
            std::complex<double> s{0.0, 0.0};
            for (std::uint64_t c = 0; c < f_.size(); ++c) s += f_.values()[c] * std::conj(wal(h, corners[c]));
            coeffs_[hc] = s / double(f_.size());
        }
    }

    /// fhat(h) for h_j < b^{L_j}; zero beyond the grid.
    std::complex<double> coefficient(std::span<const std::uint64_t> h) const {
        std::uint64_t flat = 0;
        for (std::size_t j = 0; j < h.size(); ++j) {
            if (h[j] >= f_.side(j)) return {0.0, 0.0};
            flat = flat * f_.side(j) + h[j];
        }
        return coeffs_[flat];
    }

    std::complex<double> beta(std::span<const unsigned> l, const DigitPoint& x) const {
        const std::size_t d = f_.dimension();
        if (l.size() != d) throw std::invalid_argument("WalshAnova::beta: one level per coordinate required");
        std::vector<std::uint64_t> lo(d), hi(d);
        for (std::size_t j = 0; j < d; ++j) {
            if (l[j] > f_.levels()[j]) return {0.0, 0.0};
            lo[j] = l[j] == 0 ? 0 : power(l[j] - 1);
            hi[j] = l[j] == 0 ? 1 : power(l[j]);
        }
        std::complex<double> s{0.0, 0.0};
        std::vector<std::uint64_t> h(lo);
        for (;;) {
            s += coefficient(h) * wal(h, x);
            std::size_t j = 0;
            while (j < d && ++h[j] == hi[j]) h[j] = lo[j], ++j;
            if (j == d) break;
        }
        return s;
    }

    std::complex<double> wal(std::span<const std::uint64_t> h, const DigitPoint& x) const {
        std::complex<double> w{1.0, 0.0};
        for (std::size_t j = 0; j < h.size(); ++j) w *= walsh(h[j], x[j]);
        return w;
    }

    /// Lower-left corner of a grid cell as digits.
    DigitPoint corner(std::uint64_t cell) const {
        std::vector<std::uint64_t> a(f_.dimension());
        unflatten(cell, a);
        DigitPoint x;
        for (std::size_t j = 0; j < a.size(); ++j) x.coords.push_back(coordinate_from_integer(b_, a[j], f_.levels()[j]));
        return x;
    }

private:
    std::uint64_t power(unsigned e) const {
        std::uint64_t r = 1;
        for (unsigned i = 0; i < e; ++i) r *= b_;
        return r;
    }

    void unflatten(std::uint64_t flat, std::vector<std::uint64_t>& out) const {
        for (std::size_t j = out.size(); j-- > 0;) {
            out[j] = flat % f_.side(j);
            flat /= f_.side(j);
        }
    }

    const GridFunction<double>& f_;
    std::uint32_t b_ = 2;
    std::vector<std::complex<double>> coeffs_;
};

/// Grid CSV: header rows "primes,...", "exponents,...", "levels,...", then the
/// cell values row-major (coordinate 1 slowest), any number per line.
GridFunction<Rational> read_grid(std::istream& in);
void write_grid(std::ostream& out, const GridFunction<Rational>& f);

/// CSV with columns u,k,sigma2,sigma2_value; u and k use ';' between entries.
void write_sigma_table(std::ostream& out, const SigmaTable<Rational>& table);

}  // namespace cqmc

#endif  // CQMC_ANOVA_HPP
