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


#include "cqmc/gain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

#include "cqmc/equidist.hpp"
#include "cqmc/keyed_rng.hpp"

namespace cqmc {

namespace {

int128 power128(int128 b, std::uint64_t e) {
    int128 r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = detail::checked_mul(r, b);
    return r;
}

GainQuery with_n(GainQuery q, std::uint64_t n) {
    q.n = n;
    return q;
}

std::string describe(const GainQuery& q) {
    std::string s = "u={";
    for (std::size_t i = 0; i < q.u.size(); ++i) s += (i ? "," : "") + std::to_string(q.u[i] + 1);
    s += "} k=(";
    for (std::size_t i = 0; i < q.k.size(); ++i) s += (i ? "," : "") + std::to_string(q.k[i]);
    return s + ") n=" + std::to_string(q.n);
}

/// Per point, cell coordinates at k_j (coarse) and k_j + 1 (fine) for j in u.
struct CellTable {
    std::vector<std::uint64_t> coarse;
    std::vector<std::uint64_t> fine;
    std::size_t width = 0;
};

CellTable tabulate(std::span<const DigitPoint> points, const GainQuery& q, const MixedBase& base) {
    CellTable t;
    t.width = q.u.size();
    t.coarse.resize(q.n * t.width);
    t.fine.resize(q.n * t.width);
    for (std::uint64_t i = 0; i < q.n; ++i) {
        const DigitPoint& x = points[i];
        if (x.dimension() != base.size()) throw std::invalid_argument("gain: point dimension differs from the base");
        for (std::size_t a = 0; a < t.width; ++a) {
            const std::size_t j = q.u[a];
            const auto& c = x[j];
            if (c.prime != base[j].prime) throw std::invalid_argument("gain: digit base differs from the cell base");
            const std::size_t e = base[j].exponent;
            const std::size_t fine_digits = e * (q.k[a] + 1);
            if (fine_digits > c.digits.size()) throw std::out_of_range("gain: resolution exceeds precision");
            const std::uint64_t f = c.leading(fine_digits);
            t.fine[i * t.width + a] = f;
            t.coarse[i * t.width + a] = f / base[j].radix();
        }
    }
    return t;
}

}  // namespace

void validate(const GainQuery& q, const MixedBase& base) {
    if (q.u.empty()) throw std::invalid_argument("gain: u must be nonempty");
    if (q.k.size() != q.u.size()) throw std::invalid_argument("gain: one resolution per coordinate of u required");
    if (q.u.size() > 62) throw std::invalid_argument("gain: u is too large");
    for (std::size_t i = 0; i < q.u.size(); ++i) {
        if (q.u[i] >= base.size()) throw std::out_of_range("gain: coordinate outside the base");
        if (i > 0 && q.u[i] <= q.u[i - 1]) throw std::invalid_argument("gain: u must be strictly increasing");
    }
    if (q.n == 0) throw std::invalid_argument("gain: n must be >= 1");
}

int128 volume(const GainQuery& q, const MixedBase& base, std::uint64_t v) {
    int128 m = 1;
    for (std::size_t a = 0; a < q.u.size(); ++a) {
        const std::uint64_t level = q.k[a] + ((v >> a) & 1U);
        m = detail::checked_mul(m, power128(int128(base[q.u[a]].radix()), level));
    }
    return m;
}

int128 h_coefficient(const GainQuery& q, const MixedBase& base, std::uint64_t v) {
    int128 h = 1;
    for (std::size_t a = 0; a < q.u.size(); ++a) h = ((v >> a) & 1U) ? h * int128(base[q.u[a]].radix()) : -h;
    return h;
}

int128 gain_denominator(const GainQuery& q, const MixedBase& base) {
    int128 den = int128(q.n);
    for (std::size_t j : q.u) den = detail::checked_mul(den, int128(base[j].radix() - 1));
    return den;
}

Rational gain_bruteforce(std::span<const DigitPoint> points, const GainQuery& q, const MixedBase& base) {
    validate(q, base);
    if (q.n > points.size()) throw std::invalid_argument("gain_bruteforce: fewer points than n");
    const CellTable t = tabulate(points, q, base);
    std::vector<int128> same_fine(t.width);
    for (std::size_t a = 0; a < t.width; ++a) same_fine[a] = int128(base[q.u[a]].radix()) - 1;
    int128 total = 0;
    for (std::uint64_t i = 0; i < q.n; ++i) {
        for (std::uint64_t i2 = 0; i2 < q.n; ++i2) {
            int128 prod = 1;
            for (std::size_t a = 0; a < t.width && prod != 0; ++a) {
                if (t.fine[i * t.width + a] == t.fine[i2 * t.width + a])
                    prod *= same_fine[a];
                else if (t.coarse[i * t.width + a] == t.coarse[i2 * t.width + a])
                    prod = -prod;
                else
                    prod = 0;
            }
            total = detail::checked_add(total, prod);
        }
    }
    return Rational(total, gain_denominator(q, base));
}

int128 same_cell_pairs(std::span<const DigitPoint> points, const GainQuery& q, const MixedBase& base, std::uint64_t v) {
    validate(q, base);
    if (q.n > points.size()) throw std::invalid_argument("same_cell_pairs: fewer points than n");
    const CellTable t = tabulate(points, q, base);
    std::vector<std::vector<std::uint64_t>> keys(q.n, std::vector<std::uint64_t>(t.width));
    for (std::uint64_t i = 0; i < q.n; ++i)
        for (std::size_t a = 0; a < t.width; ++a)
            keys[i][a] = ((v >> a) & 1U) ? t.fine[i * t.width + a] : t.coarse[i * t.width + a];
    std::sort(keys.begin(), keys.end());
    int128 pairs = 0;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        pairs += int128(j - i) * int128(j - i);
        i = j;
    }
    return pairs;
}

Rational gain_via_counts(std::span<const DigitPoint> points, const GainQuery& q, const MixedBase& base) {
    validate(q, base);
    int128 total = 0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << q.u.size()); ++v)
        total = detail::checked_add(total, detail::checked_mul(h_coefficient(q, base, v), same_cell_pairs(points, q, base, v)));
    return Rational(total, gain_denominator(q, base));
}

int128 c_closed(int128 n, int128 m) {
    if (m < 1) throw std::invalid_argument("c_closed: m must be >= 1");
    if (n < 0) throw std::invalid_argument("c_closed: n must be >= 0");
    const int128 q = n / m;
    const int128 a = detail::checked_mul(2 * n - m, q);
    const int128 b = detail::checked_mul(m, detail::checked_mul(q, q));
    return detail::checked_add(n, a) - b;
}

Rational gain_closed(const GainQuery& q, const MixedBase& base) {
    validate(q, base);
    int128 total = 0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << q.u.size()); ++v)
        total = detail::checked_add(total,
                                    detail::checked_mul(h_coefficient(q, base, v), c_closed(int128(q.n), volume(q, base, v))));
    return Rational(total, gain_denominator(q, base));
}

std::size_t argmin_base(std::span<const std::size_t> u, const MixedBase& base) {
    if (u.empty()) throw std::invalid_argument("argmin_base: u must be nonempty");
    std::size_t best = 0;
    for (std::size_t a = 1; a < u.size(); ++a)
        if (base[u[a]].radix() < base[u[best]].radix()) best = a;
    return best;
}

Rational gamma_u(std::span<const std::size_t> u, const MixedBase& base) {
    const std::size_t skip = argmin_base(u, base);
    Rational g(1);
    for (std::size_t a = 0; a < u.size(); ++a) {
        if (a == skip) continue;
        const int128 r = int128(base[u[a]].radix());
        g *= Rational(r, r - 1);
    }
    return g;
}

boost::multiprecision::cpp_rational gamma_d_exact(const MixedBase& base) {
    if (base.size() == 0) throw std::invalid_argument("gamma_d: empty base");
    std::vector<std::size_t> u(base.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = j;
    const std::size_t skip = argmin_base(u, base);
    boost::multiprecision::cpp_rational g = 1;
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (j == skip) continue;
        const std::uint64_t r = base[j].radix();
        g *= boost::multiprecision::cpp_rational(boost::multiprecision::cpp_int(r), boost::multiprecision::cpp_int(r - 1));
    }
    return g;
}

double gamma_d(const MixedBase& base) { return gamma_d_exact(base).convert_to<double>(); }

double gamma_d(const SequenceSpec& spec) { return gamma_d(resolve_base(spec)); }

double gamma_d_bound(std::size_t d, std::uint32_t b) {
    if (d == 0 || b < 2) throw std::invalid_argument("gamma_d_bound: need d >= 1 and b >= 2");
    const double lb = std::log(double(b));
    const double x = std::log(double(d)) / lb + std::log(std::log(double(d + b)) / lb) / lb + 2.0;
    return std::numbers::e * std::ceil(x - 1e-12);
}

bool LawReport::ok() const {
    return std::all_of(items.begin(), items.end(), [](const LawItem& i) { return i.failed == 0; });
}

const LawItem& LawReport::item(const std::string& name) const {
    for (const auto& i : items)
        if (i.name == name) return i;
    throw std::out_of_range("LawReport: no item " + name);
}

std::pair<Rational, std::uint64_t> max_gain(std::span<const std::size_t> u, std::span<const unsigned> k,
                                            const MixedBase& base) {
    GainQuery q{{u.begin(), u.end()}, {k.begin(), k.end()}, 1};
    validate(q, base);
    const int128 top = volume(q, base, (std::uint64_t{1} << u.size()) - 1);
    if (top > (int128{1} << 24)) throw std::length_error("max_gain: m_{u,u,k} too large to scan");
    Rational best = gain_closed(q, base);
    std::uint64_t arg = 1;
    for (std::uint64_t n = 2; n <= std::uint64_t(top); ++n) {
        const Rational g = gain_closed(with_n(q, n), base);
        if (best < g) {
            best = g;
            arg = n;
        }
    }
    return {best, arg};
}

LawReport law_suite(const MixedBase& base, const LawOptions& options) {
    const std::size_t d = base.size();
    if (d == 0 || d > 12) throw std::invalid_argument("law_suite: base must have 1..12 coordinates");
    LawReport report;
    for (const char* name : {"i", "ii", "iii", "iv", "v", "vi", "vii", "bound"}) report.items.push_back({name, 0, 0, {}});
    auto at = [&](const char* name) -> LawItem& {
        for (auto& i : report.items)
            if (i.name == name) return i;
        throw std::logic_error("law_suite: unknown item");
    };
    auto record = [&](const char* name, bool pass, const std::string& what) {
        LawItem& it = at(name);
        ++it.checked;
        if (!pass && it.failed++ == 0) it.first_failure = what;
    };

    std::map<std::uint64_t, Rational> max_by_subset;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
        std::vector<std::size_t> u;
        for (std::size_t j = 0; j < d; ++j)
            if ((mask >> j) & 1U) u.push_back(j);
        const std::uint64_t full = (std::uint64_t{1} << u.size()) - 1;
        const Rational gamma = gamma_u(u, base);

        std::vector<std::vector<unsigned>> ks;
        std::vector<unsigned> k(u.size(), 0);
        std::function<void(std::size_t)> walk = [&](std::size_t a) {
            if (a == u.size()) {
                ks.push_back(k);
                return;
            }
            for (k[a] = 0;; ++k[a]) {
                GainQuery probe{u, k, 1};
                for (std::size_t b = a + 1; b < u.size(); ++b) probe.k[b] = 0;
                if (volume(probe, base, full) > int128(options.exhaustive_volume)) break;
                walk(a + 1);
            }
            k[a] = 0;
        };
        walk(0);
        for (std::size_t s = 0; s < options.random_k; ++s) {
            KeyedStream rng{options.seed, mask, std::uint64_t(s)};
            std::vector<unsigned> kr(u.size());
            for (auto& kj : kr) kj = unsigned(rng.below(7));
            const int128 vol = volume(GainQuery{u, kr, 1}, base, full);
            if (vol > int128(options.exhaustive_volume) && vol <= int128(options.max_volume)) ks.push_back(kr);
        }

        for (const auto& kk : ks) {
            const GainQuery q{u, kk, 1};
            const int128 m_all = volume(q, base, full);
            const int128 m_none = volume(q, base, 0);
            KeyedStream rng{options.seed, mask, 0x6B657973ULL, std::uint64_t(m_all)};
            auto g = [&](const GainQuery& qq, std::uint64_t n) { return gain_closed(with_n(qq, n), base); };

            for (std::uint64_t n = 1; n <= std::uint64_t(m_none) && n <= 16; ++n)
                record("i", g(q, n) == Rational(1), describe(with_n(q, n)));
            record("i", g(q, std::uint64_t(m_none)) == Rational(1), describe(with_n(q, std::uint64_t(m_none))));

            for (std::uint64_t r = 1; r <= 3; ++r)
                record("ii", g(q, r * std::uint64_t(m_all)).is_zero(), describe(with_n(q, r * std::uint64_t(m_all))));

            if (m_all > 1) {
                for (int s = 0; s < 4; ++s) {
                    const std::uint64_t qq = 1 + rng.below(3);
                    const std::uint64_t r = 1 + rng.below(std::uint64_t(m_all) - 1);
                    const std::uint64_t n = qq * std::uint64_t(m_all) + r;
                    record("iii", g(q, n) == Rational(int128(r), int128(n)) * g(q, r), describe(with_n(q, n)));
                }
            }

            for (std::size_t a = 0; a < u.size(); ++a) {
                GainQuery finer = q;
                ++finer.k[a];
                const std::uint64_t bj = base[u[a]].radix();
                for (int s = 0; s < 3; ++s) {
                    const std::uint64_t n = 1 + rng.below(2 * std::uint64_t(m_all));
                    record("iv", g(finer, n * bj) == g(q, n), describe(with_n(finer, n * bj)));
                }
            }

            const GainQuery zero{u, std::vector<unsigned>(u.size(), 0), 1};
            const std::uint64_t scale = std::uint64_t(m_none);
            const std::uint64_t m0 = std::uint64_t(volume(zero, base, full));
            for (int s = 0; s < 3; ++s) {
                const std::uint64_t n = 1 + rng.below(2 * m0);
                record("v", g(q, n * scale) == g(zero, n), describe(with_n(q, n * scale)));
            }
        }

        const GainQuery zero{u, std::vector<unsigned>(u.size(), 0), 1};
        const int128 m0 = volume(zero, base, full);
        if (m0 > int128(options.max_volume)) continue;
        Rational best(0);
        for (std::uint64_t n = 1; n <= std::uint64_t(m0); ++n) {
            const Rational gn = gain_closed(with_n(zero, n), base);
            record("bound", !(gn < Rational(0)) && !(gamma < gn), describe(with_n(zero, n)));
            if (best < gn) best = gn;
        }
        max_by_subset[mask] = best;
        for (std::uint64_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
            auto it = max_by_subset.find(sub);
            if (it == max_by_subset.end()) continue;
            record("vi", !(best < it->second), describe(zero) + " vs subset mask " + std::to_string(sub));
        }
        if (base.digital()) {
            std::uint64_t star = 1;
            const std::size_t skip = argmin_base(u, base);
            for (std::size_t a = 0; a < u.size(); ++a)
                if (a != skip) star *= base[u[a]].radix();
            record("vii", best == gamma && gain_closed(with_n(zero, star), base) == gamma, describe(with_n(zero, star)));
        } else {
            record("vii", !(gamma < best), describe(zero));
        }
    }
    return report;
}

LawItem trichotomy_check(const MixedBase& base, unsigned m) {
    if (!base.digital()) throw std::invalid_argument("trichotomy_check: base must share one prime");
    const std::uint64_t b = base.common_prime();
    const std::size_t d = base.size();
    LawItem item{"trichotomy", 0, 0, {}};
    auto record = [&](bool pass, const std::string& what) {
        ++item.checked;
        if (!pass && item.failed++ == 0) item.first_failure = what;
    };
    for (unsigned mm = 0; mm <= m; ++mm) {
        std::uint64_t n = 1;
        for (unsigned i = 0; i < mm; ++i) n *= b;
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
            std::vector<std::size_t> u;
            unsigned emax = 0;
            for (std::size_t j = 0; j < d; ++j)
                if ((mask >> j) & 1U) {
                    u.push_back(j);
                    emax = std::max(emax, base[j].exponent);
                }
            const Rational gamma = gamma_u(u, base);
            std::vector<unsigned> k(u.size(), 0);
            std::function<void(std::size_t, unsigned)> walk = [&](std::size_t a, unsigned used) {
                if (a == u.size()) {
                    unsigned lo = 0, hi = 0;
                    for (std::size_t c = 0; c < u.size(); ++c) {
                        lo += base[u[c]].exponent * k[c];
                        hi += base[u[c]].exponent * (k[c] + 1);
                    }
                    const GainQuery q{u, k, n};
                    const Rational g = gain_closed(q, base);
                    bool pass;
                    if (hi <= mm)
                        pass = g.is_zero();
                    else if (lo >= mm)
                        pass = g == Rational(1);
                    else
                        pass = !(gamma < g);
                    record(pass, describe(q));
                    return;
                }
                const unsigned e = base[u[a]].exponent;
                for (k[a] = 0; used + e * k[a] <= mm + emax; ++k[a]) walk(a + 1, used + e * k[a]);
                k[a] = 0;
            };
            walk(0, 0);
        }
    }
    return item;
}

}  // namespace cqmc
