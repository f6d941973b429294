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


#ifndef CQMC_GAIN_HPP
#define CQMC_GAIN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cqmc/mixed_base.hpp"
#include "cqmc/rational.hpp"
#include "cqmc/sequences.hpp"

namespace cqmc {

/// Subset u (0-based coordinates, strictly increasing), resolutions k_j for
/// j in u in the same order, and point count n.
struct GainQuery {
    std::vector<std::size_t> u;
    std::vector<unsigned> k;
    std::uint64_t n = 0;
};

void validate(const GainQuery& q, const MixedBase& base);

/// m_{u,v,k} = prod_{j in v} b_j^{k_j+1} prod_{j in u\v} b_j^{k_j}; v is a bitmask over positions in u.
int128 volume(const GainQuery& q, const MixedBase& base, std::uint64_t v);
/// H_{u,v} = prod_{j in v} b_j * (-1)^{|u|-|v|}.
int128 h_coefficient(const GainQuery& q, const MixedBase& base, std::uint64_t v);

/// n prod_{j in u} (b_j - 1)
int128 gain_denominator(const GainQuery& q, const MixedBase& base);

/// Sum over ordered pairs (i, i') of prod_{j in u} (b_j [same (k_j+1)-cell] - [same k_j-cell]),
/// evaluated directly over the first n points. G = this / (n prod (b_j - 1)).
Rational gain_bruteforce(std::span<const DigitPoint> points, const GainQuery& q, const MixedBase& base);

/// Number of ordered pairs among the first n points sharing the (k + 1_v)-cell.
int128 same_cell_pairs(std::span<const DigitPoint> points, const GainQuery& q, const MixedBase& base, std::uint64_t v);

/// sum_v H_{u,v} * same_cell_pairs, normalized like gain_bruteforce.
Rational gain_via_counts(std::span<const DigitPoint> points, const GainQuery& q, const MixedBase& base);

/// Pair count n + (2n - m) floor(n/m) - m floor(n/m)^2 of an equidistributed prefix.
int128 c_closed(int128 n, int128 m);

/// G_{u,k}(n) for any n-point prefix of a sequence equidistributed in `base`.
Rational gain_closed(const GainQuery& q, const MixedBase& base);

/// Index into u of the coordinate with the smallest b_j (ties to the smallest index).
std::size_t argmin_base(std::span<const std::size_t> u, const MixedBase& base);

/// prod_{j in u \ {j_m}} b_j / (b_j - 1).
Rational gamma_u(std::span<const std::size_t> u, const MixedBase& base);

/// Gamma_d = Gamma_{1:d}, exact.
boost::multiprecision::cpp_rational gamma_d_exact(const MixedBase& base);
double gamma_d(const MixedBase& base);
double gamma_d(const SequenceSpec& spec);

/// e * ceil(log_b d + log_b log_b(d + b) + 2).
double gamma_d_bound(std::size_t d, std::uint32_t b);

struct LawItem {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t failed = 0;
    std::string first_failure;
};

struct LawReport {
    std::vector<LawItem> items;

    bool ok() const;
    const LawItem& item(const std::string& name) const;
};

struct LawOptions {
    /// Every k with m_{u,u,k} at most this is visited.
    std::uint64_t exhaustive_volume = 4096;
    /// Extra random k per subset with larger volume.
    std::size_t random_k = 50;
    std::uint64_t max_volume = std::uint64_t{1} << 20;
    std::uint64_t seed = 1;
};

/**
 * Laws of the gain coefficients of equidistributed sequences, checked on
 * gain_closed over every nonempty u of `base` (at most 12 coordinates):
 *  i    G_{u,k}(n) = 1 for 1 <= n <= m_{u,0,k} (empty v)
 *  ii   G_{u,k}(r m_{u,u,k}) = 0
 *  iii  G_{u,k}(q m_{u,u,k} + r) = (r/n) G_{u,k}(r)
 *  iv   G_{u,k+1_j}(n b_j) = G_{u,k}(n)
 *  v    G_{u,k}(n prod b_j^{k_j}) = G_{u,0}(n)
 *  vi   max_n G_{v,0}(n) <= max_n G_{u,0}(n) for v subset of u
 *  vii  max_n G_{u,0}(n) <= Gamma_u, with equality at n* = prod_{j != j_m} b_j
 *       when all coordinates share one prime
 * Maxima over n are exact: by iii they are attained in 1..m_{u,u,0}.
 */
LawReport law_suite(const MixedBase& base, const LawOptions& options = {});

/// max over n in 1..m_{u,u,k} of G_{u,k}(n), with the first maximizing n.
std::pair<Rational, std::uint64_t> max_gain(std::span<const std::size_t> u, std::span<const unsigned> k,
                                            const MixedBase& base);

/**
 * Trichotomy at n = b^m for a common-prime base: G_{u,k}(b^m) = 0 when
 * sum e_j (k_j + 1) <= m, = 1 when sum e_j k_j >= m, and <= Gamma_u between.
 * Checks every u and every k with sum e_j k_j <= m + 1 for each m' <= m.
 */
LawItem trichotomy_check(const MixedBase& base, unsigned m);

}  // namespace cqmc

#endif  // CQMC_GAIN_HPP
