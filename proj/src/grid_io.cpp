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


#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cqmc/anova.hpp"

namespace cqmc {

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<std::uint32_t> header_row(std::istream& in, const std::string& label) {
    std::string line;
    while (std::getline(in, line)) {
        auto t = tokens(line);
        if (t.empty() || t.front().front() == '#') continue;
        if (t.front() != label) throw std::invalid_argument("read_grid: expected a '" + label + "' row");
        std::vector<std::uint32_t> out;
        for (std::size_t i = 1; i < t.size(); ++i) out.push_back(std::uint32_t(std::stoul(t[i])));
        return out;
    }
    throw std::invalid_argument("read_grid: missing '" + label + "' row");
}

std::string join(const auto& xs, std::size_t offset) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + std::to_string(xs[i] + offset);
    return s;
}

}  // namespace

GridFunction<Rational> read_grid(std::istream& in) {
    const auto primes = header_row(in, "primes");
    const auto exponents = header_row(in, "exponents");
    const auto levels = header_row(in, "levels");
    if (primes.size() != exponents.size() || primes.size() != levels.size() || primes.empty())
        throw std::invalid_argument("read_grid: header rows must have equal, nonzero length");
    std::vector<BaseComponent> dims;
    for (std::size_t j = 0; j < primes.size(); ++j) dims.push_back({primes[j], exponents[j]});
    std::vector<Rational> values;
    std::string line;
    while (std::getline(in, line))
        for (const auto& t : tokens(line)) {
            if (t.front() == '#') break;
            values.push_back(Rational::parse(t));
        }
    std::vector<unsigned> lv(levels.begin(), levels.end());
    return GridFunction<Rational>(MixedBase(std::move(dims)), std::move(lv), std::move(values));
}

void write_grid(std::ostream& out, const GridFunction<Rational>& f) {
    const auto& base = f.base();
    out << "primes";
    for (const auto& c : base.components()) out << ',' << c.prime;
    out << "\nexponents";
    for (const auto& c : base.components()) out << ',' << c.exponent;
    out << "\nlevels";
    for (unsigned l : f.levels()) out << ',' << l;
    out << '\n';
    const std::uint64_t row = f.dimension() > 0 ? f.side(f.dimension() - 1) : 1;
    for (std::uint64_t c = 0; c < f.size(); ++c) out << f.values()[c].str() << ((c + 1) % row == 0 ? '\n' : ',');
}

void write_sigma_table(std::ostream& out, const SigmaTable<Rational>& table) {
    out << "u,k,sigma2,sigma2_value\n";
    std::ostringstream value;
    value.precision(17);
    for (const auto& e : table.entries) {
        value.str("");
        value << e.sigma2.to_double();
        out << join(e.u, 1) << ',' << join(e.k, 0) << ',' << e.sigma2.str() << ',' << value.str() << '\n';
    }
}

}  // namespace cqmc
