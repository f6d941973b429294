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


#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqmc/anova.hpp"
#include "cqmc/equidist.hpp"
#include "cqmc/gain.hpp"
#include "cqmc/polynomial.hpp"
#include "cqmc/rqmc.hpp"
#include "cqmc/scramble.hpp"
#include "cqmc/sequences.hpp"

namespace {

using namespace cqmc;

struct SequenceOptions {
    std::string family = "sobol";
    std::size_t d = 2;
    std::uint64_t n = 16;
    unsigned precision = 32;
    std::uint32_t base = 2;
    std::vector<std::string> polys;
};

void add_sequence_options(CLI::App* app, SequenceOptions& o) {
    app->add_option("--family", o.family, "sobol | niederreiter | halton | custom")
        ->check(CLI::IsMember({"sobol", "niederreiter", "halton", "custom"}));
    app->add_option("--d", o.d, "Dimension")->check(CLI::PositiveNumber);
    app->add_option("--n", o.n, "Number of points");
    app->add_option("--precision", o.precision, "Resolution in bits")->check(CLI::Range(1, 64));
    app->add_option("--base", o.base, "Field prime for digital families");
    app->add_option("--poly", o.polys, "Base polynomials for the custom family, ascending coefficients")->delimiter(',');
}

SequenceSpec to_spec(const SequenceOptions& o, std::uint64_t max_points) {
    SequenceSpec spec;
    spec.family = parse_family(o.family);
    spec.base = o.base;
    spec.precision = o.precision;
    spec.max_points = std::max<std::uint64_t>(max_points, 2);
    if (spec.family == Family::custom_niederreiter) {
        const PrimeBase field(o.base);
        for (const auto& p : o.polys) spec.polys.push_back(Polynomial::parse(field, p));
        spec.dimension = spec.polys.size();
    } else {
        spec.dimension = o.d;
    }
    return spec;
}

std::string digit_string(const DigitCoordinate& c) {
    std::string s;
    for (std::size_t i = 0; i < c.digits.size(); ++i) {
        if (c.prime > 10 && i) s += '.';
        s += std::to_string(unsigned(c.digits[i]));
    }
    return s;
}

void print_point(const DigitPoint& x, const std::string& format) {
    for (std::size_t j = 0; j < x.dimension(); ++j) {
        if (j) std::cout << ',';
        if (format == "digits")
            std::cout << digit_string(x[j]);
        else
            std::cout << x[j].value();
    }
    std::cout << '\n';
}

std::vector<std::size_t> parse_subset(const std::vector<std::size_t>& one_based) {
    std::vector<std::size_t> u;
    for (std::size_t j : one_based) {
        if (j == 0) throw std::invalid_argument("--u: coordinates are 1-based");
        u.push_back(j - 1);
    }
    return u;
}

std::string join(const auto& xs, std::size_t offset) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + std::to_string(xs[i] + offset);
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coarse and usual scrambling of digital and Halton sequences"};
    app.require_subcommand(1);
    std::cout.precision(17);

    SequenceOptions gen_opts;
    std::string gen_format = "csv";
    auto* gen = app.add_subcommand("generate", "Print points of a sequence");
    add_sequence_options(gen, gen_opts);
    gen->add_option("--format", gen_format, "csv | digits")->check(CLI::IsMember({"csv", "digits"}));

    SequenceOptions scr_opts;
    std::string scr_format = "csv", scr_mode = "coarse";
    std::uint64_t scr_seed = 0, scr_rep = 0;
    auto* scr = app.add_subcommand("scramble", "Print scrambled points");
    add_sequence_options(scr, scr_opts);
    scr->add_option("--format", scr_format, "csv | digits")->check(CLI::IsMember({"csv", "digits"}));
    scr->add_option("--mode", scr_mode, "none | usual | coarse")->check(CLI::IsMember({"none", "usual", "coarse"}));
    scr->add_option("--seed", scr_seed, "Master seed");
    scr->add_option("--rep", scr_rep, "Replication index");

    SequenceOptions net_opts;
    unsigned net_t = 0, net_m = 4;
    std::size_t net_sample = 0;
    std::string net_mode = "none", net_in = "coarse";
    std::uint64_t net_seed = 0, net_rep = 0;
    auto* net = app.add_subcommand("check-net", "Check the (t, e, m, d)-net property of the first b^m points");
    add_sequence_options(net, net_opts);
    net->add_option("--t", net_t, "Quality parameter t");
    net->add_option("--m", net_m, "Log_b of the point count");
    net->add_option("--sample-k", net_sample, "Check this many random resolution vectors instead of all");
    net->add_option("--in", net_in, "coarse: intervals in base b^e_j; usual: base b")->check(CLI::IsMember({"coarse", "usual"}));
    net->add_option("--mode", net_mode, "Scramble the points first: none | usual | coarse")
        ->check(CLI::IsMember({"none", "usual", "coarse"}));
    net->add_option("--seed", net_seed, "Master seed");
    net->add_option("--rep", net_rep, "Replication index");

    SequenceOptions gain_opts;
    std::vector<std::size_t> gain_u{1};
    std::vector<unsigned> gain_k;
    std::string gain_method = "closed", gain_base = "sequence";
    auto* gain = app.add_subcommand("gain", "Gain coefficient G_{u,k}(n) of a sequence prefix");
    add_sequence_options(gain, gain_opts);
    gain->add_option("--u", gain_u, "Coordinate subset, 1-based")->delimiter(',');
    gain->add_option("--k", gain_k, "Resolutions, one per member of u")->delimiter(',');
    gain->add_option("--method", gain_method, "brute | counts | closed")->check(CLI::IsMember({"brute", "counts", "closed"}));
    gain->add_option("--gain-base", gain_base, "sequence: the sequence's own base; usual: exponents 1")
        ->check(CLI::IsMember({"sequence", "usual"}));

    SequenceOptions table_opts;
    std::uint64_t table_volume = 64;
    auto* table = app.add_subcommand("gain-table", "CSV of closed-form gain coefficients for n = 1..N");
    add_sequence_options(table, table_opts);
    table->add_option("--max-volume", table_volume, "Largest m_{u,u,k} included");

    SequenceOptions gamma_opts;
    gamma_opts.family = "niederreiter";
    auto* gamma = app.add_subcommand("gamma", "Maximal gain Gamma_d and its logarithmic bound");
    add_sequence_options(gamma, gamma_opts);

    std::string grid_path, anova_out;
    auto* anova = app.add_subcommand("anova", "Nested ANOVA variances of a grid function");
    anova->add_option("--grid", grid_path, "Grid CSV")->required()->check(CLI::ExistingFile);
    anova->add_option("--out", anova_out, "Output CSV (default stdout)");

    ExperimentConfig exp_cfg;
    std::string exp_family = "sobol", exp_mode = "coarse", exp_out, exp_format = "csv";
    auto* exp = app.add_subcommand("experiment", "RMSE of scrambled estimators over replications");
    exp->add_option("--integrand", exp_cfg.integrand, "linear37 | weighted100")
        ->check(CLI::IsMember({"linear37", "weighted100"}));
    exp->add_option("--family", exp_family, "sobol | niederreiter | halton")
        ->check(CLI::IsMember({"sobol", "niederreiter", "halton"}));
    exp->add_option("--mode", exp_mode, "none | usual | coarse")->check(CLI::IsMember({"none", "usual", "coarse"}));
    exp->add_option("--mmin", exp_cfg.m_min, "Smallest m");
    exp->add_option("--mmax", exp_cfg.m_max, "Largest m");
    exp->add_option("--reps", exp_cfg.reps, "Replications")->check(CLI::Range(2, 1 << 20));
    exp->add_option("--seed", exp_cfg.seed, "Master seed");
    exp->add_option("--precision", exp_cfg.spec.precision, "Resolution in bits")->check(CLI::Range(1, 64));
    exp->add_option("--out", exp_out, "Output path (default stdout)");
    exp->add_option("--format", exp_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    std::uint32_t poly_base = 2;
    int poly_degree = 1;
    std::string poly_kind = "primitive";
    auto* polys = app.add_subcommand("polys", "List monic polynomials of one degree");
    polys->add_option("--base", poly_base, "Field prime");
    polys->add_option("--degree", poly_degree, "Degree")->check(CLI::PositiveNumber);
    polys->add_option("--kind", poly_kind, "all | irreducible | primitive")
        ->check(CLI::IsMember({"all", "irreducible", "primitive"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            const auto seq = make_sequence(to_spec(gen_opts, gen_opts.n));
            for (std::uint64_t k = 0; k < gen_opts.n; ++k) print_point(seq->point(k), gen_format);
        } else if (scr->parsed()) {
            const auto seq = make_sequence(to_spec(scr_opts, scr_opts.n));
            const ScrambledSequence s(
                *seq, sample_state(parse_scramble_mode(scr_mode), seq->base(), seq->precision(), scr_seed, scr_rep));
            for (std::uint64_t k = 0; k < scr_opts.n; ++k) print_point(s.point(k), scr_format);
        } else if (net->parsed()) {
            const auto probe = make_sequence(to_spec(net_opts, 2));
            if (!probe->base().digital()) throw std::invalid_argument("check-net: needs a digital sequence");
            const PrimeBase b(probe->base().common_prime());
            std::uint64_t n = 1;
            for (unsigned i = 0; i < net_m; ++i) n *= b.value();
            const auto seq = make_sequence(to_spec(net_opts, n));
            const ScrambledSequence s(
                *seq, sample_state(parse_scramble_mode(net_mode), seq->base(), seq->precision(), net_seed, net_rep));
            std::vector<DigitPoint> pts;
            for (std::uint64_t k = 0; k < n; ++k) pts.push_back(s.point(k));
            std::vector<unsigned> e;
            for (const auto& c : seq->base().components()) e.push_back(net_in == "usual" ? 1 : c.exponent);
            NetOptions opt;
            opt.sample_k = net_sample;
            opt.seed = net_seed;
            const NetReport r = is_net(pts, net_t, e, net_m, b, opt);
            nlohmann::json j;
            j["ok"] = r.ok;
            j["t"] = net_t;
            j["m"] = net_m;
            j["e"] = e;
            j["checked"] = r.checked;
            if (r.witness) {
                j["witness"] = {{"k", r.witness->k},
                                {"cell", r.witness->cell},
                                {"count", r.witness->count},
                                {"expected", r.witness->expected}};
            }
            std::cout << j.dump() << '\n';
            return r.ok ? 0 : 1;
        } else if (gain->parsed()) {
            GainQuery q;
            q.u = parse_subset(gain_u);
            q.k = gain_k.empty() ? std::vector<unsigned>(q.u.size(), 0) : gain_k;
            q.n = gain_opts.n;
            const SequenceSpec spec = to_spec(gain_opts, gain_opts.n);
            MixedBase base = resolve_base(spec);
            if (gain_base == "usual") base = base.usual();
            Rational g;
            if (gain_method == "closed") {
                g = gain_closed(q, base);
            } else {
                const auto seq = make_sequence(spec);
                const auto pts = seq->points(q.n);
                g = gain_method == "brute" ? gain_bruteforce(pts, q, base) : gain_via_counts(pts, q, base);
            }
            std::cout << "G=" << g.str() << " value=" << g.to_double() << '\n';
        } else if (table->parsed()) {
            const MixedBase base = resolve_base(to_spec(table_opts, table_opts.n));
            std::cout << "u,k,n,G_num,G_den\n";
            const std::size_t d = base.size();
            if (d > 16) throw std::invalid_argument("gain-table: at most 16 coordinates");
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
                std::vector<std::size_t> u;
                for (std::size_t j = 0; j < d; ++j)
                    if ((mask >> j) & 1U) u.push_back(j);
                std::vector<unsigned> k(u.size(), 0);
                for (;;) {
                    GainQuery q{u, k, 1};
                    if (volume(q, base, (std::uint64_t{1} << u.size()) - 1) <= int128(table_volume)) {
                        for (std::uint64_t n = 1; n <= table_opts.n; ++n) {
                            q.n = n;
                            const Rational g = gain_closed(q, base);
                            std::cout << join(u, 1) << ',' << join(k, 0) << ',' << n << ','
                                      << detail::to_string(g.num()) << ',' << detail::to_string(g.den()) << '\n';
                        }
                    }
                    std::size_t a = 0;
                    for (; a < u.size(); ++a) {
                        ++k[a];
                        GainQuery probe{u, k, 1};
                        for (std::size_t c = 0; c < a; ++c) probe.k[c] = 0;
                        if (volume(probe, base, (std::uint64_t{1} << u.size()) - 1) <= int128(table_volume)) {
                            for (std::size_t c = 0; c < a; ++c) k[c] = 0;
                            break;
                        }
                        k[a] = 0;
                    }
                    if (a == u.size()) break;
                }
            }
        } else if (gamma->parsed()) {
            const SequenceSpec spec = to_spec(gamma_opts, 2);
            const MixedBase base = resolve_base(spec);
            const auto exact = gamma_d_exact(base);
            std::cout << "d=" << base.size() << " gamma_exact=" << exact << " gamma=" << exact.convert_to<double>()
                      << " bound=" << gamma_d_bound(base.size(), base.digital() ? base.common_prime() : 2) << '\n';
        } else if (anova->parsed()) {
            std::ifstream in(grid_path);
            const auto f = read_grid(in);
            const NestedAnova<Rational> a(f);
            const auto t = a.sigma_table();
            if (anova_out.empty()) {
                write_sigma_table(std::cout, t);
            } else {
                std::ofstream out(anova_out);
                write_sigma_table(out, t);
            }
        } else if (exp->parsed()) {
            exp_cfg.spec.family = parse_family(exp_family);
            exp_cfg.mode = parse_scramble_mode(exp_mode);
            const auto rows = rmse_experiment(exp_cfg);
            std::ostringstream buf;
            if (exp_format == "json")
                write_json(buf, rows, exp_cfg);
            else
                write_csv(buf, rows);
            if (exp_out.empty()) {
                std::cout << buf.str();
            } else {
                std::ofstream out(exp_out);
                out << buf.str();
                if (!out) throw std::runtime_error("cannot write " + exp_out);
            }
        } else if (polys->parsed()) {
            const PolyKind kind = poly_kind == "all"           ? PolyKind::all
                                  : poly_kind == "irreducible" ? PolyKind::irreducible
                                                               : PolyKind::primitive;
            for (const auto& p : enumerate_monic(PrimeBase(poly_base), poly_degree, kind))
                std::cout << p.to_string() << ' ' << p.pretty() << '\n';
        }
    } catch (const std::exception& ex) {
        std::cerr << "cqmc: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
