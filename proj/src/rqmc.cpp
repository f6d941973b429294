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


#include "cqmc/rqmc.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace cqmc {

Integrand linear37() {
    return {"linear37", 37,
            [](std::span<const double> x) {
                double s = 0.0;
                for (double v : x) s += v;
                return s;
            },
            18.5,
            [](std::span<const double> h) {
                double s = 0.0;
                for (double v : h) s += 0.5 - 0.5 * v;
                return s;
            }};
}

Integrand weighted100() {
    return {"weighted100", 100,
            [](std::span<const double> x) {
                double p = 1.0;
                for (std::size_t j = 0; j < x.size(); ++j) {
                    const double w = 1.0 / double((j + 1) * (j + 1));
                    p *= 1.0 + w * (x[j] * std::exp(x[j]) - 1.0);
                }
                return p;
            },
            1.0,
            [](std::span<const double> h) {
                // corner average of x e^x is 1 - e h / 2 + O(h^2)
                double p = 1.0;
                for (std::size_t j = 0; j < h.size(); ++j)
                    p *= 1.0 - std::numbers::e * h[j] / (2.0 * double((j + 1) * (j + 1)));
                return p;
            }};
}

Integrand integrand_by_name(const std::string& id) {
    if (id == "linear37") return linear37();
    if (id == "weighted100") return weighted100();
    throw std::invalid_argument("unknown integrand '" + id + "'");
}

std::vector<std::string> integrand_names() { return {"linear37", "weighted100"}; }

double estimator_mean(const Integrand& f, const PointSequence& seq) {
    if (f.dimension != seq.dimension()) throw std::invalid_argument("estimator_mean: integrand dimension differs from the sequence");
    std::vector<double> h;
    for (std::size_t j = 0; j < seq.dimension(); ++j)
        h.push_back(std::pow(double(seq.base()[j].prime), -double(seq.precision()[j])));
    return f.corner_mean(h);
}

std::uint64_t point_count(const PointSequence& seq, unsigned m) {
    const std::uint64_t b = seq.base().digital() ? seq.base().common_prime() : 2;
    std::uint64_t n = 1;
    for (unsigned i = 0; i < m; ++i) {
        if (n > UINT64_MAX / b) throw std::overflow_error("point_count: overflow");
        n *= b;
    }
    return n;
}

std::vector<double> prefix_estimates(const Integrand& f, const PointSequence& seq, ScrambleMode mode, unsigned m_min,
                                     unsigned m_max, std::uint64_t seed, std::uint64_t rep) {
    if (f.dimension != seq.dimension()) throw std::invalid_argument("estimate: integrand dimension differs from the sequence");
    if (m_min > m_max) throw std::invalid_argument("estimate: empty m range");
    const std::uint64_t n_max = point_count(seq, m_max);
    if (n_max > seq.capacity()) throw std::out_of_range("estimate: more points than the sequence provides");
    const ScrambledSequence points(seq, sample_state(mode, seq.base(), seq.precision(), seed, rep));
    std::vector<double> out;
    std::vector<double> x(seq.dimension());
    double sum = 0.0;
    unsigned m = m_min;
    std::uint64_t next = point_count(seq, m);
    for (std::uint64_t k = 0; k < n_max; ++k) {
        points.values(k, x);
        sum += f.f(x);
        if (k + 1 == next) {
            out.push_back(sum / double(next));
            if (++m <= m_max) next = point_count(seq, m);
        }
    }
    return out;
}

double estimate(const Integrand& f, const PointSequence& seq, ScrambleMode mode, unsigned m, std::uint64_t seed,
                std::uint64_t rep) {
    return prefix_estimates(f, seq, mode, m, m, seed, rep).front();
}

std::size_t worker_count() {
    if (const char* env = std::getenv("CQMC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return std::size_t(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<RmseRow> rmse_experiment(const ExperimentConfig& cfg) {
    if (cfg.reps < 2) throw std::invalid_argument("rmse_experiment: at least 2 replications required");
    const Integrand f = integrand_by_name(cfg.integrand);
    SequenceSpec spec = cfg.spec;
    spec.dimension = f.dimension;
    std::uint64_t n_max = 1;
    const std::uint64_t b = spec.family == Family::halton ? 2 : spec.base;
    for (unsigned i = 0; i < cfg.m_max; ++i) n_max *= b;
    spec.max_points = n_max;
    const auto seq = make_sequence(spec);

    std::vector<std::vector<double>> est(cfg.reps);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto work = [&] {
        try {
            for (std::size_t r; (r = next.fetch_add(1)) < cfg.reps;)
                est[r] = prefix_estimates(f, *seq, cfg.mode, cfg.m_min, cfg.m_max, cfg.seed, r);
        } catch (...) {
            std::lock_guard<std::mutex> g(failure_lock);
            if (!failure) failure = std::current_exception();
            next = cfg.reps;
        }
    };
    const std::size_t threads = std::min(cfg.threads ? cfg.threads : worker_count(), cfg.reps);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<RmseRow> rows;
    const double reps = double(cfg.reps);
    for (unsigned m = cfg.m_min; m <= cfg.m_max; ++m) {
        const std::size_t i = m - cfg.m_min;
        double sum = 0.0, sq = 0.0;
        for (const auto& e : est) {
            sum += e[i];
            const double err = e[i] - f.exact;
            sq += err * err;
        }
        const double mse = sq / reps;
        const double mean = sum / reps;
        double spread = 0.0;
        for (const auto& e : est) spread += (e[i] - mean) * (e[i] - mean);
        double var_sq = 0.0;
        for (const auto& e : est) {
            const double err = e[i] - f.exact;
            var_sq += (err * err - mse) * (err * err - mse);
        }
        var_sq /= reps - 1.0;
        RmseRow row;
        row.m = m;
        row.n = point_count(*seq, m);
        row.rmse = std::sqrt(mse);
        row.rmse_stderr = row.rmse > 0.0 ? std::sqrt(var_sq / reps) / (2.0 * row.rmse) : 0.0;
        row.mean_estimate = mean;
        row.estimate_stderr = std::sqrt(spread / (reps - 1.0) / reps);
        rows.push_back(row);
    }
    return rows;
}

void write_csv(std::ostream& out, std::span<const RmseRow> rows) {
    const auto old = out.precision(17);
    out << "m,n,rmse,rmse_stderr,mean_estimate\n";
    for (const auto& r : rows) out << r.m << ',' << r.n << ',' << r.rmse << ',' << r.rmse_stderr << ',' << r.mean_estimate << '\n';
    out.precision(old);
}

void write_json(std::ostream& out, std::span<const RmseRow> rows, const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["integrand"] = cfg.integrand;
    j["family"] = to_string(cfg.spec.family);
    j["mode"] = to_string(cfg.mode);
    j["reps"] = cfg.reps;
    j["seed"] = cfg.seed;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"m", r.m}, {"n", r.n}, {"rmse", r.rmse}, {"rmse_stderr", r.rmse_stderr},
                             {"mean_estimate", r.mean_estimate}, {"estimate_stderr", r.estimate_stderr}});
    out << j.dump(2) << '\n';
}

double slope_fit(std::span<const RmseRow> rows, unsigned m_lo, unsigned m_hi) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        if (r.m < m_lo || r.m > m_hi) continue;
        if (!(r.rmse > 0.0)) throw std::domain_error("slope_fit: rmse must be positive");
        xs.push_back(double(r.m));
        ys.push_back(std::log2(r.rmse));
    }
    if (xs.size() < 3) throw std::invalid_argument("slope_fit: at least 3 rows in range required");
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / double(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

double drop_score(std::span<const RmseRow> rows, unsigned period) {
    if (period == 0) throw std::invalid_argument("drop_score: period must be >= 1");
    double on = 0.0, off = 0.0;
    std::size_t n_on = 0, n_off = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].m != rows[i - 1].m + 1) continue;
        if (!(rows[i].rmse > 0.0) || !(rows[i - 1].rmse > 0.0)) throw std::domain_error("drop_score: rmse must be positive");
        const double drop = std::log2(rows[i - 1].rmse) - std::log2(rows[i].rmse);
        if (rows[i].m % period == 0) {
            on += drop;
            ++n_on;
        } else {
            off += drop;
            ++n_off;
        }
    }
    if (n_on == 0 || n_off == 0) throw std::invalid_argument("drop_score: insufficient rows");
    return on / double(n_on) - off / double(n_off);
}

}  // namespace cqmc
