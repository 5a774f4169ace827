// SPDX-License-Identifier: Apache-2.0
//
// satbeam - satellite TX beamforming with terrestrial interference protection
// Copyright (C) 2025-2026 satbeam contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "satbeam/evaluation.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "satbeam/precoding.hpp"

namespace satbeam {

std::string to_string(Algorithm algorithm)
{
    switch (algorithm) {
    case Algorithm::mrt: return "mrt";
    case Algorithm::zf: return "zf";
    case Algorithm::mmse: return "mmse";
    case Algorithm::wmmse: return "wmmse";
    case Algorithm::wqtia: return "wqtia";
    case Algorithm::wweia: return "wweia";
    case Algorithm::mmseia: return "mmseia";
    case Algorithm::wqtia_pa: return "wqtia-pa";
    case Algorithm::wweia_pa: return "wweia-pa";
    case Algorithm::mmseia_pa: return "mmseia-pa";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name)
{
    static const std::pair<const char*, Algorithm> table[] = {
        {"mrt", Algorithm::mrt},           {"zf", Algorithm::zf},
        {"mmse", Algorithm::mmse},         {"wmmse", Algorithm::wmmse},
        {"wqtia", Algorithm::wqtia},       {"wweia", Algorithm::wweia},
        {"mmseia", Algorithm::mmseia},     {"wqtia-pa", Algorithm::wqtia_pa},
        {"wweia-pa", Algorithm::wweia_pa}, {"mmseia-pa", Algorithm::mmseia_pa},
    };
    for (const auto& [key, value] : table)
        if (name == key)
            return value;
    throw std::invalid_argument("unknown algorithm '" + name +
                                "' (expected one of mrt, zf, mmse, wmmse, wqtia, wweia, "
                                "mmseia, wqtia-pa, wweia-pa, mmseia-pa)");
}

bool algorithm_uses_pa_model(Algorithm algorithm)
{
    return algorithm == Algorithm::wqtia_pa || algorithm == Algorithm::wweia_pa ||
           algorithm == Algorithm::mmseia_pa;
}

std::pair<double, double> ergodic_sum_rate(const arma::cx_mat& precoder,
                                           const std::vector<SatUserStats>& users,
                                           arma::uword n_samples, Rng& rng)
{
    if (n_samples < 2)
        throw std::invalid_argument("ergodic_sum_rate: need at least 2 samples");

    double sum = 0.0, sumsq = 0.0;
    for (arma::uword s = 0; s < n_samples; ++s) {
        arma::cx_mat b = sample_channel_matrix(users, rng);
        arma::cx_mat c = b.t() * precoder; // (k, i) = b_k^H p_i
        double rate = 0.0;
        for (arma::uword k = 0; k < users.size(); ++k) {
            double signal = std::norm(c(k, k));
            double other = 0.0;
            for (arma::uword i = 0; i < users.size(); ++i)
                if (i != k)
                    other += std::norm(c(k, i));
            rate += users[k].weight * std::log2(1.0 + signal / (other + users[k].noise_power_w));
        }
        sum += rate;
        sumsq += rate * rate;
    }
    double n = static_cast<double>(n_samples);
    double mean = sum / n;
    double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

double lower_bound_rate(const arma::cx_mat& precoder, const std::vector<SatUserStats>& users)
{
    if (users.empty())
        throw std::invalid_argument("lower_bound_rate: user list is empty");
    double rate = 0.0;
    for (arma::uword k = 0; k < users.size(); ++k) {
        const SatUserStats& u = users[k];
        arma::cx_rowvec inner = u.steering.t() * precoder; // v_k^H p_i
        double rp = 0.0;
        for (arma::uword i = 0; i < users.size(); ++i)
            rp += std::norm(inner(i));
        double signal = std::norm(u.mean_gain) * std::norm(inner(k));
        double den = u.gain_power * rp - signal + u.noise_power_w;
        rate += u.weight * std::log2(1.0 + signal / den);
    }
    return rate;
}

arma::mat beam_pattern(const arma::cx_mat& precoder, const SystemConfig& config,
                       const arma::vec& x_offsets_m, const arma::vec& y_offsets_m)
{
    arma::mat pattern(x_offsets_m.n_elem, y_offsets_m.n_elem);
    for (arma::uword i = 0; i < x_offsets_m.n_elem; ++i) {
        for (arma::uword j = 0; j < y_offsets_m.n_elem; ++j) {
            double x = x_offsets_m(i), y = y_offsets_m(j);
            double cx = x / config.coverage_radius_m;
            double cy = y / config.coverage_radius_m;
            arma::cx_vec v =
                upa_steering(cx, cy, config.m_x, config.m_y, config.element_spacing_ratio);
            double d = std::sqrt(config.orbit_altitude_m * config.orbit_altitude_m + x * x +
                                 y * y);
            double gain = free_space_gain_power(config, d);
            arma::cx_rowvec inner = v.t() * precoder;
            double power = 0.0;
            for (arma::uword k = 0; k < inner.n_elem; ++k)
                power += std::norm(inner(k));
            pattern(i, j) = 10.0 * std::log10(std::max(power * gain, 1e-300));
        }
    }
    return pattern;
}

namespace {

double to_dbw(double watts) { return 10.0 * std::log10(std::max(watts, 1e-40)); }

} // namespace

EvalRecord evaluate_point(Algorithm algorithm, const std::vector<SatUserStats>& users,
                          const InterferenceModel& integral_model,
                          const InterferenceModel& pa_model, arma::uword total_users,
                          double snr_db, double i_thr_dbw, double tx_power_w, double tolerance,
                          int iter_max, arma::uword mc_samples, Rng rate_rng,
                          PrecoderResult* result_out)
{
    const double i_thr_w = std::pow(10.0, i_thr_dbw / 10.0);
    const bool pa = algorithm_uses_pa_model(algorithm);
    const InterferenceModel& model = pa ? pa_model : integral_model;
    SsAggregates agg = aggregate_ss_stats(users);

    auto wall_start = std::chrono::steady_clock::now();
    PrecoderResult run;
    switch (algorithm) {
    case Algorithm::mrt:
        run = mrt(agg.mean_channel, tx_power_w);
        break;
    case Algorithm::zf:
        run = zf(agg.mean_channel, tx_power_w);
        break;
    case Algorithm::mmse:
        run = rzf_mmse(agg.mean_channel, agg.covariance, users.front().noise_power_w,
                       tx_power_w);
        break;
    case Algorithm::wmmse:
        run = wmmse_baseline(users, tx_power_w, tolerance, iter_max);
        break;
    default: {
        RobustProblem problem = make_robust_problem(users, model, i_thr_w, tx_power_w,
                                                    total_users, tolerance, iter_max);
        switch (algorithm) {
        case Algorithm::wqtia:
            run = wqtia(problem);
            break;
        case Algorithm::wweia:
            run = wweia(problem);
            break;
        case Algorithm::mmseia:
            run = mmse_ia(problem);
            break;
        case Algorithm::wqtia_pa:
            run = pa_variant(RobustAlgorithm::wqtia, problem);
            break;
        case Algorithm::wweia_pa:
            run = pa_variant(RobustAlgorithm::wweia, problem);
            break;
        case Algorithm::mmseia_pa:
            run = pa_variant(RobustAlgorithm::mmse_ia, problem);
            break;
        default:
            break;
        }
        break;
    }
    }
    std::chrono::duration<double> wall = std::chrono::steady_clock::now() - wall_start;

    EvalRecord rec;
    rec.algorithm = to_string(algorithm);
    rec.snr_db = snr_db;
    rec.i_thr_dbw = i_thr_dbw;
    auto [mean, se] = ergodic_sum_rate(run.precoder, users, mc_samples, rate_rng);
    rec.sum_rate = mean;
    rec.sum_rate_stderr = se;
    rec.lower_bound = lower_bound_rate(run.precoder, users);

    double i_true = average_interference_power(run.precoder, integral_model, total_users);
    rec.i_avg_true_dbw = to_dbw(i_true);
    if (pa)
        rec.i_avg_dbw = to_dbw(average_interference_power(run.precoder, pa_model, total_users));
    else
        rec.i_avg_dbw = rec.i_avg_true_dbw; // same code path, same value

    rec.iterations = run.iterations;
    rec.converged = run.converged;
    rec.seconds = wall.count();
    if (result_out != nullptr)
        *result_out = std::move(run);
    return rec;
}

std::vector<EvalRecord> run_sweep(const SweepSpec& spec, const Scenario& scenario)
{
    if (spec.grid.empty())
        throw std::invalid_argument("run_sweep: empty grid");
    if (spec.algorithms.empty())
        throw std::invalid_argument("run_sweep: no algorithms selected");
    if (spec.monte_carlo_samples < 100)
        throw std::invalid_argument("run_sweep: monte_carlo_samples must be at least 100");

    InterferenceModel integral = integral_interference_matrix(
        scenario.terrestrial, scenario.system, spec.grid_quadrature);
    InterferenceModel pa = pa_interference_matrix(scenario.terrestrial, scenario.system);
    const arma::uword total_users = scenario.terrestrial.total_users();

    auto eval_grid_point = [&](std::size_t gi) {
        double value = spec.grid[gi];
        double snr_db = spec.variable == SweepSpec::Variable::snr_db ? value : spec.base_snr_db;
        double i_thr_dbw =
            spec.variable == SweepSpec::Variable::i_thr_dbw ? value : spec.base_i_thr_dbw;
        arma::uword k_s = spec.variable == SweepSpec::Variable::k_s
                              ? static_cast<arma::uword>(std::llround(value))
                              : 0;
        std::vector<SatUserStats> users = scenario_user_stats(scenario, snr_db, k_s);

        std::vector<EvalRecord> records;
        for (Algorithm algorithm : spec.algorithms) {
            // every algorithm at a grid point sees the same channel draws
            Rng rate_rng = Rng(spec.seed, 0x72617465).split(gi);
            try {
                records.push_back(evaluate_point(algorithm, users, integral, pa, total_users,
                                                 snr_db, i_thr_dbw, scenario.system.tx_power_w,
                                                 spec.tolerance, spec.iter_max,
                                                 spec.monte_carlo_samples, rate_rng));
            } catch (const std::exception& err) {
                EvalRecord failed;
                failed.algorithm = to_string(algorithm);
                failed.snr_db = snr_db;
                failed.i_thr_dbw = i_thr_dbw;
                failed.converged = false;
                failed.iterations = -1; // run failed, see stderr
                std::fprintf(stderr, "run_sweep: %s at grid point %zu failed: %s\n",
                             to_string(algorithm).c_str(), gi, err.what());
                records.push_back(failed);
            }
        }
        return records;
    };

    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("SATBEAM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            workers = static_cast<unsigned>(v);
    }
    workers = std::max(1u, std::min<unsigned>(workers, spec.grid.size()));

    std::vector<std::vector<EvalRecord>> per_point(spec.grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t gi = next.fetch_add(1);
            if (gi >= spec.grid.size())
                return;
            per_point[gi] = eval_grid_point(gi);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t)
        pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool)
        t.join();

    std::vector<EvalRecord> merged;
    for (std::vector<EvalRecord>& point : per_point)
        for (EvalRecord& rec : point)
            merged.push_back(std::move(rec));
    return merged;
}

std::string records_to_csv(const std::vector<EvalRecord>& records)
{
    std::string out = "algorithm,snr_db,i_thr_dbw,sum_rate,sum_rate_stderr,lb_rate,"
                      "i_avg_dbw,i_avg_true_dbw,iters,converged,seconds\n";
    char buf[512];
    for (const EvalRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.10g,%.4g,%.10g,%.6f,%.6f,%d,%d,%.3f\n",
                      r.algorithm.c_str(), r.snr_db, r.i_thr_dbw, r.sum_rate, r.sum_rate_stderr,
                      r.lower_bound, r.i_avg_dbw, r.i_avg_true_dbw, r.iterations,
                      r.converged ? 1 : 0, r.seconds);
        out += buf;
    }
    return out;
}

} // namespace satbeam
