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

#ifndef SATBEAM_EVALUATION_HPP
#define SATBEAM_EVALUATION_HPP

#include <string>
#include <utility>
#include <vector>

#include "satbeam/robust.hpp"
#include "satbeam/scenario.hpp"

namespace satbeam {

inline constexpr const char* kBuildId = "satbeam-0.1.0";

enum class Algorithm { mrt, zf, mmse, wmmse, wqtia, wweia, mmseia, wqtia_pa, wweia_pa, mmseia_pa };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name); // throws on unknown names
bool algorithm_uses_pa_model(Algorithm algorithm);

/// One evaluated operating point.
struct EvalRecord {
    std::string algorithm;
    double snr_db = 0.0;
    double i_thr_dbw = 0.0;
    double sum_rate = 0.0; // Monte Carlo mean, bits/s/Hz
    double sum_rate_stderr = 0.0;
    double lower_bound = 0.0;
    double i_avg_dbw = 0.0;      // under the model the optimizer used
    double i_avg_true_dbw = 0.0; // audited with the integral model
    int iterations = 0;
    bool converged = true;
    double seconds = 0.0;
};

struct SweepSpec {
    enum class Variable { snr_db, i_thr_dbw, k_s };
    Variable variable = Variable::snr_db;
    std::vector<double> grid;
    std::vector<Algorithm> algorithms;
    arma::uword monte_carlo_samples = 2000;
    std::uint64_t seed = 1;
    double base_snr_db = 10.0;
    double base_i_thr_dbw = -150.0;
    double tolerance = 1e-4;
    int iter_max = 100;
    PolarGrid grid_quadrature;
};

/// Monte Carlo estimate of the ergodic sum rate: (mean, standard error)
/// over n_samples channel draws.
std::pair<double, double> ergodic_sum_rate(const arma::cx_mat& precoder,
                                           const std::vector<SatUserStats>& users,
                                           arma::uword n_samples, Rng& rng);

/// Closed-form Jensen bound on the ergodic sum rate.
double lower_bound_rate(const arma::cx_mat& precoder, const std::vector<SatUserStats>& users);

/// Received-power map over ground offsets from the sub-satellite point, in
/// dBW per grid cell; row i, column j corresponds to (x_offsets[i],
/// y_offsets[j]).
arma::mat beam_pattern(const arma::cx_mat& precoder, const SystemConfig& config,
                       const arma::vec& x_offsets_m, const arma::vec& y_offsets_m);

/// Run one algorithm at one operating point against prebuilt interference
/// models. rate_rng supplies the Monte Carlo draws; the achieved
/// interference is always audited against the integral model.
EvalRecord evaluate_point(Algorithm algorithm, const std::vector<SatUserStats>& users,
                          const InterferenceModel& integral_model,
                          const InterferenceModel& pa_model, arma::uword total_users,
                          double snr_db, double i_thr_dbw, double tx_power_w, double tolerance,
                          int iter_max, arma::uword mc_samples, Rng rate_rng,
                          PrecoderResult* result_out = nullptr);

/// Evaluate every algorithm on every grid point. Points run in parallel
/// (SATBEAM_THREADS caps the worker count) and the records come back in
/// grid-major order regardless of scheduling.
std::vector<EvalRecord> run_sweep(const SweepSpec& spec, const Scenario& scenario);

/// CSV serialization (dB units, fixed formatting, header row).
std::string records_to_csv(const std::vector<EvalRecord>& records);

} // namespace satbeam

#endif
