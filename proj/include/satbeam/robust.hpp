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

#ifndef SATBEAM_ROBUST_HPP
#define SATBEAM_ROBUST_HPP

#include <armadillo>
#include <utility>
#include <vector>

#include "satbeam/geometry.hpp"
#include "satbeam/interference.hpp"
#include "satbeam/precoding.hpp"

namespace satbeam {

/// Interference-constrained beamforming problem: user statistics, the
/// terrestrial interference covariance, and the two budgets.
struct RobustProblem {
    std::vector<SatUserStats> users;
    SsAggregates aggregates;
    InterferenceModel interference;
    double i_thr_w = 1e-15;  // average interference threshold, watts
    double p_t_w = 1.0;      // transmit power budget, watts
    arma::uword k_g = 1;     // total terrestrial users
    double tolerance = 1e-4; // outer-loop convergence threshold
    int iter_max = 100;
};

RobustProblem make_robust_problem(std::vector<SatUserStats> users, InterferenceModel interference,
                                  double i_thr_w, double p_t_w, arma::uword k_g,
                                  double tolerance = 1e-4, int iter_max = 100);

// ---------- quadratic-transform path (iterative WSR maximization) ----------

/// Closed-form update of the fraction-decoupling auxiliary variables.
arma::cx_vec mcqt_update_xi(const arma::cx_mat& precoder, const std::vector<SatUserStats>& users);

/// Quadratic-transform surrogate of the weighted sum rate; coincides with
/// lower_bound_rate at the optimal auxiliaries. Throws std::domain_error
/// when a log argument is nonpositive (auxiliaries infeasible for this P).
double mcqt_objective(const arma::cx_vec& xi, const arma::cx_mat& precoder,
                      const std::vector<SatUserStats>& users);

struct SubproblemResult {
    arma::cx_mat precoder;
    bool line_search_ok = true;
};

/// Maximize the fixed-auxiliary surrogate over the intersection of the
/// power ball and the interference ellipsoid (projected gradient ascent with
/// backtracking; every accepted iterate is feasible).
SubproblemResult solve_wsr_subproblem(const arma::cx_vec& xi, const RobustProblem& problem,
                                      const arma::cx_mat& p_init);

/// Alternating WSR maximization under the interference threshold.
PrecoderResult wqtia(const RobustProblem& problem);

// ---------- weighted-MSE path (multiplier iteration) ----------

/// Receive-scalar update minimizing each user's MSE.
arma::cx_vec wmmse_update_u(const arma::cx_mat& precoder, const std::vector<SatUserStats>& users);

/// Per-user MSE at the given receive scalars.
arma::vec wmmse_mse(const arma::cx_mat& precoder, const arma::cx_vec& u,
                    const std::vector<SatUserStats>& users);

/// MSE-weight update w_k = a_k / e_k.
arma::vec wmmse_update_w(const arma::vec& mse, const arma::vec& weights);

/// Stationary precoder of the weighted-MSE Lagrangian for fixed multipliers.
arma::cx_mat precoder_from_multipliers(double lambda, double mu, const arma::cx_vec& u,
                                       const arma::vec& w, const RobustProblem& problem);

struct MultiplierSolution {
    double lambda = 0.0;
    double mu = 0.0;
    arma::cx_mat precoder;
    bool converged = true;
};

/// Pick multipliers so the stationary precoder is feasible and the weighted
/// MSE is minimized. Bisections on the active constraints cover the
/// complementary-slackness cases; a log-grid plus Nelder-Mead penalty search
/// is the fallback. Deterministic.
MultiplierSolution solve_multipliers(const arma::cx_vec& u, const arma::vec& w,
                                     const RobustProblem& problem);

/// Alternating weighted-MSE minimization under the interference threshold.
PrecoderResult wweia(const RobustProblem& problem);

// ---------- closed-form MMSE path ----------

/// Interference-penalized MMSE precoder and its power normalization,
/// P = beta * (cov + varsigma * interference + (K_S sigma^2 / P_T) I)^{-1} Hbar.
std::pair<arma::cx_mat, double> mmse_ia_closed_form(double varsigma,
                                                    const RobustProblem& problem);

/// Closed-form beamforming with the penalty factor bisected until the
/// average interference meets the threshold within 0.01 dB.
PrecoderResult mmse_ia(const RobustProblem& problem);

// ---------- position-aided variants ----------

enum class RobustAlgorithm { wqtia, wweia, mmse_ia };

/// Run one of the robust algorithms against a problem whose interference
/// model is the position-aided approximation. Result tags carry a "-pa"
/// suffix; auditing against the integral model is the caller's concern.
PrecoderResult pa_variant(RobustAlgorithm algorithm, const RobustProblem& pa_problem);

} // namespace satbeam

#endif
