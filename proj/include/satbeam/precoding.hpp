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

#ifndef SATBEAM_PRECODING_HPP
#define SATBEAM_PRECODING_HPP

#include <armadillo>
#include <string>
#include <vector>

#include "satbeam/geometry.hpp"

namespace satbeam {

struct Multipliers {
    double lambda = 0.0;   // power-budget multiplier
    double mu = 0.0;       // interference-threshold multiplier
    double varsigma = 0.0; // interference penalty of the closed-form solver
};

struct TracePoint {
    int iteration = 0;
    double objective = 0.0;
    double avg_interference_w = 0.0;
};

/// Output of any precoder: the beamforming matrix plus convergence metadata.
struct PrecoderResult {
    arma::cx_mat precoder; // M_S x K_S
    double beta = 0.0;     // normalization scale where the scheme defines one
    std::string algorithm;
    Multipliers multipliers;
    std::vector<TracePoint> trace;
    int iterations = 0;
    bool converged = true;
    std::string warning;
};

/// Maximum ratio transmission on the mean channel, normalized to the power
/// budget.
PrecoderResult mrt(const arma::cx_mat& mean_channel, double tx_power_w);

/// Zero forcing on the mean channel. Throws when the channel loses column
/// rank, naming the closest-to-colinear user pair.
PrecoderResult zf(const arma::cx_mat& mean_channel, double tx_power_w);

/// Regularized MMSE on statistical CSI,
/// P = beta * (cov + (K_S sigma^2 / P_T) I)^{-1} Hbar.
PrecoderResult rzf_mmse(const arma::cx_mat& mean_channel, const arma::cx_mat& covariance,
                        double noise_power_w, double tx_power_w);

/// Weighted-MMSE iteration without an interference constraint; shares the
/// code path of the interference-aware variant with the threshold disabled.
PrecoderResult wmmse_baseline(const std::vector<SatUserStats>& users, double tx_power_w,
                              double tolerance = 1e-4, int iter_max = 100);

} // namespace satbeam

#endif
