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

#include "satbeam/precoding.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "closed_form.hpp"
#include "satbeam/robust.hpp"

namespace satbeam {

PrecoderResult mrt(const arma::cx_mat& mean_channel, double tx_power_w)
{
    double n = arma::norm(mean_channel, "fro");
    if (!(n > 0.0))
        throw std::invalid_argument("mrt: mean channel is zero");
    PrecoderResult result;
    result.algorithm = "mrt";
    result.precoder = (std::sqrt(tx_power_w) / n) * mean_channel;
    return result;
}

PrecoderResult zf(const arma::cx_mat& mean_channel, double tx_power_w)
{
    if (mean_channel.n_cols > mean_channel.n_rows)
        throw std::invalid_argument("zf: more users than antennas");

    arma::cx_mat gram = mean_channel.t() * mean_channel;
    double rc = arma::rcond(gram);
    if (!(rc > 1e-12)) {
        // name the most colinear pair for the caller
        arma::uword bi = 0, bj = 1;
        double worst = 0.0;
        for (arma::uword i = 0; i < gram.n_rows; ++i) {
            for (arma::uword j = i + 1; j < gram.n_cols; ++j) {
                double denom = std::sqrt(std::real(gram(i, i)) * std::real(gram(j, j)));
                double corr = denom > 0.0 ? std::abs(gram(i, j)) / denom : 1.0;
                if (corr > worst) {
                    worst = corr;
                    bi = i;
                    bj = j;
                }
            }
        }
        std::ostringstream msg;
        msg << "zf: mean channel is rank deficient; users " << bi << " and " << bj
            << " have near-colinear channels (|correlation| = " << worst << ")";
        throw std::runtime_error(msg.str());
    }

    arma::cx_mat raw = mean_channel * arma::inv(gram);
    double n = arma::norm(raw, "fro");
    PrecoderResult result;
    result.algorithm = "zf";
    result.precoder = (std::sqrt(tx_power_w) / n) * raw;
    return result;
}

PrecoderResult rzf_mmse(const arma::cx_mat& mean_channel, const arma::cx_mat& covariance,
                        double noise_power_w, double tx_power_w)
{
    if (!(noise_power_w > 0.0))
        throw std::invalid_argument("rzf_mmse: noise power must be positive");
    auto [p, beta] = detail::mmse_closed_form_core(mean_channel, covariance, nullptr, 0.0,
                                                   noise_power_w, tx_power_w);
    PrecoderResult result;
    result.algorithm = "mmse";
    result.precoder = std::move(p);
    result.beta = beta;
    return result;
}

PrecoderResult wmmse_baseline(const std::vector<SatUserStats>& users, double tx_power_w,
                              double tolerance, int iter_max)
{
    const arma::uword m = users.empty() ? 0 : users.front().steering.n_elem;
    InterferenceModel none;
    none.matrix.zeros(m, m);
    none.provenance = InterferenceProvenance::integral;

    RobustProblem problem =
        make_robust_problem(users, std::move(none), std::numeric_limits<double>::infinity(),
                            tx_power_w, 1, tolerance, iter_max);
    PrecoderResult result = wweia(problem);
    result.algorithm = "wmmse";
    return result;
}

} // namespace satbeam
