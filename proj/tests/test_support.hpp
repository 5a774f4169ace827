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

#ifndef SATBEAM_TESTS_TEST_SUPPORT_HPP
#define SATBEAM_TESTS_TEST_SUPPORT_HPP

#include <vector>

#include "satbeam/geometry.hpp"
#include "satbeam/interference.hpp"
#include "satbeam/rng.hpp"
#include "satbeam/robust.hpp"

namespace test_support {

/// Random user set with well-scaled magnitudes for finite-difference work.
inline std::vector<satbeam::SatUserStats> random_users(arma::uword count, arma::uword m_x,
                                                       arma::uword m_y, double kappa,
                                                       double noise, satbeam::Rng& rng)
{
    std::vector<satbeam::SatUserStats> users(count);
    for (satbeam::SatUserStats& u : users) {
        double cx = 0.9 * (2.0 * rng.uniform() - 1.0);
        double cy = 0.9 * std::sqrt(1.0 - cx * cx) * (2.0 * rng.uniform() - 1.0);
        u.steering = satbeam::upa_steering(cx, cy, m_x, m_y, 0.5);
        u.gain_power = 0.5 + rng.uniform();
        u.mean_gain = satbeam::rician_mean_gain(std::sqrt(u.gain_power), kappa);
        u.noise_power_w = noise;
        u.rician_factor = kappa;
    }
    return users;
}

/// Rank-deficient-free random precoder.
inline arma::cx_mat random_precoder(arma::uword m, arma::uword k, satbeam::Rng& rng)
{
    arma::cx_mat p(m, k);
    for (auto& v : p)
        v = rng.complex_gaussian();
    return p;
}

/// Interference model holding an explicit matrix.
inline satbeam::InterferenceModel model_from_matrix(arma::cx_mat m)
{
    satbeam::InterferenceModel model;
    model.matrix = std::move(m);
    model.provenance = satbeam::InterferenceProvenance::integral;
    return model;
}

/// Small interference-bound problem around random users; the threshold is
/// set to a fraction of the unconstrained interference so it binds.
inline satbeam::RobustProblem random_bound_problem(arma::uword users_n, arma::uword m_x,
                                                   arma::uword m_y, satbeam::Rng& rng,
                                                   double threshold_fraction = 0.3,
                                                   double p_t = 1.0, double noise = 0.05)
{
    std::vector<satbeam::SatUserStats> users =
        random_users(users_n, m_x, m_y, 10.0, noise, rng);

    const arma::uword m = m_x * m_y;
    arma::cx_mat g = random_precoder(m, m, rng);
    arma::cx_mat ups = g * g.t() / static_cast<double>(m);

    satbeam::RobustProblem probe = satbeam::make_robust_problem(
        users, model_from_matrix(ups), 1.0, p_t, 4, 1e-6, 100);
    auto [p0, beta] = satbeam::mmse_ia_closed_form(0.0, probe);
    (void)beta;
    double unconstrained =
        satbeam::average_interference_power(p0, probe.interference, probe.k_g);

    return satbeam::make_robust_problem(users, model_from_matrix(ups),
                                        threshold_fraction * unconstrained, p_t, 4, 1e-6, 100);
}

} // namespace test_support

#endif
