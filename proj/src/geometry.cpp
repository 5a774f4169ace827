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

#include "satbeam/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace satbeam {

void SystemConfig::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("SystemConfig: ") + name +
                                        " must be positive and finite");
    };
    positive(carrier_frequency_hz, "carrier_frequency_hz");
    positive(orbit_altitude_m, "orbit_altitude_m");
    positive(coverage_radius_m, "coverage_radius_m");
    positive(tx_power_w, "tx_power_w");
    positive(per_antenna_tx_gain_linear, "per_antenna_tx_gain_linear");
    positive(rx_gain_linear, "rx_gain_linear");
    positive(noise_figure_linear, "noise_figure_linear");
    positive(antenna_temp_k, "antenna_temp_k");
    positive(bandwidth_hz, "bandwidth_hz");
    positive(element_spacing_ratio, "element_spacing_ratio");
    if (rician_factor_linear < 0.0)
        throw std::invalid_argument("SystemConfig: rician_factor_linear must be nonnegative");
    if (m_x < 1 || m_y < 1)
        throw std::invalid_argument("SystemConfig: array dimensions must be at least 1");
}

std::pair<double, double> direction_cosines(double elevation_rad, double azimuth_rad)
{
    return {std::sin(elevation_rad) * std::cos(azimuth_rad), std::cos(elevation_rad)};
}

arma::cx_vec upa_steering(double cos_x, double cos_y, arma::uword m_x, arma::uword m_y,
                          double spacing_ratio)
{
    if (m_x < 1 || m_y < 1)
        throw std::invalid_argument("upa_steering: array dimensions must be at least 1");

    const double amp = 1.0 / std::sqrt(static_cast<double>(m_x * m_y));
    const std::complex<double> step_x =
        std::polar(1.0, -2.0 * kPi * spacing_ratio * cos_x);
    const std::complex<double> step_y =
        std::polar(1.0, -2.0 * kPi * spacing_ratio * cos_y);

    arma::cx_vec v(m_x * m_y);
    std::complex<double> phase_y(1.0, 0.0);
    for (arma::uword q = 0; q < m_y; ++q) {
        std::complex<double> phase = phase_y;
        for (arma::uword p = 0; p < m_x; ++p) {
            v(q * m_x + p) = amp * phase;
            phase *= step_x;
        }
        phase_y *= step_y;
    }
    return v;
}

std::complex<double> rician_mean_gain(double gain_amplitude, double rician_factor)
{
    double part = gain_amplitude * std::sqrt(rician_factor / (2.0 * (rician_factor + 1.0)));
    return {part, part};
}

std::complex<double> sample_rician_gain(double gain_amplitude, double rician_factor, Rng& rng)
{
    double mean = gain_amplitude * std::sqrt(rician_factor / (2.0 * (rician_factor + 1.0)));
    double sigma = gain_amplitude / std::sqrt(2.0 * (rician_factor + 1.0));
    return {mean + sigma * rng.gaussian(), mean + sigma * rng.gaussian()};
}

double free_space_gain_power(const SystemConfig& config, double distance_m)
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("free_space_gain_power: distance must be positive");
    double ratio = kSpeedOfLight / (4.0 * kPi * config.carrier_frequency_hz * distance_m);
    return static_cast<double>(config.antenna_count()) * config.per_antenna_tx_gain_linear *
           config.rx_gain_linear * ratio * ratio;
}

double noise_power_from_snr(const SystemConfig& config, arma::uword k_s, double snr_db)
{
    if (k_s < 1)
        throw std::invalid_argument("noise_power_from_snr: k_s must be at least 1");
    // per-user received power at the sub-satellite distance over the SNR
    double rx_power = config.tx_power_w / static_cast<double>(k_s) *
                      free_space_gain_power(config, config.orbit_altitude_m);
    return rx_power / std::pow(10.0, snr_db / 10.0);
}

SatUserStats build_sat_user_stats(const SatUserGeometry& geometry, const SystemConfig& config,
                                  double snr_db, arma::uword k_s)
{
    if (!(geometry.distance_m > 0.0))
        throw std::invalid_argument("build_sat_user_stats: distance must be positive");

    auto [cx, cy] = direction_cosines(geometry.elevation_rad, geometry.azimuth_rad);
    SatUserStats stats;
    stats.steering = upa_steering(cx, cy, config.m_x, config.m_y, config.element_spacing_ratio);
    stats.gain_power = free_space_gain_power(config, geometry.distance_m);
    stats.mean_gain = rician_mean_gain(std::sqrt(stats.gain_power), config.rician_factor_linear);
    stats.noise_power_w = noise_power_from_snr(config, k_s, snr_db);
    stats.rician_factor = config.rician_factor_linear;
    stats.weight = 1.0;
    return stats;
}

SsAggregates aggregate_ss_stats(const std::vector<SatUserStats>& users)
{
    if (users.empty())
        throw std::invalid_argument("aggregate_ss_stats: user list is empty");
    const arma::uword m = users.front().steering.n_elem;

    SsAggregates agg;
    agg.mean_channel.set_size(m, users.size());
    agg.covariance.zeros(m, m);
    for (arma::uword k = 0; k < users.size(); ++k) {
        const SatUserStats& u = users[k];
        if (u.steering.n_elem != m)
            throw std::invalid_argument("aggregate_ss_stats: steering dimensions disagree");
        agg.mean_channel.col(k) = u.mean_gain * u.steering;
        agg.covariance += u.gain_power * (u.steering * u.steering.t());
    }
    return agg;
}

arma::cx_mat sample_channel_matrix(const std::vector<SatUserStats>& users, Rng& rng)
{
    if (users.empty())
        throw std::invalid_argument("sample_channel_matrix: user list is empty");
    arma::cx_mat b(users.front().steering.n_elem, users.size());
    for (arma::uword k = 0; k < users.size(); ++k) {
        const SatUserStats& u = users[k];
        std::complex<double> g =
            sample_rician_gain(std::sqrt(u.gain_power), u.rician_factor, rng);
        b.col(k) = g * u.steering;
    }
    return b;
}

} // namespace satbeam
