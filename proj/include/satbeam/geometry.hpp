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

#ifndef SATBEAM_GEOMETRY_HPP
#define SATBEAM_GEOMETRY_HPP

#include <armadillo>
#include <complex>
#include <utility>
#include <vector>

#include "satbeam/rng.hpp"

namespace satbeam {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kPi = 3.14159265358979323846;

/// Link-budget and array parameters of the satellite system. All values are
/// linear SI units; dB conversions happen only at the CLI boundary.
struct SystemConfig {
    double carrier_frequency_hz = 2.0e9;
    double orbit_altitude_m = 600.0e3;
    double coverage_radius_m = 630.0e3;
    arma::uword m_x = 8; // antennas along the x axis
    arma::uword m_y = 8; // antennas along the y axis
    double tx_power_w = 316.22776601683794; // 25 dBW
    double rician_factor_linear = 10.0;
    double per_antenna_tx_gain_linear = 3.9810717055349722; // 6 dBi
    double rx_gain_linear = 1.0;
    double noise_figure_linear = 7.943282347242816; // 9 dB
    double antenna_temp_k = 290.0;
    double bandwidth_hz = 10.0e6;
    double element_spacing_ratio = 0.5; // d / lambda

    arma::uword antenna_count() const { return m_x * m_y; }
    void validate() const; // throws std::invalid_argument on nonsense values
};

/// Position of one satellite user as seen from the array.
struct SatUserGeometry {
    double elevation_rad = 0.0;
    double azimuth_rad = 0.0;
    double distance_m = 0.0;
};

/// Statistical CSI of one satellite user: steering vector, average channel
/// power, Rician mean gain and the noise floor at its receiver.
struct SatUserStats {
    arma::cx_vec steering;               // unit norm, length m_x * m_y
    double gain_power = 0.0;             // E{ |g|^2 }
    std::complex<double> mean_gain{0.0}; // E{ g }
    double noise_power_w = 0.0;
    double rician_factor = 0.0;
    double weight = 1.0; // rate weight a_k
};

/// Mean channel matrix and transmit-side covariance accumulated over users.
struct SsAggregates {
    arma::cx_mat mean_channel; // column k = mean_gain_k * steering_k
    arma::cx_mat covariance;   // sum_k gain_power_k * v_k v_k^H, Hermitian PSD
};

/// Direction cosines (x, y) of a user at the given elevation/azimuth.
std::pair<double, double> direction_cosines(double elevation_rad, double azimuth_rad);

/// Steering vector of an m_x-by-m_y planar array toward direction cosines
/// (cos_x, cos_y). Element ordering has the x index fastest: entry
/// i = n_q * m_x + m_p carries phase exp(-j*2*pi*spacing*(m_p*cos_x + n_q*cos_y)),
/// which equals the Kronecker product of the y-axis and x-axis factors.
arma::cx_vec upa_steering(double cos_x, double cos_y, arma::uword m_x, arma::uword m_y,
                          double spacing_ratio = 0.5);

/// Mean of a Rician-fading complex gain with average power gain_amplitude^2.
std::complex<double> rician_mean_gain(double gain_amplitude, double rician_factor);

/// One draw of the Rician complex gain (real and imaginary parts are iid
/// Gaussian around the mean).
std::complex<double> sample_rician_gain(double gain_amplitude, double rician_factor, Rng& rng);

/// Free-space power gain of the full array at the given distance,
/// M * G_T * G_R * (c / (4 pi f d))^2.
double free_space_gain_power(const SystemConfig& config, double distance_m);

/// Common noise power chosen so the link-budget SNR identity holds at the
/// sub-satellite distance for k_s equally sharing the transmit power.
double noise_power_from_snr(const SystemConfig& config, arma::uword k_s, double snr_db);

/// Assemble per-user statistical CSI from geometry and the operating SNR.
SatUserStats build_sat_user_stats(const SatUserGeometry& geometry, const SystemConfig& config,
                                  double snr_db, arma::uword k_s);

/// Mean channel matrix and covariance over a user set.
SsAggregates aggregate_ss_stats(const std::vector<SatUserStats>& users);

/// Phase-stripped channel realization B; column k is a fresh Rician gain
/// draw times the user's steering vector.
arma::cx_mat sample_channel_matrix(const std::vector<SatUserStats>& users, Rng& rng);

} // namespace satbeam

#endif
