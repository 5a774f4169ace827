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

#ifndef SATBEAM_INTERFERENCE_HPP
#define SATBEAM_INTERFERENCE_HPP

#include <armadillo>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "satbeam/geometry.hpp"

namespace satbeam {

/// One terrestrial base station in polar coordinates about the
/// sub-satellite point.
struct TerrestrialStation {
    double distance_to_subsat_m = 0.0; // R_n
    double polar_angle_rad = 0.0;      // psi_n
};

/// User density over a cell disk, in polar coordinates local to the station.
/// Must integrate to 1 over the disk.
using DensityFn = std::function<double(double r, double phi)>;

/// Terrestrial network layout: station positions, common cell radius,
/// per-station user count and the within-cell user distribution.
struct TerrestrialLayout {
    std::vector<TerrestrialStation> stations;
    double cell_radius_m = 500.0;
    arma::uword users_per_bs = 10;
    std::string density_name = "uniform";
    DensityFn density; // empty -> uniform over the cell disk

    arma::uword total_users() const { return stations.size() * users_per_bs; }
    double density_at(double r, double phi) const;
    std::uint64_t fingerprint() const;
};

/// Sample counts of the midpoint rule used for the cell-disk integrals.
struct PolarGrid {
    arma::uword n_radial = 32;
    arma::uword n_angular = 64;
};

enum class InterferenceProvenance { integral, position_aided };

/// Spatial covariance of the satellite-to-terrestrial channels, together
/// with how it was obtained. Hermitian PSD by construction.
struct InterferenceModel {
    arma::cx_mat matrix;
    InterferenceProvenance provenance = InterferenceProvenance::integral;
    PolarGrid grid;
    double quad_error_rel = 0.0;      // grid-doubling estimate, integral models only
    bool density_renormalized = false;
    std::uint64_t layout_fingerprint = 0;
};

/// Slant range from the satellite to a point at local polar coordinates
/// (r, phi) in the cell of a station at (bs_distance, bs_angle).
double propagation_distance(double orbit_altitude_m, double bs_distance_m, double bs_angle_rad,
                            double r_m, double phi_rad);

/// Covariance of the terrestrial interference channels as a user-density
/// integral over every cell disk, scaled by the per-station user count.
/// A non-normalized density is renormalized (flagged in the result); with
/// estimate_error set, the matrix is recomputed on a doubled grid and the
/// relative Frobenius change stored as quad_error_rel.
InterferenceModel integral_interference_matrix(const TerrestrialLayout& layout,
                                               const SystemConfig& config,
                                               const PolarGrid& grid = {},
                                               bool estimate_error = true);

/// Position-aided approximation: every user of a station is collapsed onto
/// the station center, giving a rank <= N_G covariance without integrals.
InterferenceModel pa_interference_matrix(const TerrestrialLayout& layout,
                                         const SystemConfig& config);

/// Average interference power per terrestrial user,
/// Tr{P^H Upsilon P} / total_users.
double average_interference_power(const arma::cx_mat& precoder, const InterferenceModel& model,
                                  arma::uword total_users);

/// Bessel function of the first kind, order zero. Power series below |x|=12,
/// Hankel asymptotic expansion beyond; absolute error stays below 1e-10 for
/// |x| <= 1e3.
double bessel_j0(double x);

/// Squared element error between the density-integral covariance and its
/// position-aided approximation, for a single cell at the sub-satellite
/// point with uniform user density. omega is the antenna index offset
/// sqrt((m_a - m_p)^2 + (n_b - n_q)^2).
double approximation_error_element(double omega, double cell_radius_m,
                                   double user_density_per_m2, double carrier_frequency_hz,
                                   double orbit_altitude_m, double coverage_radius_m,
                                   double tx_gain_linear, double rx_gain_linear);

} // namespace satbeam

#endif
