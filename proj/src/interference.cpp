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

#include "satbeam/interference.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "satbeam/numerics.hpp"

namespace satbeam {

double TerrestrialLayout::density_at(double r, double phi) const
{
    if (density)
        return density(r, phi);
    return 1.0 / (kPi * cell_radius_m * cell_radius_m);
}

std::uint64_t TerrestrialLayout::fingerprint() const
{
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](const void* data, std::size_t n) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    for (const TerrestrialStation& s : stations) {
        mix(&s.distance_to_subsat_m, sizeof(double));
        mix(&s.polar_angle_rad, sizeof(double));
    }
    mix(&cell_radius_m, sizeof(double));
    std::uint64_t k = users_per_bs;
    mix(&k, sizeof(k));
    mix(density_name.data(), density_name.size());
    return h;
}

double propagation_distance(double orbit_altitude_m, double bs_distance_m, double bs_angle_rad,
                            double r_m, double phi_rad)
{
    return std::sqrt(orbit_altitude_m * orbit_altitude_m + bs_distance_m * bs_distance_m +
                     r_m * r_m + 2.0 * bs_distance_m * r_m * std::cos(bs_angle_rad - phi_rad));
}

namespace {

void check_psd(const arma::cx_mat& m, const char* what)
{
    if (arma::norm(m - m.t(), "fro") > 1e-12 * std::max(1.0, arma::norm(m, "fro")))
        throw std::runtime_error(std::string(what) + ": covariance is not Hermitian");
    arma::vec ev;
    if (!arma::eig_sym(ev, m))
        throw std::runtime_error(std::string(what) + ": eigendecomposition failed");
    double trace = arma::sum(ev);
    if (ev.min() < -1e-10 * std::max(trace, 1e-300))
        throw std::runtime_error(std::string(what) + ": covariance is not PSD");
}

// Phase-difference table accumulated over all cells: entry (a, b) holds the
// density-weighted sum of amp * exp(j*step*(dm*cos_x + dn*cos_y)) for
// dm = a - (m_x - 1), dn = b - (m_y - 1). Every matrix element is a lookup
// into this table, which keeps the build cost independent of M_S^2.
arma::cx_mat phase_difference_table(const TerrestrialLayout& layout, const SystemConfig& config,
                                    arma::uword n_radial, arma::uword n_angular,
                                    bool& renormalized)
{
    const arma::uword m_x = config.m_x, m_y = config.m_y;
    const arma::uword nx = 2 * m_x - 1, ny = 2 * m_y - 1;
    const double h = config.orbit_altitude_m;
    const double amp_coef = config.per_antenna_tx_gain_linear * config.rx_gain_linear *
                            kSpeedOfLight * kSpeedOfLight /
                            std::pow(4.0 * kPi * config.carrier_frequency_hz, 2);
    const double phase_step = 2.0 * kPi * config.element_spacing_ratio / config.coverage_radius_m;
    const double dr = layout.cell_radius_m / static_cast<double>(n_radial);
    const double dphi = 2.0 * kPi / static_cast<double>(n_angular);

    // cells share the grid, so one density mass check covers all of them
    double mass = 0.0;
    for (arma::uword i = 0; i < n_radial; ++i) {
        double r = (static_cast<double>(i) + 0.5) * dr;
        for (arma::uword j = 0; j < n_angular; ++j) {
            double phi = (static_cast<double>(j) + 0.5) * dphi;
            mass += layout.density_at(r, phi) * r * dr * dphi;
        }
    }
    double dens_scale = 1.0;
    if (std::abs(mass - 1.0) > 1e-3) {
        renormalized = true;
        dens_scale = 1.0 / mass;
    }

    arma::cx_mat table(nx, ny, arma::fill::zeros);
    std::vector<std::complex<double>> px(nx), py(ny);

    for (const TerrestrialStation& bs : layout.stations) {
        const double big_r = bs.distance_to_subsat_m;
        const double psi = bs.polar_angle_rad;
        const double cpsi = std::cos(psi), spsi = std::sin(psi);
        for (arma::uword i = 0; i < n_radial; ++i) {
            double r = (static_cast<double>(i) + 0.5) * dr;
            for (arma::uword j = 0; j < n_angular; ++j) {
                double phi = (static_cast<double>(j) + 0.5) * dphi;
                double x = big_r * cpsi + r * std::cos(phi);
                double y = big_r * spsi + r * std::sin(phi);
                double d2 = h * h + big_r * big_r + r * r +
                            2.0 * big_r * r * std::cos(psi - phi);
                double w = amp_coef / d2 * layout.density_at(r, phi) * dens_scale * r * dr * dphi;

                std::complex<double> sx = std::polar(1.0, phase_step * x);
                std::complex<double> sy = std::polar(1.0, phase_step * y);
                px[m_x - 1] = 1.0;
                for (arma::uword k = 1; k < m_x; ++k) {
                    px[m_x - 1 + k] = px[m_x - 2 + k] * sx;
                    px[m_x - 1 - k] = std::conj(px[m_x - 1 + k]);
                }
                py[m_y - 1] = 1.0;
                for (arma::uword k = 1; k < m_y; ++k) {
                    py[m_y - 1 + k] = py[m_y - 2 + k] * sy;
                    py[m_y - 1 - k] = std::conj(py[m_y - 1 + k]);
                }
                for (arma::uword b = 0; b < ny; ++b) {
                    std::complex<double> wy = w * py[b];
                    for (arma::uword a = 0; a < nx; ++a)
                        table(a, b) += wy * px[a];
                }
            }
        }
    }
    return table * static_cast<double>(layout.users_per_bs);
}

arma::cx_mat matrix_from_table(const arma::cx_mat& table, arma::uword m_x, arma::uword m_y)
{
    const arma::uword ms = m_x * m_y;
    const arma::sword sx = static_cast<arma::sword>(m_x);
    arma::cx_mat m(ms, ms);
    for (arma::uword j = 0; j < ms; ++j) {
        arma::sword ma = static_cast<arma::sword>(j) % sx, nb = static_cast<arma::sword>(j) / sx;
        for (arma::uword i = 0; i < ms; ++i) {
            arma::sword mp = static_cast<arma::sword>(i) % sx,
                        nq = static_cast<arma::sword>(i) / sx;
            m(i, j) = table(static_cast<arma::uword>(ma - mp + sx - 1),
                            static_cast<arma::uword>(nb - nq + static_cast<arma::sword>(m_y) - 1));
        }
    }
    return m;
}

} // namespace

InterferenceModel integral_interference_matrix(const TerrestrialLayout& layout,
                                               const SystemConfig& config, const PolarGrid& grid,
                                               bool estimate_error)
{
    if (layout.stations.empty())
        throw std::invalid_argument("integral_interference_matrix: layout has no stations");
    if (!(layout.cell_radius_m > 0.0))
        throw std::invalid_argument("integral_interference_matrix: cell radius must be positive");
    if (layout.users_per_bs < 1)
        throw std::invalid_argument("integral_interference_matrix: users_per_bs must be >= 1");
    for (const TerrestrialStation& s : layout.stations)
        if (s.distance_to_subsat_m < 0.0)
            throw std::invalid_argument(
                "integral_interference_matrix: station distances must be nonnegative");
    if (grid.n_radial < 4 || grid.n_angular < 4)
        throw std::invalid_argument("integral_interference_matrix: grid too coarse (minimum 4x4)");

    InterferenceModel model;
    model.provenance = InterferenceProvenance::integral;
    model.grid = grid;
    model.layout_fingerprint = layout.fingerprint();

    arma::cx_mat table =
        phase_difference_table(layout, config, grid.n_radial, grid.n_angular,
                               model.density_renormalized);
    model.matrix = matrix_from_table(table, config.m_x, config.m_y);

    if (estimate_error) {
        bool renorm2 = false;
        arma::cx_mat fine = matrix_from_table(
            phase_difference_table(layout, config, 2 * grid.n_radial, 2 * grid.n_angular, renorm2),
            config.m_x, config.m_y);
        model.quad_error_rel =
            arma::norm(fine - model.matrix, "fro") / std::max(arma::norm(fine, "fro"), 1e-300);
    }

    check_psd(model.matrix, "integral_interference_matrix");
    return model;
}

InterferenceModel pa_interference_matrix(const TerrestrialLayout& layout,
                                         const SystemConfig& config)
{
    if (layout.stations.empty())
        throw std::invalid_argument("pa_interference_matrix: layout has no stations");
    for (const TerrestrialStation& s : layout.stations)
        if (s.distance_to_subsat_m < 0.0)
            throw std::invalid_argument(
                "pa_interference_matrix: station distances must be nonnegative");

    InterferenceModel model;
    model.provenance = InterferenceProvenance::position_aided;
    model.layout_fingerprint = layout.fingerprint();

    const arma::uword ms = config.antenna_count();
    model.matrix.zeros(ms, ms);
    for (const TerrestrialStation& bs : layout.stations) {
        double d = std::sqrt(config.orbit_altitude_m * config.orbit_altitude_m +
                             bs.distance_to_subsat_m * bs.distance_to_subsat_m);
        double gain = free_space_gain_power(config, d);
        double cx = bs.distance_to_subsat_m * std::cos(bs.polar_angle_rad) /
                    config.coverage_radius_m;
        double cy = bs.distance_to_subsat_m * std::sin(bs.polar_angle_rad) /
                    config.coverage_radius_m;
        arma::cx_vec v =
            upa_steering(cx, cy, config.m_x, config.m_y, config.element_spacing_ratio);
        model.matrix += gain * (v * v.t());
    }
    model.matrix *= static_cast<double>(layout.users_per_bs);

    check_psd(model.matrix, "pa_interference_matrix");
    return model;
}

double average_interference_power(const arma::cx_mat& precoder, const InterferenceModel& model,
                                  arma::uword total_users)
{
    if (precoder.n_rows != model.matrix.n_rows)
        throw std::invalid_argument("average_interference_power: dimension mismatch");
    if (total_users < 1)
        throw std::invalid_argument("average_interference_power: total_users must be >= 1");

    arma::cx_mat mp = model.matrix * precoder;
    double s = 0.0;
    for (arma::uword k = 0; k < precoder.n_cols; ++k)
        s += std::real(arma::cdot(precoder.col(k), mp.col(k)));
    return std::max(s, 0.0) / static_cast<double>(total_users);
}

// ---------- Bessel J0 ----------

double bessel_j0(double x)
{
    double ax = std::abs(x);
    if (ax < 12.0) {
        double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= 90; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            sum += term;
            if (std::abs(term) < 1e-19 * (1.0 + std::abs(sum)))
                break;
        }
        return sum;
    }

    // Hankel expansion, truncated where the terms stop shrinking
    double p = 1.0, q = 0.0;
    double c = 1.0, prev = 1.0;
    for (int m = 1; m <= 40; ++m) {
        c *= (2.0 * m - 1.0) * (2.0 * m - 1.0) / (8.0 * m * ax);
        if (c >= prev || c < 1e-19)
            break;
        prev = c;
        double signed_c = ((m / 2) % 2 == 0) ? c : -c;
        if (m % 2 == 1)
            q += ((m - 1) / 2 % 2 == 0) ? c : -c;
        else
            p += signed_c;
    }
    double chi = ax - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * ax)) * (p * std::cos(chi) + q * std::sin(chi));
}

namespace {

// 1 - J0(x) without cancellation for small arguments
double bessel_j0_deficit(double x)
{
    double ax = std::abs(x);
    if (ax >= 0.7)
        return 1.0 - bessel_j0(x);
    double q = 0.25 * x * x;
    double term = -q, sum = q; // -(sum of series terms from k = 1)
    for (int k = 2; k <= 30; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum -= term;
        if (std::abs(term) < 1e-20 * (sum + 1e-300))
            break;
    }
    return sum;
}

} // namespace

double approximation_error_element(double omega, double cell_radius_m,
                                   double user_density_per_m2, double carrier_frequency_hz,
                                   double orbit_altitude_m, double coverage_radius_m,
                                   double tx_gain_linear, double rx_gain_linear)
{
    if (cell_radius_m == 0.0)
        return 0.0;
    const double h2 = orbit_altitude_m * orbit_altitude_m;
    const double a = kPi * omega / coverage_radius_m;
    const double eta = tx_gain_linear * rx_gain_linear * kSpeedOfLight * kSpeedOfLight *
                       user_density_per_m2 / std::pow(4.0 * kPi * carrier_frequency_hz, 2);

    // difference between the flat-cell term and the Bessel-weighted integral,
    // folded into one positive integrand to avoid cancellation
    auto integrand = [&](double r) {
        return 2.0 * kPi * r * (r * r + h2 * bessel_j0_deficit(a * r)) / (h2 * (h2 + r * r));
    };
    double diff = adaptive_simpson(integrand, 0.0, cell_radius_m, 1e-8);
    return eta * eta * diff * diff;
}

} // namespace satbeam
