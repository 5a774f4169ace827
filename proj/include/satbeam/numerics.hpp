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

#ifndef SATBEAM_NUMERICS_HPP
#define SATBEAM_NUMERICS_HPP

#include <armadillo>
#include <complex>
#include <functional>
#include <utility>

namespace satbeam {

// ---------- scalar root finding ----------

struct BisectionSpec {
    double lo = 0.0;
    double hi = 1.0;
    double target = 0.0;
    double tol = 1e-9;
    int max_iter = 200;
};

/// Bisection for a nonincreasing scalar function. Requires the bracket
/// f(lo) >= target >= f(hi); throws std::invalid_argument (with the endpoint
/// values in the message) when the bracket does not hold.
double bisect_monotone(const std::function<double(double)>& f, const BisectionSpec& spec);

// ---------- feasible-set projections ----------

/// Quadratic constraint set { X : Tr{X^H M X} <= bound } held in the
/// eigenbasis of the Hermitian PSD matrix M, so repeated projections reuse
/// one decomposition.
struct EllipsoidSet {
    arma::cx_mat eigvec; // columns = eigenvectors of M
    arma::vec eigval;    // nonnegative, ascending
    double bound = 0.0;

    static EllipsoidSet from_matrix(const arma::cx_mat& psd, double bound);
    double quadratic(const arma::cx_mat& x) const;
};

/// Euclidean projection onto one ellipsoid (scales rows in the eigenbasis;
/// the scaling factor solves the secular equation by bisection).
arma::cx_mat project_ellipsoid(const arma::cx_mat& x, const EllipsoidSet& set);

/// Projection onto { ||X||_F <= power_radius } intersected with an
/// EllipsoidSet. Single-constraint cases reduce to one secular bisection;
/// with both constraints active the two multipliers are found by alternating
/// bisections in the shared eigenbasis. Idempotent on feasible inputs; the
/// result satisfies both constraints exactly.
arma::cx_mat project_intersection(const arma::cx_mat& x, double power_radius,
                                  const EllipsoidSet& set);

// ---------- derivative-free 2-D minimization ----------

struct NelderMeadResult {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
    bool budget_exhausted = false;
};

/// Nelder-Mead simplex descent on a 2-D box. Vertices are clipped to the
/// box, evaluation order is fixed, and the best evaluated point is returned,
/// so results are deterministic.
NelderMeadResult nelder_mead_2d(const std::function<double(double, double)>& f,
                                std::pair<double, double> start,
                                std::pair<double, double> lo,
                                std::pair<double, double> hi, int budget);

// ---------- quadrature ----------

/// Midpoint rule on the disk of the given radius in polar coordinates,
/// summed in fixed (radial outer, angular inner) order.
std::complex<double>
polar_midpoint_integrate(const std::function<std::complex<double>(double, double)>& kernel,
                         double radius, arma::uword n_radial, arma::uword n_angular);

/// Adaptive Simpson quadrature on [a, b] with a relative error target.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol);

// ---------- derivative checking ----------

/// Central-difference gradient of a real function of a complex matrix.
/// Returns d f / d Re{X} + j * d f / d Im{X} (twice the conjugate Wirtinger
/// gradient), the convention used by the stationarity checks in the tests.
arma::cx_mat finite_difference_gradient(const std::function<double(const arma::cx_mat&)>& f,
                                        const arma::cx_mat& x, double h);

} // namespace satbeam

#endif
