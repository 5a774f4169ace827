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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "satbeam/numerics.hpp"
#include "satbeam/rng.hpp"

using namespace satbeam;

TEST_CASE("bisection on a linear function")
{
    double x = bisect_monotone([](double v) { return -v; }, {0.0, 1.0, -0.5, 1e-12, 200});
    REQUIRE(std::abs(x - 0.5) < 1e-11);
}

TEST_CASE("bisection inverts a rational function")
{
    // f(x) = 1/(1+x) is nonincreasing; f(3) = 0.25
    double x = bisect_monotone([](double v) { return 1.0 / (1.0 + v); }, {0.0, 10.0, 0.25, 1e-12, 200});
    REQUIRE(std::abs(x - 3.0) < 1e-9);
}

TEST_CASE("bisection rejects a broken bracket")
{
    REQUIRE_THROWS_AS(bisect_monotone([](double) { return 1.0; }, {0.0, 1.0, 0.25, 1e-9, 100}),
                      std::invalid_argument);
}

TEST_CASE("bisection halves the bracket every iteration")
{
    // with an unreachable value tolerance the final width is span / 2^iters
    double x = bisect_monotone([](double v) { return -v; }, {0.0, 1024.0, -3.14159, 0.0, 30});
    REQUIRE(std::abs(x - 3.14159) <= 1024.0 * std::pow(2.0, -30) + 1e-12);
}

namespace {

arma::cx_mat random_cx(arma::uword rows, arma::uword cols, Rng& rng)
{
    arma::cx_mat m(rows, cols);
    for (arma::uword j = 0; j < cols; ++j)
        for (arma::uword i = 0; i < rows; ++i)
            m(i, j) = rng.complex_gaussian();
    return m;
}

arma::cx_mat random_psd(arma::uword n, Rng& rng)
{
    arma::cx_mat a = random_cx(n, n, rng);
    return a * a.t() / static_cast<double>(n);
}

} // namespace

TEST_CASE("ellipsoid projection is exact and idempotent")
{
    Rng rng(11);
    arma::cx_mat psd = random_psd(6, rng);
    EllipsoidSet set = EllipsoidSet::from_matrix(psd, 2.0);

    arma::cx_mat x = random_cx(6, 3, rng);
    arma::cx_mat proj = project_ellipsoid(x, set);
    REQUIRE(set.quadratic(proj) <= 2.0 * (1.0 + 1e-12));

    if (set.quadratic(x) <= 2.0)
        REQUIRE(arma::norm(proj - x, "fro") == 0.0);
    arma::cx_mat twice = project_ellipsoid(proj, set);
    REQUIRE(arma::norm(twice - proj, "fro") <= 1e-12 * arma::norm(proj, "fro"));
}

TEST_CASE("identity-matrix ellipsoid reduces to radial scaling")
{
    arma::cx_mat eye(4, 4, arma::fill::eye);
    EllipsoidSet set = EllipsoidSet::from_matrix(eye, 1.0);
    arma::cx_mat x(4, 2, arma::fill::ones);
    arma::cx_mat proj = project_ellipsoid(x, set);
    double n = arma::norm(x, "fro");
    REQUIRE(arma::norm(proj - x / n, "fro") < 1e-9);
}

TEST_CASE("intersection projection: feasible points are fixed")
{
    Rng rng(12);
    arma::cx_mat psd = random_psd(5, rng);
    EllipsoidSet set = EllipsoidSet::from_matrix(psd, 100.0);
    arma::cx_mat x = 0.01 * random_cx(5, 2, rng);
    REQUIRE(arma::norm(project_intersection(x, 10.0, set) - x, "fro") == 0.0);
}

TEST_CASE("intersection with identity covariance picks the tighter ball")
{
    arma::cx_mat eye(4, 4, arma::fill::eye);
    EllipsoidSet set = EllipsoidSet::from_matrix(eye, 1.0); // ||X||_F^2 <= 1
    arma::cx_mat x(4, 1, arma::fill::value(std::complex<double>(2.0, 0.0)));
    arma::cx_mat proj = project_intersection(x, 3.0, set);
    REQUIRE(arma::norm(proj - x / arma::norm(x, "fro"), "fro") < 1e-9);
}

TEST_CASE("intersection projection matches a rejection-sampling oracle on a plane toy")
{
    // real 2-vector; constraints: a ball of radius 1.2 and an axis-weighted
    // ellipse 2 x0^2 + 0.5 x1^2 <= 1
    arma::cx_mat ell(2, 2, arma::fill::zeros);
    ell(0, 0) = 2.0;
    ell(1, 1) = 0.5;
    EllipsoidSet set = EllipsoidSet::from_matrix(ell, 1.0);

    arma::cx_mat x(2, 1);
    x(0, 0) = 1.5;
    x(1, 0) = 1.1;
    arma::cx_mat proj = project_intersection(x, 1.2, set);
    REQUIRE(arma::norm(proj, "fro") <= 1.2 * (1.0 + 1e-12));
    REQUIRE(set.quadratic(proj) <= 1.0 * (1.0 + 1e-12));

    // the contact point sits where both boundaries meet, so the oracle's
    // excess error is first order in the sample spacing; 2e7 samples push it
    // below the comparison tolerance
    Rng rng(99);
    double best = 1e300;
    for (int s = 0; s < 20000000; ++s) {
        double p0 = -1.2 + 2.4 * rng.uniform();
        double p1 = -1.2 + 2.4 * rng.uniform();
        if (p0 * p0 + p1 * p1 > 1.2 * 1.2)
            continue;
        if (2.0 * p0 * p0 + 0.5 * p1 * p1 > 1.0)
            continue;
        double d = std::hypot(p0 - 1.5, p1 - 1.1);
        best = std::min(best, d);
    }
    double dist = arma::norm(x - proj, "fro");
    REQUIRE(dist <= best + 1e-4);
    REQUIRE(best <= dist + 1e-4);
}

TEST_CASE("intersection projection is non-expansive on probe pairs")
{
    Rng rng(13);
    arma::cx_mat psd = random_psd(4, rng);
    EllipsoidSet set = EllipsoidSet::from_matrix(psd, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        arma::cx_mat a = random_cx(4, 2, rng), b = random_cx(4, 2, rng);
        arma::cx_mat pa = project_intersection(a, 1.0, set);
        arma::cx_mat pb = project_intersection(b, 1.0, set);
        REQUIRE(arma::norm(pa - pb, "fro") <= arma::norm(a - b, "fro") * (1.0 + 1e-9));
    }
}

TEST_CASE("nelder-mead finds a quadratic minimum")
{
    auto f = [](double x, double y) { return (x - 1.0) * (x - 1.0) + (y - 2.0) * (y - 2.0); };
    NelderMeadResult r = nelder_mead_2d(f, {0.0, 0.0}, {-10.0, -10.0}, {10.0, 10.0}, 400);
    REQUIRE(std::abs(r.x - 1.0) < 1e-6);
    REQUIRE(std::abs(r.y - 2.0) < 1e-6);
}

TEST_CASE("nelder-mead handles the rosenbrock valley")
{
    auto f = [](double x, double y) {
        return 100.0 * (y - x * x) * (y - x * x) + (1.0 - x) * (1.0 - x);
    };
    NelderMeadResult r = nelder_mead_2d(f, {0.0, 0.0}, {-5.0, -5.0}, {5.0, 5.0}, 500);
    REQUIRE(r.value < 1e-3);
}

TEST_CASE("nelder-mead at the optimum converges immediately")
{
    auto f = [](double x, double y) { return x * x + y * y; };
    NelderMeadResult r = nelder_mead_2d(f, {0.0, 0.0}, {-1.0, -1.0}, {1.0, 1.0}, 200);
    REQUIRE(r.value <= 1e-12);
    REQUIRE_FALSE(r.budget_exhausted);
}

TEST_CASE("disk quadrature integrates polynomials and phases")
{
    const double pi = 3.14159265358979323846;
    auto one = [](double, double) { return std::complex<double>(1.0, 0.0); };
    auto radial = [](double r, double) { return std::complex<double>(r, 0.0); };
    auto phase = [](double, double phi) { return std::polar(1.0, phi); };

    std::complex<double> area = polar_midpoint_integrate(one, 2.0, 64, 128);
    REQUIRE(std::abs(area.real() - pi * 4.0) < 1e-6 * pi * 4.0);
    REQUIRE(std::abs(area.imag()) < 1e-12);

    std::complex<double> moment = polar_midpoint_integrate(radial, 2.0, 64, 128);
    REQUIRE(std::abs(moment.real() - 2.0 * pi * 8.0 / 3.0) < 1e-4 * (2.0 * pi * 8.0 / 3.0));

    std::complex<double> cancel = polar_midpoint_integrate(phase, 2.0, 32, 64);
    REQUIRE(std::abs(cancel) < 1e-12 * pi * 4.0);
}

TEST_CASE("disk quadrature error drops at second order under doubling")
{
    const double pi = 3.14159265358979323846;
    const double radius = 3.0;
    auto kernel = [](double r, double) { return std::complex<double>(std::cos(r), 0.0); };
    // 2 pi (cos R + R sin R - 1) for the radially symmetric integrand
    double exact = 2.0 * pi * (std::cos(radius) + radius * std::sin(radius) - 1.0);
    double coarse = std::abs(polar_midpoint_integrate(kernel, radius, 16, 32).real() - exact);
    double fine = std::abs(polar_midpoint_integrate(kernel, radius, 32, 64).real() - exact);
    REQUIRE(coarse / fine >= 3.9);
}

TEST_CASE("adaptive simpson hits analytic integrals")
{
    const double pi = 3.14159265358979323846;
    double a = adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-10);
    REQUIRE(std::abs(a - 1.0 / 3.0) < 1e-10);
    double b = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, pi, 1e-10);
    REQUIRE(std::abs(b - 2.0) < 1e-9);
}

TEST_CASE("finite differences recover analytic gradients")
{
    Rng rng(17);
    arma::cx_mat x = random_cx(3, 2, rng);

    // || X ||_F^2 -> 2 X in the (d/dRe + j d/dIm) convention
    arma::cx_mat g1 = finite_difference_gradient(
        [](const arma::cx_mat& m) { return std::pow(arma::norm(m, "fro"), 2); }, x, 1e-5);
    REQUIRE(arma::norm(g1 - 2.0 * x, "fro") < 1e-6 * (1.0 + arma::norm(x, "fro")));

    // Re tr(A^H X) -> A
    arma::cx_mat a = random_cx(3, 2, rng);
    arma::cx_mat g2 = finite_difference_gradient(
        [&](const arma::cx_mat& m) { return std::real(arma::trace(a.t() * m)); }, x, 1e-5);
    REQUIRE(arma::norm(g2 - a, "fro") < 1e-6 * (1.0 + arma::norm(a, "fro")));

    // Re tr(X^H Q X) with Hermitian Q -> 2 Q X
    arma::cx_mat q = random_psd(3, rng);
    arma::cx_mat g3 = finite_difference_gradient(
        [&](const arma::cx_mat& m) { return std::real(arma::trace(m.t() * q * m)); }, x, 1e-5);
    REQUIRE(arma::norm(g3 - 2.0 * q * x, "fro") < 1e-6 * (1.0 + arma::norm(q * x, "fro")));
}
