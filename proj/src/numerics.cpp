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

#include "satbeam/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace satbeam {

double bisect_monotone(const std::function<double(double)>& f, const BisectionSpec& spec)
{
    if (!(spec.lo < spec.hi))
        throw std::invalid_argument("bisect_monotone: lo must be below hi");

    double f_lo = f(spec.lo);
    double f_hi = f(spec.hi);
    if (!(f_lo >= spec.target && spec.target >= f_hi)) {
        std::ostringstream msg;
        msg << "bisect_monotone: target " << spec.target << " not bracketed by f(" << spec.lo
            << ")=" << f_lo << " and f(" << spec.hi << ")=" << f_hi;
        throw std::invalid_argument(msg.str());
    }

    double lo = spec.lo, hi = spec.hi;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < spec.max_iter; ++it) {
        mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (std::abs(fm - spec.target) <= spec.tol)
            return mid;
        if (fm >= spec.target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 4.0 * std::numeric_limits<double>::epsilon() *
                          (std::abs(lo) + std::abs(hi) + 1e-300))
            break;
    }
    return mid;
}

// ---------- projections ----------

EllipsoidSet EllipsoidSet::from_matrix(const arma::cx_mat& psd, double bound)
{
    if (psd.n_rows != psd.n_cols)
        throw std::invalid_argument("EllipsoidSet: matrix must be square");
    if (arma::norm(psd - psd.t(), "fro") > 1e-10 * (1.0 + arma::norm(psd, "fro")))
        throw std::invalid_argument("EllipsoidSet: matrix must be Hermitian");

    EllipsoidSet set;
    set.bound = bound;
    if (!arma::eig_sym(set.eigval, set.eigvec, psd))
        throw std::runtime_error("EllipsoidSet: eigendecomposition failed");
    double floor = -1e-10 * std::max(1e-300, arma::sum(arma::abs(set.eigval)));
    if (set.eigval.min() < floor)
        throw std::invalid_argument("EllipsoidSet: matrix is not positive semidefinite");
    set.eigval.transform([](double v) { return v < 0.0 ? 0.0 : v; });
    return set;
}

double EllipsoidSet::quadratic(const arma::cx_mat& x) const
{
    arma::cx_mat y = eigvec.t() * x;
    double q = 0.0;
    for (arma::uword i = 0; i < y.n_rows; ++i) {
        double row = 0.0;
        for (arma::uword j = 0; j < y.n_cols; ++j)
            row += std::norm(y(i, j));
        q += eigval(i) * row;
    }
    return q;
}

arma::cx_mat project_ellipsoid(const arma::cx_mat& x, const EllipsoidSet& set)
{
    arma::cx_mat y = set.eigvec.t() * x;
    arma::vec s(y.n_rows);
    double q = 0.0;
    for (arma::uword i = 0; i < y.n_rows; ++i) {
        double row = 0.0;
        for (arma::uword j = 0; j < y.n_cols; ++j)
            row += std::norm(y(i, j));
        s(i) = set.eigval(i) * row;
        q += s(i);
    }
    if (q <= set.bound)
        return x;

    // secular equation: sum_i s_i / (1 + nu*lambda_i)^2 = bound, decreasing in nu
    auto quad_at = [&](double nu) {
        double v = 0.0;
        for (arma::uword i = 0; i < s.n_elem; ++i) {
            double d = 1.0 + nu * set.eigval(i);
            v += s(i) / (d * d);
        }
        return v;
    };

    double lam_max = set.eigval.max();
    double nu_hi = 1.0 / std::max(lam_max, 1e-300);
    while (quad_at(nu_hi) > set.bound) {
        nu_hi *= 2.0;
        if (nu_hi > 1e300)
            throw std::runtime_error("project_ellipsoid: scaling factor diverged");
    }

    double lo = 0.0, hi = nu_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (quad_at(mid) > set.bound)
            lo = mid;
        else
            hi = mid;
    }
    double nu = hi; // hi side keeps the iterate inside the set

    for (arma::uword i = 0; i < y.n_rows; ++i)
        y.row(i) /= (1.0 + nu * set.eigval(i));
    return set.eigvec * y;
}

arma::cx_mat project_intersection(const arma::cx_mat& x, double power_radius,
                                  const EllipsoidSet& set)
{
    const double p_budget = power_radius * power_radius;

    double n0 = arma::norm(x, "fro");
    bool ball_ok = n0 * n0 <= p_budget;
    bool ell_ok = set.quadratic(x) <= set.bound;
    if (ball_ok && ell_ok)
        return x;

    if (!ell_ok && ball_ok) {
        arma::cx_mat proj = project_ellipsoid(x, set);
        if (arma::norm(proj, "fro") <= power_radius)
            return proj;
    } else if (ell_ok && !ball_ok) {
        arma::cx_mat proj = x * (power_radius / n0);
        if (set.quadratic(proj) <= set.bound)
            return proj;
    }

    // both constraints active: in the eigenbasis the projection scales row i
    // by 1/(1 + tau + nu*lambda_i); alternate the two secular bisections
    // until the KKT equalities hold
    arma::cx_mat y0 = set.eigvec.t() * x;
    arma::vec s(y0.n_rows);
    for (arma::uword i = 0; i < y0.n_rows; ++i) {
        double row = 0.0;
        for (arma::uword j = 0; j < y0.n_cols; ++j)
            row += std::norm(y0(i, j));
        s(i) = row;
    }

    auto power_at = [&](double tau, double nu) {
        double v = 0.0;
        for (arma::uword i = 0; i < s.n_elem; ++i) {
            double den = 1.0 + tau + nu * set.eigval(i);
            v += s(i) / (den * den);
        }
        return v;
    };
    auto quad_at = [&](double tau, double nu) {
        double v = 0.0;
        for (arma::uword i = 0; i < s.n_elem; ++i) {
            double den = 1.0 + tau + nu * set.eigval(i);
            v += set.eigval(i) * s(i) / (den * den);
        }
        return v;
    };
    // decreasing scalar root by doubling bracket plus bisection
    auto root = [](const std::function<double(double)>& f, double target) {
        if (f(0.0) <= target)
            return 0.0;
        double hi = 1.0;
        while (f(hi) > target) {
            hi *= 2.0;
            if (hi > 1e300)
                throw std::runtime_error("project_intersection: multiplier diverged");
        }
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (f(mid) > target ? lo : hi) = mid;
        }
        return hi;
    };

    double tau = 0.0, nu = 0.0;
    for (int round = 0; round < 200; ++round) {
        tau = root([&](double t) { return power_at(t, nu); }, p_budget);
        nu = root([&](double n) { return quad_at(tau, n); }, set.bound);
        double pw = power_at(tau, nu), qd = quad_at(tau, nu);
        bool feas = pw <= p_budget * (1.0 + 1e-13) && qd <= set.bound * (1.0 + 1e-13);
        bool cs_tau = tau == 0.0 || pw >= p_budget * (1.0 - 1e-11);
        bool cs_nu = nu == 0.0 || qd >= set.bound * (1.0 - 1e-11);
        if (feas && cs_tau && cs_nu)
            break;
    }

    arma::cx_mat y = y0;
    for (arma::uword i = 0; i < y.n_rows; ++i)
        y.row(i) /= (1.0 + tau + nu * set.eigval(i));
    arma::cx_mat result = set.eigvec * y;

    // exact pull-in of residual round-off violations
    double pn = arma::norm(result, "fro");
    double qv = set.quadratic(result);
    double c = 1.0;
    if (pn * pn > p_budget)
        c = std::min(c, power_radius / pn);
    if (qv > set.bound)
        c = std::min(c, std::sqrt(set.bound / qv));
    if (c < 1.0)
        result *= c;
    return result;
}

// ---------- Nelder-Mead ----------

NelderMeadResult nelder_mead_2d(const std::function<double(double, double)>& f,
                                std::pair<double, double> start, std::pair<double, double> lo,
                                std::pair<double, double> hi, int budget)
{
    auto clip = [&](double vx, double vy) {
        vx = std::clamp(vx, lo.first, hi.first);
        vy = std::clamp(vy, lo.second, hi.second);
        return std::pair<double, double>(vx, vy);
    };

    struct Vertex {
        double x, y, value;
    };

    int evals = 0;
    NelderMeadResult best{start.first, start.second,
                          std::numeric_limits<double>::infinity(), false};
    auto eval = [&](std::pair<double, double> p) {
        double v = f(p.first, p.second);
        ++evals;
        if (v < best.value) {
            best.x = p.first;
            best.y = p.second;
            best.value = v;
        }
        return v;
    };

    double dx = std::max({0.05 * std::abs(start.first), 2.5e-4 * (hi.first - lo.first), 1e-8});
    double dy = std::max({0.05 * std::abs(start.second), 2.5e-4 * (hi.second - lo.second), 1e-8});

    std::array<Vertex, 3> simplex;
    {
        auto p0 = clip(start.first, start.second);
        auto p1 = clip(start.first + dx, start.second);
        auto p2 = clip(start.first, start.second + dy);
        simplex[0] = {p0.first, p0.second, eval(p0)};
        simplex[1] = {p1.first, p1.second, eval(p1)};
        simplex[2] = {p2.first, p2.second, eval(p2)};
    }

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    while (evals < budget) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.value < b.value; });

        double diam = std::max(std::hypot(simplex[1].x - simplex[0].x, simplex[1].y - simplex[0].y),
                               std::hypot(simplex[2].x - simplex[0].x, simplex[2].y - simplex[0].y));
        double scale = 1.0 + std::abs(simplex[0].x) + std::abs(simplex[0].y);
        if (diam < 1e-13 * scale)
            return best;

        double cx = 0.5 * (simplex[0].x + simplex[1].x);
        double cy = 0.5 * (simplex[0].y + simplex[1].y);

        auto pr = clip(cx + alpha * (cx - simplex[2].x), cy + alpha * (cy - simplex[2].y));
        double vr = eval(pr);
        if (vr < simplex[0].value) {
            auto pe = clip(cx + gamma * (pr.first - cx), cy + gamma * (pr.second - cy));
            double ve = eval(pe);
            simplex[2] = (ve < vr) ? Vertex{pe.first, pe.second, ve}
                                   : Vertex{pr.first, pr.second, vr};
        } else if (vr < simplex[1].value) {
            simplex[2] = {pr.first, pr.second, vr};
        } else {
            bool outside = vr < simplex[2].value;
            auto base = outside ? pr : std::pair<double, double>{simplex[2].x, simplex[2].y};
            auto pc = clip(cx + rho * (base.first - cx), cy + rho * (base.second - cy));
            double vc = eval(pc);
            if (vc < std::min(vr, simplex[2].value)) {
                simplex[2] = {pc.first, pc.second, vc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    auto ps = clip(simplex[0].x + sigma * (simplex[i].x - simplex[0].x),
                                   simplex[0].y + sigma * (simplex[i].y - simplex[0].y));
                    simplex[i] = {ps.first, ps.second, eval(ps)};
                    if (evals >= budget)
                        break;
                }
            }
        }
    }
    best.budget_exhausted = true;
    return best;
}

// ---------- quadrature ----------

std::complex<double>
polar_midpoint_integrate(const std::function<std::complex<double>(double, double)>& kernel,
                         double radius, arma::uword n_radial, arma::uword n_angular)
{
    const double two_pi = 6.28318530717958647692;
    const double dr = radius / static_cast<double>(n_radial);
    const double dphi = two_pi / static_cast<double>(n_angular);
    std::complex<double> acc(0.0, 0.0);
    for (arma::uword i = 0; i < n_radial; ++i) {
        double r = (static_cast<double>(i) + 0.5) * dr;
        std::complex<double> ring(0.0, 0.0);
        for (arma::uword j = 0; j < n_angular; ++j) {
            double phi = (static_cast<double>(j) + 0.5) * dphi;
            ring += kernel(r, phi);
        }
        acc += ring * r;
    }
    return acc * dr * dphi;
}

namespace {

double simpson_panel(double a, double fa, double b, double fb, double fm)
{
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double fm, double whole, double tol, int depth)
{
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson_panel(a, fa, m, fm, flm);
    double right = simpson_panel(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol)
{
    if (a == b)
        return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson_panel(a, fa, b, fb, fm);
    double tol = rel_tol * std::max(std::abs(whole), 1e-300);
    return simpson_recurse(f, a, fa, b, fb, fm, whole, tol, 48);
}

// ---------- finite differences ----------

arma::cx_mat finite_difference_gradient(const std::function<double(const arma::cx_mat&)>& f,
                                        const arma::cx_mat& x, double h)
{
    arma::cx_mat g(arma::size(x), arma::fill::zeros);
    arma::cx_mat probe = x;
    for (arma::uword j = 0; j < x.n_cols; ++j) {
        for (arma::uword i = 0; i < x.n_rows; ++i) {
            std::complex<double> orig = probe(i, j);
            probe(i, j) = orig + h;
            double fp = f(probe);
            probe(i, j) = orig - h;
            double fn = f(probe);
            probe(i, j) = orig + std::complex<double>(0.0, h);
            double fip = f(probe);
            probe(i, j) = orig - std::complex<double>(0.0, h);
            double fin = f(probe);
            probe(i, j) = orig;
            g(i, j) = std::complex<double>((fp - fn) / (2.0 * h), (fip - fin) / (2.0 * h));
        }
    }
    return g;
}

} // namespace satbeam
