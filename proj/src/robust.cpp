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

#include "satbeam/robust.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "satbeam/numerics.hpp"
#include "closed_form.hpp"

namespace satbeam {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Rank-1 user statistics unpacked into matrix/vector form.
struct UserView {
    arma::cx_mat steering; // M x K
    arma::cx_vec mean_gain;
    arma::vec gain2;      // average channel powers
    arma::vec mean_gain2; // |mean gain|^2
    arma::vec noise;
    arma::vec weight;
    arma::uword count = 0;
};

UserView make_view(const std::vector<SatUserStats>& users)
{
    if (users.empty())
        throw std::invalid_argument("robust beamforming: user list is empty");
    UserView view;
    view.count = users.size();
    const arma::uword m = users.front().steering.n_elem;
    view.steering.set_size(m, view.count);
    view.mean_gain.set_size(view.count);
    view.gain2.set_size(view.count);
    view.mean_gain2.set_size(view.count);
    view.noise.set_size(view.count);
    view.weight.set_size(view.count);
    for (arma::uword k = 0; k < view.count; ++k) {
        const SatUserStats& u = users[k];
        if (u.steering.n_elem != m)
            throw std::invalid_argument("robust beamforming: steering dimensions disagree");
        if (!(u.noise_power_w > 0.0))
            throw std::invalid_argument("robust beamforming: noise power must be positive");
        view.steering.col(k) = u.steering;
        view.mean_gain(k) = u.mean_gain;
        view.gain2(k) = u.gain_power;
        view.mean_gain2(k) = std::norm(u.mean_gain);
        view.noise(k) = u.noise_power_w;
        view.weight(k) = u.weight;
    }
    return view;
}

// Per-user beam inner products v_k^H p_i for all pairs.
arma::cx_mat steering_products(const UserView& view, const arma::cx_mat& precoder)
{
    return view.steering.t() * precoder;
}

arma::vec row_powers(const arma::cx_mat& c)
{
    arma::vec rp(c.n_rows);
    for (arma::uword k = 0; k < c.n_rows; ++k) {
        double s = 0.0;
        for (arma::uword i = 0; i < c.n_cols; ++i)
            s += std::norm(c(k, i));
        rp(k) = s;
    }
    return rp;
}

// Denominator of the decoupled SINR fraction; positive since
// |mean_gain|^2 <= gain2 and the noise power is positive.
arma::vec fraction_denominators(const UserView& view, const arma::cx_mat& c)
{
    arma::vec rp = row_powers(c);
    arma::vec den(view.count);
    for (arma::uword k = 0; k < view.count; ++k)
        den(k) = view.gain2(k) * rp(k) - view.mean_gain2(k) * std::norm(c(k, k)) + view.noise(k);
    return den;
}

// Rates and interference depend on the mean gains only through their
// magnitudes, so the iterative solvers pin every mean-gain phase to the
// Rician convention. This keeps whole iteration trajectories (including
// line-search branches) invariant under per-user phase rotations of the
// input statistics; the returned precoder may differ by per-column phases,
// which carry no rate or interference content.
std::vector<SatUserStats> canonical_phase_users(const std::vector<SatUserStats>& users)
{
    const double isqrt2 = 0.70710678118654752440;
    std::vector<SatUserStats> pinned = users;
    for (SatUserStats& u : pinned) {
        double mag = std::abs(u.mean_gain);
        u.mean_gain = std::complex<double>(mag * isqrt2, mag * isqrt2);
    }
    return pinned;
}

double total_interference(const arma::cx_mat& precoder, const arma::cx_mat& cov)
{
    if (cov.n_rows == 0)
        return 0.0;
    arma::cx_mat mp = cov * precoder;
    double s = 0.0;
    for (arma::uword k = 0; k < precoder.n_cols; ++k)
        s += std::real(arma::cdot(precoder.col(k), mp.col(k)));
    return std::max(s, 0.0);
}

} // namespace

namespace detail {

// Shared closed-form MMSE core; varsigma == 0 skips the interference term
// entirely so the unpenalized path is bit-identical to the plain baseline.
std::pair<arma::cx_mat, double> mmse_closed_form_core(const arma::cx_mat& mean_channel,
                                                      const arma::cx_mat& covariance,
                                                      const arma::cx_mat* interference,
                                                      double varsigma, double noise_power_w,
                                                      double tx_power_w)
{
    const double reg = static_cast<double>(mean_channel.n_cols) * noise_power_w / tx_power_w;
    arma::cx_mat a = covariance;
    a.diag() += reg;
    if (varsigma != 0.0 && interference != nullptr)
        a += varsigma * (*interference);
    arma::cx_mat x;
    if (!arma::solve(x, a, mean_channel, arma::solve_opts::likely_sympd))
        throw std::runtime_error("closed-form precoder: linear solve failed");
    double n = arma::norm(x, "fro");
    if (!(n > 0.0))
        throw std::invalid_argument("closed-form precoder: mean channel is zero");
    double beta = std::sqrt(tx_power_w) / n;
    return {beta * x, beta};
}

} // namespace detail

using detail::mmse_closed_form_core;

RobustProblem make_robust_problem(std::vector<SatUserStats> users, InterferenceModel interference,
                                  double i_thr_w, double p_t_w, arma::uword k_g, double tolerance,
                                  int iter_max)
{
    if (!(i_thr_w > 0.0))
        throw std::invalid_argument("make_robust_problem: interference threshold must be positive");
    if (!(p_t_w > 0.0))
        throw std::invalid_argument("make_robust_problem: power budget must be positive");
    if (!(tolerance > 0.0))
        throw std::invalid_argument("make_robust_problem: tolerance must be positive");

    RobustProblem problem;
    problem.aggregates = aggregate_ss_stats(users);
    problem.users = std::move(users);
    problem.interference = std::move(interference);
    problem.i_thr_w = i_thr_w;
    problem.p_t_w = p_t_w;
    problem.k_g = k_g;
    problem.tolerance = tolerance;
    problem.iter_max = iter_max;
    return problem;
}

// ---------- quadratic-transform path ----------

arma::cx_vec mcqt_update_xi(const arma::cx_mat& precoder, const std::vector<SatUserStats>& users)
{
    UserView view = make_view(users);
    arma::cx_mat c = steering_products(view, precoder);
    arma::vec den = fraction_denominators(view, c);
    arma::cx_vec xi(view.count);
    for (arma::uword k = 0; k < view.count; ++k)
        xi(k) = std::conj(view.mean_gain(k)) * c(k, k) / den(k);
    return xi;
}

namespace {

// Surrogate value for fixed auxiliaries; false when a log argument is not
// positive.
bool surrogate_value(const UserView& view, const arma::cx_vec& xi, const arma::cx_mat& c,
                     double& value)
{
    arma::vec den = fraction_denominators(view, c);
    double f = 0.0;
    for (arma::uword k = 0; k < view.count; ++k) {
        std::complex<double> cross = std::conj(xi(k)) * std::conj(view.mean_gain(k)) * c(k, k);
        double z = 2.0 * cross.real() - std::norm(xi(k)) * den(k);
        if (1.0 + z <= 0.0)
            return false;
        f += view.weight(k) * std::log2(1.0 + z);
    }
    value = f;
    return true;
}

double lower_bound_rate_view(const UserView& view, const arma::cx_mat& c)
{
    arma::vec den = fraction_denominators(view, c);
    double rate = 0.0;
    for (arma::uword k = 0; k < view.count; ++k) {
        double num = view.mean_gain2(k) * std::norm(c(k, k));
        rate += view.weight(k) * std::log2(1.0 + num / den(k));
    }
    return rate;
}

} // namespace

double mcqt_objective(const arma::cx_vec& xi, const arma::cx_mat& precoder,
                      const std::vector<SatUserStats>& users)
{
    UserView view = make_view(users);
    if (xi.n_elem != view.count)
        throw std::invalid_argument("mcqt_objective: auxiliary size mismatch");
    double value = 0.0;
    if (!surrogate_value(view, xi, steering_products(view, precoder), value))
        throw std::domain_error("mcqt_objective: log argument is not positive; "
                                "auxiliaries are infeasible for this precoder");
    return value;
}

namespace {

// Gradient of the surrogate in the precoder (conjugate-coordinate
// convention): column j is
//   wt_j (xi_j gbar_j + |xi_j|^2 |gbar_j|^2 c_jj) v_j - sum_k wt_k |xi_k|^2 gain2_k v_k v_k^H p_j
arma::cx_mat surrogate_gradient(const UserView& view, const arma::cx_vec& xi,
                                const arma::cx_mat& c)
{
    arma::vec den = fraction_denominators(view, c);
    arma::cx_vec col_coef(view.count);
    arma::cx_mat mixed(view.count, view.count);
    arma::vec wt(view.count);
    for (arma::uword k = 0; k < view.count; ++k) {
        std::complex<double> cross = std::conj(xi(k)) * std::conj(view.mean_gain(k)) * c(k, k);
        double z = 2.0 * cross.real() - std::norm(xi(k)) * den(k);
        wt(k) = view.weight(k) / (kLn2 * (1.0 + z));
        col_coef(k) = wt(k) * (xi(k) * view.mean_gain(k) +
                               std::norm(xi(k)) * view.mean_gain2(k) * c(k, k));
    }
    arma::cx_mat scaled = c;
    for (arma::uword k = 0; k < view.count; ++k)
        scaled.row(k) *= wt(k) * std::norm(xi(k)) * view.gain2(k);
    arma::cx_mat g = view.steering * (arma::diagmat(col_coef) - scaled);
    return g;
}

SubproblemResult ascend_subproblem(const UserView& view, const EllipsoidSet& ell,
                                   double power_radius, const arma::cx_vec& xi,
                                   const arma::cx_mat& p_init)
{
    const int max_steps = 150;
    const int max_backtracks = 40;
    const double c1 = 1e-4;

    arma::cx_mat p = p_init;
    double f = -kInf;
    {
        double v;
        if (surrogate_value(view, xi, steering_products(view, p), v))
            f = v;
    }

    double step = 0.0;
    bool line_search_ok = true;
    int stall = 0;
    for (int it = 0; it < max_steps; ++it) {
        arma::cx_mat g = surrogate_gradient(view, xi, steering_products(view, p));
        double gnorm = arma::norm(g, "fro");
        if (gnorm < 1e-14 * (1.0 + power_radius))
            break;
        if (step <= 0.0)
            step = 0.25 * power_radius / gnorm;

        bool accepted = false;
        double t = step;
        for (int bt = 0; bt < max_backtracks; ++bt) {
            arma::cx_mat cand = project_intersection(p + t * g, power_radius, ell);
            double move = arma::norm(cand - p, "fro");
            if (move < 1e-12 * (1.0 + power_radius))
                break; // pinned against the feasible set: stationary
            double fc;
            if (surrogate_value(view, xi, steering_products(view, cand), fc) &&
                fc >= f + (c1 / t) * move * move) {
                double gain = fc - f;
                p = cand;
                f = fc;
                step = t * 1.3;
                accepted = true;
                stall = (gain < 1e-9 * (1.0 + std::abs(f))) ? stall + 1 : 0;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // either stationary (tiny projected step) or the search failed
            double probe = arma::norm(
                project_intersection(p + step * g, power_radius, ell) - p, "fro");
            if (probe >= 1e-9 * (1.0 + power_radius))
                line_search_ok = false;
            break;
        }
        if (stall >= 2)
            break;
    }
    return {p, line_search_ok};
}

} // namespace

SubproblemResult solve_wsr_subproblem(const arma::cx_vec& xi, const RobustProblem& problem,
                                      const arma::cx_mat& p_init)
{
    UserView view = make_view(problem.users);
    EllipsoidSet ell = EllipsoidSet::from_matrix(
        problem.interference.matrix, static_cast<double>(problem.k_g) * problem.i_thr_w);
    return ascend_subproblem(view, ell, std::sqrt(problem.p_t_w), xi,
                             project_intersection(p_init, std::sqrt(problem.p_t_w), ell));
}

PrecoderResult wqtia(const RobustProblem& problem)
{
    std::vector<SatUserStats> users = canonical_phase_users(problem.users);
    SsAggregates agg = aggregate_ss_stats(users);
    UserView view = make_view(users);
    EllipsoidSet ell = EllipsoidSet::from_matrix(
        problem.interference.matrix, static_cast<double>(problem.k_g) * problem.i_thr_w);
    const double radius = std::sqrt(problem.p_t_w);

    PrecoderResult result;
    result.algorithm = "wqtia";

    arma::cx_mat p = mmse_closed_form_core(agg.mean_channel, agg.covariance, nullptr, 0.0,
                                           arma::mean(view.noise), problem.p_t_w)
                         .first;
    p = project_intersection(p, radius, ell);

    double f_prev = lower_bound_rate_view(view, steering_products(view, p));
    result.trace.push_back(
        {0, f_prev, total_interference(p, problem.interference.matrix) /
                        static_cast<double>(problem.k_g)});

    bool converged = false;
    int n = 0;
    for (n = 1; n <= problem.iter_max; ++n) {
        arma::cx_vec xi;
        {
            arma::cx_mat c = steering_products(view, p);
            arma::vec den = fraction_denominators(view, c);
            xi.set_size(view.count);
            for (arma::uword k = 0; k < view.count; ++k)
                xi(k) = std::conj(view.mean_gain(k)) * c(k, k) / den(k);
        }
        SubproblemResult sub = ascend_subproblem(view, ell, radius, xi, p);
        if (!sub.line_search_ok && result.warning.empty())
            result.warning = "inner line search returned best feasible iterate";
        p = sub.precoder;

        double f_n = lower_bound_rate_view(view, steering_products(view, p));
        double i_n = total_interference(p, problem.interference.matrix) /
                     static_cast<double>(problem.k_g);
        result.trace.push_back({n, f_n, i_n});

        bool feasible = i_n <= problem.i_thr_w * (1.0 + 1e-9);
        if (std::abs(f_n - f_prev) < problem.tolerance && feasible) {
            converged = true;
            f_prev = f_n;
            break;
        }
        f_prev = f_n;
    }

    result.precoder = p;
    result.iterations = std::min(n, problem.iter_max);
    result.converged = converged;
    if (!converged)
        result.warning = "iteration budget exhausted before convergence";
    return result;
}

// ---------- weighted-MSE path ----------

arma::cx_vec wmmse_update_u(const arma::cx_mat& precoder, const std::vector<SatUserStats>& users)
{
    UserView view = make_view(users);
    arma::cx_mat c = steering_products(view, precoder);
    arma::vec rp = row_powers(c);
    arma::cx_vec u(view.count);
    for (arma::uword k = 0; k < view.count; ++k)
        u(k) = std::conj(c(k, k)) * view.mean_gain(k) / (view.gain2(k) * rp(k) + view.noise(k));
    return u;
}

arma::vec wmmse_mse(const arma::cx_mat& precoder, const arma::cx_vec& u,
                    const std::vector<SatUserStats>& users)
{
    UserView view = make_view(users);
    if (u.n_elem != view.count)
        throw std::invalid_argument("wmmse_mse: receive-scalar size mismatch");
    arma::cx_mat c = steering_products(view, precoder);
    arma::vec rp = row_powers(c);
    arma::vec e(view.count);
    for (arma::uword k = 0; k < view.count; ++k) {
        std::complex<double> rx = std::conj(u(k)) * std::conj(c(k, k)) * view.mean_gain(k);
        e(k) = std::norm(u(k)) * (view.gain2(k) * rp(k) + view.noise(k)) - 2.0 * rx.real() + 1.0;
    }
    return e;
}

arma::vec wmmse_update_w(const arma::vec& mse, const arma::vec& weights)
{
    if (mse.n_elem != weights.n_elem)
        throw std::invalid_argument("wmmse_update_w: size mismatch");
    arma::vec w(mse.n_elem);
    for (arma::uword k = 0; k < mse.n_elem; ++k) {
        if (!(mse(k) > 0.0))
            throw std::domain_error("wmmse_update_w: MSE must be positive");
        w(k) = weights(k) / mse(k);
    }
    return w;
}

namespace {

arma::cx_mat multiplier_precoder(const UserView& view, const arma::cx_mat& interference,
                                 arma::uword k_g, const arma::cx_vec& u, const arma::vec& w,
                                 double lambda, double mu)
{
    arma::vec d(view.count);
    arma::cx_vec rhs_scale(view.count);
    for (arma::uword k = 0; k < view.count; ++k) {
        d(k) = std::norm(u(k)) * w(k) * view.gain2(k);
        rhs_scale(k) = w(k) * std::conj(u(k)) * view.mean_gain(k);
    }
    arma::cx_mat a = view.steering * arma::diagmat(d) * view.steering.t();
    a.diag() += lambda;
    if (mu != 0.0 && interference.n_rows > 0)
        a += (mu / static_cast<double>(k_g)) * interference;
    arma::cx_mat rhs = view.steering * arma::diagmat(rhs_scale);
    arma::cx_mat p;
    if (!arma::solve(p, a, rhs, arma::solve_opts::likely_sympd))
        throw std::runtime_error("precoder_from_multipliers: singular system; "
                                 "raise the lambda floor");
    return p;
}

double weighted_mse_sum(const UserView& view, const arma::cx_vec& u, const arma::vec& w,
                        const arma::cx_mat& precoder)
{
    arma::cx_mat c = view.steering.t() * precoder;
    arma::vec rp = row_powers(c);
    double s = 0.0;
    for (arma::uword k = 0; k < view.count; ++k) {
        std::complex<double> rx = std::conj(u(k)) * std::conj(c(k, k)) * view.mean_gain(k);
        double e =
            std::norm(u(k)) * (view.gain2(k) * rp(k) + view.noise(k)) - 2.0 * rx.real() + 1.0;
        s += w(k) * e;
    }
    return s;
}

// Eigen-space interference evaluator for the mu bisection at fixed lambda.
// With base = L L^H and the whitened covariance L^{-1} ups L^{-H} = Q D Q^H,
// the stationary precoder is P(mu) = L^{-H} Q (I + c mu D)^{-1} Q^H L^{-1} R,
// so intf(mu) = sum_i d_i ||row_i(Q^H L^{-1} R)||^2 / (1 + c mu d_i)^2.
struct InterferenceCurve {
    arma::vec d;
    arma::vec s;
    arma::cx_mat back; // L^{-H} Q
    arma::cx_mat y;    // Q^H L^{-1} R
    double c = 1.0;

    static InterferenceCurve build(const arma::cx_mat& base, const arma::cx_mat& ups,
                                   const arma::cx_mat& rhs, double c)
    {
        InterferenceCurve curve;
        curve.c = c;
        arma::cx_mat l;
        if (!arma::chol(l, base, "lower"))
            throw std::runtime_error("solve_multipliers: Cholesky factorization failed");
        arma::cx_mat t = arma::solve(arma::trimatl(l), ups);
        arma::cx_mat white = arma::solve(arma::trimatl(l), t.t()).t();
        white = 0.5 * (white + white.t());
        arma::cx_mat q;
        if (!arma::eig_sym(curve.d, q, white))
            throw std::runtime_error("solve_multipliers: eigendecomposition failed");
        curve.d.transform([](double v) { return v < 0.0 ? 0.0 : v; });
        curve.y = q.t() * arma::solve(arma::trimatl(l), rhs);
        curve.back = arma::solve(arma::trimatu(l.t()), q);
        curve.s.set_size(curve.d.n_elem);
        for (arma::uword i = 0; i < curve.d.n_elem; ++i) {
            double row = 0.0;
            for (arma::uword j = 0; j < curve.y.n_cols; ++j)
                row += std::norm(curve.y(i, j));
            curve.s(i) = curve.d(i) * row;
        }
        return curve;
    }

    double intf(double mu) const
    {
        double v = 0.0;
        for (arma::uword i = 0; i < d.n_elem; ++i) {
            double den = 1.0 + c * mu * d(i);
            v += s(i) / (den * den);
        }
        return v;
    }

    arma::cx_mat precoder(double mu) const
    {
        arma::cx_mat z = y;
        for (arma::uword i = 0; i < d.n_elem; ++i)
            z.row(i) /= (1.0 + c * mu * d(i));
        return back * z;
    }
};

// Eigen-space power evaluator for the lambda bisection at fixed mu:
// power(lambda) = sum_i s_i / (d_i + lambda)^2.
struct PowerCurve {
    arma::vec d;
    arma::vec s;
    arma::cx_mat q;
    arma::cx_mat qr;

    static PowerCurve build(const arma::cx_mat& base, const arma::cx_mat& rhs)
    {
        PowerCurve curve;
        if (!arma::eig_sym(curve.d, curve.q, base))
            throw std::runtime_error("solve_multipliers: eigendecomposition failed");
        curve.qr = curve.q.t() * rhs;
        curve.s.set_size(curve.d.n_elem);
        for (arma::uword i = 0; i < curve.d.n_elem; ++i) {
            double row = 0.0;
            for (arma::uword j = 0; j < curve.qr.n_cols; ++j)
                row += std::norm(curve.qr(i, j));
            curve.s(i) = row;
        }
        return curve;
    }

    double power(double lambda) const
    {
        double p = 0.0;
        for (arma::uword i = 0; i < d.n_elem; ++i) {
            double den = d(i) + lambda;
            p += s(i) / (den * den);
        }
        return p;
    }

    arma::cx_mat precoder(double lambda) const
    {
        arma::cx_mat y = qr;
        for (arma::uword i = 0; i < d.n_elem; ++i)
            y.row(i) /= (d(i) + lambda);
        return q * y;
    }
};

// Bisection on log(x) for a decreasing function; returns lo when already
// below the target there.
double log_bisect_decreasing(const std::function<double(double)>& f, double lo, double target,
                             const char* what)
{
    if (f(lo) <= target)
        return lo;
    double hi = lo;
    for (int i = 0;; ++i) {
        hi *= 2.0;
        if (f(hi) <= target)
            break;
        if (i >= 400)
            throw std::runtime_error(std::string(what) + ": no feasible bracket");
    }
    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 64; ++it) {
        double mid = 0.5 * (llo + lhi);
        if (f(std::exp(mid)) > target)
            llo = mid;
        else
            lhi = mid;
    }
    return std::exp(lhi);
}

} // namespace

arma::cx_mat precoder_from_multipliers(double lambda, double mu, const arma::cx_vec& u,
                                       const arma::vec& w, const RobustProblem& problem)
{
    UserView view = make_view(problem.users);
    if (u.n_elem != view.count || w.n_elem != view.count)
        throw std::invalid_argument("precoder_from_multipliers: size mismatch");
    return multiplier_precoder(view, problem.interference.matrix, problem.k_g, u, w, lambda, mu);
}

MultiplierSolution solve_multipliers(const arma::cx_vec& u, const arma::vec& w,
                                     const RobustProblem& problem)
{
    UserView view = make_view(problem.users);
    const arma::cx_mat& ups = problem.interference.matrix;
    const double p_budget = problem.p_t_w;
    const double i_budget = static_cast<double>(problem.k_g) * problem.i_thr_w;

    arma::vec d(view.count);
    arma::cx_vec rhs_scale(view.count);
    for (arma::uword k = 0; k < view.count; ++k) {
        d(k) = std::norm(u(k)) * w(k) * view.gain2(k);
        rhs_scale(k) = w(k) * std::conj(u(k)) * view.mean_gain(k);
    }
    arma::cx_mat hat = view.steering * arma::diagmat(d) * view.steering.t();
    arma::cx_mat rhs = view.steering * arma::diagmat(rhs_scale);

    const double lambda_ref =
        std::max(arma::trace(arma::real(hat)) / static_cast<double>(hat.n_rows), 1e-300);
    const double lambda_floor = 1e-12 * lambda_ref;
    const double tr_ups = std::max(std::real(arma::trace(ups)), 1e-300);
    const double mu_ref = static_cast<double>(problem.k_g) * lambda_ref / tr_ups *
                          static_cast<double>(ups.n_rows);
    const double mu_floor = 1e-12 * mu_ref;

    auto power_of = [&](const arma::cx_mat& p) {
        double n = arma::norm(p, "fro");
        return n * n;
    };
    auto intf_of = [&](const arma::cx_mat& p) { return total_interference(p, ups); };

    // lambda root for the power constraint at fixed mu (lambda_floor when
    // the power budget is already slack there)
    auto lambda_for_power = [&](double mu) {
        arma::cx_mat base = hat;
        if (mu != 0.0)
            base += (mu / static_cast<double>(problem.k_g)) * ups;
        PowerCurve curve = PowerCurve::build(base, rhs);
        double target = p_budget;
        if (curve.power(lambda_floor) <= target)
            return std::pair<double, arma::cx_mat>(lambda_floor, curve.precoder(lambda_floor));
        double lam = log_bisect_decreasing([&](double l) { return curve.power(l); }, lambda_floor,
                                           target, "solve_multipliers: lambda");
        return std::pair<double, arma::cx_mat>(lam, curve.precoder(lam));
    };

    // mu root for the interference constraint at fixed lambda (0 when slack)
    auto mu_for_interference = [&](double lambda) {
        arma::cx_mat p0 = multiplier_precoder(view, ups, problem.k_g, u, w, lambda, 0.0);
        if (intf_of(p0) <= i_budget)
            return std::pair<double, arma::cx_mat>(0.0, p0);
        arma::cx_mat base = hat;
        base.diag() += lambda;
        InterferenceCurve curve =
            InterferenceCurve::build(base, ups, rhs, 1.0 / static_cast<double>(problem.k_g));
        double mu = log_bisect_decreasing([&](double m) { return curve.intf(m); }, mu_floor,
                                          i_budget, "solve_multipliers: mu");
        return std::pair<double, arma::cx_mat>(mu, curve.precoder(mu));
    };

    // complementary-slackness case analysis; each accepted case is a KKT
    // point of the convex precoder subproblem
    {
        arma::cx_mat p0 = multiplier_precoder(view, ups, problem.k_g, u, w, lambda_floor, 0.0);
        bool pow_ok = power_of(p0) <= p_budget * (1.0 + 1e-9);
        bool int_ok = intf_of(p0) <= i_budget * (1.0 + 1e-9);
        if (pow_ok && int_ok)
            return {lambda_floor, 0.0, p0, true};

        if (!pow_ok) {
            auto [lam, p] = lambda_for_power(0.0);
            if (intf_of(p) <= i_budget * (1.0 + 1e-9))
                return {lam, 0.0, p, true};
        } else {
            auto [mu, p] = mu_for_interference(lambda_floor);
            if (power_of(p) <= p_budget * (1.0 + 1e-9))
                return {lambda_floor, mu, p, true};
        }
    }

    // both constraints active: alternate the two scalar roots
    double mu = 0.0, lambda = lambda_floor;
    arma::cx_mat p;
    for (int round = 0; round < 60; ++round) {
        auto [lam, pl] = lambda_for_power(mu);
        lambda = lam;
        auto [m2, pm] = mu_for_interference(lambda);
        mu = m2;
        p = pm;
        double pw = power_of(p), iv = intf_of(p);
        bool feasible = pw <= p_budget * (1.0 + 1e-9) && iv <= i_budget * (1.0 + 1e-9);
        bool pow_cs = lambda <= lambda_floor * (1.0 + 1e-6) || pw >= p_budget * (1.0 - 1e-7);
        bool int_cs = mu == 0.0 || iv >= i_budget * (1.0 - 1e-7);
        if (feasible && pow_cs && int_cs)
            return {lambda, mu, p, true};
    }

    // fallback: penalized log-grid scan plus Nelder-Mead refinement
    auto penalized = [&](double lambda_v, double mu_v) {
        arma::cx_mat pc = multiplier_precoder(view, ups, problem.k_g, u, w,
                                              std::max(lambda_v, lambda_floor),
                                              std::max(mu_v, 0.0));
        double eps = weighted_mse_sum(view, u, w, pc);
        double viol = std::max(0.0, power_of(pc) / p_budget - 1.0) +
                      std::max(0.0, intf_of(pc) / i_budget - 1.0);
        return eps + 1e6 * static_cast<double>(view.count) * viol;
    };
    double best_v = kInf, best_l = lambda_ref, best_m = mu_ref;
    for (int i = 0; i < 16; ++i) {
        // ascending scan; strict improvement keeps the lexicographically
        // smallest pair among ties
        double lv = lambda_ref * std::pow(10.0, -8.0 + 12.0 * i / 15.0);
        for (int j = 0; j < 16; ++j) {
            double mv = mu_ref * std::pow(10.0, -8.0 + 12.0 * j / 15.0);
            double val = penalized(lv, mv);
            if (val < best_v) {
                best_v = val;
                best_l = lv;
                best_m = mv;
            }
        }
    }
    NelderMeadResult nm = nelder_mead_2d(
        [&](double x, double y) { return penalized(std::exp(x), std::exp(y)); },
        {std::log(best_l), std::log(best_m)},
        {std::log(lambda_floor), std::log(mu_floor) - 20.0},
        {std::log(lambda_ref) + 12.0, std::log(mu_ref) + 12.0}, 400);
    lambda = std::exp(nm.x);
    mu = std::exp(nm.y);
    p = multiplier_precoder(view, ups, problem.k_g, u, w, lambda, mu);
    bool ok = power_of(p) <= p_budget * (1.0 + 1e-6) && intf_of(p) <= i_budget * (1.0 + 1e-6);
    return {lambda, mu, p, ok};
}

PrecoderResult wweia(const RobustProblem& problem)
{
    RobustProblem canonical = problem;
    canonical.users = canonical_phase_users(problem.users);
    canonical.aggregates = aggregate_ss_stats(canonical.users);
    UserView view = make_view(canonical.users);
    EllipsoidSet ell = EllipsoidSet::from_matrix(
        problem.interference.matrix, static_cast<double>(problem.k_g) * problem.i_thr_w);

    PrecoderResult result;
    result.algorithm = "wweia";

    arma::cx_mat p = mmse_closed_form_core(canonical.aggregates.mean_channel,
                                           canonical.aggregates.covariance, nullptr, 0.0,
                                           arma::mean(view.noise), problem.p_t_w)
                         .first;
    p = project_intersection(p, std::sqrt(problem.p_t_w), ell);

    // variational objective sum_k (w_k e_k - a_k ln w_k); the accepted-step
    // safeguard below keeps its trace nonincreasing
    auto objective = [&](const arma::cx_vec& u, const arma::vec& w, const arma::cx_mat& pc) {
        double f = weighted_mse_sum(view, u, w, pc);
        for (arma::uword k = 0; k < view.count; ++k)
            f -= view.weight(k) * std::log(w(k));
        return f;
    };

    double f_prev;
    {
        arma::cx_vec u0 = wmmse_update_u(p, canonical.users);
        arma::vec w0 = wmmse_update_w(wmmse_mse(p, u0, canonical.users), view.weight);
        f_prev = objective(u0, w0, p);
    }
    result.trace.push_back({0, f_prev,
                            total_interference(p, problem.interference.matrix) /
                                static_cast<double>(problem.k_g)});

    MultiplierSolution last_sol;
    bool converged = false;
    int n = 0;
    for (n = 1; n <= problem.iter_max; ++n) {
        arma::cx_vec u = wmmse_update_u(p, canonical.users);
        arma::vec w = wmmse_update_w(wmmse_mse(p, u, canonical.users), view.weight);

        MultiplierSolution sol = solve_multipliers(u, w, canonical);
        if (!sol.converged && result.warning.empty())
            result.warning = "multiplier search returned best feasible point";

        double f_keep = objective(u, w, p);
        double f_cand = objective(u, w, sol.precoder);
        double f_n;
        if (f_cand <= f_keep) {
            p = sol.precoder;
            last_sol = sol;
            f_n = f_cand;
        } else {
            f_n = f_keep; // keep the previous feasible precoder
        }

        double i_n = total_interference(p, problem.interference.matrix) /
                     static_cast<double>(problem.k_g);
        result.trace.push_back({n, f_n, i_n});

        bool feasible = i_n <= problem.i_thr_w * (1.0 + 1e-9);
        if (std::abs(f_n - f_prev) < problem.tolerance && feasible) {
            converged = true;
            f_prev = f_n;
            break;
        }
        f_prev = f_n;
    }

    result.precoder = p;
    result.multipliers.lambda = last_sol.lambda;
    result.multipliers.mu = last_sol.mu;
    result.iterations = std::min(n, problem.iter_max);
    result.converged = converged;
    if (!converged)
        result.warning = "iteration budget exhausted before convergence";
    return result;
}

// ---------- closed-form MMSE path ----------

std::pair<arma::cx_mat, double> mmse_ia_closed_form(double varsigma, const RobustProblem& problem)
{
    if (varsigma < 0.0)
        throw std::invalid_argument("mmse_ia_closed_form: varsigma must be nonnegative");
    double noise = 0.0;
    for (const SatUserStats& u : problem.users)
        noise += u.noise_power_w;
    noise /= static_cast<double>(problem.users.size());
    return mmse_closed_form_core(problem.aggregates.mean_channel, problem.aggregates.covariance,
                            &problem.interference.matrix, varsigma, noise, problem.p_t_w);
}

PrecoderResult mmse_ia(const RobustProblem& problem)
{
    PrecoderResult result;
    result.algorithm = "mmseia";

    auto interference_db = [&](double varsigma, std::pair<arma::cx_mat, double>& out) {
        out = mmse_ia_closed_form(varsigma, problem);
        double i_avg = total_interference(out.first, problem.interference.matrix) /
                       static_cast<double>(problem.k_g);
        return 10.0 * std::log10(std::max(i_avg, 1e-300));
    };

    const double target_db = 10.0 * std::log10(problem.i_thr_w);
    std::pair<arma::cx_mat, double> pb;
    double i0_db = interference_db(0.0, pb);
    int evals = 1;

    if (i0_db <= target_db) {
        result.precoder = pb.first;
        result.beta = pb.second;
        result.multipliers.varsigma = 0.0;
    } else {
        double hi = 1.0;
        bool bracketed = false;
        std::pair<arma::cx_mat, double> probe;
        for (int i = 0; i < 60; ++i) {
            ++evals;
            if (interference_db(hi, probe) <= target_db) {
                bracketed = true;
                break;
            }
            hi *= 2.0;
        }
        double varsigma = hi;
        if (bracketed) {
            varsigma = bisect_monotone(
                [&](double s) {
                    ++evals;
                    return interference_db(s, probe);
                },
                {0.0, hi, target_db, 0.01, 200});
        } else {
            // the covariance leaks into every usable direction; report the
            // most suppressive probe instead of failing
            result.converged = false;
            result.warning = "interference threshold not reached while bracketing the penalty";
        }
        std::pair<arma::cx_mat, double> final_pb;
        interference_db(varsigma, final_pb);
        ++evals;
        result.precoder = final_pb.first;
        result.beta = final_pb.second;
        result.multipliers.varsigma = varsigma;
    }

    double i_avg = total_interference(result.precoder, problem.interference.matrix) /
                   static_cast<double>(problem.k_g);
    UserView view = make_view(problem.users);
    result.trace.push_back(
        {0, lower_bound_rate_view(view, steering_products(view, result.precoder)), i_avg});
    result.iterations = evals;
    return result;
}

PrecoderResult pa_variant(RobustAlgorithm algorithm, const RobustProblem& pa_problem)
{
    if (pa_problem.interference.provenance != InterferenceProvenance::position_aided)
        throw std::invalid_argument("pa_variant: problem does not hold a position-aided model");
    PrecoderResult result;
    switch (algorithm) {
    case RobustAlgorithm::wqtia:
        result = wqtia(pa_problem);
        break;
    case RobustAlgorithm::wweia:
        result = wweia(pa_problem);
        break;
    case RobustAlgorithm::mmse_ia:
        result = mmse_ia(pa_problem);
        break;
    }
    result.algorithm += "-pa";
    return result;
}

} // namespace satbeam
