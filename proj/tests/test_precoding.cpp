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

#include "satbeam/evaluation.hpp"
#include "satbeam/precoding.hpp"
#include "satbeam/robust.hpp"
#include "satbeam/scenario.hpp"
#include "test_support.hpp"

using namespace satbeam;
using test_support::model_from_matrix;
using test_support::random_users;

namespace {

double column_cosine(const arma::cx_vec& a, const arma::cx_vec& b)
{
    return std::abs(arma::cdot(a, b)) / (arma::norm(a, 2) * arma::norm(b, 2));
}

} // namespace

TEST_CASE("mrt matches the single-user matched filter")
{
    Rng rng(1);
    std::vector<SatUserStats> users = random_users(1, 2, 2, 10.0, 0.1, rng);
    SsAggregates agg = aggregate_ss_stats(users);
    PrecoderResult r = mrt(agg.mean_channel, 2.0);
    REQUIRE(column_cosine(r.precoder.col(0), users[0].steering) > 1.0 - 1e-12);
    REQUIRE(std::abs(std::pow(arma::norm(r.precoder, "fro"), 2) - 2.0) < 1e-12);

    arma::cx_mat zero(4, 1, arma::fill::zeros);
    REQUIRE_THROWS_AS(mrt(zero, 1.0), std::invalid_argument);
}

TEST_CASE("mrt splits power evenly over orthogonal equal-gain users")
{
    SatUserStats a, b;
    a.steering = upa_steering(0.0, 0.0, 4, 1, 0.5);
    b.steering = upa_steering(0.5, 0.0, 4, 1, 0.5);
    a.gain_power = b.gain_power = 1.0;
    a.mean_gain = b.mean_gain = rician_mean_gain(1.0, 10.0);
    a.noise_power_w = b.noise_power_w = 0.1;
    SsAggregates agg = aggregate_ss_stats({a, b});
    PrecoderResult r = mrt(agg.mean_channel, 3.0);
    double p0 = std::pow(arma::norm(r.precoder.col(0), 2), 2);
    double p1 = std::pow(arma::norm(r.precoder.col(1), 2), 2);
    REQUIRE(std::abs(p0 - 1.5) < 1e-12);
    REQUIRE(std::abs(p1 - 1.5) < 1e-12);
}

TEST_CASE("per-user rates ignore common channel phases")
{
    Rng rng(2);
    std::vector<SatUserStats> users = random_users(3, 2, 2, 10.0, 0.1, rng);
    SsAggregates agg = aggregate_ss_stats(users);
    PrecoderResult r = mrt(agg.mean_channel, 1.0);
    double base = lower_bound_rate(r.precoder, users);

    std::vector<SatUserStats> rotated = users;
    for (SatUserStats& u : rotated)
        u.mean_gain *= std::polar(1.0, 2.0 * kPi * rng.uniform());
    SsAggregates agg2 = aggregate_ss_stats(rotated);
    PrecoderResult r2 = mrt(agg2.mean_channel, 1.0);
    double rot = lower_bound_rate(r2.precoder, rotated);
    REQUIRE(std::abs(base - rot) < 1e-9 * std::abs(base));
}

TEST_CASE("zero forcing diagonalizes the mean channel")
{
    Rng rng(3);
    std::vector<SatUserStats> users = random_users(3, 3, 3, 10.0, 0.1, rng);
    SsAggregates agg = aggregate_ss_stats(users);
    PrecoderResult r = zf(agg.mean_channel, 1.0);

    arma::cx_mat cross = agg.mean_channel.t() * r.precoder;
    double diag_scale = std::abs(cross(0, 0));
    for (arma::uword i = 0; i < 3; ++i)
        for (arma::uword j = 0; j < 3; ++j)
            if (i != j)
                REQUIRE(std::abs(cross(i, j)) < 1e-10 * diag_scale);
}

TEST_CASE("zero forcing equals mrt for orthogonal channels")
{
    SatUserStats a, b;
    a.steering = upa_steering(0.0, 0.0, 4, 1, 0.5);
    b.steering = upa_steering(0.5, 0.0, 4, 1, 0.5);
    a.gain_power = b.gain_power = 1.0;
    a.mean_gain = b.mean_gain = rician_mean_gain(1.0, 10.0);
    a.noise_power_w = b.noise_power_w = 0.1;
    SsAggregates agg = aggregate_ss_stats({a, b});
    PrecoderResult z = zf(agg.mean_channel, 1.0);
    PrecoderResult m = mrt(agg.mean_channel, 1.0);
    REQUIRE(column_cosine(z.precoder.col(0), m.precoder.col(0)) > 1.0 - 1e-12);
    REQUIRE(column_cosine(z.precoder.col(1), m.precoder.col(1)) > 1.0 - 1e-12);
}

TEST_CASE("zero forcing matches a normal-equations oracle")
{
    Rng rng(4);
    std::vector<SatUserStats> users = random_users(3, 3, 2, 10.0, 0.1, rng);
    SsAggregates agg = aggregate_ss_stats(users);
    PrecoderResult r = zf(agg.mean_channel, 1.0);

    // independent route: solve (H^H H) X = H^H, pseudo-inverse by normal
    // equations, then normalize to the same power
    arma::cx_mat gram = agg.mean_channel.t() * agg.mean_channel;
    arma::cx_mat oracle = arma::solve(gram, agg.mean_channel.t()).t();
    oracle /= arma::norm(oracle, "fro");
    REQUIRE(arma::norm(r.precoder - oracle, "fro") < 1e-8 * arma::norm(oracle, "fro"));
}

TEST_CASE("zero forcing names the colinear user pair")
{
    Rng rng(5);
    std::vector<SatUserStats> users = random_users(3, 2, 2, 10.0, 0.1, rng);
    users[2] = users[0]; // duplicate channel
    SsAggregates agg = aggregate_ss_stats(users);
    try {
        zf(agg.mean_channel, 1.0);
        FAIL("expected a rank-deficiency error");
    } catch (const std::runtime_error& err) {
        std::string msg = err.what();
        REQUIRE(msg.find("users 0 and 2") != std::string::npos);
    }
    REQUIRE_THROWS_AS(zf(arma::cx_mat(2, 3, arma::fill::ones), 1.0), std::invalid_argument);
}

TEST_CASE("regularized mmse approaches mrt as noise dominates")
{
    Rng rng(6);
    std::vector<SatUserStats> users = random_users(3, 2, 2, 10.0, 0.1, rng);
    SsAggregates agg = aggregate_ss_stats(users);
    PrecoderResult heavy = rzf_mmse(agg.mean_channel, agg.covariance, 1e9, 1.0);
    PrecoderResult m = mrt(agg.mean_channel, 1.0);
    for (arma::uword k = 0; k < 3; ++k)
        REQUIRE(column_cosine(heavy.precoder.col(k), m.precoder.col(k)) > 1.0 - 1e-9);
}

TEST_CASE("regularized mmse is the unpenalized closed form bit for bit")
{
    Rng rng(7);
    std::vector<SatUserStats> users = random_users(3, 2, 2, 10.0, 0.25, rng);
    SsAggregates agg = aggregate_ss_stats(users);
    PrecoderResult direct = rzf_mmse(agg.mean_channel, agg.covariance, 0.25, 1.7);

    arma::cx_mat any(4, 4, arma::fill::eye);
    RobustProblem problem =
        make_robust_problem(users, model_from_matrix(any), 1.0, 1.7, 4, 1e-4, 50);
    auto [p, beta] = mmse_ia_closed_form(0.0, problem);
    REQUIRE(arma::norm(direct.precoder - p, "fro") == 0.0);
    REQUIRE(direct.beta == beta);
}

TEST_CASE("single-user mmse points along the matched filter")
{
    Rng rng(8);
    std::vector<SatUserStats> users = random_users(1, 3, 2, 10.0, 0.1, rng);
    SsAggregates agg = aggregate_ss_stats(users);
    PrecoderResult r = rzf_mmse(agg.mean_channel, agg.covariance, 0.1, 1.0);
    REQUIRE(column_cosine(r.precoder.col(0), users[0].steering) > 1.0 - 1e-12);
}

TEST_CASE("wmmse baseline improves on the closed-form baseline")
{
    Scenario scenario = make_default_scenario({});
    std::vector<SatUserStats> users = scenario_user_stats(scenario, 10.0);
    SsAggregates agg = aggregate_ss_stats(users);

    PrecoderResult base = rzf_mmse(agg.mean_channel, agg.covariance,
                                   users.front().noise_power_w, scenario.system.tx_power_w);
    PrecoderResult iter = wmmse_baseline(users, scenario.system.tx_power_w, 1e-5, 100);

    Rng r1(42), r2(42);
    double rate_base = ergodic_sum_rate(base.precoder, users, 500, r1).first;
    double rate_iter = ergodic_sum_rate(iter.precoder, users, 500, r2).first;
    REQUIRE(rate_iter >= rate_base);
    REQUIRE(iter.converged);
}

TEST_CASE("single-user wmmse baseline converges to the matched direction")
{
    Rng rng(9);
    std::vector<SatUserStats> users = random_users(1, 2, 2, 10.0, 0.05, rng);
    PrecoderResult r = wmmse_baseline(users, 1.0, 1e-10, 200);
    REQUIRE(column_cosine(r.precoder.col(0), users[0].steering) > 1.0 - 1e-9);
}

TEST_CASE("power budget holds with equality for every baseline")
{
    Rng rng(10);
    std::vector<SatUserStats> users = random_users(3, 3, 2, 10.0, 0.1, rng);
    SsAggregates agg = aggregate_ss_stats(users);
    const double p_t = 2.5;
    for (const PrecoderResult& r :
         {mrt(agg.mean_channel, p_t), zf(agg.mean_channel, p_t),
          rzf_mmse(agg.mean_channel, agg.covariance, 0.1, p_t),
          wmmse_baseline(users, p_t, 1e-6, 100)}) {
        double power = std::pow(arma::norm(r.precoder, "fro"), 2);
        REQUIRE(power <= p_t * (1.0 + 1e-9));
        REQUIRE(power >= p_t * (1.0 - 1e-6));
    }
}
