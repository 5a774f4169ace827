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

#include "satbeam/scenario.hpp"

using namespace satbeam;

TEST_CASE("default scenario carries the reference link budget")
{
    Scenario s = make_default_scenario({});
    REQUIRE(s.sat_users.size() == 12);
    REQUIRE(s.terrestrial.stations.size() == 7);
    REQUIRE(s.terrestrial.users_per_bs == 10);
    REQUIRE(s.terrestrial.cell_radius_m == 500.0);
    REQUIRE(s.system.m_x == 8);
    REQUIRE(s.system.m_y == 8);
    REQUIRE(std::abs(s.system.carrier_frequency_hz - 2e9) < 1e-6);
    REQUIRE(std::abs(s.system.orbit_altitude_m - 600e3) < 1e-9);
    REQUIRE(std::abs(s.system.coverage_radius_m - 630e3) < 1e-9);
    REQUIRE(std::abs(10.0 * std::log10(s.system.tx_power_w) - 25.0) < 1e-12);
    REQUIRE(std::abs(10.0 * std::log10(s.system.rician_factor_linear) - 10.0) < 1e-12);
    REQUIRE(std::abs(10.0 * std::log10(s.system.per_antenna_tx_gain_linear) - 6.0) < 1e-12);
    REQUIRE(s.system.rx_gain_linear == 1.0);
    REQUIRE(std::abs(10.0 * std::log10(s.system.noise_figure_linear) - 9.0) < 1e-12);
    REQUIRE(s.system.antenna_temp_k == 290.0);

    for (const SatUserGeometry& g : s.sat_users) {
        REQUIRE(g.distance_m >= s.system.orbit_altitude_m);
        auto [cx, cy] = direction_cosines(g.elevation_rad, g.azimuth_rad);
        REQUIRE(cx * cx + cy * cy <= 1.0 + 1e-12);
    }
}

TEST_CASE("scenario files round-trip losslessly")
{
    Scenario s = make_default_scenario([]{ ScenarioOptions o; o.k_s = 5; o.n_bs = 3; o.seed = 11; return o; }());
    std::string text = serialize_scenario(s);
    Scenario parsed = parse_scenario(text);
    REQUIRE(serialize_scenario(parsed) == text);
    REQUIRE(parsed.sat_users.size() == 5);
    REQUIRE(parsed.terrestrial.stations.size() == 3);
    REQUIRE(parsed.seed == 11);
    REQUIRE(parsed.system.tx_power_w == s.system.tx_power_w);
    for (std::size_t i = 0; i < s.sat_users.size(); ++i) {
        REQUIRE(parsed.sat_users[i].elevation_rad == s.sat_users[i].elevation_rad);
        REQUIRE(parsed.sat_users[i].distance_m == s.sat_users[i].distance_m);
    }
}

TEST_CASE("generation is seed-deterministic")
{
    std::string a = serialize_scenario(make_default_scenario([]{ ScenarioOptions o; o.k_s = 7; o.seed = 7; return o; }()));
    std::string b = serialize_scenario(make_default_scenario([]{ ScenarioOptions o; o.k_s = 7; o.seed = 7; return o; }()));
    std::string c = serialize_scenario(make_default_scenario([]{ ScenarioOptions o; o.k_s = 7; o.seed = 8; return o; }()));
    REQUIRE(a == b);
    REQUIRE(a != c);
}

TEST_CASE("requested user count is honored")
{
    Scenario s = make_default_scenario([]{ ScenarioOptions o; o.k_s = 24; return o; }());
    REQUIRE(s.sat_users.size() == 24);
    std::string text = serialize_scenario(s);
    std::size_t count = 0, pos = 0;
    while ((pos = text.find("\nuser = ", pos)) != std::string::npos) {
        ++count;
        pos += 8;
    }
    REQUIRE(count == 24);
}

TEST_CASE("parse errors carry line numbers")
{
    std::string text = "format_version = 1\nseed = 1\n[system]\nm_x == 8\n";
    try {
        parse_scenario(text, "broken.txt");
        FAIL("expected a parse error");
    } catch (const std::runtime_error& err) {
        std::string msg = err.what();
        REQUIRE(msg.find("broken.txt:4:") != std::string::npos);
    }

    REQUIRE_THROWS_AS(parse_scenario("format_version = 2\n"), std::runtime_error);
    REQUIRE_THROWS_AS(parse_scenario("[system]\nwhatever = 1\n"), std::runtime_error);
    REQUIRE_THROWS_AS(parse_scenario("format_version = 1\n[sat_users]\nuser = 1 2\n"),
                      std::runtime_error);
}

TEST_CASE("missing pieces are rejected with context")
{
    Scenario s = make_default_scenario([]{ ScenarioOptions o; o.k_s = 2; o.n_bs = 1; return o; }());
    std::string text = serialize_scenario(s);
    std::string no_users = text.substr(0, text.find("user = "));
    no_users += "\n[terrestrial]\ncell_radius_m = 500\nusers_per_bs = 10\nstation = 0 0\n";
    REQUIRE_THROWS_AS(parse_scenario(no_users), std::runtime_error);
}

TEST_CASE("user statistics follow the active user count")
{
    Scenario s = make_default_scenario([]{ ScenarioOptions o; o.k_s = 8; return o; }());
    std::vector<SatUserStats> all = scenario_user_stats(s, 10.0);
    std::vector<SatUserStats> four = scenario_user_stats(s, 10.0, 4);
    REQUIRE(all.size() == 8);
    REQUIRE(four.size() == 4);
    // halving the served users doubles the per-user power share
    REQUIRE(std::abs(four[0].noise_power_w / all[0].noise_power_w - 2.0) < 1e-12);
    REQUIRE_THROWS_AS(scenario_user_stats(s, 10.0, 9), std::invalid_argument);
}

TEST_CASE("scenario file i/o reports useful errors")
{
    REQUIRE_THROWS_AS(load_scenario_file("/nonexistent/scenario.txt"), std::runtime_error);
}
