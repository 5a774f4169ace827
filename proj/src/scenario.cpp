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

#include "satbeam/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace satbeam {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Line {
    int number = 0;
    std::string key;
    std::string value;
    std::string section;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what)
{
    std::ostringstream msg;
    msg << origin << ":" << line << ": " << what;
    throw std::runtime_error(msg.str());
}

double parse_double(const std::string& origin, const Line& line, const std::string& text)
{
    try {
        std::size_t idx = 0;
        double v = std::stod(text, &idx);
        while (idx < text.size() && std::isspace(static_cast<unsigned char>(text[idx])))
            ++idx;
        if (idx != text.size())
            fail(origin, line.number, "trailing characters after number '" + text + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(origin, line.number, "expected a number, got '" + text + "'");
    } catch (const std::out_of_range&) {
        fail(origin, line.number, "number out of range: '" + text + "'");
    }
}

std::vector<double> parse_numbers(const std::string& origin, const Line& line,
                                  std::size_t expected)
{
    std::istringstream iss(line.value);
    std::vector<double> out;
    std::string tok;
    while (iss >> tok)
        out.push_back(parse_double(origin, line, tok));
    if (out.size() != expected) {
        std::ostringstream msg;
        msg << "expected " << expected << " numbers for '" << line.key << "', got "
            << out.size();
        fail(origin, line.number, msg.str());
    }
    return out;
}

} // namespace

Scenario make_default_scenario(const ScenarioOptions& options)
{
    Scenario scenario;
    scenario.system = options.system;
    scenario.system.validate();
    scenario.seed = options.seed;

    const double r_sat = scenario.system.coverage_radius_m;
    const double h = scenario.system.orbit_altitude_m;
    const double place_r = options.placement_radius_m > 0.0 ? options.placement_radius_m : r_sat;

    Rng rng(options.seed, 0x73636e); // placement stream
    for (arma::uword k = 0; k < options.k_s; ++k) {
        double radius = (place_r / r_sat) * std::sqrt(rng.uniform());
        double angle = 2.0 * kPi * rng.uniform();
        double cx = radius * std::cos(angle);
        double cy = radius * std::sin(angle);

        // recover elevation/azimuth whose direction cosines are (cx, cy)
        double sin_el = std::sqrt(std::max(0.0, 1.0 - cy * cy));
        double elevation = std::acos(std::clamp(cy, -1.0, 1.0));
        double azimuth =
            sin_el > 0.0 ? std::acos(std::clamp(cx / sin_el, -1.0, 1.0)) : 0.0;

        double gx = r_sat * cx, gy = r_sat * cy;
        SatUserGeometry geom;
        geom.elevation_rad = elevation;
        geom.azimuth_rad = azimuth;
        geom.distance_m = std::sqrt(h * h + gx * gx + gy * gy);
        scenario.sat_users.push_back(geom);
    }

    scenario.terrestrial.cell_radius_m = options.cell_radius_m;
    scenario.terrestrial.users_per_bs = options.users_per_bs;
    scenario.terrestrial.density_name = "uniform";
    const double cluster =
        options.bs_cluster_distance_m > 0.0 ? options.bs_cluster_distance_m : 0.8 * r_sat;
    const double ring =
        options.bs_ring_radius_m > 0.0 ? options.bs_ring_radius_m : 2.0 * options.cell_radius_m;
    for (arma::uword n = 0; n < options.n_bs; ++n) {
        double x = cluster, y = 0.0;
        if (n > 0) {
            double ang = 2.0 * kPi * static_cast<double>(n - 1) /
                         static_cast<double>(options.n_bs - 1);
            x += ring * std::cos(ang);
            y += ring * std::sin(ang);
        }
        scenario.terrestrial.stations.push_back({std::hypot(x, y), std::atan2(y, x)});
    }
    return scenario;
}

std::string serialize_scenario(const Scenario& scenario)
{
    const SystemConfig& sys = scenario.system;
    std::ostringstream out;
    out << "# satbeam scenario\n";
    out << "format_version = 1\n";
    out << "seed = " << scenario.seed << "\n\n";

    out << "[system]\n";
    out << "carrier_frequency_ghz = " << fmt(sys.carrier_frequency_hz / 1e9) << "\n";
    out << "orbit_altitude_km = " << fmt(sys.orbit_altitude_m / 1e3) << "\n";
    out << "coverage_radius_km = " << fmt(sys.coverage_radius_m / 1e3) << "\n";
    out << "m_x = " << sys.m_x << "\n";
    out << "m_y = " << sys.m_y << "\n";
    out << "tx_power_dbw = " << fmt(linear_to_db(sys.tx_power_w)) << "\n";
    out << "rician_factor_db = " << fmt(linear_to_db(sys.rician_factor_linear)) << "\n";
    out << "tx_gain_dbi = " << fmt(linear_to_db(sys.per_antenna_tx_gain_linear)) << "\n";
    out << "rx_gain_dbi = " << fmt(linear_to_db(sys.rx_gain_linear)) << "\n";
    out << "noise_figure_db = " << fmt(linear_to_db(sys.noise_figure_linear)) << "\n";
    out << "antenna_temp_k = " << fmt(sys.antenna_temp_k) << "\n";
    out << "bandwidth_mhz = " << fmt(sys.bandwidth_hz / 1e6) << "\n";
    out << "element_spacing_ratio = " << fmt(sys.element_spacing_ratio) << "\n\n";

    out << "[sat_users]\n";
    out << "# user = elevation_rad azimuth_rad distance_m\n";
    for (const SatUserGeometry& g : scenario.sat_users)
        out << "user = " << fmt(g.elevation_rad) << " " << fmt(g.azimuth_rad) << " "
            << fmt(g.distance_m) << "\n";
    out << "\n";

    out << "[terrestrial]\n";
    out << "cell_radius_m = " << fmt(scenario.terrestrial.cell_radius_m) << "\n";
    out << "users_per_bs = " << scenario.terrestrial.users_per_bs << "\n";
    out << "density = " << scenario.terrestrial.density_name << "\n";
    out << "# station = distance_to_subsat_m polar_angle_rad\n";
    for (const TerrestrialStation& s : scenario.terrestrial.stations)
        out << "station = " << fmt(s.distance_to_subsat_m) << " " << fmt(s.polar_angle_rad)
            << "\n";
    return out.str();
}

Scenario parse_scenario(const std::string& text, const std::string& origin)
{
    Scenario scenario;
    scenario.sat_users.clear();
    scenario.terrestrial.stations.clear();

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int number = 0;
    bool have_version = false;

    while (std::getline(in, raw)) {
        ++number;
        std::string s = raw;
        if (auto pos = s.find('#'); pos != std::string::npos)
            s.erase(pos);
        auto first = s.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        auto last = s.find_last_not_of(" \t\r");
        s = s.substr(first, last - first + 1);

        if (s.front() == '[') {
            if (s.back() != ']')
                fail(origin, number, "unterminated section header");
            section = s.substr(1, s.size() - 2);
            if (section != "system" && section != "sat_users" && section != "terrestrial")
                fail(origin, number, "unknown section [" + section + "]");
            continue;
        }

        auto eq = s.find('=');
        if (eq == std::string::npos)
            fail(origin, number, "expected 'key = value'");
        Line line;
        line.number = number;
        line.section = section;
        line.key = s.substr(0, eq);
        line.value = s.substr(eq + 1);
        auto trim = [](std::string& t) {
            auto b = t.find_first_not_of(" \t");
            auto e = t.find_last_not_of(" \t");
            t = (b == std::string::npos) ? "" : t.substr(b, e - b + 1);
        };
        trim(line.key);
        trim(line.value);
        if (line.key.empty() || line.value.empty())
            fail(origin, number, "expected 'key = value'");

        SystemConfig& sys = scenario.system;
        if (section.empty()) {
            if (line.key == "format_version") {
                if (line.value != "1")
                    fail(origin, number, "unsupported format_version " + line.value);
                have_version = true;
            } else if (line.key == "seed") {
                scenario.seed = static_cast<std::uint64_t>(
                    std::llround(parse_double(origin, line, line.value)));
            } else {
                fail(origin, number, "unknown top-level key '" + line.key + "'");
            }
        } else if (section == "system") {
            double v = (line.key == "m_x" || line.key == "m_y")
                           ? 0.0
                           : parse_double(origin, line, line.value);
            if (line.key == "carrier_frequency_ghz")
                sys.carrier_frequency_hz = v * 1e9;
            else if (line.key == "orbit_altitude_km")
                sys.orbit_altitude_m = v * 1e3;
            else if (line.key == "coverage_radius_km")
                sys.coverage_radius_m = v * 1e3;
            else if (line.key == "m_x")
                sys.m_x = static_cast<arma::uword>(
                    std::llround(parse_double(origin, line, line.value)));
            else if (line.key == "m_y")
                sys.m_y = static_cast<arma::uword>(
                    std::llround(parse_double(origin, line, line.value)));
            else if (line.key == "tx_power_dbw")
                sys.tx_power_w = db_to_linear(v);
            else if (line.key == "rician_factor_db")
                sys.rician_factor_linear = db_to_linear(v);
            else if (line.key == "tx_gain_dbi")
                sys.per_antenna_tx_gain_linear = db_to_linear(v);
            else if (line.key == "rx_gain_dbi")
                sys.rx_gain_linear = db_to_linear(v);
            else if (line.key == "noise_figure_db")
                sys.noise_figure_linear = db_to_linear(v);
            else if (line.key == "antenna_temp_k")
                sys.antenna_temp_k = v;
            else if (line.key == "bandwidth_mhz")
                sys.bandwidth_hz = v * 1e6;
            else if (line.key == "element_spacing_ratio")
                sys.element_spacing_ratio = v;
            else
                fail(origin, number, "unknown [system] key '" + line.key + "'");
        } else if (section == "sat_users") {
            if (line.key != "user")
                fail(origin, number, "unknown [sat_users] key '" + line.key + "'");
            auto nums = parse_numbers(origin, line, 3);
            scenario.sat_users.push_back({nums[0], nums[1], nums[2]});
        } else { // terrestrial
            if (line.key == "cell_radius_m")
                scenario.terrestrial.cell_radius_m = parse_double(origin, line, line.value);
            else if (line.key == "users_per_bs")
                scenario.terrestrial.users_per_bs = static_cast<arma::uword>(
                    std::llround(parse_double(origin, line, line.value)));
            else if (line.key == "density") {
                if (line.value != "uniform")
                    fail(origin, number, "unknown density '" + line.value +
                                             "' (built-in: uniform)");
                scenario.terrestrial.density_name = line.value;
            } else if (line.key == "station") {
                auto nums = parse_numbers(origin, line, 2);
                scenario.terrestrial.stations.push_back({nums[0], nums[1]});
            } else {
                fail(origin, number, "unknown [terrestrial] key '" + line.key + "'");
            }
        }
    }

    if (!have_version)
        fail(origin, number, "missing format_version");
    scenario.system.validate();
    if (scenario.sat_users.empty())
        fail(origin, number, "scenario has no satellite users");
    if (scenario.terrestrial.stations.empty())
        fail(origin, number, "scenario has no terrestrial stations");
    return scenario;
}

Scenario load_scenario_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

void save_scenario_file(const Scenario& scenario, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write scenario file: " + path);
    out << serialize_scenario(scenario);
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

std::vector<SatUserStats> scenario_user_stats(const Scenario& scenario, double snr_db,
                                              arma::uword use_first_k)
{
    arma::uword k = use_first_k == 0 ? scenario.sat_users.size() : use_first_k;
    if (k > scenario.sat_users.size())
        throw std::invalid_argument("scenario_user_stats: not enough users in the scenario");
    std::vector<SatUserStats> stats;
    stats.reserve(k);
    for (arma::uword i = 0; i < k; ++i)
        stats.push_back(build_sat_user_stats(scenario.sat_users[i], scenario.system, snr_db, k));
    return stats;
}

} // namespace satbeam
