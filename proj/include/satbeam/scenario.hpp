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

#ifndef SATBEAM_SCENARIO_HPP
#define SATBEAM_SCENARIO_HPP

#include <string>
#include <vector>

#include "satbeam/geometry.hpp"
#include "satbeam/interference.hpp"

namespace satbeam {

/// A complete simulation scenario: system parameters, satellite user
/// positions and the terrestrial layout. Serialized as a human-readable
/// key-value text file with dB/km units in the key names; everything is
/// converted to linear SI on parse.
struct Scenario {
    SystemConfig system;
    std::vector<SatUserGeometry> sat_users;
    TerrestrialLayout terrestrial;
    std::uint64_t seed = 1; // placement seed, recorded for reproducibility
};

struct ScenarioOptions {
    arma::uword k_s = 12;
    arma::uword n_bs = 7;
    std::uint64_t seed = 1;
    double cell_radius_m = 500.0;
    arma::uword users_per_bs = 10;
    double bs_cluster_distance_m = 0.0; // 0 -> 0.8 * coverage radius
    double bs_ring_radius_m = 0.0;      // 0 -> 2 * cell radius
    double placement_radius_m = 0.0;    // 0 -> coverage radius
    SystemConfig system;                // defaults follow the reference setup
};

/// Deterministic scenario generator: satellite users drawn uniformly over
/// the coverage footprint (direction-cosine disk), terrestrial stations as
/// one cell center plus a ring near the coverage edge.
Scenario make_default_scenario(const ScenarioOptions& options = {});

std::string serialize_scenario(const Scenario& scenario);

/// Parse a scenario document; errors carry the offending line number.
Scenario parse_scenario(const std::string& text, const std::string& origin = "scenario");
Scenario load_scenario_file(const std::string& path);
void save_scenario_file(const Scenario& scenario, const std::string& path);

/// Per-user statistical CSI at the given operating SNR. use_first_k limits
/// the active user set (0 means all); the transmit power is shared by the
/// active users only.
std::vector<SatUserStats> scenario_user_stats(const Scenario& scenario, double snr_db,
                                              arma::uword use_first_k = 0);

} // namespace satbeam

#endif
