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

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "satbeam/evaluation.hpp"
#include "satbeam/precoding.hpp"
#include "satbeam/robust.hpp"
#include "satbeam/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct SystemFlags {
    double carrier_frequency_ghz = 2.0;
    double orbit_altitude_km = 600.0;
    double coverage_radius_km = 630.0;
    arma::uword m_x = 8, m_y = 8;
    double tx_power_dbw = 25.0;
    double rician_factor_db = 10.0;
    double tx_gain_dbi = 6.0;
    double rx_gain_dbi = 0.0;
    double noise_figure_db = 9.0;
    double antenna_temp_k = 290.0;
    double bandwidth_mhz = 10.0;
    double element_spacing_ratio = 0.5;

    satbeam::SystemConfig to_config() const
    {
        satbeam::SystemConfig sys;
        sys.carrier_frequency_hz = carrier_frequency_ghz * 1e9;
        sys.orbit_altitude_m = orbit_altitude_km * 1e3;
        sys.coverage_radius_m = coverage_radius_km * 1e3;
        sys.m_x = m_x;
        sys.m_y = m_y;
        sys.tx_power_w = db_to_linear(tx_power_dbw);
        sys.rician_factor_linear = db_to_linear(rician_factor_db);
        sys.per_antenna_tx_gain_linear = db_to_linear(tx_gain_dbi);
        sys.rx_gain_linear = db_to_linear(rx_gain_dbi);
        sys.noise_figure_linear = db_to_linear(noise_figure_db);
        sys.antenna_temp_k = antenna_temp_k;
        sys.bandwidth_hz = bandwidth_mhz * 1e6;
        sys.element_spacing_ratio = element_spacing_ratio;
        return sys;
    }
};

void add_system_flags(CLI::App* cmd, SystemFlags& flags)
{
    cmd->add_option("--carrier-frequency-ghz", flags.carrier_frequency_ghz);
    cmd->add_option("--orbit-altitude-km", flags.orbit_altitude_km);
    cmd->add_option("--coverage-radius-km", flags.coverage_radius_km);
    cmd->add_option("--m-x", flags.m_x);
    cmd->add_option("--m-y", flags.m_y);
    cmd->add_option("--tx-power-dbw", flags.tx_power_dbw);
    cmd->add_option("--rician-factor-db", flags.rician_factor_db);
    cmd->add_option("--tx-gain-dbi", flags.tx_gain_dbi);
    cmd->add_option("--rx-gain-dbi", flags.rx_gain_dbi);
    cmd->add_option("--noise-figure-db", flags.noise_figure_db);
    cmd->add_option("--antenna-temp-k", flags.antenna_temp_k);
    cmd->add_option("--bandwidth-mhz", flags.bandwidth_mhz);
    cmd->add_option("--element-spacing-ratio", flags.element_spacing_ratio);
}

json sweep_sidecar(const std::string& command, const std::string& scenario_path,
                   const satbeam::Scenario& scenario, std::uint64_t seed,
                   arma::uword mc_samples, const satbeam::PolarGrid& grid, double tol,
                   int iter_max)
{
    json j;
    j["build"] = satbeam::kBuildId;
    j["command"] = command;
    j["seed"] = seed;
    j["mc_samples"] = mc_samples;
    j["quadrature"] = {{"n_radial", grid.n_radial}, {"n_angular", grid.n_angular}};
    j["tolerance"] = tol;
    j["iter_max"] = iter_max;
    j["scenario_file"] = scenario_path;
    j["scenario_text"] = satbeam::serialize_scenario(scenario);
    return j;
}

std::string trace_csv(const std::vector<std::tuple<std::string, double, satbeam::PrecoderResult>>&
                          runs)
{
    std::string out = "algorithm,snr_db,iteration,objective,i_avg_dbw\n";
    char buf[256];
    for (const auto& [name, snr, result] : runs) {
        for (const satbeam::TracePoint& tp : result.trace) {
            std::snprintf(buf, sizeof(buf), "%s,%.6g,%d,%.12g,%.6f\n", name.c_str(), snr,
                          tp.iteration, tp.objective,
                          10.0 * std::log10(std::max(tp.avg_interference_w, 1e-40)));
            out += buf;
        }
    }
    return out;
}

std::string approximation_mse_csv(const satbeam::SystemConfig& sys)
{
    // matrix MSE = mean squared element error over all antenna index pairs
    std::string out = "r_bs_m,freq_ghz,rho_per_m2,mse\n";
    char buf[160];
    const double freqs_ghz[] = {2.0, 4.0, 6.0};
    const double rhos[] = {1e-4, 2e-4};
    for (double rho : rhos) {
        for (double f : freqs_ghz) {
            for (int rb = 100; rb <= 1000; rb += 100) {
                double acc = 0.0;
                arma::uword count = 0;
                for (arma::uword dm = 0; dm < sys.m_x; ++dm) {
                    for (arma::uword dn = 0; dn < sys.m_y; ++dn) {
                        double omega = std::sqrt(static_cast<double>(dm * dm + dn * dn));
                        double err = satbeam::approximation_error_element(
                            omega, rb, rho, f * 1e9, sys.orbit_altitude_m,
                            sys.coverage_radius_m, sys.per_antenna_tx_gain_linear,
                            sys.rx_gain_linear);
                        // offsets (dm, dn) cover the index-difference grid;
                        // multiplicity restores the average over all pairs
                        arma::uword mult = (sys.m_x - dm) * (sys.m_y - dn);
                        mult *= (dm > 0 && dn > 0) ? 4 : ((dm > 0 || dn > 0) ? 2 : 1);
                        acc += err * static_cast<double>(mult);
                        count += mult;
                    }
                }
                std::snprintf(buf, sizeof(buf), "%d,%g,%g,%.10e\n", rb, f, rho,
                              acc / static_cast<double>(count));
                out += buf;
            }
        }
    }
    return out;
}

int cmd_scenario(const std::string& out_path, const satbeam::ScenarioOptions& options)
{
    satbeam::Scenario scenario = satbeam::make_default_scenario(options);
    satbeam::save_scenario_file(scenario, out_path);
    std::cout << "wrote " << out_path << " (" << scenario.sat_users.size() << " satellite users, "
              << scenario.terrestrial.stations.size() << " stations)\n";
    return kExitOk;
}

struct RunFlags {
    std::string scenario_path;
    std::string algorithm = "mmseia";
    double snr_db = 10.0;
    double i_thr_dbw = -150.0;
    std::uint64_t seed = 1;
    arma::uword mc_samples = 2000;
    arma::uword n_radial = 32;
    arma::uword n_angular = 64;
    double tolerance = 1e-4;
    int iter_max = 100;
    std::string out_dir = ".";
    bool emit_pattern = false;
    arma::uword pattern_points = 61;
};

int cmd_run(const RunFlags& flags)
{
    satbeam::Scenario scenario = satbeam::load_scenario_file(flags.scenario_path);
    satbeam::Algorithm algorithm = satbeam::algorithm_from_string(flags.algorithm);
    satbeam::PolarGrid grid{flags.n_radial, flags.n_angular};

    satbeam::InterferenceModel integral =
        satbeam::integral_interference_matrix(scenario.terrestrial, scenario.system, grid);
    if (integral.density_renormalized)
        std::cerr << "warning: user density did not integrate to one; renormalized\n";
    satbeam::InterferenceModel pa =
        satbeam::pa_interference_matrix(scenario.terrestrial, scenario.system);
    std::vector<satbeam::SatUserStats> users =
        satbeam::scenario_user_stats(scenario, flags.snr_db);

    satbeam::Rng rate_rng = satbeam::Rng(flags.seed, 0x72617465).split(0);
    satbeam::PrecoderResult result;
    satbeam::EvalRecord record = satbeam::evaluate_point(
        algorithm, users, integral, pa, scenario.terrestrial.total_users(), flags.snr_db,
        flags.i_thr_dbw, scenario.system.tx_power_w, flags.tolerance, flags.iter_max,
        flags.mc_samples, rate_rng, &result);

    fs::create_directories(flags.out_dir);
    write_file(fs::path(flags.out_dir) / "record.csv", satbeam::records_to_csv({record}));

    json sidecar = sweep_sidecar("run", flags.scenario_path, scenario, flags.seed,
                                 flags.mc_samples, grid, flags.tolerance, flags.iter_max);
    sidecar["algorithm"] = flags.algorithm;
    sidecar["snr_db"] = flags.snr_db;
    sidecar["i_thr_dbw"] = flags.i_thr_dbw;
    sidecar["quad_error_rel"] = integral.quad_error_rel;
    sidecar["record"] = {{"sum_rate", record.sum_rate},
                         {"sum_rate_stderr", record.sum_rate_stderr},
                         {"lb_rate", record.lower_bound},
                         {"i_avg_dbw", record.i_avg_dbw},
                         {"i_avg_true_dbw", record.i_avg_true_dbw},
                         {"iters", record.iterations},
                         {"converged", record.converged},
                         {"warning", result.warning}};
    write_file(fs::path(flags.out_dir) / "record.json", sidecar.dump(2) + "\n");

    if (flags.emit_pattern) {
        double span = 0.9 * scenario.system.coverage_radius_m;
        arma::vec offsets = arma::linspace(-span, span, flags.pattern_points);
        arma::mat pattern = satbeam::beam_pattern(result.precoder, scenario.system, offsets,
                                                  offsets);
        std::string csv = "x_m,y_m,rx_power_dbw\n";
        char buf[96];
        for (arma::uword i = 0; i < offsets.n_elem; ++i) {
            for (arma::uword j = 0; j < offsets.n_elem; ++j) {
                std::snprintf(buf, sizeof(buf), "%.1f,%.1f,%.4f\n", offsets(i), offsets(j),
                              pattern(i, j));
                csv += buf;
            }
        }
        write_file(fs::path(flags.out_dir) / "pattern.csv", csv);
    }

    std::cout << satbeam::records_to_csv({record});
    return record.converged ? kExitOk : kExitNotConverged;
}

struct SweepFlags {
    std::string scenario_path;
    std::string figure;
    std::string variable;
    std::vector<double> grid;
    std::vector<std::string> algorithms;
    double snr_db = 10.0;
    double i_thr_dbw = -150.0;
    std::uint64_t seed = 1;
    arma::uword mc_samples = 2000;
    arma::uword n_radial = 32;
    arma::uword n_angular = 64;
    double tolerance = 1e-4;
    int iter_max = 100;
    std::string out_dir = ".";
};

int cmd_sweep(const SweepFlags& flags)
{
    satbeam::Scenario scenario = satbeam::load_scenario_file(flags.scenario_path);
    fs::create_directories(flags.out_dir);

    std::string tag = flags.figure.empty() ? "sweep" : flags.figure;
    satbeam::PolarGrid grid{flags.n_radial, flags.n_angular};

    if (flags.figure == "fig3") {
        write_file(fs::path(flags.out_dir) / "fig3.csv", approximation_mse_csv(scenario.system));
        json sidecar = sweep_sidecar("sweep", flags.scenario_path, scenario, flags.seed,
                                     flags.mc_samples, grid, flags.tolerance, flags.iter_max);
        sidecar["figure"] = "fig3";
        write_file(fs::path(flags.out_dir) / "fig3.json", sidecar.dump(2) + "\n");
        std::cout << "wrote " << (fs::path(flags.out_dir) / "fig3.csv").string() << "\n";
        return kExitOk;
    }

    if (flags.figure == "fig7") {
        // convergence traces of the two iterative schemes
        satbeam::InterferenceModel integral = satbeam::integral_interference_matrix(
            scenario.terrestrial, scenario.system, grid, false);
        std::vector<std::tuple<std::string, double, satbeam::PrecoderResult>> runs;
        bool all_converged = true;
        for (double snr : {0.0, 10.0, 20.0}) {
            std::vector<satbeam::SatUserStats> users = satbeam::scenario_user_stats(scenario, snr);
            satbeam::RobustProblem problem = satbeam::make_robust_problem(
                users, integral, db_to_linear(flags.i_thr_dbw), scenario.system.tx_power_w,
                scenario.terrestrial.total_users(), flags.tolerance, flags.iter_max);
            satbeam::PrecoderResult a = satbeam::wqtia(problem);
            satbeam::PrecoderResult b = satbeam::wweia(problem);
            all_converged = all_converged && a.converged && b.converged;
            runs.emplace_back("wqtia", snr, std::move(a));
            runs.emplace_back("wweia", snr, std::move(b));
        }
        write_file(fs::path(flags.out_dir) / "fig7.csv", trace_csv(runs));
        json sidecar = sweep_sidecar("sweep", flags.scenario_path, scenario, flags.seed,
                                     flags.mc_samples, grid, flags.tolerance, flags.iter_max);
        sidecar["figure"] = "fig7";
        write_file(fs::path(flags.out_dir) / "fig7.json", sidecar.dump(2) + "\n");
        std::cout << "wrote " << (fs::path(flags.out_dir) / "fig7.csv").string() << "\n";
        return all_converged ? kExitOk : kExitNotConverged;
    }

    satbeam::SweepSpec spec;
    spec.seed = flags.seed;
    spec.monte_carlo_samples = flags.mc_samples;
    spec.base_snr_db = flags.snr_db;
    spec.base_i_thr_dbw = flags.i_thr_dbw;
    spec.tolerance = flags.tolerance;
    spec.iter_max = flags.iter_max;
    spec.grid_quadrature = grid;

    auto algorithms = [](std::initializer_list<satbeam::Algorithm> list) {
        return std::vector<satbeam::Algorithm>(list);
    };

    if (flags.figure == "fig5" || flags.figure == "fig6") {
        spec.variable = satbeam::SweepSpec::Variable::snr_db;
        spec.grid = {0, 5, 10, 15, 20};
        spec.algorithms =
            algorithms({satbeam::Algorithm::mrt, satbeam::Algorithm::zf, satbeam::Algorithm::mmse,
                        satbeam::Algorithm::wmmse, satbeam::Algorithm::mmseia,
                        satbeam::Algorithm::wweia, satbeam::Algorithm::wqtia});
    } else if (flags.figure == "fig8" || flags.figure == "fig9") {
        spec.variable = satbeam::SweepSpec::Variable::i_thr_dbw;
        spec.grid = {-140, -150, -160, -170};
        spec.algorithms = algorithms({satbeam::Algorithm::mmse, satbeam::Algorithm::wmmse,
                                      satbeam::Algorithm::mmseia, satbeam::Algorithm::wweia,
                                      satbeam::Algorithm::wqtia});
    } else if (flags.figure == "fig10" || flags.figure == "fig11") {
        spec.variable = satbeam::SweepSpec::Variable::snr_db;
        spec.grid = {0, 5, 10, 15, 20};
        spec.algorithms = algorithms({satbeam::Algorithm::mmseia, satbeam::Algorithm::wweia,
                                      satbeam::Algorithm::wqtia, satbeam::Algorithm::mmseia_pa,
                                      satbeam::Algorithm::wweia_pa, satbeam::Algorithm::wqtia_pa});
    } else if (flags.figure.empty()) {
        if (flags.variable.empty() || flags.grid.empty() || flags.algorithms.empty())
            throw CLI::ValidationError(
                "sweep", "either --figure or all of --variable/--grid/--algorithms are required");
        if (flags.variable == "snr_db")
            spec.variable = satbeam::SweepSpec::Variable::snr_db;
        else if (flags.variable == "i_thr_dbw")
            spec.variable = satbeam::SweepSpec::Variable::i_thr_dbw;
        else if (flags.variable == "k_s")
            spec.variable = satbeam::SweepSpec::Variable::k_s;
        else
            throw CLI::ValidationError("sweep", "unknown --variable " + flags.variable);
        spec.grid = flags.grid;
        for (const std::string& name : flags.algorithms)
            spec.algorithms.push_back(satbeam::algorithm_from_string(name));
    } else {
        throw CLI::ValidationError("sweep", "unknown figure tag " + flags.figure +
                                                " (fig3, fig5..fig11)");
    }

    std::vector<satbeam::EvalRecord> records = satbeam::run_sweep(spec, scenario);

    // retag with the figure name in its own column for plotting scripts
    std::string csv = satbeam::records_to_csv(records);
    std::string tagged = "figure," + csv.substr(0, csv.find('\n')) + "\n";
    std::size_t pos = csv.find('\n') + 1;
    while (pos < csv.size()) {
        std::size_t end = csv.find('\n', pos);
        tagged += tag + "," + csv.substr(pos, end - pos) + "\n";
        pos = end + 1;
    }
    write_file(fs::path(flags.out_dir) / (tag + ".csv"), tagged);

    json sidecar = sweep_sidecar("sweep", flags.scenario_path, scenario, flags.seed,
                                 flags.mc_samples, grid, flags.tolerance, flags.iter_max);
    sidecar["figure"] = tag;
    sidecar["base_snr_db"] = flags.snr_db;
    sidecar["base_i_thr_dbw"] = flags.i_thr_dbw;
    write_file(fs::path(flags.out_dir) / (tag + ".json"), sidecar.dump(2) + "\n");
    std::cout << "wrote " << (fs::path(flags.out_dir) / (tag + ".csv")).string() << " ("
              << records.size() << " records)\n";

    for (const satbeam::EvalRecord& rec : records)
        if (!rec.converged)
            return kExitNotConverged;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"satellite transmit beamforming under terrestrial interference thresholds"};
    app.require_subcommand(1);

    // scenario
    auto* scn = app.add_subcommand("scenario", "generate a scenario file");
    std::string scn_out;
    satbeam::ScenarioOptions scn_options;
    SystemFlags scn_system;
    scn->add_option("-o,--out", scn_out, "output scenario path")->required();
    scn->add_option("--k-s", scn_options.k_s, "number of satellite users");
    scn->add_option("--n-bs", scn_options.n_bs, "number of terrestrial stations");
    scn->add_option("--seed", scn_options.seed, "placement seed");
    scn->add_option("--cell-radius-m", scn_options.cell_radius_m);
    scn->add_option("--users-per-bs", scn_options.users_per_bs);
    scn->add_option("--bs-cluster-distance-m", scn_options.bs_cluster_distance_m,
                    "station cluster distance from the sub-satellite point (0 = auto)");
    scn->add_option("--bs-ring-radius-m", scn_options.bs_ring_radius_m);
    scn->add_option("--placement-radius-m", scn_options.placement_radius_m);
    add_system_flags(scn, scn_system);

    // run
    auto* run = app.add_subcommand("run", "run one algorithm at one operating point");
    RunFlags run_flags;
    run->add_option("--scenario", run_flags.scenario_path)->required();
    run->add_option("--algorithm", run_flags.algorithm,
                    "mrt|zf|mmse|wmmse|wqtia|wweia|mmseia|wqtia-pa|wweia-pa|mmseia-pa");
    run->add_option("--snr-db", run_flags.snr_db);
    run->add_option("--i-thr-dbw", run_flags.i_thr_dbw);
    run->add_option("--seed", run_flags.seed);
    run->add_option("--mc-samples", run_flags.mc_samples);
    run->add_option("--n-r", run_flags.n_radial, "radial quadrature samples");
    run->add_option("--n-phi", run_flags.n_angular, "angular quadrature samples");
    run->add_option("--tol", run_flags.tolerance);
    run->add_option("--iter-max", run_flags.iter_max);
    run->add_option("-o,--out", run_flags.out_dir, "output directory");
    run->add_flag("--emit-pattern", run_flags.emit_pattern, "also write a beam-pattern grid");
    run->add_option("--pattern-points", run_flags.pattern_points);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    SweepFlags sweep_flags;
    sweep->add_option("--scenario", sweep_flags.scenario_path)->required();
    sweep->add_option("--figure", sweep_flags.figure, "preset: fig3, fig5..fig11");
    sweep->add_option("--variable", sweep_flags.variable, "snr_db|i_thr_dbw|k_s");
    sweep->add_option("--grid", sweep_flags.grid)->delimiter(',');
    sweep->add_option("--algorithms", sweep_flags.algorithms)->delimiter(',');
    sweep->add_option("--snr-db", sweep_flags.snr_db, "base SNR for non-SNR sweeps");
    sweep->add_option("--i-thr-dbw", sweep_flags.i_thr_dbw, "base threshold");
    sweep->add_option("--seed", sweep_flags.seed);
    sweep->add_option("--mc-samples", sweep_flags.mc_samples);
    sweep->add_option("--n-r", sweep_flags.n_radial);
    sweep->add_option("--n-phi", sweep_flags.n_angular);
    sweep->add_option("--tol", sweep_flags.tolerance);
    sweep->add_option("--iter-max", sweep_flags.iter_max);
    sweep->add_option("-o,--out", sweep_flags.out_dir, "output directory");

    try {
        app.parse(argc, argv);
        if (scn->parsed()) {
            scn_options.system = scn_system.to_config();
            return cmd_scenario(scn_out, scn_options);
        }
        if (run->parsed())
            return cmd_run(run_flags);
        return cmd_sweep(sweep_flags);
    } catch (const CLI::ParseError& e) {
        // usage problems map onto the generic error code
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
