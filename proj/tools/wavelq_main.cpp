// wavelq: LQ-optimal boundary control for networks of transport equations.
// Subcommands: validate, solve, simulate, examples.
// Exit codes: 0 success, 1 not well-posed, 2 input error, 3 not optimizable,
// 4 runtime instability.

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "wavelq/control.hpp"
#include "wavelq/discretize.hpp"
#include "wavelq/examples.hpp"
#include "wavelq/io.hpp"
#include "wavelq/model.hpp"
#include "wavelq/riccati.hpp"
#include "wavelq/sim.hpp"
#include "wavelq/transform.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotWellPosed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNotOptimizable = 3;
constexpr int kExitInstability = 4;

struct RunConfig {
    std::string system_path;
    std::optional<int> grid_override;
    double riccati_tol = 1e-13;
    std::string horizon = "auto";
    std::string output_dir = ".";
    std::string initial_condition;
    std::vector<double> reconstruct_times;
};

struct Pipeline {
    wavelq::HyperbolicSystem sys;
    wavelq::TransformData transform;
    wavelq::ClockTables clock;
    wavelq::DiscreteSystem discrete;
};

Pipeline run_pipeline(const wavelq::HyperbolicSystem& sys) {
    auto transform = wavelq::build_transform(sys, sys.grid());
    auto clock = wavelq::build_clock(sys, sys.grid());
    auto discrete = wavelq::build_discrete(sys, transform.P1(), clock);
    return Pipeline{sys, std::move(transform), std::move(clock), std::move(discrete)};
}

void ensure_output_dir(const std::string& dir) {
    std::filesystem::create_directories(dir);
}

std::string joined(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << contents;
}

wavelq::StateProfile parse_initial_condition(const std::string& format, int n,
                                             const wavelq::SpatialGrid& grid) {
    if (format.empty()) {
        return wavelq::StateProfile::constant(grid, wavelq::Vector::Ones(n));
    }
    if (format.rfind("constant:", 0) == 0) {
        std::stringstream ss(format.substr(9));
        std::vector<double> entries;
        std::string token;
        while (std::getline(ss, token, ',')) {
            entries.push_back(std::stod(token));
        }
        if (static_cast<int>(entries.size()) != n) {
            throw wavelq::SchemaError("--ic constant needs " + std::to_string(n) + " entries");
        }
        return wavelq::StateProfile::constant(
            grid, Eigen::Map<const wavelq::Vector>(entries.data(), n));
    }
    if (format.rfind("file:", 0) == 0) {
        const std::string path = format.substr(5);
        std::ifstream in(path);
        if (!in) throw wavelq::SchemaError("cannot open initial condition file '" + path + "'");
        wavelq::Matrix values(n, grid.num_nodes());
        std::string line;
        int row = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string cell;
            std::vector<double> cells;
            bool numeric = true;
            while (std::getline(ss, cell, ',')) {
                try {
                    cells.push_back(std::stod(cell));
                } catch (...) {
                    numeric = false;
                    break;
                }
            }
            if (!numeric) continue;  // header row
            if (static_cast<int>(cells.size()) != n + 1) {
                throw wavelq::SchemaError("--ic file rows must hold zeta plus " +
                                          std::to_string(n) + " state entries");
            }
            if (row >= grid.num_nodes()) {
                throw wavelq::SchemaError("--ic file has more rows than grid nodes");
            }
            for (int i = 0; i < n; ++i) values(i, row) = cells[static_cast<std::size_t>(i + 1)];
            ++row;
        }
        if (row != grid.num_nodes()) {
            throw wavelq::SchemaError("--ic file must hold one row per grid node");
        }
        return wavelq::StateProfile(grid, std::move(values));
    }
    throw wavelq::SchemaError("--ic must look like 'constant:<v1,...,vn>' or 'file:<path>'");
}

void print_synthesis_summary(const Pipeline& pipe, const wavelq::LqSolution& lq) {
    const auto out_lyap = wavelq::solve_output_lyapunov(pipe.discrete);
    const auto in_lyap = wavelq::solve_input_lyapunov(pipe.discrete);
    auto verdict = [](const wavelq::LyapunovSolution& s) {
        if (!s.solvable) return "inconclusive";
        return s.exists ? "yes" : "no";
    };
    std::cout << std::setprecision(6);
    std::cout << "state/input/output dims : " << pipe.discrete.state_dim() << "/"
              << pipe.discrete.input_dim() << "/" << pipe.discrete.output_dim() << "\n"
              << "grid cells              : " << pipe.sys.grid().num_cells() << "\n"
              << "period p(1)             : " << pipe.clock.period << "\n"
              << "transform defect        : " << pipe.transform.inverse_residual << "\n"
              << "open-loop radius        : " << wavelq::spectral_radius(pipe.discrete.A_d)
              << "\n"
              << "CARE                    : " << (lq.care.converged ? "converged" : "FAILED")
              << " (" << lq.care.iterations << " iterations, residual " << lq.care.residual
              << ")\n"
              << "FARE                    : " << (lq.fare.converged ? "converged" : "FAILED")
              << " (" << lq.fare.iterations << " iterations, residual " << lq.fare.residual
              << ")\n"
              << "closed-loop radius      : " << lq.closed_loop_radius << "\n"
              << "stabilizing             : " << (lq.stabilizing ? "yes" : "no") << "\n"
              << "unique solution         : " << (lq.unique ? "yes" : "no") << "\n"
              << "output stable (open)    : " << verdict(out_lyap) << "\n"
              << "input stable (open)     : " << verdict(in_lyap) << "\n";
}

int cmd_validate(const RunConfig& config) {
    auto sys = wavelq::load_system_file(config.system_path, config.grid_override);
    auto report = wavelq::validate_system(sys);
    std::cout << report.describe() << "\n";
    return report.well_posed ? kExitOk : kExitNotWellPosed;
}

int cmd_solve(const RunConfig& config) {
    auto sys = wavelq::load_system_file(config.system_path, config.grid_override);
    auto report = wavelq::validate_system(sys);
    if (!report.well_posed) {
        std::cerr << "system is not well-posed:\n" << report.describe() << "\n";
        return kExitNotWellPosed;
    }
    auto pipe = run_pipeline(sys);
    wavelq::RiccatiOptions opts;
    opts.tol = config.riccati_tol;
    auto lq = wavelq::synthesize(pipe.discrete, opts);
    print_synthesis_summary(pipe, lq);
    if (!lq.care.converged) {
        std::cerr << "not optimizable: the control Riccati iteration did not converge\n";
        return kExitNotOptimizable;
    }
    if (!lq.fare.converged) {
        std::cerr << "not input stabilizable: the filter Riccati iteration did not converge\n";
        return kExitNotOptimizable;
    }
    ensure_output_dir(config.output_dir);
    write_text_file(joined(config.output_dir, "discrete_system.json"),
                    wavelq::discrete_to_json(pipe.discrete).dump(2) + "\n");
    write_text_file(joined(config.output_dir, "lq_solution.json"),
                    wavelq::lq_solution_to_json(lq, pipe.discrete).dump(2) + "\n");
    std::ofstream transform_csv(joined(config.output_dir, "transform.csv"));
    wavelq::write_transform_csv(pipe.transform, transform_csv);
    std::cout << "wrote discrete_system.json, lq_solution.json, transform.csv to "
              << config.output_dir << "\n";
    return kExitOk;
}

int cmd_simulate(const RunConfig& config) {
    auto sys = wavelq::load_system_file(config.system_path, config.grid_override);
    auto report = wavelq::validate_system(sys);
    if (!report.well_posed) {
        std::cerr << "system is not well-posed:\n" << report.describe() << "\n";
        return kExitNotWellPosed;
    }
    auto pipe = run_pipeline(sys);
    wavelq::RiccatiOptions opts;
    opts.tol = config.riccati_tol;
    auto lq = wavelq::synthesize(pipe.discrete, opts);
    if (!lq.care.converged || !lq.fare.converged) {
        std::cerr << "not optimizable: Riccati iteration did not converge\n";
        return kExitNotOptimizable;
    }
    if (!lq.stabilizing) {
        std::cerr << "closed loop is not stable (radius " << lq.closed_loop_radius
                  << "); refusing to simulate\n";
        return kExitInstability;
    }

    // initial condition is given in the original variables; map through Q
    auto z0_original = parse_initial_condition(config.initial_condition, sys.state_dim(),
                                               sys.grid());
    auto z0 = wavelq::to_transport_variables(z0_original, pipe.transform);
    auto zd0 = wavelq::lift_initial_condition(z0, sys, pipe.clock);

    long horizon = 0;
    if (config.horizon == "auto") {
        horizon = wavelq::default_horizon(lq.closed_loop_radius);
    } else {
        horizon = std::stol(config.horizon);
        if (horizon < 1) throw wavelq::SchemaError("--horizon must be >= 1 or 'auto'");
    }

    wavelq::Trajectory traj;
    try {
        traj = wavelq::simulate_closed_loop(pipe.discrete, lq.F_d, zd0, horizon);
    } catch (const std::runtime_error& e) {
        std::cerr << "simulation aborted: " << e.what() << "\n";
        return kExitInstability;
    }

    const double cost = wavelq::cost_discrete(traj);
    const double predicted = wavelq::optimal_cost(lq.care.Pi, zd0);
    const double gap = std::abs(cost - predicted);
    const double rel_gap = gap / std::max(predicted, 1e-300);

    ensure_output_dir(config.output_dir);
    std::ofstream traj_csv(joined(config.output_dir, "trajectory.csv"));
    wavelq::write_trajectory_csv(traj, traj_csv);

    std::vector<double> times = config.reconstruct_times;
    if (times.empty()) {
        for (double factor : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            const double t = factor * pipe.clock.period;
            if (t < static_cast<double>(horizon) * pipe.clock.period) times.push_back(t);
        }
    }
    std::vector<std::pair<double, wavelq::StateProfile>> snapshots;
    for (double t : times) {
        auto profile = wavelq::reconstruct_profile(traj, t, pipe.clock, sys);
        snapshots.emplace_back(t, wavelq::to_original_variables(profile, pipe.transform));
    }
    std::ofstream rec_csv(joined(config.output_dir, "reconstruction.csv"));
    wavelq::write_reconstruction_csv(snapshots, rec_csv);

    nlohmann::json cost_report{{"discrete_cost", cost},
                               {"predicted_optimal_cost", predicted},
                               {"absolute_gap", gap},
                               {"relative_gap", rel_gap},
                               {"period", pipe.clock.period},
                               {"continuous_cost", pipe.clock.period * cost},
                               {"horizon", horizon}};
    write_text_file(joined(config.output_dir, "cost_report.json"),
                    cost_report.dump(2) + "\n");

    std::cout << std::setprecision(6);
    std::cout << "horizon                 : " << horizon << " steps\n"
              << "closed-loop radius      : " << lq.closed_loop_radius << "\n"
              << "discrete cost           : " << cost << "\n"
              << "<zd0, Pi zd0>           : " << predicted << "\n"
              << "cost gap (abs/rel)      : " << gap << " / " << rel_gap << "\n"
              << "continuous cost         : " << pipe.clock.period * cost << "\n";
    if (horizon >= 12) {
        const long j0 = horizon / 4;
        const long j1 = std::min<long>(horizon, j0 + 30);
        const double n0 = std::sqrt(wavelq::profile_l2_norm_sq(
            traj.states[static_cast<std::size_t>(j0)]));
        const double n1 = std::sqrt(wavelq::profile_l2_norm_sq(
            traj.states[static_cast<std::size_t>(j1)]));
        if (n0 > 1e-280 && n1 > 1e-280) {
            const double fitted = std::exp(std::log(n1 / n0) / static_cast<double>(j1 - j0));
            std::cout << "fitted decay per step   : " << fitted << "\n";
        }
    }
    std::cout << "wrote trajectory.csv, reconstruction.csv, cost_report.json to "
              << config.output_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("WAVELQ_THREADS")) {
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));
    }

    CLI::App app{"LQ-optimal boundary control for networks of transport equations"};
    app.require_subcommand(1);

    RunConfig config;
    int grid_flag = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_system) {
        if (needs_system) {
            cmd->add_option("--system", config.system_path, "system description JSON")
                ->required();
        }
        cmd->add_option("--grid", grid_flag, "override grid cell count")->check(CLI::Range(2, 1 << 22));
    };

    auto* validate = app.add_subcommand("validate", "check well-posedness of a system file");
    add_common(validate, true);

    auto* solve = app.add_subcommand("solve", "synthesize the optimal boundary feedback");
    add_common(solve, true);
    solve->add_option("--riccati-tol", config.riccati_tol, "Riccati fixed-point tolerance")
        ->check(CLI::PositiveNumber);
    solve->add_option("--out", config.output_dir, "output directory");

    auto* simulate = app.add_subcommand("simulate", "propagate the optimal closed loop");
    add_common(simulate, true);
    simulate->add_option("--riccati-tol", config.riccati_tol, "Riccati fixed-point tolerance")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", config.output_dir, "output directory");
    simulate->add_option("--horizon", config.horizon, "number of steps or 'auto'");
    simulate->add_option("--ic", config.initial_condition,
                         "initial state: 'constant:<v1,...,vn>' or 'file:<csv>'");
    simulate->add_option("--times", config.reconstruct_times,
                         "reconstruction times (default: multiples of the period)");

    auto* examples = app.add_subcommand("examples", "emit a benchmark system file");
    examples->require_subcommand(1);
    double rho = 1.0, youngs = 1.0, alpha1 = 1.0, alpha2 = 1.0, velocity = 1.0;
    std::string out_file;
    int example_grid = 256;
    auto* strings_cmd = examples->add_subcommand("strings", "three interconnected strings");
    strings_cmd->add_option("--rho", rho, "mass density")->check(CLI::PositiveNumber);
    strings_cmd->add_option("--T", youngs, "Young's modulus")->check(CLI::PositiveNumber);
    strings_cmd->add_option("--grid", example_grid, "grid cell count")
        ->check(CLI::Range(2, 1 << 22));
    strings_cmd->add_option("--out", out_file, "output file (default strings.json)");
    auto* exchanger_cmd =
        examples->add_subcommand("heat-exchanger", "co-current heat exchanger");
    exchanger_cmd->add_option("--alpha1", alpha1, "transfer coefficient, internal tube")
        ->check(CLI::NonNegativeNumber);
    exchanger_cmd->add_option("--alpha2", alpha2, "transfer coefficient, external tube")
        ->check(CLI::NonNegativeNumber);
    exchanger_cmd->add_option("--v", velocity, "flow velocity")->check(CLI::PositiveNumber);
    exchanger_cmd->add_option("--grid", example_grid, "grid cell count")
        ->check(CLI::Range(2, 1 << 22));
    exchanger_cmd->add_option("--out", out_file, "output file (default heat_exchanger.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    if (grid_flag > 0) config.grid_override = grid_flag;

    try {
        if (validate->parsed()) return cmd_validate(config);
        if (solve->parsed()) return cmd_solve(config);
        if (simulate->parsed()) return cmd_simulate(config);
        if (examples->parsed()) {
            if (strings_cmd->parsed()) {
                wavelq::SpatialGrid grid(example_grid);
                auto sys = wavelq::build_strings(wavelq::StringsParams{rho, youngs}, grid);
                const std::string path = out_file.empty() ? "strings.json" : out_file;
                wavelq::save_system_file(sys, path);
                std::cout << "wrote " << path << "\n";
                return kExitOk;
            }
            if (exchanger_cmd->parsed()) {
                wavelq::SpatialGrid grid(example_grid);
                auto sys = wavelq::build_heat_exchanger(
                    wavelq::HeatExchangerParams::constants(alpha1, alpha2, velocity), grid);
                const std::string path = out_file.empty() ? "heat_exchanger.json" : out_file;
                wavelq::save_system_file(sys, path);
                std::cout << "wrote " << path << "\n";
                return kExitOk;
            }
        }
    } catch (const wavelq::SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInstability;
    }
    return kExitInputError;
}
