#pragma once

#include <json.hpp>

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wavelq/control.hpp"
#include "wavelq/discretize.hpp"
#include "wavelq/model.hpp"
#include "wavelq/riccati.hpp"
#include "wavelq/sim.hpp"
#include "wavelq/transform.hpp"

namespace wavelq {

/// Malformed or incomplete system descriptions; the message names the
/// offending field.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * System description schema (all numbers decimal-text doubles):
 *   {
 *     "n": 2, "p": 1, "m": 1, "grid_cells": 256,
 *     "lambda0":  {"constant": 1.0} or {"samples": [...]},
 *     "coupling": {"constant_matrix": [[...]]} or {"samples": [[[...]], ...]},
 *     "K": [[...]], "L": [[...]], "Ky": [[...]], "Ly": [[...]]
 *   }
 * Matrices are row-major nested arrays; sample arrays carry one entry per
 * grid node. grid_override replaces grid_cells, which requires any explicit
 * sample arrays to match the new node count.
 */
HyperbolicSystem system_from_json(const nlohmann::json& doc,
                                  std::optional<int> grid_override = std::nullopt);
nlohmann::json system_to_json(const HyperbolicSystem& sys);

HyperbolicSystem load_system_file(const std::string& path,
                                  std::optional<int> grid_override = std::nullopt);
void save_system_file(const HyperbolicSystem& sys, const std::string& path);

nlohmann::json discrete_to_json(const DiscreteSystem& d);
nlohmann::json riccati_to_json(const RiccatiSolution& sol);
nlohmann::json lyapunov_to_json(const LyapunovSolution& sol);

/// Full synthesis record: matrices, spectra, radii, verdicts and solver
/// diagnostics, plus the Lyapunov stability verdicts of the open loop.
nlohmann::json lq_solution_to_json(const LqSolution& lq, const DiscreteSystem& d);

/// One row per node: zeta, P entries (row-major), Q entries, product defect.
void write_transform_csv(const TransformData& transform, std::ostream& os);

/// Columns j, zeta, z_1..z_n, u_1..u_p, y_1..y_m; the final state row leaves
/// the input/output cells empty.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

/// Columns t, zeta, z_1..z_n for a list of reconstructed snapshots.
void write_reconstruction_csv(const std::vector<std::pair<double, StateProfile>>& snapshots,
                              std::ostream& os);

}  // namespace wavelq
