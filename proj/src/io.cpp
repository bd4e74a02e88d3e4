#include "wavelq/io.hpp"

#include <fstream>
#include <iomanip>

namespace wavelq {

using nlohmann::json;

namespace {

const json& require_field(const json& doc, const std::string& key) {
    if (!doc.contains(key)) {
        throw SchemaError("missing field '" + key + "'");
    }
    return doc.at(key);
}

int require_int(const json& doc, const std::string& key) {
    const json& value = require_field(doc, key);
    if (!value.is_number_integer()) {
        throw SchemaError("field '" + key + "' must be an integer");
    }
    return value.get<int>();
}

Matrix matrix_from_json(const json& value, int rows, int cols, const std::string& name) {
    if (!value.is_array() || static_cast<int>(value.size()) != rows) {
        throw SchemaError("field '" + name + "' must be a " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " row-major array");
    }
    Matrix out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = value.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            throw SchemaError("field '" + name + "' row " + std::to_string(i) + " must hold " +
                              std::to_string(cols) + " numbers");
        }
        for (int j = 0; j < cols; ++j) {
            const json& cell = row.at(static_cast<std::size_t>(j));
            if (!cell.is_number()) {
                throw SchemaError("field '" + name + "' contains a non-numeric entry");
            }
            out(i, j) = cell.get<double>();
        }
    }
    return out;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json spectrum_to_json(const ComplexVector& values) {
    json out = json::array();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out.push_back(json::array({values(i).real(), values(i).imag()}));
    }
    return out;
}

ScalarField scalar_field_from_json(const json& value, const SpatialGrid& grid,
                                   const std::string& name) {
    if (value.is_object() && value.contains("constant")) {
        return ScalarField::constant(grid, value.at("constant").get<double>());
    }
    if (value.is_object() && value.contains("samples")) {
        const json& samples = value.at("samples");
        if (!samples.is_array() || static_cast<int>(samples.size()) != grid.num_nodes()) {
            throw SchemaError("field '" + name + ".samples' must hold " +
                              std::to_string(grid.num_nodes()) + " numbers");
        }
        std::vector<double> values_vec;
        values_vec.reserve(samples.size());
        for (const auto& s : samples) values_vec.push_back(s.get<double>());
        return ScalarField(grid, std::move(values_vec));
    }
    throw SchemaError("field '" + name + "' must carry 'constant' or 'samples'");
}

MatrixField matrix_field_from_json(const json& value, const SpatialGrid& grid, int n,
                                   const std::string& name) {
    if (value.is_object() && value.contains("constant_matrix")) {
        return MatrixField::constant(
            grid, matrix_from_json(value.at("constant_matrix"), n, n, name + ".constant_matrix"));
    }
    if (value.is_object() && value.contains("samples")) {
        const json& samples = value.at("samples");
        if (!samples.is_array() || static_cast<int>(samples.size()) != grid.num_nodes()) {
            throw SchemaError("field '" + name + ".samples' must hold " +
                              std::to_string(grid.num_nodes()) + " matrices");
        }
        std::vector<Matrix> values_vec;
        values_vec.reserve(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k) {
            values_vec.push_back(matrix_from_json(samples.at(k), n, n,
                                                  name + ".samples[" + std::to_string(k) + "]"));
        }
        return MatrixField(grid, std::move(values_vec));
    }
    throw SchemaError("field '" + name + "' must carry 'constant_matrix' or 'samples'");
}

bool all_equal(const std::vector<double>& values) {
    for (double v : values) {
        if (v != values.front()) return false;
    }
    return true;
}

}  // namespace

HyperbolicSystem system_from_json(const json& doc, std::optional<int> grid_override) {
    const int n = require_int(doc, "n");
    const int p = require_int(doc, "p");
    const int m = require_int(doc, "m");
    const int cells = grid_override.value_or(require_int(doc, "grid_cells"));
    if (cells < 2) {
        throw SchemaError("field 'grid_cells' must be >= 2");
    }
    SpatialGrid grid(cells);
    try {
        auto lambda0 = scalar_field_from_json(require_field(doc, "lambda0"), grid, "lambda0");
        auto coupling = matrix_field_from_json(require_field(doc, "coupling"), grid, n,
                                               "coupling");
        return HyperbolicSystem(n, p, m, std::move(lambda0), std::move(coupling),
                                matrix_from_json(require_field(doc, "K"), n, n, "K"),
                                matrix_from_json(require_field(doc, "L"), n, n, "L"),
                                matrix_from_json(require_field(doc, "Ky"), m, n, "Ky"),
                                matrix_from_json(require_field(doc, "Ly"), m, n, "Ly"));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("invalid system description: ") + e.what());
    }
}

json system_to_json(const HyperbolicSystem& sys) {
    json doc;
    doc["n"] = sys.state_dim();
    doc["p"] = sys.input_dim();
    doc["m"] = sys.output_dim();
    doc["grid_cells"] = sys.grid().num_cells();
    if (all_equal(sys.lambda0().values())) {
        doc["lambda0"] = json{{"constant", sys.lambda0().values().front()}};
    } else {
        doc["lambda0"] = json{{"samples", sys.lambda0().values()}};
    }
    const auto& coupling = sys.coupling().values();
    const bool coupling_constant =
        std::all_of(coupling.begin(), coupling.end(),
                    [&](const Matrix& m) { return m == coupling.front(); });
    if (coupling_constant) {
        doc["coupling"] = json{{"constant_matrix", matrix_to_json(coupling.front())}};
    } else {
        json samples = json::array();
        for (const Matrix& m : coupling) samples.push_back(matrix_to_json(m));
        doc["coupling"] = json{{"samples", std::move(samples)}};
    }
    doc["K"] = matrix_to_json(sys.K());
    doc["L"] = matrix_to_json(sys.L());
    doc["Ky"] = matrix_to_json(sys.Ky());
    doc["Ly"] = matrix_to_json(sys.Ly());
    return doc;
}

HyperbolicSystem load_system_file(const std::string& path, std::optional<int> grid_override) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open system file '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw SchemaError("malformed JSON in '" + path + "': " + e.what());
    }
    return system_from_json(doc, grid_override);
}

void save_system_file(const HyperbolicSystem& sys, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write system file '" + path + "'");
    }
    out << system_to_json(sys).dump(2) << "\n";
}

json discrete_to_json(const DiscreteSystem& d) {
    return json{{"A_d", matrix_to_json(d.A_d)},
                {"B_d", matrix_to_json(d.B_d)},
                {"C_d", matrix_to_json(d.C_d)},
                {"D_d", matrix_to_json(d.D_d)},
                {"period", d.period}};
}

json riccati_to_json(const RiccatiSolution& sol) {
    return json{{"Pi", matrix_to_json(sol.Pi)},
                {"residual", sol.residual},
                {"iterations", sol.iterations},
                {"converged", sol.converged}};
}

json lyapunov_to_json(const LyapunovSolution& sol) {
    json out{{"residual", sol.residual},
             {"solvable", sol.solvable},
             {"nonnegative", sol.nonnegative},
             {"exists", sol.exists}};
    out["L"] = sol.solvable ? matrix_to_json(sol.L) : json(nullptr);
    return out;
}

json lq_solution_to_json(const LqSolution& lq, const DiscreteSystem& d) {
    json doc;
    doc["care"] = riccati_to_json(lq.care);
    doc["fare"] = riccati_to_json(lq.fare);
    doc["F_d"] = matrix_to_json(lq.F_d);
    doc["A_cl"] = matrix_to_json(lq.A_cl);
    doc["closed_loop_radius"] = lq.closed_loop_radius;
    doc["open_loop_radius"] = spectral_radius(d.A_d);
    doc["stabilizing"] = lq.stabilizing;
    doc["unique"] = lq.unique;
    doc["spectra"] = json{{"A_d", spectrum_to_json(eigenvalues(d.A_d))},
                          {"A_cl", spectrum_to_json(eigenvalues(lq.A_cl))}};
    doc["output_lyapunov"] = lyapunov_to_json(solve_output_lyapunov(d));
    doc["input_lyapunov"] = lyapunov_to_json(solve_input_lyapunov(d));
    return doc;
}

void write_transform_csv(const TransformData& transform, std::ostream& os) {
    os << std::setprecision(17);
    const int n = static_cast<int>(transform.P.front().rows());
    os << "zeta";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) os << ",P_" << i + 1 << j + 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) os << ",Q_" << i + 1 << j + 1;
    os << ",defect\n";
    const Matrix identity = Matrix::Identity(n, n);
    for (int k = 0; k < transform.grid.num_nodes(); ++k) {
        const std::size_t idx = static_cast<std::size_t>(k);
        os << transform.grid.node(k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) os << "," << transform.P[idx](i, j);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) os << "," << transform.Q[idx](i, j);
        os << "," << (transform.Q[idx] * transform.P[idx] - identity).norm() << "\n";
    }
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    os << std::setprecision(17);
    const int n = traj.system.state_dim();
    const int p = traj.system.input_dim();
    const int m = traj.system.output_dim();
    os << "j,zeta";
    for (int i = 1; i <= n; ++i) os << ",z_" << i;
    for (int i = 1; i <= p; ++i) os << ",u_" << i;
    for (int i = 1; i <= m; ++i) os << ",y_" << i;
    os << "\n";
    const SpatialGrid& grid = traj.states.front().grid;
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        const bool has_io = j < traj.inputs.size();
        for (int k = 0; k < grid.num_nodes(); ++k) {
            os << j << "," << grid.node(k);
            for (int i = 0; i < n; ++i) os << "," << traj.states[j].values(i, k);
            for (int i = 0; i < p; ++i) {
                os << ",";
                if (has_io) os << traj.inputs[j].values(i, k);
            }
            for (int i = 0; i < m; ++i) {
                os << ",";
                if (has_io) os << traj.outputs[j].values(i, k);
            }
            os << "\n";
        }
    }
}

void write_reconstruction_csv(const std::vector<std::pair<double, StateProfile>>& snapshots,
                              std::ostream& os) {
    os << std::setprecision(17);
    if (snapshots.empty()) {
        os << "t,zeta\n";
        return;
    }
    const int n = snapshots.front().second.dim();
    os << "t,zeta";
    for (int i = 1; i <= n; ++i) os << ",z_" << i;
    os << "\n";
    for (const auto& [t, profile] : snapshots) {
        for (int k = 0; k < profile.grid.num_nodes(); ++k) {
            os << t << "," << profile.grid.node(k);
            for (int i = 0; i < n; ++i) os << "," << profile.values(i, k);
            os << "\n";
        }
    }
}

}  // namespace wavelq
