#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wavelq/control.hpp"
#include "wavelq/examples.hpp"
#include "wavelq/io.hpp"
#include "wavelq/riccati.hpp"
#include "wavelq/sim.hpp"
#include "wavelq/transform.hpp"

using namespace wavelq;
using nlohmann::json;

TEST_CASE("system JSON round trip with constant fields") {
    SpatialGrid grid(64);
    auto sys = build_strings(StringsParams{1.0, 1.0}, grid);
    json doc = system_to_json(sys);
    CHECK(doc["lambda0"].contains("constant"));
    CHECK(doc["coupling"].contains("constant_matrix"));
    CHECK(doc["grid_cells"] == 64);

    auto loaded = system_from_json(doc);
    CHECK(loaded.state_dim() == 6);
    CHECK(loaded.input_dim() == 3);
    CHECK(loaded.output_dim() == 2);
    CHECK(loaded.K() == sys.K());
    CHECK(loaded.L() == sys.L());
    CHECK(loaded.Ky() == sys.Ky());
    CHECK(loaded.Ly() == sys.Ly());
    CHECK(loaded.lambda0().values() == sys.lambda0().values());
}

TEST_CASE("system JSON round trip with sampled fields") {
    SpatialGrid grid(16);
    auto params = HeatExchangerParams{[](double z) { return 1.0 + z; },
                                      [](double) { return 2.0; },
                                      [](double z) { return 1.0 + 0.5 * z; }};
    auto sys = build_heat_exchanger(params, grid);
    json doc = system_to_json(sys);
    CHECK(doc["lambda0"].contains("samples"));
    CHECK(doc["coupling"].contains("samples"));

    auto loaded = system_from_json(doc);
    CHECK(loaded.lambda0().values() == sys.lambda0().values());
    for (int k = 0; k < grid.num_nodes(); ++k) {
        CHECK(loaded.coupling().values()[static_cast<std::size_t>(k)] ==
              sys.coupling().values()[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("schema errors name the offending field") {
    SpatialGrid grid(8);
    json doc = system_to_json(build_strings(StringsParams{1.0, 1.0}, grid));

    SUBCASE("missing matrix") {
        doc.erase("K");
        CHECK_THROWS_WITH_AS(static_cast<void>(system_from_json(doc)), "missing field 'K'",
                             SchemaError);
    }

    SUBCASE("missing dimension") {
        doc.erase("n");
        CHECK_THROWS_WITH_AS(static_cast<void>(system_from_json(doc)), "missing field 'n'",
                             SchemaError);
    }

    SUBCASE("wrong matrix shape") {
        doc["Ky"] = json::array({json::array({1.0, 2.0})});  // 1x2, needs 2x6
        CHECK_THROWS_AS(static_cast<void>(system_from_json(doc)), SchemaError);
    }

    SUBCASE("non-numeric entry") {
        doc["L"][0][0] = "zero";
        CHECK_THROWS_AS(static_cast<void>(system_from_json(doc)), SchemaError);
    }

    SUBCASE("bad grid") {
        doc["grid_cells"] = 1;
        CHECK_THROWS_AS(static_cast<void>(system_from_json(doc)), SchemaError);
    }
}

TEST_CASE("grid override") {
    SpatialGrid grid(16);
    json doc = system_to_json(build_strings(StringsParams{1.0, 1.0}, grid));

    SUBCASE("constant fields resample onto the override grid") {
        auto loaded = system_from_json(doc, 32);
        CHECK(loaded.grid().num_cells() == 32);
    }

    SUBCASE("explicit samples must match the override grid") {
        std::vector<double> samples(17, 1.0);
        doc["lambda0"] = json{{"samples", samples}};
        CHECK_NOTHROW(static_cast<void>(system_from_json(doc)));
        CHECK_THROWS_AS(static_cast<void>(system_from_json(doc, 32)), SchemaError);
    }
}

TEST_CASE("file loading errors") {
    CHECK_THROWS_AS(static_cast<void>(load_system_file("/nonexistent/system.json")),
                    SchemaError);
}

TEST_CASE("discrete system export schema") {
    DiscreteSystem d{Matrix::Identity(2, 2), Matrix::Ones(2, 1), Matrix::Zero(1, 2),
                     Matrix::Zero(1, 1), 0.75};
    json doc = discrete_to_json(d);
    CHECK(doc["A_d"] == json::array({json::array({1.0, 0.0}), json::array({0.0, 1.0})}));
    CHECK(doc["B_d"] == json::array({json::array({1.0}), json::array({1.0})}));
    CHECK(doc["period"] == 0.75);
    CHECK(doc.contains("C_d"));
    CHECK(doc.contains("D_d"));
}

TEST_CASE("riccati and lq solution export") {
    Matrix A(2, 2), B(2, 1), C(1, 2), D(1, 1);
    A << 0.4, 1.2, 0.0, -0.5;
    B << 0.0, 1.0;
    C << 1.0, 0.3;
    D << -0.2;
    DiscreteSystem d{A, B, C, D, 1.0};
    auto lq = synthesize(d);
    json care = riccati_to_json(lq.care);
    CHECK(care.contains("Pi"));
    CHECK(care.contains("residual"));
    CHECK(care.contains("iterations"));
    CHECK(care["converged"] == true);

    json doc = lq_solution_to_json(lq, d);
    CHECK(doc.contains("F_d"));
    CHECK(doc.contains("A_cl"));
    CHECK(doc["stabilizing"] == true);
    CHECK(doc["unique"] == true);
    CHECK(doc["spectra"]["A_d"].size() == 2);
    CHECK(doc["output_lyapunov"].contains("exists"));
    CHECK(doc["closed_loop_radius"].get<double>() == doctest::Approx(lq.closed_loop_radius));
}

TEST_CASE("transform CSV layout") {
    SpatialGrid grid(4);
    Matrix M(2, 2);
    M << -1.0, 1.0, 1.0, -1.0;
    HyperbolicSystem sys(2, 1, 1, ScalarField::constant(grid, 1.0),
                         MatrixField::constant(grid, M), -Matrix::Identity(2, 2),
                         Matrix::Zero(2, 2), Matrix::Zero(1, 2), Matrix::Zero(1, 2));
    auto transform = build_transform(sys, grid);
    std::ostringstream os;
    write_transform_csv(transform, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "zeta,P_11,P_12,P_21,P_22,Q_11,Q_12,Q_21,Q_22,defect");
    int rows = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == grid.num_nodes());
}

TEST_CASE("trajectory CSV layout") {
    SpatialGrid grid(4);
    DiscreteSystem d{Matrix::Identity(1, 1) * 0.5, Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                     Matrix::Zero(1, 1), 1.0};
    auto zd0 = DiscreteProfile::constant(grid, Vector::Ones(1));
    auto traj = simulate_closed_loop(d, Matrix::Zero(1, 1), zd0, 2);
    std::ostringstream os;
    write_trajectory_csv(traj, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "j,zeta,z_1,u_1,y_1");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    CHECK(static_cast<int>(lines.size()) == 3 * grid.num_nodes());
    // the final state rows leave input/output cells empty
    CHECK(lines.back().ends_with(",,"));
    CHECK(lines.back().rfind("2,", 0) == 0);
}

TEST_CASE("reconstruction CSV layout") {
    SpatialGrid grid(2);
    auto profile = StateProfile::constant(grid, (Vector(2) << 1.0, 2.0).finished());
    std::ostringstream os;
    write_reconstruction_csv({{0.0, profile}, {0.5, profile}}, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,zeta,z_1,z_2");
    int rows = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 2 * grid.num_nodes());
}
