#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "wavelq/model.hpp"
#include "wavelq/transform.hpp"

using namespace wavelq;

namespace {

HyperbolicSystem coupling_system(const SpatialGrid& grid, const MatrixField& M,
                                 double lambda = 1.0) {
    const int n = M.dim();
    return HyperbolicSystem(n, 1, 1, ScalarField::constant(grid, lambda), M,
                            -Matrix::Identity(n, n), Matrix::Zero(n, n), Matrix::Zero(1, n),
                            Matrix::Zero(1, n));
}

// Exchanger-style coupling with equal rates: M = [[-1, 1], [1, -1]].
// M^2 = -2M, so exp(M t) = I + M (1 - e^{-2t}) / 2.
Matrix exchanger_coupling() {
    Matrix M(2, 2);
    M << -1.0, 1.0, 1.0, -1.0;
    return M;
}

Matrix exchanger_exp(double t) {
    return Matrix::Identity(2, 2) + exchanger_coupling() * (1.0 - std::exp(-2.0 * t)) / 2.0;
}

}  // namespace

TEST_CASE("zero coupling gives identity P and Q at every node") {
    SpatialGrid grid(16);
    auto sys = coupling_system(grid, MatrixField::zero(grid, 3));
    auto P = solve_P(sys, grid);
    auto Q = solve_Q(sys, grid);
    const Matrix identity = Matrix::Identity(3, 3);
    for (int k = 0; k < grid.num_nodes(); ++k) {
        CHECK(P[static_cast<std::size_t>(k)] == identity);
        CHECK(Q[static_cast<std::size_t>(k)] == identity);
    }
    auto data = build_transform(sys, grid);
    CHECK(data.inverse_residual == 0.0);
    CHECK(data.within_budget);
}

TEST_CASE("constant coupling matches the matrix exponential") {
    SpatialGrid grid(256);
    auto sys = coupling_system(grid, MatrixField::constant(grid, exchanger_coupling()));
    auto P = solve_P(sys, grid);
    auto Q = solve_Q(sys, grid);
    for (int k : {32, 128, 256}) {
        const double zeta = grid.node(k);
        CHECK((P[static_cast<std::size_t>(k)] - exchanger_exp(zeta)).norm() < 1e-10);
        // Q grows like e^{2 zeta}, so its defect carries that factor
        CHECK((Q[static_cast<std::size_t>(k)] - exchanger_exp(-zeta)).norm() < 1e-9);
    }

    SUBCASE("non-unit speed rescales the exponent") {
        auto sys2 = coupling_system(grid, MatrixField::constant(grid, exchanger_coupling()), 2.0);
        auto P2 = solve_P(sys2, grid);
        CHECK((P2.back() - exchanger_exp(0.5)).norm() < 1e-10);
    }
}

TEST_CASE("Q matches nodewise inversion of P") {
    SpatialGrid grid(256);
    // spatially varying coupling to exercise the interpolated coefficients
    auto M = MatrixField::from_function(grid, [](double z) {
        Matrix m(2, 2);
        m << -(1.0 + z), 1.0 + z, 2.0 - z, -(2.0 - z);
        return m;
    });
    auto sys = coupling_system(grid, M, 1.5);
    auto data = build_transform(sys, grid);
    for (int k = 0; k < grid.num_nodes(); ++k) {
        const std::size_t idx = static_cast<std::size_t>(k);
        const Matrix inverse = data.P[idx].inverse();
        CHECK((data.Q[idx] - inverse).norm() < 1e-8);
        CHECK((data.Q[idx] * data.P[idx] - Matrix::Identity(2, 2)).norm() < 1e-8);
    }
    CHECK(data.inverse_residual < 1e-8);
    CHECK(data.P.front() == Matrix::Identity(2, 2));
    CHECK(data.Q.front() == Matrix::Identity(2, 2));
}

TEST_CASE("RK4 defect drops by about 2^4 when the step is halved") {
    auto sys_on = [&](const SpatialGrid& g) {
        return coupling_system(g, MatrixField::constant(g, exchanger_coupling()));
    };
    double errors[3];
    int cells = 8;
    for (int level = 0; level < 3; ++level) {
        SpatialGrid grid(cells);
        auto P = solve_P(sys_on(grid), grid);
        errors[level] = (P.back() - exchanger_exp(1.0)).norm();
        cells *= 2;
    }
    const double order01 = std::log2(errors[0] / errors[1]);
    const double order12 = std::log2(errors[1] / errors[2]);
    CHECK(order01 == doctest::Approx(4.0).epsilon(0.08));
    CHECK(order12 == doctest::Approx(4.0).epsilon(0.08));
}

TEST_CASE("to_transport_form") {
    SUBCASE("coupling-free systems are returned unchanged (idempotence)") {
        SpatialGrid grid(8);
        Matrix L(2, 2);
        L << 0.5, -0.25, 1.0, 0.75;
        HyperbolicSystem sys(2, 1, 1, ScalarField::constant(grid, 1.0),
                             MatrixField::zero(grid, 2), -Matrix::Identity(2, 2), L,
                             Matrix::Zero(1, 2), Matrix::Ones(1, 2));
        auto data = build_transform(sys, grid);
        auto transport = to_transport_form(sys, data);
        CHECK(transport.L() == sys.L());
        CHECK(transport.Ly() == sys.Ly());
        CHECK(transport.K() == sys.K());
        auto again = to_transport_form(transport, build_transform(transport, grid));
        CHECK(again.L() == transport.L());
    }

    SUBCASE("L = 0 stays zero under any coupling") {
        SpatialGrid grid(64);
        auto sys = coupling_system(grid, MatrixField::constant(grid, exchanger_coupling()));
        auto transport = to_transport_form(sys, build_transform(sys, grid));
        CHECK(transport.L().isZero(0.0));
        CHECK(transport.coupling().is_zero());
    }

    SUBCASE("scalar coupling mu with boundary weight l gives l * e^mu") {
        const double mu = 0.7;
        const double l = -1.3;
        SpatialGrid grid(256);
        HyperbolicSystem sys(1, 1, 1, ScalarField::constant(grid, 1.0),
                             MatrixField::constant(grid, Matrix::Constant(1, 1, mu)),
                             Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, l),
                             Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0));
        auto transport = to_transport_form(sys, build_transform(sys, grid));
        CHECK(transport.L()(0, 0) == doctest::Approx(l * std::exp(mu)).epsilon(1e-10));
        CHECK(transport.Ly()(0, 0) == doctest::Approx(std::exp(mu)).epsilon(1e-10));
    }
}

TEST_CASE("state round-trip P(Q z) stays within the product defect") {
    SpatialGrid grid(128);
    auto sys = coupling_system(grid, MatrixField::constant(grid, exchanger_coupling()));
    auto data = build_transform(sys, grid);
    auto profile = StateProfile::from_function(grid, [](double z) {
        Vector v(2);
        v << std::sin(3.0 * z), std::cos(z);
        return v;
    });
    for (int k = 0; k < grid.num_nodes(); ++k) {
        const std::size_t idx = static_cast<std::size_t>(k);
        const Vector original = profile.values.col(k);
        const Vector round_trip = data.P[idx] * (data.Q[idx] * original);
        CHECK((round_trip - original).norm() <=
              1.01 * data.inverse_residual * original.norm() + 1e-15);
    }
}

TEST_CASE("budget flag reflects the configured tolerance") {
    SpatialGrid grid(4);  // deliberately coarse
    auto sys = coupling_system(grid, MatrixField::constant(grid, exchanger_coupling()));
    auto loose = build_transform(sys, grid, 1.0);
    CHECK(loose.within_budget);
    CHECK(loose.inverse_residual > 1e-16);
    auto tight = build_transform(sys, grid, 1e-16);
    CHECK_FALSE(tight.within_budget);
    CHECK(loose.inverse_residual == tight.inverse_residual);
}
