#pragma once

#include <vector>

#include "wavelq/model.hpp"

namespace wavelq {

/**
 * Travel-time tables for the transport dynamics:
 *   p(zeta) = int_0^zeta 1/lambda0,   k(zeta) = 1 - p(zeta)/p(1),
 * sampled per grid node. p is strictly increasing with p(0) = 0; k falls from
 * k(0) = 1 to k(1) = 0; p(1) is the transport period that turns the PDE into
 * a discrete-time recursion.
 */
struct ClockTables {
    SpatialGrid grid;
    std::vector<double> p_values;
    std::vector<double> k_values;
    double period = 0.0;
};

/// Trapezoidal quadrature of 1/lambda0 over the grid.
ClockTables build_clock(const HyperbolicSystem& sys, const SpatialGrid& grid);

/// Solves k(zeta) = xi by bisection on the monotone table (linear
/// interpolation inside cells) to |k(zeta) - xi| <= tol.
double invert_k(const ClockTables& clock, double xi, double tol = 1e-12, int max_iter = 200);

/// The matrix quadruple of the equivalent discrete-time system,
///   A_d = -K^{-1} L P(1),            B_d = -K^{-1} [0; I],
///   C_d = (Ky K^{-1} L - Ly) P(1),   D_d = Ky K^{-1} [0; I],
/// together with the period p(1). One discrete step advances the whole
/// spatial profile by one transport period.
struct DiscreteSystem {
    Matrix A_d;
    Matrix B_d;
    Matrix C_d;
    Matrix D_d;
    double period = 0.0;

    int state_dim() const { return static_cast<int>(A_d.rows()); }
    int input_dim() const { return static_cast<int>(B_d.cols()); }
    int output_dim() const { return static_cast<int>(C_d.rows()); }
};

/// Builds the quadruple from a coupling-free system. P1 folds the change of
/// variables into the boundary matrices: pass P(1) when sys carries the
/// original L/Ly, or the identity when they are already multiplied through.
/// A singular K is rejected (the system is not well-posed).
DiscreteSystem build_discrete(const HyperbolicSystem& sys, const Matrix& P1,
                              const ClockTables& clock);

/// Spatial profile of a discrete-time signal at step j: state (n), input (p)
/// or output (m) values per node of the unit grid.
struct DiscreteProfile {
    SpatialGrid grid;
    Matrix values;
    int index = 0;

    DiscreteProfile(SpatialGrid g, Matrix v, int idx = 0);

    int dim() const { return static_cast<int>(values.rows()); }

    static DiscreteProfile constant(const SpatialGrid& grid, const Vector& value, int idx = 0);
};

Vector sample_at(const DiscreteProfile& profile, double xi);

/// Initial profile of the discrete recursion: z_d(0)(k(zeta)) = lambda0 z0,
/// realized on the uniform xi grid through invert_k.
DiscreteProfile lift_initial_condition(const StateProfile& z0, const HyperbolicSystem& sys,
                                       const ClockTables& clock);

/// Continuous time t split as t = (j + zeta) p(1).
struct SignalIndex {
    long step;
    double offset;  // in [0, 1)
};

SignalIndex index_signal(double t, const ClockTables& clock);

}  // namespace wavelq
