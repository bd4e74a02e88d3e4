#pragma once

#include "wavelq/discretize.hpp"
#include "wavelq/riccati.hpp"

namespace wavelq {

/**
 * LQ synthesis result. The feedback is stored with the convention u = F_d z,
 * so the closed-loop matrix is A_cl = A_d + B_d F_d; "unique" is the
 * sufficient-condition verdict (both Riccati equations solvable and the loop
 * spectral radius below one), never claimed on a partial solve.
 */
struct LqSolution {
    RiccatiSolution care;
    RiccatiSolution fare;
    Matrix F_d;
    Matrix A_cl;
    double closed_loop_radius = 0.0;
    bool stabilizing = false;
    bool unique = false;
};

/// F_d = -(I + D*D + B* Pi B)^{-1} (D*C + B* Pi A); the inner matrix is >= I,
/// so Cholesky applies unconditionally.
Matrix feedback_gain(const DiscreteSystem& d, const Matrix& Pi);

/// A_d + B_d F_d.
Matrix closed_loop(const DiscreteSystem& d, const Matrix& F_d);

/// Full pipeline: CARE, FARE, gain, loop matrix, spectral radius, verdicts.
/// A radius below one certifies exponential stability of the continuous-time
/// closed loop.
LqSolution synthesize(const DiscreteSystem& d, const RiccatiOptions& opts = {});

/// <z, Pi z> over the profile, integrated by trapezoid on the profile grid.
/// This is the optimal cost in discrete time; the continuous-time cost is the
/// period times this value.
double optimal_cost(const Matrix& Pi, const DiscreteProfile& zd0);

}  // namespace wavelq
