#pragma once

#include "wavelq/discretize.hpp"
#include "wavelq/model.hpp"

namespace wavelq {

struct RiccatiOptions {
    double tol = 1e-13;      // relative fixed-point tolerance
    long max_iters = 100000;
};

/// Nonnegative self-adjoint solution of a discrete-time Riccati equation,
/// with the Frobenius defect of the equation and the iteration diagnostics.
struct RiccatiSolution {
    Matrix Pi;
    double residual = 0.0;
    long iterations = 0;
    bool converged = false;
};

/**
 * Smallest nonnegative self-adjoint solution of
 *   A* Pi A - Pi + C*C = (C*D + A* Pi B)(I + D*D + B* Pi B)^{-1}(D*C + B* Pi A)
 * by value iteration from Pi_0 = 0 with per-step symmetrization. The iterates
 * increase monotonically; divergence or hitting the iteration cap means the
 * system is not optimizable and is reported through converged = false.
 */
RiccatiSolution solve_care(const DiscreteSystem& d, const RiccatiOptions& opts = {});

/// Filter Riccati equation: the same machinery applied to the dual data
/// (A*, C*, B*, D*). Bit-identical to solve_care(dual_system(d)).
RiccatiSolution solve_fare(const DiscreteSystem& d, const RiccatiOptions& opts = {});

DiscreteSystem dual_system(const DiscreteSystem& d);

/// Frobenius norm of the Riccati defect for a candidate solution.
double care_residual(const DiscreteSystem& d, const Matrix& Pi);
double fare_residual(const DiscreteSystem& d, const Matrix& Pi);

/**
 * Solution of a discrete-time Lyapunov (Stein) equation via dense Kronecker
 * vectorization. The n^2 x n^2 system is singular exactly when the spectrum
 * of A x A contains 1; that case is inconclusive (solvable = false).
 * exists = solvable and L nonnegative, which is the stability verdict.
 */
struct LyapunovSolution {
    Matrix L;
    double residual = 0.0;
    bool solvable = false;
    bool nonnegative = false;
    bool exists = false;
};

/// Observation side: A* L A - L + C*C = 0 (output stability verdict).
LyapunovSolution solve_output_lyapunov(const DiscreteSystem& d);

/// Control side: A L A* - L + B B* = 0 (input stability verdict).
LyapunovSolution solve_input_lyapunov(const DiscreteSystem& d);

/// All eigenvalues of a square real matrix (dense solver).
ComplexVector eigenvalues(const Matrix& a);

/// Maximum eigenvalue modulus.
double spectral_radius(const Matrix& a);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace wavelq
