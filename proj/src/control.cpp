#include "wavelq/control.hpp"

#include <stdexcept>

namespace wavelq {

Matrix feedback_gain(const DiscreteSystem& d, const Matrix& Pi) {
    const Matrix R = Matrix::Identity(d.input_dim(), d.input_dim()) +
                     d.D_d.transpose() * d.D_d + d.B_d.transpose() * Pi * d.B_d;
    const Matrix S = d.D_d.transpose() * d.C_d + d.B_d.transpose() * Pi * d.A_d;
    Eigen::LLT<Matrix> llt(R);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("feedback_gain: inner matrix lost positive definiteness");
    }
    return -llt.solve(S);
}

Matrix closed_loop(const DiscreteSystem& d, const Matrix& F_d) {
    if (F_d.rows() != d.input_dim() || F_d.cols() != d.state_dim()) {
        throw std::invalid_argument("closed_loop: F_d must be p x n");
    }
    return d.A_d + d.B_d * F_d;
}

LqSolution synthesize(const DiscreteSystem& d, const RiccatiOptions& opts) {
    LqSolution sol;
    sol.care = solve_care(d, opts);
    sol.fare = solve_fare(d, opts);
    sol.F_d = feedback_gain(d, sol.care.Pi);
    sol.A_cl = closed_loop(d, sol.F_d);

    // A_d - B_d R^{-1} S written with the sign convention folded into F_d;
    // both routes must agree to rounding.
    const Matrix direct = d.A_d - d.B_d * (-sol.F_d);
    if ((sol.A_cl - direct).norm() > 1e-14 * (1.0 + sol.A_cl.norm())) {
        throw std::logic_error("synthesize: closed-loop forms disagree");
    }

    sol.closed_loop_radius = spectral_radius(sol.A_cl);
    sol.stabilizing = sol.closed_loop_radius < 1.0;
    sol.unique = sol.care.converged && sol.fare.converged && sol.stabilizing;
    return sol;
}

double optimal_cost(const Matrix& Pi, const DiscreteProfile& zd0) {
    if (Pi.rows() != zd0.dim() || Pi.cols() != zd0.dim()) {
        throw std::invalid_argument("optimal_cost: Pi dimension must match the profile");
    }
    const SpatialGrid& grid = zd0.grid;
    const double h = grid.spacing();
    double sum = 0.0;
    for (int i = 0; i < grid.num_nodes(); ++i) {
        const double w = (i == 0 || i == grid.num_cells()) ? 0.5 : 1.0;
        sum += w * h * zd0.values.col(i).dot(Pi * zd0.values.col(i));
    }
    return sum;
}

}  // namespace wavelq
