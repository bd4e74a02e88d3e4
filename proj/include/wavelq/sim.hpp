#pragma once

#include <vector>

#include "wavelq/control.hpp"
#include "wavelq/discretize.hpp"
#include "wavelq/transform.hpp"

namespace wavelq {

/**
 * Discrete-time run of the system: states z_d(0..J), inputs and outputs for
 * steps 0..J-1. Each step advances every spatial node by one transport
 * period through a plain matrix product; the propagation is exact in time,
 * there is no CFL restriction.
 */
struct Trajectory {
    DiscreteSystem system;
    std::vector<DiscreteProfile> states;
    std::vector<DiscreteProfile> inputs;
    std::vector<DiscreteProfile> outputs;
    double period = 0.0;

    long steps() const { return static_cast<long>(inputs.size()); }
};

struct StepResult {
    DiscreteProfile next_state;
    DiscreteProfile output;
};

/// z_next = A_d z + B_d u and y = C_d z + D_d u, applied per node.
StepResult step(const DiscreteSystem& d, const DiscreteProfile& z, const DiscreteProfile& u);

/// Iterates with u_d(j) = F_d z_d(j). Aborts when a profile norm passes 1e30.
Trajectory simulate_closed_loop(const DiscreteSystem& d, const Matrix& F_d,
                                const DiscreteProfile& zd0, long num_steps);

/// Same recursion with externally supplied inputs (u = 0 profiles give the
/// free response).
Trajectory simulate_open_loop(const DiscreteSystem& d, const DiscreteProfile& zd0,
                              const std::vector<DiscreteProfile>& inputs);

/// Squared L2(0,1) norm of a profile by trapezoidal quadrature.
double profile_l2_norm_sq(const DiscreteProfile& profile);

/// Sum over steps of |y_d(j)|^2 + |u_d(j)|^2 in L2(0,1). Multiply by the
/// period for the continuous-time cost.
double cost_discrete(const Trajectory& traj);

/// Continuous-time state at time t: per node, z(zeta, t) is z_d(j)(xi)
/// divided by lambda0(zeta), where k(zeta) + t/period splits into j + xi.
StateProfile reconstruct_profile(const Trajectory& traj, double t, const ClockTables& clock,
                                 const HyperbolicSystem& sys);

/// Back to the original variables: ztilde = P z per node.
StateProfile to_original_variables(const StateProfile& profile, const TransformData& transform);

/// Forward state map z = Q ztilde per node (inverse of the above).
StateProfile to_transport_variables(const StateProfile& profile, const TransformData& transform);

/// The boundary input lambda0(1) F_d z(1, t) realized from the stored run.
Vector boundary_control_signal(const Trajectory& traj, const Matrix& F_d,
                               const ClockTables& clock, const HyperbolicSystem& sys, double t);

/// Steps until the squared decay r^{2J} falls under tail_tol, capped.
long default_horizon(double closed_loop_radius, double tail_tol = 1e-10, long cap = 100000);

}  // namespace wavelq
