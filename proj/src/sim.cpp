#include "wavelq/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace wavelq {

namespace {

constexpr double kInstabilityGuard = 1e30;

void check_grids(const DiscreteProfile& z, const DiscreteProfile& u) {
    if (!(z.grid == u.grid)) {
        throw std::invalid_argument("sim: state and input profiles live on different grids");
    }
}

void guard_norm(const Matrix& values) {
    if (!values.allFinite() || values.norm() > kInstabilityGuard) {
        throw std::runtime_error("sim: profile norm exceeded 1e30, the loop is divergent");
    }
}

}  // namespace

StepResult step(const DiscreteSystem& d, const DiscreteProfile& z, const DiscreteProfile& u) {
    check_grids(z, u);
    if (z.dim() != d.state_dim() || u.dim() != d.input_dim()) {
        throw std::invalid_argument("sim: profile dimensions do not match the system");
    }
    DiscreteProfile next(z.grid, d.A_d * z.values + d.B_d * u.values, z.index + 1);
    DiscreteProfile output(z.grid, d.C_d * z.values + d.D_d * u.values, z.index);
    return StepResult{std::move(next), std::move(output)};
}

Trajectory simulate_closed_loop(const DiscreteSystem& d, const Matrix& F_d,
                                const DiscreteProfile& zd0, long num_steps) {
    if (num_steps < 1) {
        throw std::invalid_argument("simulate_closed_loop: need at least one step");
    }
    if (F_d.rows() != d.input_dim() || F_d.cols() != d.state_dim()) {
        throw std::invalid_argument("simulate_closed_loop: F_d must be p x n");
    }
    Trajectory traj{d, {}, {}, {}, d.period};
    traj.states.reserve(static_cast<std::size_t>(num_steps) + 1);
    traj.inputs.reserve(static_cast<std::size_t>(num_steps));
    traj.outputs.reserve(static_cast<std::size_t>(num_steps));
    traj.states.push_back(DiscreteProfile(zd0.grid, zd0.values, 0));
    for (long j = 0; j < num_steps; ++j) {
        const DiscreteProfile& z = traj.states.back();
        guard_norm(z.values);
        DiscreteProfile u(z.grid, F_d * z.values, static_cast<int>(j));
        auto result = step(d, z, u);
        traj.inputs.push_back(std::move(u));
        traj.outputs.push_back(std::move(result.output));
        traj.states.push_back(std::move(result.next_state));
    }
    guard_norm(traj.states.back().values);
    return traj;
}

Trajectory simulate_open_loop(const DiscreteSystem& d, const DiscreteProfile& zd0,
                              const std::vector<DiscreteProfile>& inputs) {
    Trajectory traj{d, {}, {}, {}, d.period};
    traj.states.reserve(inputs.size() + 1);
    traj.inputs.reserve(inputs.size());
    traj.outputs.reserve(inputs.size());
    traj.states.push_back(DiscreteProfile(zd0.grid, zd0.values, 0));
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        const DiscreteProfile& z = traj.states.back();
        guard_norm(z.values);
        auto result = step(d, z, inputs[j]);
        traj.inputs.push_back(DiscreteProfile(inputs[j].grid, inputs[j].values,
                                              static_cast<int>(j)));
        traj.outputs.push_back(std::move(result.output));
        traj.states.push_back(std::move(result.next_state));
    }
    guard_norm(traj.states.back().values);
    return traj;
}

double profile_l2_norm_sq(const DiscreteProfile& profile) {
    const SpatialGrid& grid = profile.grid;
    const double h = grid.spacing();
    double sum = 0.0;
    for (int i = 0; i < grid.num_nodes(); ++i) {
        const double w = (i == 0 || i == grid.num_cells()) ? 0.5 : 1.0;
        sum += w * h * profile.values.col(i).squaredNorm();
    }
    return sum;
}

double cost_discrete(const Trajectory& traj) {
    double sum = 0.0;
    for (std::size_t j = 0; j < traj.inputs.size(); ++j) {
        sum += profile_l2_norm_sq(traj.outputs[j]) + profile_l2_norm_sq(traj.inputs[j]);
    }
    return sum;
}

namespace {

// Split s >= 0 into step j and offset xi in [0,1), mapping xi == 1 up to
// (j+1, 0); reject anything past the stored states.
struct SplitIndex {
    long j;
    double xi;
};

SplitIndex split_horizon(double s, long max_step) {
    double j = std::floor(s);
    double xi = s - j;
    if (xi >= 1.0) {  // guard against floating roundup
        j += 1.0;
        xi = 0.0;
    }
    if (j < 0.0 || static_cast<long>(j) > max_step) {
        throw std::out_of_range("sim: requested time lies outside the simulated horizon");
    }
    return SplitIndex{static_cast<long>(j), xi};
}

}  // namespace

StateProfile reconstruct_profile(const Trajectory& traj, double t, const ClockTables& clock,
                                 const HyperbolicSystem& sys) {
    if (t < 0.0 || t >= static_cast<double>(traj.steps()) * traj.period) {
        throw std::out_of_range("reconstruct_profile: t outside [0, J * period)");
    }
    const SpatialGrid& grid = clock.grid;
    if (!(grid == traj.states.front().grid)) {
        throw std::invalid_argument("reconstruct_profile: clock and trajectory grids differ");
    }
    const long max_step = traj.steps();
    const double shift = t / traj.period;
    Matrix values(sys.state_dim(), grid.num_nodes());
    for (int kidx = 0; kidx < grid.num_nodes(); ++kidx) {
        const double s = clock.k_values[static_cast<std::size_t>(kidx)] + shift;
        const auto ix = split_horizon(s, max_step);
        const Vector f = sample_at(traj.states[static_cast<std::size_t>(ix.j)], ix.xi);
        values.col(kidx) = f / sample_at(sys.lambda0(), grid.node(kidx));
    }
    return StateProfile(grid, std::move(values));
}

StateProfile to_original_variables(const StateProfile& profile, const TransformData& transform) {
    if (!(profile.grid == transform.grid)) {
        throw std::invalid_argument("to_original_variables: profile and transform grids differ");
    }
    Matrix values(profile.values.rows(), profile.values.cols());
    for (int k = 0; k < profile.grid.num_nodes(); ++k) {
        values.col(k) = transform.P[static_cast<std::size_t>(k)] * profile.values.col(k);
    }
    return StateProfile(profile.grid, std::move(values));
}

StateProfile to_transport_variables(const StateProfile& profile, const TransformData& transform) {
    if (!(profile.grid == transform.grid)) {
        throw std::invalid_argument("to_transport_variables: profile and transform grids differ");
    }
    Matrix values(profile.values.rows(), profile.values.cols());
    for (int k = 0; k < profile.grid.num_nodes(); ++k) {
        values.col(k) = transform.Q[static_cast<std::size_t>(k)] * profile.values.col(k);
    }
    return StateProfile(profile.grid, std::move(values));
}

Vector boundary_control_signal(const Trajectory& traj, const Matrix& F_d,
                               const ClockTables& clock, const HyperbolicSystem& sys, double t) {
    if (t < 0.0 || t >= static_cast<double>(traj.steps()) * clock.period) {
        throw std::out_of_range("boundary_control_signal: t outside [0, J * period)");
    }
    const double lambda_end = sample_at(sys.lambda0(), 1.0);
    // k(1) = 0, so the trace at zeta = 1 reads f at t/period directly
    const auto ix = split_horizon(t / clock.period, traj.steps());
    const Vector z_end = sample_at(traj.states[static_cast<std::size_t>(ix.j)], ix.xi) / lambda_end;
    return lambda_end * (F_d * z_end);
}

long default_horizon(double closed_loop_radius, double tail_tol, long cap) {
    if (!(closed_loop_radius > 0.0) || closed_loop_radius >= 1.0) return cap;
    const double steps = std::ceil(std::log(tail_tol) / (2.0 * std::log(closed_loop_radius)));
    if (!(steps >= 1.0)) return 1;
    if (steps >= static_cast<double>(cap)) return cap;
    return static_cast<long>(steps);
}

}  // namespace wavelq
