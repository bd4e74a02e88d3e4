#include "wavelq/discretize.hpp"

#include <cmath>
#include <stdexcept>

namespace wavelq {

ClockTables build_clock(const HyperbolicSystem& sys, const SpatialGrid& grid) {
    ClockTables clock{grid, {}, {}, 0.0};
    const int nodes = grid.num_nodes();
    clock.p_values.resize(static_cast<std::size_t>(nodes));
    clock.k_values.resize(static_cast<std::size_t>(nodes));
    clock.p_values[0] = 0.0;
    const double h = grid.spacing();
    double prev = 1.0 / sample_at(sys.lambda0(), grid.node(0));
    for (int i = 1; i < nodes; ++i) {
        const double cur = 1.0 / sample_at(sys.lambda0(), grid.node(i));
        clock.p_values[static_cast<std::size_t>(i)] =
            clock.p_values[static_cast<std::size_t>(i - 1)] + 0.5 * h * (prev + cur);
        prev = cur;
    }
    clock.period = clock.p_values.back();
    for (int i = 0; i < nodes; ++i) {
        clock.k_values[static_cast<std::size_t>(i)] =
            1.0 - clock.p_values[static_cast<std::size_t>(i)] / clock.period;
    }
    clock.k_values[0] = 1.0;
    clock.k_values[static_cast<std::size_t>(nodes - 1)] = 0.0;
    return clock;
}

namespace {

// Piecewise-linear evaluation of the k table.
double k_interp(const ClockTables& clock, double zeta) {
    const SpatialGrid& grid = clock.grid;
    int i = static_cast<int>(std::floor(zeta * grid.num_cells()));
    i = std::clamp(i, 0, grid.num_cells() - 1);
    if (zeta < grid.node(i)) --i;
    if (zeta > grid.node(i + 1)) ++i;
    const double t = (zeta - grid.node(i)) / grid.spacing();
    const double lo = clock.k_values[static_cast<std::size_t>(i)];
    const double hi = clock.k_values[static_cast<std::size_t>(i + 1)];
    return lo + t * (hi - lo);
}

}  // namespace

double invert_k(const ClockTables& clock, double xi, double tol, int max_iter) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw std::out_of_range("invert_k: xi must lie in [0,1], got " + std::to_string(xi));
    }
    if (xi == 1.0) return 0.0;
    if (xi == 0.0) return 1.0;
    double lo = 0.0;   // k(lo) = 1 >= xi
    double hi = 1.0;   // k(hi) = 0 <= xi
    double mid = 0.5;
    for (int iter = 0; iter < max_iter; ++iter) {
        mid = 0.5 * (lo + hi);
        const double value = k_interp(clock, mid);
        if (std::abs(value - xi) <= tol) return mid;
        if (value > xi) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

DiscreteSystem build_discrete(const HyperbolicSystem& sys, const Matrix& P1,
                              const ClockTables& clock) {
    const int n = sys.state_dim();
    if (P1.rows() != n || P1.cols() != n) {
        throw std::invalid_argument("build_discrete: P1 must be n x n");
    }
    Eigen::JacobiSVD<Matrix> svd(sys.K());
    const double sigma_max = svd.singularValues()(0);
    const double sigma_min = svd.singularValues()(n - 1);
    if (!(sigma_max > 0.0) || sigma_min / sigma_max <= 1e-12) {
        throw std::invalid_argument("build_discrete: K is singular, system is not well-posed");
    }

    Eigen::PartialPivLU<Matrix> lu(sys.K());
    const Matrix Kinv_L = lu.solve(sys.L());
    const Matrix Kinv_E = lu.solve(sys.input_selector());

    DiscreteSystem d;
    d.A_d = -(Kinv_L * P1);
    d.B_d = -Kinv_E;
    d.C_d = (sys.Ky() * Kinv_L - sys.Ly()) * P1;
    d.D_d = sys.Ky() * Kinv_E;
    d.period = clock.period;
    if (!d.A_d.allFinite() || !d.B_d.allFinite() || !d.C_d.allFinite() || !d.D_d.allFinite()) {
        throw std::runtime_error("build_discrete: non-finite entries in the discrete matrices");
    }
    return d;
}

DiscreteProfile::DiscreteProfile(SpatialGrid g, Matrix v, int idx)
    : grid(std::move(g)), values(std::move(v)), index(idx) {
    if (values.cols() != grid.num_nodes()) {
        throw std::invalid_argument("DiscreteProfile: expected one column per grid node");
    }
}

DiscreteProfile DiscreteProfile::constant(const SpatialGrid& grid, const Vector& value, int idx) {
    return DiscreteProfile(grid, value.replicate(1, grid.num_nodes()), idx);
}

Vector sample_at(const DiscreteProfile& profile, double xi) {
    return interpolate_columns(profile.grid, profile.values, xi);
}

DiscreteProfile lift_initial_condition(const StateProfile& z0, const HyperbolicSystem& sys,
                                       const ClockTables& clock) {
    if (!(z0.grid == sys.grid())) {
        throw std::invalid_argument("lift_initial_condition: profile grid differs from system grid");
    }
    const SpatialGrid& grid = clock.grid;
    Matrix values(z0.dim(), grid.num_nodes());
    for (int r = 0; r < grid.num_nodes(); ++r) {
        const double zeta = invert_k(clock, grid.node(r));
        values.col(r) = sample_at(sys.lambda0(), zeta) * sample_at(z0, zeta);
    }
    return DiscreteProfile(grid, std::move(values), 0);
}

SignalIndex index_signal(double t, const ClockTables& clock) {
    if (t < 0.0) {
        throw std::out_of_range("index_signal: t must be >= 0");
    }
    const double s = t / clock.period;
    const double j = std::floor(s);
    return SignalIndex{static_cast<long>(j), s - j};
}

}  // namespace wavelq
