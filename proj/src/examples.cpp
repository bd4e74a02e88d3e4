#include "wavelq/examples.hpp"

#include <cmath>
#include <stdexcept>

namespace wavelq {

double StringsParams::wave_speed() const { return std::sqrt(youngs_modulus / rho); }

double StringsParams::sigma() const { return 1.0 / std::sqrt(rho * youngs_modulus); }

HyperbolicSystem build_strings(const StringsParams& params, const SpatialGrid& grid) {
    if (!(params.rho > 0.0) || !(params.youngs_modulus > 0.0)) {
        throw std::invalid_argument("build_strings: rho and the Young's modulus must be > 0");
    }
    const double s = params.sigma();
    Matrix K(6, 6), L(6, 6), Ky(2, 6), Ly(2, 6);
    K <<  0,  s,  0,  0,  0,  0,
         -s,  0,  s,  0,  0,  0,
          0,  0, -s,  0,  s,  0,
         -1,  0,  1,  0,  1,  0,
          0,  0,  0, -1,  0,  0,
          0,  0,  0,  0,  0, -1;
    L << -s,  0,  0,  0,  0,  0,
          0,  s,  0, -s,  0,  0,
          0,  0,  0,  s,  0, -s,
          0, -1,  0,  1,  0,  1,
          0,  0, -1,  0,  0,  0,
          0,  0,  0,  0, -1,  0;
    Ky << 0, 0, 0, 0, -s, 0,
          0, 0, 0,  s,  0, 0;
    Ly << 0, 0,  0, 0, 0, s,
          0, 0, -s, 0, 0, 0;
    return HyperbolicSystem(6, 3, 2, ScalarField::constant(grid, params.wave_speed()),
                            MatrixField::zero(grid, 6), K, L, Ky, Ly);
}

Eigen::Matrix2d strings_riemann_map(double sigma) {
    Eigen::Matrix2d s;
    s << 0.5, 0.5 / sigma, -0.5, 0.5 / sigma;
    return s;
}

namespace {

StateProfile strings_apply_blockwise(const Eigen::Matrix2d& block, const StateProfile& profile,
                                     bool reverse_first) {
    if (profile.dim() != 6) {
        throw std::invalid_argument("strings coordinate maps expect 6-row profiles");
    }
    const int nodes = profile.grid.num_nodes();
    Matrix out(6, nodes);
    for (int k = 0; k < nodes; ++k) {
        for (int string = 0; string < 3; ++string) {
            out.block<2, 1>(2 * string, k) =
                block * profile.values.block<2, 1>(2 * string, k);
        }
    }
    // forward waves (rows 0, 2, 4) travel against the common direction and
    // are stored on the reversed axis
    if (reverse_first) {
        for (int row : {0, 2, 4}) {
            out.row(row) = out.row(row).reverse().eval();
        }
    }
    return StateProfile(profile.grid, std::move(out));
}

}  // namespace

StateProfile strings_physical_to_wave(const StringsParams& params,
                                      const StateProfile& physical) {
    return strings_apply_blockwise(strings_riemann_map(params.sigma()), physical, true);
}

StateProfile strings_wave_to_physical(const StringsParams& params, const StateProfile& wave) {
    // undo the reversal first, then invert the Riemann map per node
    StateProfile unreversed(wave.grid, wave.values);
    for (int row : {0, 2, 4}) {
        unreversed.values.row(row) = wave.values.row(row).reverse();
    }
    const Eigen::Matrix2d inverse = strings_riemann_map(params.sigma()).inverse();
    return strings_apply_blockwise(inverse, unreversed, false);
}

HeatExchangerParams HeatExchangerParams::constants(double a1, double a2, double v) {
    return HeatExchangerParams{[a1](double) { return a1; }, [a2](double) { return a2; },
                               [v](double) { return v; }};
}

HyperbolicSystem build_heat_exchanger(const HeatExchangerParams& params,
                                      const SpatialGrid& grid) {
    for (int i = 0; i < grid.num_nodes(); ++i) {
        const double zeta = grid.node(i);
        if (!(params.velocity(zeta) > 0.0)) {
            throw std::invalid_argument("build_heat_exchanger: velocity must be > 0 on [0,1]");
        }
        if (params.alpha1(zeta) < 0.0 || params.alpha2(zeta) < 0.0) {
            throw std::invalid_argument(
                "build_heat_exchanger: transfer coefficients must be >= 0");
        }
    }
    auto coupling = MatrixField::from_function(grid, [&](double zeta) {
        const double a1 = params.alpha1(zeta);
        const double a2 = params.alpha2(zeta);
        Matrix m(2, 2);
        m << -a1, a1, a2, -a2;
        return m;
    });
    Matrix Ky(1, 2), Ly(1, 2);
    Ky << 0, 1;
    Ly << 0, -1;
    return HyperbolicSystem(2, 1, 1, ScalarField::from_function(grid, params.velocity),
                            std::move(coupling), -Matrix::Identity(2, 2), Matrix::Zero(2, 2),
                            Ky, Ly);
}

StateProfile heat_exchanger_state_to_physical(const HeatExchangerParams& params,
                                              const StateProfile& state) {
    Matrix values = state.values;
    for (int k = 0; k < state.grid.num_nodes(); ++k) {
        values.col(k) *= params.velocity(state.grid.node(k));
    }
    return StateProfile(state.grid, std::move(values));
}

StateProfile heat_exchanger_physical_to_state(const HeatExchangerParams& params,
                                              const StateProfile& physical) {
    Matrix values = physical.values;
    for (int k = 0; k < physical.grid.num_nodes(); ++k) {
        values.col(k) /= params.velocity(physical.grid.node(k));
    }
    return StateProfile(physical.grid, std::move(values));
}

namespace {

// Composite Simpson over [a, b] with an even number of intervals.
double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int q = 1; q < intervals; ++q) {
        sum += (q % 2 == 1 ? 4.0 : 2.0) * f(a + q * h);
    }
    return sum * h / 3.0;
}

int even_intervals(double span, int resolution) {
    int n = static_cast<int>(std::ceil(span * resolution));
    n = std::max(n, 2);
    if (n % 2 == 1) ++n;
    return n;
}

struct ExchangerIntegrals {
    double h_end = 0.0;  // h(zeta)
    double j1 = 0.0;     // int e^h alpha1 / v
    double j2 = 0.0;     // int e^h alpha2 / v
};

// Cumulative h on the quadrature nodes, then one composite Simpson pass for
// the weighted transfer integrals.
ExchangerIntegrals exchanger_integrals(const HeatExchangerParams& params, double zeta,
                                       int resolution) {
    ExchangerIntegrals out;
    if (zeta == 0.0) return out;
    const auto decay_rate = [&](double eta) {
        return (params.alpha1(eta) + params.alpha2(eta)) / params.velocity(eta);
    };
    const int n = even_intervals(zeta, resolution);
    const double step = zeta / n;
    std::vector<double> h_values(static_cast<std::size_t>(n) + 1, 0.0);
    for (int q = 1; q <= n; ++q) {
        h_values[static_cast<std::size_t>(q)] =
            h_values[static_cast<std::size_t>(q - 1)] -
            simpson(decay_rate, (q - 1) * step, q * step, 8);
    }
    out.h_end = h_values.back();
    double sum1 = 0.0, sum2 = 0.0;
    for (int q = 0; q <= n; ++q) {
        const double eta = q * step;
        const double weight = (q == 0 || q == n) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
        const double core = weight * std::exp(h_values[static_cast<std::size_t>(q)]) /
                            params.velocity(eta);
        sum1 += core * params.alpha1(eta);
        sum2 += core * params.alpha2(eta);
    }
    out.j1 = sum1 * step / 3.0;
    out.j2 = sum2 * step / 3.0;
    return out;
}

}  // namespace

double heat_exchanger_h(const HeatExchangerParams& params, double eta, int resolution) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::out_of_range("heat_exchanger_h: eta must lie in [0,1]");
    }
    return exchanger_integrals(params, eta, resolution).h_end;
}

Matrix heat_exchanger_P_closed_form(const HeatExchangerParams& params, double zeta,
                                    int resolution) {
    if (!(zeta >= 0.0 && zeta <= 1.0)) {
        throw std::out_of_range("heat_exchanger_P_closed_form: zeta must lie in [0,1]");
    }
    const auto ints = exchanger_integrals(params, zeta, resolution);
    const double decayed = std::exp(ints.h_end);
    Matrix P(2, 2);
    P << 1.0 - ints.j1, 1.0 - decayed - ints.j2,
         1.0 - decayed - ints.j1, 1.0 - ints.j2;
    return P;
}

Matrix heat_exchanger_care_from_gram(double r1, double rt, double r2) {
    const double pi2 = (r2 - 2.0 + std::sqrt(r2 * r2 + 4.0)) / 2.0;
    const double factor = 1.0 - 1.0 / (2.0 + pi2);
    Matrix Pi(2, 2);
    Pi << r1 * factor, rt * factor, rt * factor, pi2;
    return Pi;
}

Matrix heat_exchanger_care_closed_form(const HeatExchangerParams& params, int resolution) {
    const Matrix P1 = heat_exchanger_P_closed_form(params, 1.0, resolution);
    // output row C_d = [0 1] P(1)
    const double c1 = P1(1, 0);
    const double c2 = P1(1, 1);
    return heat_exchanger_care_from_gram(c1 * c1, c1 * c2, c2 * c2);
}

}  // namespace wavelq
