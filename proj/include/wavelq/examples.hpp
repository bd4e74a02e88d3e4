#pragma once

#include <functional>

#include "wavelq/model.hpp"

namespace wavelq {

/**
 * Three identical vibrating strings of unit length joined by a massless bar,
 * with forces applied at the bar and at the free ends of strings B and C,
 * and velocity measurements at the bar and at the free end of string B.
 * Shared mass density rho and Young's modulus T give the wave speed
 * v = sqrt(T/rho) and the impedance parameter sigma = 1/sqrt(rho T).
 */
struct StringsParams {
    double rho = 1.0;
    double youngs_modulus = 1.0;

    double wave_speed() const;  // v = sqrt(T / rho)
    double sigma() const;       // 1 / sqrt(rho T)
};

/// Wave-coordinate system of the string network: n = 6, p = 3, m = 2,
/// constant speed v, no in-domain coupling, and boundary matrices with
/// entries in {0, +-1, +-sigma}. det K = sigma^3, so the system is well-posed
/// for every admissible parameter set.
///
/// Coordinates: per string, the Riemann pair (z_fwd, z_bwd) = s * (momentum,
/// strain) with s = strings_riemann_map(sigma); the forward components
/// (indices 0, 2, 4) are spatially reversed so that every wave travels in the
/// same direction. The optimal boundary feedback therefore acts on the trace
/// vector (z1(0), z2(1), z3(0), z4(1), z5(0), z6(1)) of the unreversed
/// variables.
HyperbolicSystem build_strings(const StringsParams& params, const SpatialGrid& grid);

/// Per-string map from (momentum, strain) to Riemann coordinates.
Eigen::Matrix2d strings_riemann_map(double sigma);

/// Physical profile x = (rho dw/dt, dw/dzeta) per string (6 rows) to the
/// wave coordinates of build_strings: apply the Riemann map blockwise, then
/// reverse rows 0, 2, 4 in space.
StateProfile strings_physical_to_wave(const StringsParams& params, const StateProfile& physical);

StateProfile strings_wave_to_physical(const StringsParams& params, const StateProfile& wave);

/**
 * Co-current heat exchanger: two tubes exchanging heat while the fluid flows
 * at speed v(zeta), heated through the inlet temperature of the external
 * tube; the output is the temperature rise across the external tube.
 * The transfer coefficients and the velocity may vary in space; velocities
 * must be strictly positive, transfer coefficients nonnegative.
 */
struct HeatExchangerParams {
    std::function<double(double)> alpha1;
    std::function<double(double)> alpha2;
    std::function<double(double)> velocity;

    static HeatExchangerParams constants(double a1, double a2, double v);
};

/// n = 2, p = 1, m = 1, lambda0 = v, coupling [[-a1, a1], [a2, -a2]],
/// K = -I, L = 0, Ky = [0 1], Ly = -[0 1]. The system state is the scaled
/// temperature pair T_phys / v (see the physical maps below).
HyperbolicSystem build_heat_exchanger(const HeatExchangerParams& params, const SpatialGrid& grid);

/// T_phys = v * state, per node.
StateProfile heat_exchanger_state_to_physical(const HeatExchangerParams& params,
                                              const StateProfile& state);

/// state = T_phys / v, per node.
StateProfile heat_exchanger_physical_to_state(const HeatExchangerParams& params,
                                              const StateProfile& physical);

/// h(eta) = -int_0^eta (a1 + a2) / v, by composite Simpson quadrature with
/// about `resolution` intervals over the unit length.
double heat_exchanger_h(const HeatExchangerParams& params, double eta, int resolution = 1024);

/// Analytic solution of the coupling ODE,
///   P = [[1 - J1,          1 - e^h - J2],
///        [1 - e^h - J1,    1 - J2      ]],
/// with J_i(zeta) = int_0^zeta e^{h} a_i / v. Independent of the RK4 path;
/// quadrature runs at 4x the default grid resolution.
Matrix heat_exchanger_P_closed_form(const HeatExchangerParams& params, double zeta,
                                    int resolution = 1024);

/// Riccati solution for a Gram matrix [[r1, rt], [rt, r2]] of the output row:
/// pi2 = (r2 - 2 + sqrt(r2^2 + 4)) / 2 and pi1, pit scale r1, rt by
/// 1 - 1/(2 + pi2).
Matrix heat_exchanger_care_from_gram(double r1, double rt, double r2);

/// Closed-form Riccati solution of the exchanger: the Gram data comes from
/// the output row [0 1] P(1) evaluated with the quadrature above.
Matrix heat_exchanger_care_closed_form(const HeatExchangerParams& params, int resolution = 1024);

}  // namespace wavelq
