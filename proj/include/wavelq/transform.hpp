#pragma once

#include <vector>

#include "wavelq/model.hpp"

namespace wavelq {

/**
 * Node samples of the change-of-variables matrices P and Q, where P solves
 * P' = M P / lambda0 and Q solves Q' = -Q M / lambda0 with P(0) = Q(0) = I.
 * Q is integrated independently of P; since the exact solutions satisfy
 * Q = P^{-1}, the worst product defect max_k ||Q_k P_k - I||_F is kept as a
 * correctness diagnostic.
 */
struct TransformData {
    SpatialGrid grid;
    std::vector<Matrix> P;
    std::vector<Matrix> Q;
    double inverse_residual = 0.0;
    double tolerance_budget = 0.0;
    bool within_budget = false;

    const Matrix& P1() const { return P.back(); }
    const Matrix& Q1() const { return Q.back(); }
};

/// Classical fixed-step RK4 for P' = M P / lambda0, P(0) = I; coefficients are
/// interpolated at half-steps. Returns one matrix per grid node. Order 4 on
/// smooth coefficients; merely bounded coefficients are accepted but degrade
/// the observed order.
std::vector<Matrix> solve_P(const HyperbolicSystem& sys, const SpatialGrid& grid);

/// Same integrator for Q' = -Q M / lambda0, Q(0) = I.
std::vector<Matrix> solve_Q(const HyperbolicSystem& sys, const SpatialGrid& grid);

TransformData build_transform(const HyperbolicSystem& sys, const SpatialGrid& grid,
                              double tolerance_budget = 1e-8);

/// The equivalent coupling-free system: boundary and output matrices become
/// K, L P(1), Ky, Ly P(1), and the state maps are z = Q ztilde, ztilde = P z
/// (held by the TransformData). A system that is already coupling-free is
/// returned unchanged.
HyperbolicSystem to_transport_form(const HyperbolicSystem& sys, const TransformData& transform);

}  // namespace wavelq
