#include "wavelq/transform.hpp"

#include <stdexcept>

namespace wavelq {

namespace {

// One RK4 sweep over the grid for X' = rhs(zeta, X), X(0) = I.
template <typename Rhs>
std::vector<Matrix> integrate(const HyperbolicSystem& sys, const SpatialGrid& grid,
                              const Rhs& rhs) {
    const int n = sys.state_dim();
    const double h = grid.spacing();
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(grid.num_nodes()));
    out.push_back(Matrix::Identity(n, n));
    for (int i = 0; i < grid.num_cells(); ++i) {
        const double zeta = grid.node(i);
        const double mid = zeta + 0.5 * h;
        const Matrix& x = out.back();
        const Matrix k1 = rhs(zeta, x);
        const Matrix k2 = rhs(mid, x + 0.5 * h * k1);
        const Matrix k3 = rhs(mid, x + 0.5 * h * k2);
        const Matrix k4 = rhs(grid.node(i + 1), x + h * k3);
        Matrix next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!next.allFinite()) {
            throw std::runtime_error("transform: integration produced non-finite values at zeta=" +
                                     std::to_string(grid.node(i + 1)));
        }
        out.push_back(std::move(next));
    }
    return out;
}

Matrix coefficient(const HyperbolicSystem& sys, double zeta) {
    return sample_at(sys.coupling(), zeta) / sample_at(sys.lambda0(), zeta);
}

}  // namespace

std::vector<Matrix> solve_P(const HyperbolicSystem& sys, const SpatialGrid& grid) {
    return integrate(sys, grid, [&](double zeta, const Matrix& P) -> Matrix {
        return coefficient(sys, zeta) * P;
    });
}

std::vector<Matrix> solve_Q(const HyperbolicSystem& sys, const SpatialGrid& grid) {
    return integrate(sys, grid, [&](double zeta, const Matrix& Q) -> Matrix {
        return -(Q * coefficient(sys, zeta));
    });
}

TransformData build_transform(const HyperbolicSystem& sys, const SpatialGrid& grid,
                              double tolerance_budget) {
    TransformData data{grid, solve_P(sys, grid), solve_Q(sys, grid), 0.0, tolerance_budget, false};
    const int n = sys.state_dim();
    const Matrix identity = Matrix::Identity(n, n);
    for (int k = 0; k < grid.num_nodes(); ++k) {
        const std::size_t idx = static_cast<std::size_t>(k);
        const double defect = (data.Q[idx] * data.P[idx] - identity).norm();
        data.inverse_residual = std::max(data.inverse_residual, defect);
    }
    data.within_budget = data.inverse_residual <= tolerance_budget;
    return data;
}

HyperbolicSystem to_transport_form(const HyperbolicSystem& sys, const TransformData& transform) {
    if (!(transform.grid == sys.grid())) {
        throw std::invalid_argument("to_transport_form: transform built on a different grid");
    }
    const Matrix& P1 = transform.P1();
    return HyperbolicSystem(sys.state_dim(), sys.input_dim(), sys.output_dim(), sys.lambda0(),
                            MatrixField::zero(sys.grid(), sys.state_dim()), sys.K(),
                            sys.L() * P1, sys.Ky(), sys.Ly() * P1);
}

}  // namespace wavelq
