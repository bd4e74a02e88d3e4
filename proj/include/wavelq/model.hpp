#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace wavelq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Uniform grid 0 = zeta_0 < zeta_1 < ... < zeta_N = 1.
class SpatialGrid {
public:
    explicit SpatialGrid(int num_cells);

    int num_cells() const { return num_cells_; }
    int num_nodes() const { return num_cells_ + 1; }
    double spacing() const { return spacing_; }
    double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& nodes() const { return nodes_; }

    bool operator==(const SpatialGrid& other) const { return num_cells_ == other.num_cells_; }

private:
    int num_cells_;
    double spacing_;
    std::vector<double> nodes_;
};

/**
 * Positive scalar function on [0,1], stored as one sample per grid node.
 * Every sample must stay above the positivity margin (this is where the
 * wave speed lives, and the speed must be bounded away from zero).
 */
class ScalarField {
public:
    static constexpr double kDefaultPositivityMargin = 1e-12;

    ScalarField(SpatialGrid grid, std::vector<double> values,
                double positivity_margin = kDefaultPositivityMargin);

    static ScalarField constant(const SpatialGrid& grid, double value,
                                double positivity_margin = kDefaultPositivityMargin);
    static ScalarField from_function(const SpatialGrid& grid,
                                     const std::function<double(double)>& f,
                                     double positivity_margin = kDefaultPositivityMargin);

    const SpatialGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double positivity_margin() const { return positivity_margin_; }
    double min_value() const;

private:
    SpatialGrid grid_;
    std::vector<double> values_;
    double positivity_margin_;
};

/// Square-matrix-valued function on [0,1]; all samples share one dimension
/// and must be finite.
class MatrixField {
public:
    MatrixField(SpatialGrid grid, std::vector<Matrix> values);

    static MatrixField zero(const SpatialGrid& grid, int dim);
    static MatrixField constant(const SpatialGrid& grid, const Matrix& value);
    static MatrixField from_function(const SpatialGrid& grid,
                                     const std::function<Matrix(double)>& f);

    const SpatialGrid& grid() const { return grid_; }
    const std::vector<Matrix>& values() const { return values_; }
    int dim() const { return dim_; }
    bool is_zero() const;

private:
    SpatialGrid grid_;
    std::vector<Matrix> values_;
    int dim_;
};

/// Piecewise-linear interpolation; exact (bit-for-bit) at grid nodes.
double sample_at(const ScalarField& field, double zeta);
Matrix sample_at(const MatrixField& field, double zeta);

/**
 * Boundary controlled, boundary observed transport system
 *
 *   d/dt z(zeta,t) = -d/dzeta (lambda0(zeta) z) + M(zeta) z,
 *   [0; I] u(t)    = -lambda0(0) K z(0,t) - lambda0(1) L z(1,t),
 *   y(t)           = -lambda0(0) Ky z(0,t) - lambda0(1) Ly z(1,t),
 *
 * with state dimension n, input dimension p and output dimension m.
 * The input hits the last p boundary equations through the fixed
 * selector [0; I]; K, L are n x n and Ky, Ly are m x n.
 */
class HyperbolicSystem {
public:
    HyperbolicSystem(int n, int p, int m, ScalarField lambda0, MatrixField coupling,
                     Matrix K, Matrix L, Matrix Ky, Matrix Ly);

    int state_dim() const { return n_; }
    int input_dim() const { return p_; }
    int output_dim() const { return m_; }

    const ScalarField& lambda0() const { return lambda0_; }
    const MatrixField& coupling() const { return coupling_; }
    const Matrix& K() const { return K_; }
    const Matrix& L() const { return L_; }
    const Matrix& Ky() const { return Ky_; }
    const Matrix& Ly() const { return Ly_; }
    const SpatialGrid& grid() const { return lambda0_.grid(); }

    /// The canonical n x p block [0; I] (zero rows on top, p x p identity below).
    Matrix input_selector() const;

private:
    int n_, p_, m_;
    ScalarField lambda0_;
    MatrixField coupling_;
    Matrix K_, L_, Ky_, Ly_;
};

/// State profile z(.) sampled on a grid; one n-vector per node, stored as
/// the columns of an n x (N+1) matrix.
struct StateProfile {
    SpatialGrid grid;
    Matrix values;

    StateProfile(SpatialGrid g, Matrix v);

    int dim() const { return static_cast<int>(values.rows()); }

    static StateProfile constant(const SpatialGrid& grid, const Vector& value);
    static StateProfile from_function(const SpatialGrid& grid,
                                      const std::function<Vector(double)>& f);
};

/// Linear interpolation of a profile between nodes; exact at nodes.
Vector sample_at(const StateProfile& profile, double zeta);

/// Same interpolation on bare node columns (one column per grid node).
Vector interpolate_columns(const SpatialGrid& grid, const Matrix& values, double zeta);

struct ValidationReport {
    bool dimensions_consistent = false;
    double lambda0_min = 0.0;        // minimum sample of the wave speed
    bool lambda0_positive = false;
    double K_singular_value_ratio = 0.0;  // sigma_min / sigma_max of K
    double K_condition = 0.0;             // sigma_max / sigma_min
    bool K_invertible = false;
    bool well_posed = false;

    std::string describe() const;
};

/// Structural checks: dimension consistency, positivity margin of the wave
/// speed, and invertibility of K by a singular-value ratio test. Findings are
/// reported, never thrown; the system is well-posed iff K is invertible and
/// the speed is positive.
ValidationReport validate_system(const HyperbolicSystem& sys, double rank_tol = 1e-12);

}  // namespace wavelq
