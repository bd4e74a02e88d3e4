#include "wavelq/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wavelq {

SpatialGrid::SpatialGrid(int num_cells) : num_cells_(num_cells) {
    if (num_cells < 2) {
        throw std::invalid_argument("SpatialGrid: need at least 2 cells, got " +
                                    std::to_string(num_cells));
    }
    spacing_ = 1.0 / static_cast<double>(num_cells);
    nodes_.resize(static_cast<std::size_t>(num_cells) + 1);
    for (int i = 0; i <= num_cells; ++i) {
        nodes_[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(num_cells);
    }
}

ScalarField::ScalarField(SpatialGrid grid, std::vector<double> values, double positivity_margin)
    : grid_(std::move(grid)), values_(std::move(values)), positivity_margin_(positivity_margin) {
    if (positivity_margin_ <= 0.0) {
        throw std::invalid_argument("ScalarField: positivity margin must be > 0");
    }
    if (static_cast<int>(values_.size()) != grid_.num_nodes()) {
        throw std::invalid_argument("ScalarField: expected " + std::to_string(grid_.num_nodes()) +
                                    " samples, got " + std::to_string(values_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < positivity_margin_) {
            throw std::invalid_argument("ScalarField: samples must be finite and >= " +
                                        std::to_string(positivity_margin_));
        }
    }
}

ScalarField ScalarField::constant(const SpatialGrid& grid, double value, double positivity_margin) {
    return ScalarField(grid, std::vector<double>(static_cast<std::size_t>(grid.num_nodes()), value),
                       positivity_margin);
}

ScalarField ScalarField::from_function(const SpatialGrid& grid,
                                       const std::function<double(double)>& f,
                                       double positivity_margin) {
    std::vector<double> values(static_cast<std::size_t>(grid.num_nodes()));
    for (int i = 0; i < grid.num_nodes(); ++i) {
        values[static_cast<std::size_t>(i)] = f(grid.node(i));
    }
    return ScalarField(grid, std::move(values), positivity_margin);
}

double ScalarField::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

MatrixField::MatrixField(SpatialGrid grid, std::vector<Matrix> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.num_nodes()) {
        throw std::invalid_argument("MatrixField: expected " + std::to_string(grid_.num_nodes()) +
                                    " samples, got " + std::to_string(values_.size()));
    }
    dim_ = static_cast<int>(values_.front().rows());
    for (const Matrix& m : values_) {
        if (m.rows() != dim_ || m.cols() != dim_) {
            throw std::invalid_argument("MatrixField: all samples must be square of one dimension");
        }
        if (!m.allFinite()) {
            throw std::invalid_argument("MatrixField: samples must be finite");
        }
    }
}

MatrixField MatrixField::zero(const SpatialGrid& grid, int dim) {
    return MatrixField(grid, std::vector<Matrix>(static_cast<std::size_t>(grid.num_nodes()),
                                                 Matrix::Zero(dim, dim)));
}

MatrixField MatrixField::constant(const SpatialGrid& grid, const Matrix& value) {
    return MatrixField(grid,
                       std::vector<Matrix>(static_cast<std::size_t>(grid.num_nodes()), value));
}

MatrixField MatrixField::from_function(const SpatialGrid& grid,
                                       const std::function<Matrix(double)>& f) {
    std::vector<Matrix> values;
    values.reserve(static_cast<std::size_t>(grid.num_nodes()));
    for (int i = 0; i < grid.num_nodes(); ++i) {
        values.push_back(f(grid.node(i)));
    }
    return MatrixField(grid, std::move(values));
}

bool MatrixField::is_zero() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const Matrix& m) { return m.isZero(0.0); });
}

namespace {

// Bracketing cell for zeta, comparing against stored nodes so queries that
// land on a node return the stored sample bit-for-bit.
struct Bracket {
    int cell;        // interpolate between cell and cell+1
    double weight;   // in (0,1); negative means "node hit" at node_index
    int node_index;  // valid when weight < 0
};

Bracket locate(const SpatialGrid& grid, double zeta) {
    if (!(zeta >= 0.0 && zeta <= 1.0)) {
        throw std::out_of_range("sample_at: zeta must lie in [0,1], got " + std::to_string(zeta));
    }
    const int n_cells = grid.num_cells();
    int i = static_cast<int>(std::floor(zeta * n_cells));
    i = std::clamp(i, 0, n_cells - 1);
    if (zeta == grid.node(i)) return {i, -1.0, i};
    if (zeta == grid.node(i + 1)) return {i, -1.0, i + 1};
    // floor slop can land one cell off for zeta just below a node
    if (zeta < grid.node(i)) --i;
    if (zeta > grid.node(i + 1)) ++i;
    return {i, (zeta - grid.node(i)) / grid.spacing(), -1};
}

}  // namespace

double sample_at(const ScalarField& field, double zeta) {
    const Bracket b = locate(field.grid(), zeta);
    if (b.weight < 0.0) return field.values()[static_cast<std::size_t>(b.node_index)];
    const double lo = field.values()[static_cast<std::size_t>(b.cell)];
    const double hi = field.values()[static_cast<std::size_t>(b.cell + 1)];
    return lo + b.weight * (hi - lo);
}

Matrix sample_at(const MatrixField& field, double zeta) {
    const Bracket b = locate(field.grid(), zeta);
    if (b.weight < 0.0) return field.values()[static_cast<std::size_t>(b.node_index)];
    const Matrix& lo = field.values()[static_cast<std::size_t>(b.cell)];
    const Matrix& hi = field.values()[static_cast<std::size_t>(b.cell + 1)];
    return lo + b.weight * (hi - lo);
}

Vector interpolate_columns(const SpatialGrid& grid, const Matrix& values, double zeta) {
    const Bracket b = locate(grid, zeta);
    if (b.weight < 0.0) return values.col(b.node_index);
    return values.col(b.cell) + b.weight * (values.col(b.cell + 1) - values.col(b.cell));
}

Vector sample_at(const StateProfile& profile, double zeta) {
    return interpolate_columns(profile.grid, profile.values, zeta);
}

HyperbolicSystem::HyperbolicSystem(int n, int p, int m, ScalarField lambda0, MatrixField coupling,
                                   Matrix K, Matrix L, Matrix Ky, Matrix Ly)
    : n_(n),
      p_(p),
      m_(m),
      lambda0_(std::move(lambda0)),
      coupling_(std::move(coupling)),
      K_(std::move(K)),
      L_(std::move(L)),
      Ky_(std::move(Ky)),
      Ly_(std::move(Ly)) {
    if (n_ < 1 || p_ < 1 || p_ > n_ || m_ < 1) {
        throw std::invalid_argument("HyperbolicSystem: need 1 <= p <= n and m >= 1");
    }
    if (coupling_.dim() != n_) {
        throw std::invalid_argument("HyperbolicSystem: coupling dimension must equal n");
    }
    if (!(coupling_.grid() == lambda0_.grid())) {
        throw std::invalid_argument("HyperbolicSystem: lambda0 and coupling must share a grid");
    }
    auto check = [&](const Matrix& mat, int rows, int cols, const char* name) {
        if (mat.rows() != rows || mat.cols() != cols) {
            std::ostringstream oss;
            oss << "HyperbolicSystem: " << name << " must be " << rows << "x" << cols << ", got "
                << mat.rows() << "x" << mat.cols();
            throw std::invalid_argument(oss.str());
        }
    };
    check(K_, n_, n_, "K");
    check(L_, n_, n_, "L");
    check(Ky_, m_, n_, "Ky");
    check(Ly_, m_, n_, "Ly");
}

Matrix HyperbolicSystem::input_selector() const {
    Matrix selector = Matrix::Zero(n_, p_);
    selector.bottomRows(p_) = Matrix::Identity(p_, p_);
    return selector;
}

StateProfile::StateProfile(SpatialGrid g, Matrix v) : grid(std::move(g)), values(std::move(v)) {
    if (values.cols() != grid.num_nodes()) {
        throw std::invalid_argument("StateProfile: expected one column per grid node");
    }
}

StateProfile StateProfile::constant(const SpatialGrid& grid, const Vector& value) {
    return StateProfile(grid, value.replicate(1, grid.num_nodes()));
}

StateProfile StateProfile::from_function(const SpatialGrid& grid,
                                         const std::function<Vector(double)>& f) {
    Vector first = f(grid.node(0));
    Matrix values(first.size(), grid.num_nodes());
    values.col(0) = first;
    for (int i = 1; i < grid.num_nodes(); ++i) values.col(i) = f(grid.node(i));
    return StateProfile(grid, std::move(values));
}

std::string ValidationReport::describe() const {
    std::ostringstream oss;
    oss << "dimensions consistent : " << (dimensions_consistent ? "yes" : "no") << "\n"
        << "min lambda0           : " << lambda0_min << "\n"
        << "lambda0 positive      : " << (lambda0_positive ? "yes" : "no") << "\n"
        << "K sigma_min/sigma_max : " << K_singular_value_ratio << "\n"
        << "K condition           : " << K_condition << "\n"
        << "K invertible          : " << (K_invertible ? "yes" : "no") << "\n"
        << "well-posed            : " << (well_posed ? "yes" : "no");
    return oss.str();
}

ValidationReport validate_system(const HyperbolicSystem& sys, double rank_tol) {
    ValidationReport report;
    const int n = sys.state_dim();
    report.dimensions_consistent = sys.K().rows() == n && sys.K().cols() == n &&
                                   sys.L().rows() == n && sys.L().cols() == n &&
                                   sys.Ky().cols() == n && sys.Ly().cols() == n &&
                                   sys.Ky().rows() == sys.output_dim() &&
                                   sys.Ly().rows() == sys.output_dim() &&
                                   sys.coupling().dim() == n;

    report.lambda0_min = sys.lambda0().min_value();
    report.lambda0_positive = report.lambda0_min > 0.0;

    Eigen::JacobiSVD<Matrix> svd(sys.K());
    const double sigma_max = svd.singularValues()(0);
    const double sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
    report.K_singular_value_ratio = sigma_max > 0.0 ? sigma_min / sigma_max : 0.0;
    report.K_condition =
        report.K_singular_value_ratio > 0.0 ? 1.0 / report.K_singular_value_ratio : 0.0;
    report.K_invertible = report.K_singular_value_ratio > rank_tol;

    report.well_posed =
        report.dimensions_consistent && report.lambda0_positive && report.K_invertible;
    return report;
}

}  // namespace wavelq
