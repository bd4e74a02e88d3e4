#include "wavelq/riccati.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace wavelq {

namespace {

constexpr double kDivergenceGuard = 1e100;
constexpr double kSymmetryTolerance = 1e-10;
constexpr double kEigenvalueFloor = -1e-10;

// One application of the Riccati map Pi -> A*PiA + C*C - S*(R)^{-1}S with
// S = D*C + B*PiA and R = I + D*D + B*PiB. R >= I, so Cholesky always applies.
Matrix riccati_map(const DiscreteSystem& d, const Matrix& Pi) {
    const Matrix PiA = Pi * d.A_d;
    const Matrix PiB = Pi * d.B_d;
    const Matrix R = Matrix::Identity(d.input_dim(), d.input_dim()) +
                     d.D_d.transpose() * d.D_d + d.B_d.transpose() * PiB;
    const Matrix S = d.D_d.transpose() * d.C_d + d.B_d.transpose() * PiA;
    Eigen::LLT<Matrix> llt(R);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("riccati: inner matrix lost positive definiteness");
    }
    return d.A_d.transpose() * PiA + d.C_d.transpose() * d.C_d -
           S.transpose() * llt.solve(S);
}

}  // namespace

RiccatiSolution solve_care(const DiscreteSystem& d, const RiccatiOptions& opts) {
    const int n = d.state_dim();
    RiccatiSolution sol;
    sol.Pi = Matrix::Zero(n, n);
    for (long k = 0; k < opts.max_iters; ++k) {
        Matrix next = riccati_map(d, sol.Pi);
        sol.iterations = k + 1;
        if (!next.allFinite() || next.norm() > kDivergenceGuard) {
            sol.converged = false;
            sol.residual = care_residual(d, sol.Pi);
            return sol;
        }
        const double asymmetry = (next - next.transpose()).norm();
        if (asymmetry > kSymmetryTolerance * (1.0 + next.norm())) {
            throw std::runtime_error("riccati: iterate lost symmetry (numerical fault)");
        }
        next = 0.5 * (next + next.transpose().eval());
        const double change = (next - sol.Pi).norm();
        const bool done = change < opts.tol * (1.0 + sol.Pi.norm());
        sol.Pi = std::move(next);
        if (done) {
            sol.converged = true;
            break;
        }
    }
    sol.residual = care_residual(d, sol.Pi);
    return sol;
}

DiscreteSystem dual_system(const DiscreteSystem& d) {
    return DiscreteSystem{d.A_d.transpose(), d.C_d.transpose(), d.B_d.transpose(),
                          d.D_d.transpose(), d.period};
}

RiccatiSolution solve_fare(const DiscreteSystem& d, const RiccatiOptions& opts) {
    return solve_care(dual_system(d), opts);
}

double care_residual(const DiscreteSystem& d, const Matrix& Pi) {
    // defect of A*PiA - Pi + C*C = S*R^{-1}S, i.e. riccati_map(Pi) - Pi
    return (riccati_map(d, Pi) - Pi).norm();
}

double fare_residual(const DiscreteSystem& d, const Matrix& Pi) {
    return care_residual(dual_system(d), Pi);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

// T* L T - L + W = 0 by vectorization: (kron(T^T, T^T) - I) vec(L) = -vec(W).
LyapunovSolution stein_solution(const Matrix& T, const Matrix& W) {
    const Eigen::Index n = T.rows();
    LyapunovSolution sol;
    const Matrix Tt = T.transpose();
    Matrix system = kron(Tt, Tt) - Matrix::Identity(n * n, n * n);
    Eigen::FullPivLU<Matrix> lu(system);
    sol.solvable = lu.isInvertible();
    if (!sol.solvable) {
        sol.L = Matrix::Zero(n, n);
        sol.residual = std::numeric_limits<double>::quiet_NaN();
        sol.nonnegative = false;
        sol.exists = false;
        return sol;
    }
    const Eigen::Map<const Vector> w(W.data(), n * n);
    Vector x = lu.solve(-w);
    sol.L = Eigen::Map<const Matrix>(x.data(), n, n);
    sol.L = 0.5 * (sol.L + sol.L.transpose().eval());
    sol.residual = (Tt * sol.L * T - sol.L + W).norm();
    Eigen::SelfAdjointEigenSolver<Matrix> es(sol.L);
    sol.nonnegative = es.eigenvalues().minCoeff() >= kEigenvalueFloor;
    sol.exists = sol.solvable && sol.nonnegative;
    return sol;
}

}  // namespace

LyapunovSolution solve_output_lyapunov(const DiscreteSystem& d) {
    return stein_solution(d.A_d, d.C_d.transpose() * d.C_d);
}

LyapunovSolution solve_input_lyapunov(const DiscreteSystem& d) {
    return stein_solution(d.A_d.transpose(), d.B_d * d.B_d.transpose());
}

ComplexVector eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("eigenvalues: matrix must be square");
    }
    if (!a.allFinite()) {
        throw std::invalid_argument("eigenvalues: matrix must be finite");
    }
    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalues: QR iteration did not converge");
    }
    return es.eigenvalues();
}

double spectral_radius(const Matrix& a) {
    return eigenvalues(a).cwiseAbs().maxCoeff();
}

}  // namespace wavelq
