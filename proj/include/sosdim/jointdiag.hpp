#pragma once

// Generalized eigendecomposition of a matrix pair and orthogonal approximate
// joint diagonalization of a set of symmetric matrices by cyclic Jacobi
// (Givens) rotations.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "sosdim/errors.hpp"
#include "sosdim/tscore.hpp"

namespace sosdim {

/// Flips each column so that its largest-magnitude entry is positive.
inline void canonicalize_column_signs(Matrix& u) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index arg = 0;
        u.col(j).cwiseAbs().maxCoeff(&arg);
        if (u(arg, j) < 0.0) u.col(j) = -u.col(j);
    }
}

struct GeneralizedEigResult {
    Matrix gamma;     // rows ordered by decreasing value^2; gamma S0 gamma^T = I
    Vector values;    // gamma R gamma^T = diag(values)
    Matrix rotation;  // orthogonal U with gamma = U^T whitener
    Matrix whitener;  // S0^{-1/2}
};

/// Simultaneous diagonalization of an SPD matrix s0 and a symmetric matrix r.
inline GeneralizedEigResult generalized_eig(const Matrix& s0, const Matrix& r) {
    if (r.rows() != s0.rows() || r.cols() != s0.cols()) {
        throw InvalidInput("generalized_eig: matrix sizes differ");
    }
    Matrix whitener = sym_inv_sqrt(s0);
    const Matrix h = symmetrize(whitener * symmetrize(r) * whitener);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    if (eig.info() != Eigen::Success) throw InvalidInput("eigendecomposition failed");

    const auto p = h.rows();
    // start from descending eigenvalues so ties in value^2 keep the positive one first
    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.rbegin(), order.rend(), Eigen::Index{0});
    const Vector& ev = eig.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return ev(a) * ev(a) > ev(b) * ev(b);
    });

    Matrix u(p, p);
    Vector values(p);
    for (Eigen::Index k = 0; k < p; ++k) {
        u.col(k) = eig.eigenvectors().col(order[static_cast<std::size_t>(k)]);
        values(k) = ev(order[static_cast<std::size_t>(k)]);
    }
    canonicalize_column_signs(u);
    Matrix gamma = u.transpose() * whitener;
    return {std::move(gamma), std::move(values), std::move(u), std::move(whitener)};
}

struct JointDiagOptions {
    double tol = 1e-10;  // convergence threshold on the largest rotation angle of a sweep
    int max_sweeps = 100;
};

struct JointDiagResult {
    Matrix u;                      // orthogonal, p x p
    Matrix diag_profiles;          // |lags| x p, row k = diag(U^T H_k U)
    int sweeps_used = 0;
    bool converged = false;
    double final_off_criterion = 0.0;  // sum_k ||offdiag(U^T H_k U)||_F^2
    std::vector<double> objective_trace;  // sum_k ||diag(U^T H_k U)||^2, at U = I then after each sweep
};

/// sum_k ||diag(U^T H_k U)||^2
inline double diagonal_mass(const SymmetricMatrixSet& h, const Matrix& u) {
    double total = 0.0;
    for (const auto& m : h) total += (u.transpose() * m * u).diagonal().squaredNorm();
    return total;
}

inline double off_diagonal_mass(const SymmetricMatrixSet& h, const Matrix& u) {
    double total = 0.0;
    for (const auto& m : h) {
        const Matrix c = u.transpose() * m * u;
        total += c.squaredNorm() - c.diagonal().squaredNorm();
    }
    return total;
}

inline Matrix diag_profiles(const SymmetricMatrixSet& h, const Matrix& u) {
    Matrix out(static_cast<Eigen::Index>(h.size()), u.cols());
    for (std::size_t k = 0; k < h.size(); ++k) {
        out.row(static_cast<Eigen::Index>(k)) = (u.transpose() * h[k] * u).diagonal().transpose();
    }
    return out;
}

/// Maximizes sum_k ||diag(U^T H_k U)||^2 over orthogonal U.
///
/// Each sweep visits the pairs (i, j), i < j, row by row and applies the
/// rotation that is optimal for the 2x2 restriction of all matrices jointly.
/// Rotations smaller than `tol` are skipped; the run has converged once a
/// full sweep needs no rotation of size `tol` or more. Running out of sweeps
/// is reported through `converged`, not thrown.
inline JointDiagResult joint_diagonalize(const SymmetricMatrixSet& h,
                                         const JointDiagOptions& options = {}) {
    if (h.empty()) throw InvalidInput("joint_diagonalize: empty matrix set");
    if (!(options.tol > 0.0)) throw InvalidInput("joint_diagonalize: tol must be positive");
    if (options.max_sweeps < 1) throw InvalidInput("joint_diagonalize: max_sweeps must be >= 1");

    const auto p = static_cast<Eigen::Index>(h.dim());
    std::vector<Matrix> a(h.begin(), h.end());
    Matrix u = Matrix::Identity(p, p);

    JointDiagResult result;
    auto objective = [&] {
        double total = 0.0;
        for (const auto& m : a) total += m.diagonal().squaredNorm();
        return total;
    };
    result.objective_trace.push_back(objective());

    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        double largest_angle = 0.0;
        for (Eigen::Index i = 0; i + 1 < p; ++i) {
            for (Eigen::Index j = i + 1; j < p; ++j) {
                // G = sum_k g_k g_k^T with g_k = (a_ii - a_jj, 2 a_ij)
                double g00 = 0.0, g01 = 0.0, g11 = 0.0;
                for (const auto& m : a) {
                    const double d = m(i, i) - m(j, j);
                    const double o = m(i, j) + m(j, i);
                    g00 += d * d;
                    g01 += d * o;
                    g11 += o * o;
                }
                // (cos 2t, sin 2t) is the principal eigenvector of G
                const double angle = 0.25 * std::atan2(2.0 * g01, g00 - g11);
                largest_angle = std::max(largest_angle, std::abs(angle));
                if (std::abs(angle) < options.tol) continue;

                const double c = std::cos(angle);
                const double s = std::sin(angle);
                for (auto& m : a) {
                    // m <- G^T m G with G = [[c, -s], [s, c]] acting on (i, j)
                    const Vector ci = m.col(i);
                    m.col(i) = c * ci + s * m.col(j);
                    m.col(j) = c * m.col(j) - s * ci;
                    const Eigen::RowVectorXd ri = m.row(i);
                    m.row(i) = c * ri + s * m.row(j);
                    m.row(j) = c * m.row(j) - s * ri;
                }
                const Vector ui = u.col(i);
                u.col(i) = c * ui + s * u.col(j);
                u.col(j) = c * u.col(j) - s * ui;
            }
        }
        result.sweeps_used = sweep;
        result.objective_trace.push_back(objective());
        if (largest_angle < options.tol) {
            result.converged = true;
            break;
        }
    }

    canonicalize_column_signs(u);
    result.diag_profiles = diag_profiles(h, u);
    result.final_off_criterion = off_diagonal_mass(h, u);
    result.u = std::move(u);
    return result;
}

/// Column order that sorts components by decreasing sum of squared
/// pseudo-eigenvalues; ties fall back to the squared value at the first lag,
/// then the second, and so on, then to the original index.
inline std::vector<Eigen::Index> pseudo_eigenvalue_order(const Matrix& profiles) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(profiles.cols()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const Matrix sq = profiles.cwiseAbs2();
    const Eigen::RowVectorXd sums = sq.colwise().sum();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (sums(a) != sums(b)) return sums(a) > sums(b);
        for (Eigen::Index k = 0; k < sq.rows(); ++k) {
            if (sq(k, a) != sq(k, b)) return sq(k, a) > sq(k, b);
        }
        return false;
    });
    return order;
}

inline JointDiagResult order_by_pseudo_eigenvalues(JointDiagResult result, const LagSet& lags) {
    if (static_cast<std::size_t>(result.diag_profiles.rows()) != lags.size()) {
        throw InvalidInput("order_by_pseudo_eigenvalues: profile rows do not match the lag count");
    }
    const auto order = pseudo_eigenvalue_order(result.diag_profiles);
    Matrix u(result.u.rows(), result.u.cols());
    Matrix profiles(result.diag_profiles.rows(), result.diag_profiles.cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto dst = static_cast<Eigen::Index>(k);
        u.col(dst) = result.u.col(order[k]);
        profiles.col(dst) = result.diag_profiles.col(order[k]);
    }
    result.u = std::move(u);
    result.diag_profiles = std::move(profiles);
    return result;
}

}  // namespace sosdim
