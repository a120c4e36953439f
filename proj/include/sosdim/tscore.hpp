#pragma once

// Time-series containers and the second-order moment estimators every
// unmixing method is built on.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "sosdim/errors.hpp"

namespace sosdim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A T x p real time series, one row per time point.
class MultiSeries {
public:
    explicit MultiSeries(Matrix values) : values_(std::move(values)) {
        if (values_.rows() < 2) {
            throw InvalidInput("series needs at least 2 time points, got " +
                               std::to_string(values_.rows()));
        }
        if (values_.cols() < 1) {
            throw InvalidInput("series needs at least 1 component");
        }
        if (!values_.allFinite()) {
            throw InvalidInput("series contains non-finite values");
        }
    }

    const Matrix& values() const noexcept { return values_; }
    std::size_t length() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.cols()); }

private:
    Matrix values_;
};

/// Strictly increasing set of positive lags.
class LagSet {
public:
    LagSet(std::initializer_list<std::size_t> lags) : LagSet(std::vector<std::size_t>(lags)) {}

    explicit LagSet(std::vector<std::size_t> lags) : lags_(std::move(lags)) {
        if (lags_.empty()) throw InvalidInput("lag set is empty");
        for (std::size_t i = 0; i < lags_.size(); ++i) {
            if (lags_[i] == 0) throw InvalidInput("lags must be positive");
            if (i > 0 && lags_[i] <= lags_[i - 1]) {
                throw InvalidInput("lags must be strictly increasing without duplicates");
            }
        }
    }

    /// {1, ..., k}
    static LagSet range(std::size_t k) {
        std::vector<std::size_t> lags(k);
        for (std::size_t i = 0; i < k; ++i) lags[i] = i + 1;
        return LagSet(std::move(lags));
    }

    static LagSet amuse() { return range(1); }
    static LagSet sobi6() { return range(6); }
    static LagSet sobi12() { return range(12); }

    const std::vector<std::size_t>& values() const noexcept { return lags_; }
    std::size_t size() const noexcept { return lags_.size(); }
    std::size_t max() const noexcept { return lags_.back(); }
    std::size_t operator[](std::size_t i) const { return lags_[i]; }
    auto begin() const noexcept { return lags_.begin(); }
    auto end() const noexcept { return lags_.end(); }

    friend bool operator==(const LagSet&, const LagSet&) = default;

private:
    std::vector<std::size_t> lags_;
};

inline bool is_symmetric(const Matrix& m, double rel_tol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// Same-sized symmetric matrices, one per lag of the lag set they were built from.
class SymmetricMatrixSet {
public:
    SymmetricMatrixSet() = default;

    explicit SymmetricMatrixSet(std::vector<Matrix> matrices) : matrices_(std::move(matrices)) {
        if (matrices_.empty()) return;
        const auto p = matrices_.front().rows();
        for (const auto& m : matrices_) {
            if (m.rows() != p || m.cols() != p) {
                throw InvalidInput("matrix set members must all be square of the same size");
            }
            if (!m.allFinite()) throw InvalidInput("matrix set contains non-finite values");
            if (!is_symmetric(m)) throw InvalidInput("matrix set member is not symmetric");
        }
    }

    std::size_t size() const noexcept { return matrices_.size(); }
    bool empty() const noexcept { return matrices_.empty(); }
    std::size_t dim() const noexcept {
        return matrices_.empty() ? 0 : static_cast<std::size_t>(matrices_.front().rows());
    }
    const Matrix& operator[](std::size_t i) const { return matrices_[i]; }
    const std::vector<Matrix>& matrices() const noexcept { return matrices_; }
    auto begin() const noexcept { return matrices_.begin(); }
    auto end() const noexcept { return matrices_.end(); }

private:
    std::vector<Matrix> matrices_;
};

inline Vector column_means(const MultiSeries& x) { return x.values().colwise().mean().transpose(); }

inline MultiSeries center(const MultiSeries& x) {
    Matrix c = x.values().rowwise() - x.values().colwise().mean();
    // second pass removes the rounding residue left by large means
    c.rowwise() -= c.colwise().mean();
    return MultiSeries(std::move(c));
}

enum class AutocovDivisor {
    kLagAdjusted,  // 1 / (T - tau)
    kLength,       // 1 / T
};

namespace detail {

inline Matrix lagged_cross_moment(const Matrix& centered, std::size_t lag, double divisor) {
    const auto n = static_cast<Eigen::Index>(centered.rows()) - static_cast<Eigen::Index>(lag);
    const auto l = static_cast<Eigen::Index>(lag);
    Matrix s = centered.topRows(n).transpose() * centered.middleRows(l, n);
    s /= divisor;
    return s;
}

}  // namespace detail

/// (1/T) sum (x_t - xbar)(x_t - xbar)^T, symmetric by construction.
inline Matrix sample_cov(const MultiSeries& x) {
    const Matrix c = x.values().rowwise() - x.values().colwise().mean();
    Matrix s = detail::lagged_cross_moment(c, 0, static_cast<double>(x.length()));
    return (s + s.transpose()) * 0.5;
}

/// Lag-tau autocovariance around the global mean. Not symmetric in general.
/// tau = 0 is accepted so the covariance can be cross-checked against it.
inline Matrix sample_autocov(const MultiSeries& x, std::size_t tau,
                             AutocovDivisor divisor = AutocovDivisor::kLagAdjusted) {
    if (tau >= x.length()) throw LagTooLarge(tau, x.length());
    const Matrix c = x.values().rowwise() - x.values().colwise().mean();
    const double denom = divisor == AutocovDivisor::kLagAdjusted
                             ? static_cast<double>(x.length() - tau)
                             : static_cast<double>(x.length());
    Matrix s = detail::lagged_cross_moment(c, tau, denom);
    if (tau == 0) s = (s + s.transpose()) * 0.5;
    return s;
}

inline Matrix symmetrize(const Matrix& s) {
    if (s.rows() != s.cols()) throw InvalidInput("symmetrize needs a square matrix");
    return (s + s.transpose()) * 0.5;
}

/// Relative floor on eigenvalues accepted by sym_inv_sqrt.
inline constexpr double kEigenvalueFloor = 1e-12;

/// Unique symmetric positive-definite M with M S M = I.
inline Matrix sym_inv_sqrt(const Matrix& s) {
    if (s.rows() != s.cols() || s.rows() == 0) {
        throw InvalidInput("sym_inv_sqrt needs a non-empty square matrix");
    }
    if (!s.allFinite()) throw InvalidInput("sym_inv_sqrt input contains non-finite values");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(s));
    if (eig.info() != Eigen::Success) throw InvalidInput("eigendecomposition failed");
    const Vector& values = eig.eigenvalues();  // ascending
    const double largest = values(values.size() - 1);
    const double floor = kEigenvalueFloor * std::max(largest, 0.0);
    if (largest <= 0.0 || values(0) <= floor) throw NearSingularCovariance(values(0), floor);
    const Matrix& v = eig.eigenvectors();
    Matrix m = v * values.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
    return symmetrize(m);
}

/// The whitened symmetrized autocovariances S0^{-1/2} R_tau S0^{-1/2}, one per lag.
inline SymmetricMatrixSet standardized_autocovs(const MultiSeries& x, const LagSet& lags,
                                                const Matrix& cov_inv_sqrt) {
    if (lags.max() >= x.length()) throw LagTooLarge(lags.max(), x.length());
    std::vector<Matrix> out;
    out.reserve(lags.size());
    const Matrix c = x.values().rowwise() - x.values().colwise().mean();
    for (auto tau : lags) {
        const Matrix r = symmetrize(
            detail::lagged_cross_moment(c, tau, static_cast<double>(x.length() - tau)));
        out.push_back(symmetrize(cov_inv_sqrt * r * cov_inv_sqrt));
    }
    return SymmetricMatrixSet(std::move(out));
}

inline SymmetricMatrixSet standardized_autocovs(const MultiSeries& x, const LagSet& lags) {
    if (lags.max() >= x.length()) throw LagTooLarge(lags.max(), x.length());
    return standardized_autocovs(x, lags, sym_inv_sqrt(sample_cov(x)));
}

}  // namespace sosdim
