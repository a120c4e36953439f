#pragma once

// AMUSE and SOBI unmixing estimators.

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "sosdim/errors.hpp"
#include "sosdim/jointdiag.hpp"
#include "sosdim/tscore.hpp"

namespace sosdim {

enum class Method { kAmuse, kSobi };

inline std::string_view to_string(Method m) { return m == Method::kAmuse ? "AMUSE" : "SOBI"; }

struct UnmixingResult {
    Matrix gamma;     // U^T S0^{-1/2}; rows are unmixing vectors, signals first
    Matrix u;         // orthogonal rotation in the whitened space
    Matrix whitener;  // S0^{-1/2}
    SymmetricMatrixSet h;
    LagSet lags;
    Vector pseudo_sums;  // sum over lags of squared diag(U^T H U), non-increasing
    Method method = Method::kSobi;
    bool converged = true;
    int sweeps_used = 0;
};

inline UnmixingResult amuse(const MultiSeries& x, std::size_t tau) {
    if (tau == 0) throw InvalidInput("AMUSE lag must be positive");
    if (tau >= x.length()) throw LagTooLarge(tau, x.length());
    const Matrix r = symmetrize(sample_autocov(x, tau));
    auto ge = generalized_eig(sample_cov(x), r);
    SymmetricMatrixSet h({symmetrize(ge.whitener * r * ge.whitener)});
    Vector sums = ge.values.cwiseAbs2();
    return UnmixingResult{std::move(ge.gamma), std::move(ge.rotation), std::move(ge.whitener),
                          std::move(h),        LagSet{tau},           std::move(sums),
                          Method::kAmuse,      true,                  0};
}

inline UnmixingResult sobi(const MultiSeries& x, const LagSet& lags,
                           const JointDiagOptions& options = {}) {
    if (lags.max() >= x.length()) throw LagTooLarge(lags.max(), x.length());
    Matrix whitener = sym_inv_sqrt(sample_cov(x));
    auto h = standardized_autocovs(x, lags, whitener);
    auto jd = order_by_pseudo_eigenvalues(joint_diagonalize(h, options), lags);
    Matrix gamma = jd.u.transpose() * whitener;
    Vector sums = jd.diag_profiles.cwiseAbs2().colwise().sum().transpose();
    return UnmixingResult{std::move(gamma), std::move(jd.u), std::move(whitener),
                          std::move(h),     lags,            std::move(sums),
                          Method::kSobi,    jd.converged,    jd.sweeps_used};
}

/// Dispatches on `method`; AMUSE takes the single lag of `lags`.
inline UnmixingResult unmix(const MultiSeries& x, const LagSet& lags, Method method,
                            const JointDiagOptions& options = {}) {
    if (method == Method::kAmuse) {
        if (lags.size() != 1) throw InvalidInput("AMUSE takes exactly one lag");
        return amuse(x, lags[0]);
    }
    return sobi(x, lags, options);
}

/// Rows z_t = gamma (x_t - xbar).
inline MultiSeries estimated_sources(const MultiSeries& x, const UnmixingResult& r) {
    if (static_cast<std::size_t>(r.gamma.cols()) != x.dim()) {
        throw InvalidInput("estimated_sources: unmixing matrix has " +
                           std::to_string(r.gamma.cols()) + " columns, series has " +
                           std::to_string(x.dim()) + " components");
    }
    const Matrix c = x.values().rowwise() - x.values().colwise().mean();
    return MultiSeries(c * r.gamma.transpose());
}

}  // namespace sosdim
