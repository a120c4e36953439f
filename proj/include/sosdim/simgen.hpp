#pragma once

// Latent process generators, mixing, and named simulation settings.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sosdim/errors.hpp"
#include "sosdim/parallel.hpp"
#include "sosdim/tscore.hpp"

namespace sosdim {

enum class ProcessKind { kAR, kMA, kARMA, kWhiteNoise };

struct Innovation {
    enum class Law { kGaussian, kStudentT };
    Law law = Law::kGaussian;
    double df = 0.0;  // Student t only; must exceed 2 so the variance exists

    static Innovation gaussian() { return {}; }
    static Innovation student_t(double df) {
        if (!(df > 2.0)) throw InvalidInput("Student t innovations need df > 2");
        return {Law::kStudentT, df};
    }
    friend bool operator==(const Innovation&, const Innovation&) = default;
};

/// Spectral radius of the AR companion matrix; stationarity needs < 1.
inline double ar_spectral_radius(const std::vector<double>& ar) {
    if (ar.empty()) return 0.0;
    const auto k = static_cast<Eigen::Index>(ar.size());
    Matrix companion = Matrix::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) companion(0, i) = ar[static_cast<std::size_t>(i)];
    if (k > 1) companion.bottomLeftCorner(k - 1, k - 1).setIdentity();
    Eigen::EigenSolver<Matrix> eig(companion, false);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

/// y_t = sum_i ar_i y_{t-i} + e_t + sum_j ma_j e_{t-j} with unit-variance
/// innovations e_t.
class ProcessSpec {
public:
    static ProcessSpec white_noise(Innovation innovation = Innovation::gaussian()) {
        return ProcessSpec(ProcessKind::kWhiteNoise, {}, {}, innovation);
    }
    static ProcessSpec ar(std::vector<double> coeffs, Innovation innovation = Innovation::gaussian()) {
        return ProcessSpec(ProcessKind::kAR, std::move(coeffs), {}, innovation);
    }
    static ProcessSpec ma(std::vector<double> coeffs, Innovation innovation = Innovation::gaussian()) {
        return ProcessSpec(ProcessKind::kMA, {}, std::move(coeffs), innovation);
    }
    static ProcessSpec arma(std::vector<double> ar_coeffs, std::vector<double> ma_coeffs,
                            Innovation innovation = Innovation::gaussian()) {
        return ProcessSpec(ProcessKind::kARMA, std::move(ar_coeffs), std::move(ma_coeffs),
                           innovation);
    }

    ProcessSpec with_variance_normalized(bool on) const {
        ProcessSpec copy = *this;
        copy.variance_normalized_ = on;
        return copy;
    }

    ProcessKind kind() const noexcept { return kind_; }
    const std::vector<double>& ar_coeffs() const noexcept { return ar_; }
    const std::vector<double>& ma_coeffs() const noexcept { return ma_; }
    const Innovation& innovation() const noexcept { return innovation_; }
    bool variance_normalized() const noexcept { return variance_normalized_; }
    std::size_t max_order() const noexcept { return std::max(ar_.size(), ma_.size()); }

    friend bool operator==(const ProcessSpec&, const ProcessSpec&) = default;

private:
    ProcessSpec(ProcessKind kind, std::vector<double> ar, std::vector<double> ma, Innovation innovation)
        : kind_(kind), ar_(std::move(ar)), ma_(std::move(ma)), innovation_(innovation) {
        const bool want_ar = kind_ == ProcessKind::kAR || kind_ == ProcessKind::kARMA;
        const bool want_ma = kind_ == ProcessKind::kMA || kind_ == ProcessKind::kARMA;
        if (want_ar == ar_.empty()) throw InvalidInput("AR coefficients do not match the process kind");
        if (want_ma == ma_.empty()) throw InvalidInput("MA coefficients do not match the process kind");
        for (double c : ar_) if (!std::isfinite(c)) throw InvalidInput("non-finite AR coefficient");
        for (double c : ma_) if (!std::isfinite(c)) throw InvalidInput("non-finite MA coefficient");
        if (!(ar_spectral_radius(ar_) < 1.0)) {
            throw InvalidInput("AR part is not stationary (companion spectral radius >= 1)");
        }
        if (innovation_.law == Innovation::Law::kStudentT && !(innovation_.df > 2.0)) {
            throw InvalidInput("Student t innovations need df > 2");
        }
    }

    ProcessKind kind_;
    std::vector<double> ar_;
    std::vector<double> ma_;
    Innovation innovation_;
    bool variance_normalized_ = true;
};

/// MA(infinity) weights psi_0..psi_{count-1}.
inline std::vector<double> psi_weights(const ProcessSpec& spec, std::size_t count) {
    const auto& ar = spec.ar_coeffs();
    const auto& ma = spec.ma_coeffs();
    std::vector<double> psi(count, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        double v = j == 0 ? 1.0 : (j <= ma.size() ? ma[j - 1] : 0.0);
        for (std::size_t i = 1; i <= ar.size() && i <= j; ++i) v += ar[i - 1] * psi[j - i];
        psi[j] = v;
    }
    return psi;
}

/// Autocovariances gamma(0..max_lag) of the unnormalized process (unit innovation variance).
inline std::vector<double> theoretical_autocov(const ProcessSpec& spec, std::size_t max_lag) {
    // psi decays geometrically at the companion spectral radius
    const double rho = ar_spectral_radius(spec.ar_coeffs());
    std::size_t count = spec.max_order() + max_lag + 1;
    if (rho > 0.0) count += static_cast<std::size_t>(std::ceil(40.0 / -std::log(rho)));
    const auto psi = psi_weights(spec, count);
    std::vector<double> gamma(max_lag + 1, 0.0);
    for (std::size_t h = 0; h <= max_lag; ++h) {
        for (std::size_t j = 0; j + h < count; ++j) gamma[h] += psi[j] * psi[j + h];
    }
    return gamma;
}

inline std::size_t burn_in(const ProcessSpec& spec) { return 1000 + 10 * spec.max_order(); }

/// Simulates n values after a burn-in. Normalized specs are scaled to unit
/// theoretical marginal variance.
inline Vector generate(const ProcessSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw InvalidInput("generate: n must be positive");
    std::mt19937_64 rng(seed);
    const std::size_t burn = burn_in(spec);
    const std::size_t total = n + burn;

    std::vector<double> e(total);
    if (spec.innovation().law == Innovation::Law::kGaussian) {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (auto& v : e) v = dist(rng);
    } else {
        const double df = spec.innovation().df;
        std::student_t_distribution<double> dist(df);
        const double scale = std::sqrt((df - 2.0) / df);
        for (auto& v : e) v = scale * dist(rng);
    }

    const auto& ar = spec.ar_coeffs();
    const auto& ma = spec.ma_coeffs();
    std::vector<double> y(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double v = e[t];
        for (std::size_t j = 1; j <= ma.size() && j <= t; ++j) v += ma[j - 1] * e[t - j];
        for (std::size_t i = 1; i <= ar.size() && i <= t; ++i) v += ar[i - 1] * y[t - i];
        y[t] = v;
    }

    const double scale =
        spec.variance_normalized() ? 1.0 / std::sqrt(theoretical_autocov(spec, 0)[0]) : 1.0;
    Vector out(static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) out(static_cast<Eigen::Index>(t)) = scale * y[burn + t];
    return out;
}

enum class MixingKind { kIdentity, kFixedMatrix, kRandomUniform01 };

struct Mixing {
    MixingKind kind = MixingKind::kIdentity;
    Matrix fixed;  // kFixedMatrix only

    static Mixing identity() { return {}; }
    static Mixing random_uniform01() { return {MixingKind::kRandomUniform01, {}}; }
    static Mixing fixed_matrix(Matrix omega) { return {MixingKind::kFixedMatrix, std::move(omega)}; }
};

inline constexpr double kMaxMixingCondition = 1e8;

inline double condition_number(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

/// x_t = omega z_t for every row. Returns the mixed series and omega.
inline std::pair<MultiSeries, Matrix> mix(const MultiSeries& sources, const Mixing& mixing,
                                          std::uint64_t seed) {
    const auto p = static_cast<Eigen::Index>(sources.dim());
    Matrix omega;
    switch (mixing.kind) {
        case MixingKind::kIdentity:
            omega = Matrix::Identity(p, p);
            break;
        case MixingKind::kFixedMatrix:
            if (mixing.fixed.rows() != p || mixing.fixed.cols() != p) {
                throw InvalidInput("mixing matrix has the wrong size");
            }
            if (!(condition_number(mixing.fixed) < kMaxMixingCondition)) {
                throw InvalidInput("mixing matrix is singular or ill-conditioned");
            }
            omega = mixing.fixed;
            break;
        case MixingKind::kRandomUniform01: {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            do {
                omega.resize(p, p);
                for (Eigen::Index j = 0; j < p; ++j) {
                    for (Eigen::Index i = 0; i < p; ++i) omega(i, j) = unif(rng);
                }
            } while (!(condition_number(omega) < kMaxMixingCondition));
            break;
        }
    }
    if (mixing.kind == MixingKind::kIdentity) return {sources, std::move(omega)};
    return {MultiSeries(sources.values() * omega.transpose()), std::move(omega)};
}

enum class SettingName { kH1, kH2, kH3, kD1, kD2, kD3, kSound, kCustom };

struct SimSetting {
    SettingName name = SettingName::kCustom;
    std::vector<ProcessSpec> processes;  // signals first, then noise
    std::size_t p = 0;
    std::size_t d = 0;
    Mixing mixing;

    static SimSetting custom(std::vector<ProcessSpec> processes, Mixing mixing = Mixing::identity(),
                             SettingName name = SettingName::kCustom) {
        SimSetting s;
        s.name = name;
        s.p = processes.size();
        s.d = 0;
        for (const auto& spec : processes) s.d += spec.kind() != ProcessKind::kWhiteNoise ? 1 : 0;
        s.processes = std::move(processes);
        s.mixing = std::move(mixing);
        return s;
    }
};

inline std::string_view to_string(SettingName n) {
    switch (n) {
        case SettingName::kH1: return "H1";
        case SettingName::kH2: return "H2";
        case SettingName::kH3: return "H3";
        case SettingName::kD1: return "D1";
        case SettingName::kD2: return "D2";
        case SettingName::kD3: return "D3";
        case SettingName::kSound: return "sound";
        case SettingName::kCustom: return "custom";
    }
    return "?";
}

/// Latent sources of one replicate; component k draws from stream (seed, 1, k).
inline MultiSeries simulate_sources(const SimSetting& setting, std::size_t n, std::uint64_t seed) {
    Matrix z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(setting.p));
    for (std::size_t k = 0; k < setting.p; ++k) {
        z.col(static_cast<Eigen::Index>(k)) = generate(setting.processes[k], n, derive_seed(seed, {1, k}));
    }
    return MultiSeries(std::move(z));
}

/// Sources mixed per the setting; the mixing draw uses stream (seed, 2).
inline std::pair<MultiSeries, Matrix> simulate(const SimSetting& setting, std::size_t n,
                                               std::uint64_t seed) {
    return mix(simulate_sources(setting, n, seed), setting.mixing, derive_seed(seed, {2}));
}

}  // namespace sosdim
