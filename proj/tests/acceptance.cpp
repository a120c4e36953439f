// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every Monte Carlo cell uses the fixed master seed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sosdim/harness.hpp"
#include "sosdim/presets.hpp"
#include "sosdim/sosdim.hpp"
#include "test_support.hpp"

using namespace sosdim;
namespace oracle = sosdim::testing;

namespace {

constexpr std::uint64_t kSeed = 20190101;

struct Outcome {
    bool pass = false;
    std::string detail;
};

HarnessOptions mc_options(std::size_t reps) {
    HarnessOptions o;
    o.reps = reps;
    o.seed = kSeed;
    o.threads = default_thread_count();
    return o;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rejection_frequency(SettingName s, std::size_t n, const Estimator& e, std::size_t q, std::size_t reps) {
    const auto t = rejection_table(make_setting(s), {n}, {e}, q, {TestKind::kAsymptotic}, mc_options(reps));
    return t.cells.front().frequency();
}

Outcome null_size_h1() {
    const double f = rejection_frequency(SettingName::kH1, 2000, Estimator::amuse(), 3, 500);
    return {f >= 0.03 && f <= 0.075, "H1 AMUSE q=3 n=2000, 500 reps: rejection " + fmt("%.3f", f) + " in [0.03, 0.075]"};
}

Outcome power_h1() {
    const double f = rejection_frequency(SettingName::kH1, 1000, Estimator::sobi6(), 2, 200);
    return {f >= 0.99, "H1 SOBI6 q=2 n=1000, 200 reps: rejection " + fmt("%.3f", f) + " >= 0.99"};
}

Outcome size_h3() {
    const double f = rejection_frequency(SettingName::kH3, 5000, Estimator::sobi6(), 3, 500);
    return {f >= 0.03 && f <= 0.075, "H3 SOBI6 q=3 n=5000, 500 reps: rejection " + fmt("%.3f", f) + " in [0.03, 0.075]"};
}

Outcome amuse_long_range_h2() {
    const auto t = rejection_table(make_setting(SettingName::kH2), {200}, {Estimator::amuse(), Estimator::sobi6()}, 2,
                                   {TestKind::kAsymptotic}, mc_options(500));
    const double amuse = t.cells[0].frequency();
    const double sobi = t.cells[1].frequency();
    return {amuse <= 0.10 && sobi > 0.4, "H2 q=2 n=200, 500 reps: AMUSE " + fmt("%.3f", amuse) + " <= 0.10, SOBI6 " +
                                             fmt("%.3f", sobi) + " > 0.4"};
}

Outcome df_identity() {
    std::size_t checked = 0;
    for (std::size_t p = 1; p <= 12; ++p) {
        for (std::size_t q = 0; q < p; ++q) {
            for (std::size_t k = 1; k <= 12; ++k, ++checked) {
                std::size_t free = 0;
                for (std::size_t t = 0; t < k; ++t) {
                    for (std::size_t i = 0; i < p - q; ++i) {
                        for (std::size_t j = i; j < p - q; ++j) ++free;
                    }
                }
                if (chisq_degrees_of_freedom(k, p - q) != free) {
                    return {false, "mismatch at p=" + std::to_string(p) + " q=" + std::to_string(q)};
                }
            }
        }
    }
    return {true, "df = |T|(p-q)(p-q+1)/2 equals the free-entry count in all " + std::to_string(checked) + " cases"};
}

Outcome p_value_uniformity() {
    std::vector<double> p_values(2000);
    parallel_for(p_values.size(), default_thread_count(), [&](std::size_t rep) {
        const MultiSeries x(oracle::gaussian_matrix(5000, 3, derive_seed(kSeed, {6, rep})));
        p_values[rep] = noise_test(x, LagSet{1, 2}, 0, Method::kSobi).p_value;
    });
    const double ks = oracle::ks_uniform(p_values);
    return {ks <= 0.05, "white noise p=3 lags {1,2} T=5000, 2000 reps: KS distance " + fmt("%.4f", ks) + " <= 0.05"};
}

// Expected covariance of sqrt(T) vec(R_tau) for white noise: block diagonal
// over lags, each block diag(vec(J + I) / 2) (K - D + I).
Matrix expected_autocov_covariance(Eigen::Index r, Eigen::Index n_lags) {
    const Eigen::Index r2 = r * r;
    Matrix k = Matrix::Zero(r2, r2);
    Matrix d = Matrix::Zero(r2, r2);
    Vector half(r2);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) {
            // column-major vec: entry (i, j) sits at i + r j
            k(i + r * j, j + r * i) = 1.0;
            if (i == j) d(i + r * j, i + r * j) = 1.0;
            half(i + r * j) = i == j ? 1.0 : 0.5;
        }
    }
    const Matrix v0 = half.asDiagonal() * (k - d + Matrix::Identity(r2, r2));
    Matrix v = Matrix::Zero(n_lags * r2, n_lags * r2);
    for (Eigen::Index b = 0; b < n_lags; ++b) v.block(b * r2, b * r2, r2, r2) = v0;
    return v;
}

Outcome autocov_covariance_structure() {
    constexpr Eigen::Index p = 3;
    constexpr std::size_t reps = 2000;
    constexpr std::size_t length = 5000;
    const LagSet lags{1, 2};
    const Eigen::Index dim = static_cast<Eigen::Index>(lags.size()) * p * p;
    Matrix draws(static_cast<Eigen::Index>(reps), dim);
    parallel_for(reps, default_thread_count(), [&](std::size_t rep) {
        const MultiSeries x(oracle::gaussian_matrix(length, p, derive_seed(kSeed, {7, rep})));
        for (std::size_t t = 0; t < lags.size(); ++t) {
            const Matrix r = symmetrize(sample_autocov(x, lags[t]));
            draws.row(static_cast<Eigen::Index>(rep)).segment(static_cast<Eigen::Index>(t) * p * p, p * p) =
                std::sqrt(static_cast<double>(length)) * r.reshaped().transpose();
        }
    });
    const Matrix centered = draws.rowwise() - draws.colwise().mean();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(reps - 1);
    const Matrix expected = expected_autocov_covariance(p, static_cast<Eigen::Index>(lags.size()));
    const double worst = (cov - expected).cwiseAbs().maxCoeff();
    return {worst <= 0.1, "white noise p=3 lags {1,2} T=5000, 2000 reps: max |cov - V| = " + fmt("%.4f", worst) +
                              " <= 0.1 over all " + std::to_string(dim * dim) + " entries"};
}

Outcome affine_equivariance() {
    // D1 sources: five signals and five white-noise components
    const auto z = simulate_sources(make_setting(SettingName::kD1), 10000, kSeed);
    const auto base = estimated_sources(z, sobi(z, LagSet::sobi6()));
    double worst = 1.0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        const Matrix omega = oracle::random_invertible(10, derive_seed(kSeed, {8, k}));
        const MultiSeries x(z.values() * omega.transpose());
        const auto est = estimated_sources(x, sobi(x, LagSet::sobi6()));
        for (double c : oracle::matched_abs_correlations(est.values(), base.values())) worst = std::min(worst, c);
    }
    return {worst >= 0.999, "D1 sources, 20 random mixings, T=10000, SOBI6: min matched |corr| " + fmt("%.8f", worst) + " >= 0.999"};
}

Outcome jacobi_exactness() {
    double worst_off = 0.0;
    double worst_perm = 0.0;
    int cases = 0;
    for (Eigen::Index p : {2, 3, 5, 8, 10}) {
        for (std::size_t k : {1u, 2u, 6u, 12u}) {
            const Matrix q = oracle::random_orthogonal(p, derive_seed(kSeed, {9, static_cast<std::uint64_t>(p), k}));
            std::vector<Matrix> set;
            for (std::size_t i = 0; i < k; ++i) {
                const Matrix d = oracle::gaussian_matrix(p, 1, derive_seed(kSeed, {9, 100 + i, k})).col(0).asDiagonal();
                set.push_back(q * d * q.transpose());
                set.back() = 0.5 * (set.back() + set.back().transpose()).eval();
            }
            const auto r = joint_diagonalize(SymmetricMatrixSet(set));
            worst_off = std::max(worst_off, off_diagonal_mass(SymmetricMatrixSet(set), r.u));
            worst_perm = std::max(worst_perm, oracle::distance_to_signed_permutation(r.u.transpose() * q));
            ++cases;
        }
    }
    return {worst_off <= 1e-10 && worst_perm <= 1e-8,
            std::to_string(cases) + " commuting sets, p <= 10, up to 12 matrices: off-diagonal mass " +
                fmt("%.2e", worst_off) + " <= 1e-10, signed-permutation distance " + fmt("%.2e", worst_perm) +
                " <= 1e-8"};
}

Outcome sound_analog() {
    const auto setting = make_setting(SettingName::kSound);
    const std::vector<Estimator> estimators{Estimator::amuse(), Estimator::sobi6(), Estimator::sobi12()};
    const Strategy strategies[] = {Strategy::kDivideAndConquer, Strategy::kForward, Strategy::kBackward};
    bool all = true;
    std::ostringstream detail;
    detail << "p=20 d=3 n=10000 t5 noise, 50 seeds, need >= 48 with d_hat=3:";
    for (auto s : strategies) {
        const auto t = dimension_table(setting, {10000}, estimators, s, {TestKind::kAsymptotic}, mc_options(50));
        for (const auto& c : t.cells) {
            all = all && c.counts[3] >= 48;
            detail << ' ' << c.estimator << '/' << to_string(s) << '=' << c.counts[3];
        }
    }
    return {all, detail.str()};
}

Outcome speed_ordering() {
    const auto x = simulate(make_setting(SettingName::kSound), 10000, kSeed).first;
    double asymptotic = 0.0;
    double bootstrap = 0.0;
    for (const auto& e : {Estimator::amuse(), Estimator::sobi6()}) {
        EstimateOptions opts;
        auto start = std::chrono::steady_clock::now();
        estimate_dimension(x, e.lags, 0.05, Strategy::kDivideAndConquer, e.method, opts);
        asymptotic += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        opts.kind = TestKind::kBootstrap;
        opts.bootstrap.replicates = 200;
        opts.bootstrap.seed = kSeed;
        start = std::chrono::steady_clock::now();
        estimate_dimension(x, e.lags, 0.05, Strategy::kDivideAndConquer, e.method, opts);
        bootstrap += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    const double ratio = bootstrap / asymptotic;
    return {ratio >= 10.0, "sound analog n=10000, AMUSE + SOBI6 divide-and-conquer, 1 thread: asymptotic " +
                               fmt("%.3f", asymptotic) + " s, bootstrap B=200 " + fmt("%.2f", bootstrap) +
                               " s, ratio " + fmt("%.0f", ratio) + " >= 10"};
}

Outcome disclosure() {
    return {true,
            "disclosure: the full 2000-replicate grids over five sample sizes and nine estimators are not run; "
            "criteria 1-4 and 10-11 use the scaled cells above and 5-9 are property checks"};
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{
        null_size_h1,     power_h1,          size_h3,       amuse_long_range_h2, df_identity, p_value_uniformity,
        autocov_covariance_structure, affine_equivariance, jacobi_exactness, sound_analog, speed_ordering, disclosure};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %zu: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
