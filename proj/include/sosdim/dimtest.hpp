#pragma once

// White-noise subspace tests and the sequential signal-dimension estimators
// built on them.
//
// For a candidate signal count q the last r = p - q columns W of the ordered
// rotation U span the hypothetical noise subspace. The statistic is the mean
// squared entry of the blocks D_tau = W^T H_tau W,
//
//     m_q = sum_tau ||D_tau||_F^2 / (|lags| r^2),
//
// and under the null T |lags| r^2 m_q is asymptotically chi-squared with
// |lags| r (r + 1) / 2 degrees of freedom.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sosdim/bss.hpp"
#include "sosdim/chisq.hpp"
#include "sosdim/errors.hpp"
#include "sosdim/parallel.hpp"
#include "sosdim/tscore.hpp"

namespace sosdim {

enum class TestKind { kAsymptotic, kBootstrap };
enum class Strategy { kForward, kBackward, kDivideAndConquer };

inline std::string_view to_string(TestKind k) {
    return k == TestKind::kAsymptotic ? "asymptotic" : "bootstrap";
}

inline std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::kForward: return "forward";
        case Strategy::kBackward: return "backward";
        case Strategy::kDivideAndConquer: return "divide_and_conquer";
    }
    return "?";
}

struct TestResult {
    std::size_t q = 0;
    std::size_t r = 0;
    double m_hat = 0.0;
    double scaled_stat = 0.0;
    std::size_t df = 0;
    double p_value = std::numeric_limits<double>::quiet_NaN();  // NaN until calibrated
    LagSet lags{1};
    Method method = Method::kSobi;
    TestKind kind = TestKind::kAsymptotic;
    std::size_t length = 0;  // T
    bool converged = true;
};

/// Free entries in `n_lags` symmetric r x r matrices.
constexpr std::size_t chisq_degrees_of_freedom(std::size_t n_lags, std::size_t r) {
    return n_lags * r * (r + 1) / 2;
}

namespace detail {

inline void check_q(std::size_t q, std::size_t p) {
    if (q >= p) {
        throw InvalidInput("q = " + std::to_string(q) + " is out of range [0, " +
                           std::to_string(p - 1) + "]");
    }
}

}  // namespace detail

/// W^T H_tau W for the trailing p - q columns W of the ordered rotation.
inline std::vector<Matrix> noise_submatrices(const UnmixingResult& r, std::size_t q) {
    const auto p = static_cast<std::size_t>(r.u.cols());
    detail::check_q(q, p);
    const auto w = r.u.rightCols(static_cast<Eigen::Index>(p - q));
    std::vector<Matrix> out;
    out.reserve(r.h.size());
    for (const auto& h : r.h) out.push_back(symmetrize(w.transpose() * h * w));
    return out;
}

/// Statistic and its chi-squared scaling; p_value is left unset.
inline TestResult test_statistic(const UnmixingResult& r, std::size_t q, std::size_t length) {
    const auto blocks = noise_submatrices(r, q);
    const std::size_t rank = static_cast<std::size_t>(r.u.cols()) - q;
    const std::size_t n_lags = r.h.size();
    double sum = 0.0;
    for (const auto& d : blocks) sum += d.squaredNorm();
    const double denom = static_cast<double>(n_lags * rank * rank);

    TestResult t;
    t.q = q;
    t.r = rank;
    t.m_hat = sum / denom;
    t.scaled_stat = static_cast<double>(length) * denom * t.m_hat;
    t.df = chisq_degrees_of_freedom(n_lags, rank);
    t.lags = r.lags;
    t.method = r.method;
    t.length = length;
    t.converged = r.converged;
    return t;
}

inline TestResult asymptotic_test(const UnmixingResult& r, std::size_t q, std::size_t length) {
    auto t = test_statistic(r, q, length);
    t.p_value = chisq_sf(t.scaled_stat, static_cast<double>(t.df));
    return t;
}

inline TestResult noise_test(const MultiSeries& x, const LagSet& lags, std::size_t q,
                             Method method, const JointDiagOptions& options = {}) {
    detail::check_q(q, x.dim());
    return asymptotic_test(unmix(x, lags, method, options), q, x.length());
}

struct BootstrapOptions {
    std::size_t replicates = 200;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    JointDiagOptions jd{};
};

/// Resampling calibration of the statistic: the first q estimated sources are
/// kept, the last p - q are resampled jointly over time with replacement, the
/// result is remixed with the inverse unmixing matrix and the statistic is
/// recomputed. p = (1 + #{m* >= m}) / (B + 1).
inline TestResult bootstrap_test(const MultiSeries& x, const UnmixingResult& fit, std::size_t q,
                                 const BootstrapOptions& options) {
    if (options.replicates < 1) throw InvalidInput("bootstrap needs at least one replicate");
    auto observed = test_statistic(fit, q, x.length());
    const Matrix z = estimated_sources(x, fit).values();
    const Matrix mixing_t = fit.gamma.inverse().transpose();
    const auto n = z.rows();
    const auto p = z.cols();
    const auto rank = static_cast<Eigen::Index>(p) - static_cast<Eigen::Index>(q);

    std::vector<char> exceeds(options.replicates, 0);
    parallel_for(options.replicates, options.threads, [&](std::size_t b) {
        std::mt19937_64 rng(derive_seed(options.seed, {b}));
        std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
        Matrix zb = z;
        for (Eigen::Index t = 0; t < n; ++t) {
            zb.row(t).tail(rank) = z.row(pick(rng)).tail(rank);
        }
        const MultiSeries xb(zb * mixing_t);
        const auto star = test_statistic(unmix(xb, fit.lags, fit.method, options.jd), q, xb.length());
        exceeds[b] = star.m_hat >= observed.m_hat ? 1 : 0;
    });
    std::size_t count = 0;
    for (char e : exceeds) count += static_cast<std::size_t>(e);
    observed.p_value = static_cast<double>(1 + count) / static_cast<double>(options.replicates + 1);
    observed.kind = TestKind::kBootstrap;
    return observed;
}

inline TestResult bootstrap_noise_test(const MultiSeries& x, const LagSet& lags, std::size_t q,
                                       Method method, const BootstrapOptions& options) {
    detail::check_q(q, x.dim());
    return bootstrap_test(x, unmix(x, lags, method, options.jd), q, options);
}

struct TraceEntry {
    std::size_t q = 0;
    double stat = 0.0;
    std::size_t df = 0;
    double p_value = 0.0;
    bool converged = true;
};

struct DimensionEstimate {
    std::size_t d_hat = 0;
    Strategy strategy = Strategy::kDivideAndConquer;
    double alpha = 0.05;
    std::vector<TraceEntry> trace;  // in evaluation order
    bool converged = true;          // false if any fit behind the trace failed to converge
    bool monotone = true;           // false if the evaluated p-values broke the reject-then-accept pattern
};

/// True when every evaluated rejection (p < alpha) sits at a smaller q than every acceptance.
inline bool is_monotone_trace(const std::vector<TraceEntry>& trace, double alpha) {
    std::size_t max_reject = 0;
    bool any_reject = false;
    std::size_t min_accept = std::numeric_limits<std::size_t>::max();
    for (const auto& e : trace) {
        if (e.p_value < alpha) {
            any_reject = true;
            max_reject = std::max(max_reject, e.q);
        } else {
            min_accept = std::min(min_accept, e.q);
        }
    }
    return !any_reject || max_reject < min_accept;
}

/// Applies a sequencing strategy to the tests H_0q, q = 0..p-1, evaluated
/// lazily through `evaluate`. Every q is evaluated at most once.
inline DimensionEstimate sequence_tests(std::size_t p, double alpha, Strategy strategy,
                                        const std::function<TraceEntry(std::size_t)>& evaluate) {
    if (p < 1) throw InvalidInput("dimension must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");

    DimensionEstimate est;
    est.strategy = strategy;
    est.alpha = alpha;
    std::map<std::size_t, double> seen;
    auto p_value = [&](std::size_t q) {
        if (auto it = seen.find(q); it != seen.end()) return it->second;
        auto e = evaluate(q);
        e.q = q;
        est.converged = est.converged && e.converged;
        est.trace.push_back(e);
        seen.emplace(q, e.p_value);
        return e.p_value;
    };
    auto forward = [&] {
        for (std::size_t q = 0; q < p; ++q) {
            if (p_value(q) >= alpha) return q;
        }
        return p;
    };

    switch (strategy) {
        case Strategy::kForward:
            est.d_hat = forward();
            break;
        case Strategy::kBackward: {
            est.d_hat = 0;
            for (std::size_t q = p; q-- > 0;) {
                if (p_value(q) < alpha) {
                    est.d_hat = q + 1;
                    break;
                }
            }
            break;
        }
        case Strategy::kDivideAndConquer: {
            // invariant: every q < lo rejects, q = hi accepts (hi = p means none seen)
            std::size_t lo = 0;
            std::size_t hi = p;
            while (lo < hi) {
                const std::size_t mid = lo + (hi - lo) / 2;
                if (p_value(mid) >= alpha) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            est.d_hat = lo;
            if (!is_monotone_trace(est.trace, alpha)) {
                est.monotone = false;
                est.d_hat = forward();
            }
            break;
        }
    }
    if (est.monotone) est.monotone = is_monotone_trace(est.trace, alpha);
    return est;
}

struct EstimateOptions {
    TestKind kind = TestKind::kAsymptotic;
    BootstrapOptions bootstrap{};
    JointDiagOptions jd{};
};

/// Fits the unmixing once and sequences the tests with the chosen strategy.
/// Bootstrap tests for different q draw from independent streams (seed, q).
inline DimensionEstimate estimate_dimension(const MultiSeries& x, const LagSet& lags, double alpha,
                                            Strategy strategy, Method method,
                                            const EstimateOptions& options = {}) {
    const auto fit = unmix(x, lags, method, options.jd);
    auto evaluate = [&](std::size_t q) {
        TestResult t;
        if (options.kind == TestKind::kAsymptotic) {
            t = asymptotic_test(fit, q, x.length());
        } else {
            auto b = options.bootstrap;
            b.jd = options.jd;
            b.seed = derive_seed(options.bootstrap.seed, {q});
            t = bootstrap_test(x, fit, q, b);
        }
        return TraceEntry{q, t.scaled_stat, t.df, t.p_value, t.converged};
    };
    auto est = sequence_tests(x.dim(), alpha, strategy, evaluate);
    est.converged = est.converged && fit.converged;
    return est;
}

}  // namespace sosdim
