#pragma once

// Monte Carlo harness: rejection-frequency tables for a single null
// hypothesis and frequency tables of estimated signal dimensions.
//
// Replicate `rep` draws its data from stream (seed, rep), so all estimators in
// a table see the same series and the counts do not depend on the number of
// worker threads.

#include <cctype>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sosdim/bss.hpp"
#include "sosdim/dimtest.hpp"
#include "sosdim/errors.hpp"
#include "sosdim/parallel.hpp"
#include "sosdim/simgen.hpp"

namespace sosdim {

/// A named (method, lag set) pair such as AMUSE, SOBI6 or SOBI12.
struct Estimator {
    std::string name;
    Method method = Method::kSobi;
    LagSet lags{1};

    static Estimator amuse() { return {"AMUSE", Method::kAmuse, LagSet::amuse()}; }
    static Estimator sobi6() { return {"SOBI6", Method::kSobi, LagSet::sobi6()}; }
    static Estimator sobi12() { return {"SOBI12", Method::kSobi, LagSet::sobi12()}; }

    static Estimator from_name(std::string_view name) {
        std::string s(name);
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (s == "amuse") return amuse();
        if (s == "sobi6") return sobi6();
        if (s == "sobi12") return sobi12();
        throw InvalidInput("unknown estimator '" + std::string(name) + "' (amuse, sobi6, sobi12)");
    }
};

struct HarnessOptions {
    double alpha = 0.05;
    std::size_t reps = 100;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t bootstrap_replicates = 200;
    JointDiagOptions jd{};
};

struct RejectionCell {
    std::size_t n = 0;
    std::string estimator;
    TestKind kind = TestKind::kAsymptotic;
    std::size_t rejections = 0;
    std::size_t reps = 0;
    double seconds = 0.0;  // summed wall-clock of the test calls, informational only

    double frequency() const { return reps ? static_cast<double>(rejections) / reps : 0.0; }
};

struct RejectionTable {
    std::string setting;
    std::size_t q = 0;
    HarnessOptions options;
    std::vector<std::size_t> ns;
    std::vector<Estimator> estimators;
    std::vector<TestKind> kinds;
    std::vector<RejectionCell> cells;  // ordered n, estimator, kind
};

struct DimensionCell {
    std::size_t n = 0;
    std::string estimator;
    TestKind kind = TestKind::kAsymptotic;
    std::vector<std::size_t> counts;  // counts[d] = replicates with d_hat = d, d = 0..p
    std::size_t reps = 0;
    double seconds = 0.0;

    std::size_t mode() const {
        std::size_t best = 0;
        for (std::size_t d = 1; d < counts.size(); ++d) {
            if (counts[d] > counts[best]) best = d;
        }
        return best;
    }
    double frequency(std::size_t d) const {
        return reps && d < counts.size() ? static_cast<double>(counts[d]) / reps : 0.0;
    }
};

struct DimensionTable {
    std::string setting;
    std::size_t p = 0;
    Strategy strategy = Strategy::kDivideAndConquer;
    HarnessOptions options;
    std::vector<std::size_t> ns;
    std::vector<Estimator> estimators;
    std::vector<TestKind> kinds;
    std::vector<DimensionCell> cells;
};

namespace detail {

inline void check_harness(const SimSetting& setting, const std::vector<std::size_t>& ns,
                          const std::vector<Estimator>& estimators,
                          const std::vector<TestKind>& kinds, const HarnessOptions& options) {
    if (options.reps < 1) throw InvalidInput("reps must be at least 1");
    if (ns.empty() || estimators.empty() || kinds.empty()) {
        throw InvalidInput("sample sizes, estimators and test kinds must be non-empty");
    }
    if (setting.p < 1 || setting.processes.size() != setting.p) {
        throw InvalidInput("setting is malformed");
    }
    for (auto n : ns) {
        for (const auto& e : estimators) {
            if (e.lags.max() >= n) throw LagTooLarge(e.lags.max(), n);
        }
    }
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

inline RejectionTable rejection_table(const SimSetting& setting, const std::vector<std::size_t>& ns,
                                      const std::vector<Estimator>& estimators, std::size_t q,
                                      const std::vector<TestKind>& kinds,
                                      const HarnessOptions& options) {
    detail::check_harness(setting, ns, estimators, kinds, options);
    detail::check_q(q, setting.p);

    RejectionTable table{std::string(to_string(setting.name)), q, options, ns, estimators, kinds, {}};
    const std::size_t per_n = estimators.size() * kinds.size();
    for (auto n : ns) {
        std::vector<char> reject(options.reps * per_n, 0);
        std::vector<double> elapsed(options.reps * per_n, 0.0);
        parallel_for(options.reps, options.threads, [&](std::size_t rep) {
            const std::uint64_t rep_seed = derive_seed(options.seed, {rep});
            const MultiSeries x = simulate(setting, n, rep_seed).first;
            for (std::size_t e = 0; e < estimators.size(); ++e) {
                for (std::size_t k = 0; k < kinds.size(); ++k) {
                    const auto start = std::chrono::steady_clock::now();
                    const auto fit = unmix(x, estimators[e].lags, estimators[e].method, options.jd);
                    TestResult t;
                    if (kinds[k] == TestKind::kAsymptotic) {
                        t = asymptotic_test(fit, q, n);
                    } else {
                        BootstrapOptions b{options.bootstrap_replicates,
                                           derive_seed(rep_seed, {3, e}), 1, options.jd};
                        t = bootstrap_test(x, fit, q, b);
                    }
                    const std::size_t slot = rep * per_n + e * kinds.size() + k;
                    reject[slot] = t.p_value < options.alpha ? 1 : 0;
                    elapsed[slot] = detail::seconds_since(start);
                }
            }
        });
        for (std::size_t e = 0; e < estimators.size(); ++e) {
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                RejectionCell cell{n, estimators[e].name, kinds[k], 0, options.reps, 0.0};
                for (std::size_t rep = 0; rep < options.reps; ++rep) {
                    const std::size_t slot = rep * per_n + e * kinds.size() + k;
                    cell.rejections += static_cast<std::size_t>(reject[slot]);
                    cell.seconds += elapsed[slot];
                }
                table.cells.push_back(std::move(cell));
            }
        }
    }
    return table;
}

inline DimensionTable dimension_table(const SimSetting& setting, const std::vector<std::size_t>& ns,
                                      const std::vector<Estimator>& estimators, Strategy strategy,
                                      const std::vector<TestKind>& kinds,
                                      const HarnessOptions& options) {
    detail::check_harness(setting, ns, estimators, kinds, options);

    DimensionTable table{std::string(to_string(setting.name)), setting.p, strategy, options, ns,
                         estimators, kinds, {}};
    const std::size_t per_n = estimators.size() * kinds.size();
    for (auto n : ns) {
        std::vector<std::size_t> d_hat(options.reps * per_n, 0);
        std::vector<double> elapsed(options.reps * per_n, 0.0);
        parallel_for(options.reps, options.threads, [&](std::size_t rep) {
            const std::uint64_t rep_seed = derive_seed(options.seed, {rep});
            const MultiSeries x = simulate(setting, n, rep_seed).first;
            for (std::size_t e = 0; e < estimators.size(); ++e) {
                for (std::size_t k = 0; k < kinds.size(); ++k) {
                    const auto start = std::chrono::steady_clock::now();
                    EstimateOptions eo;
                    eo.kind = kinds[k];
                    eo.jd = options.jd;
                    eo.bootstrap = {options.bootstrap_replicates, derive_seed(rep_seed, {3, e}), 1,
                                    options.jd};
                    const auto est = estimate_dimension(x, estimators[e].lags, options.alpha,
                                                        strategy, estimators[e].method, eo);
                    const std::size_t slot = rep * per_n + e * kinds.size() + k;
                    d_hat[slot] = est.d_hat;
                    elapsed[slot] = detail::seconds_since(start);
                }
            }
        });
        for (std::size_t e = 0; e < estimators.size(); ++e) {
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                DimensionCell cell{n, estimators[e].name, kinds[k],
                                   std::vector<std::size_t>(setting.p + 1, 0), options.reps, 0.0};
                for (std::size_t rep = 0; rep < options.reps; ++rep) {
                    const std::size_t slot = rep * per_n + e * kinds.size() + k;
                    ++cell.counts[d_hat[slot]];
                    cell.seconds += elapsed[slot];
                }
                table.cells.push_back(std::move(cell));
            }
        }
    }
    return table;
}

}  // namespace sosdim
