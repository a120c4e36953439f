// Simulates one sample of setting H1 (three signals, two white-noise series),
// mixes it with a random matrix and estimates the signal dimension with each
// estimator and sequencing strategy.

#include <cstdio>

#include "sosdim/presets.hpp"
#include "sosdim/sosdim.hpp"

int main() {
    using namespace sosdim;

    auto setting = make_setting(SettingName::kH1);
    setting.mixing = Mixing::random_uniform01();
    const auto [x, omega] = simulate(setting, 2000, 7);

    for (const auto& e : {Estimator::amuse(), Estimator::sobi6(), Estimator::sobi12()}) {
        for (auto s : {Strategy::kForward, Strategy::kBackward, Strategy::kDivideAndConquer}) {
            const auto est = estimate_dimension(x, e.lags, 0.05, s, e.method);
            std::printf("%-7s %-19s d_hat = %zu  (%zu tests)\n", e.name.c_str(), std::string(to_string(s)).c_str(),
                        est.d_hat, est.trace.size());
        }
    }

    // the test behind each decision
    const auto fit = sobi(x, LagSet::sobi6());
    for (std::size_t q = 0; q < x.dim(); ++q) {
        const auto t = asymptotic_test(fit, q, x.length());
        std::printf("q = %zu: stat %10.2f on %3zu df, p = %.4f\n", q, t.scaled_stat, t.df, t.p_value);
    }
}
