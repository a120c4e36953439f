#pragma once

// Named simulation settings. Process orders follow the published setting
// descriptions; where only an order was given, the coefficients below are our
// own stationary choices. Bump kPresetVersion whenever a coefficient changes
// so stored tables can be traced back to the recipe that produced them.

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "sosdim/errors.hpp"
#include "sosdim/simgen.hpp"

namespace sosdim {

inline constexpr int kPresetVersion = 1;

namespace presets {

inline ProcessSpec ma3() { return ProcessSpec::ma({0.6, 0.4, 0.2}); }
inline ProcessSpec ar2() { return ProcessSpec::ar({0.5, -0.3}); }
inline ProcessSpec arma11() { return ProcessSpec::arma({-0.6}, {0.2}); }
inline ProcessSpec ar3() { return ProcessSpec::ar({0.4, 0.2, -0.3}); }
inline ProcessSpec arma32() { return ProcessSpec::arma({0.3, -0.2, 0.1}, {0.5, 0.3}); }

// Long-memory MA processes: almost no lag-1 correlation, a dominant
// correlation at lag 2, 3 or 4 and a second one at the final lag.
inline ProcessSpec sparse_ma(std::size_t order, double first, std::size_t peak) {
    std::vector<double> c(order, 0.0);
    c[0] = first;
    c[peak - 1] = 0.6;
    c[order - 1] = 0.4;
    return ProcessSpec::ma(std::move(c));
}

inline std::vector<ProcessSpec> gaussian_noise(std::size_t k) {
    return std::vector<ProcessSpec>(k, ProcessSpec::white_noise());
}

inline std::vector<ProcessSpec> concat(std::vector<ProcessSpec> a, const std::vector<ProcessSpec>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace presets

inline SimSetting make_setting(SettingName name) {
    using namespace presets;
    switch (name) {
        case SettingName::kH1:
            return SimSetting::custom(concat({ma3(), ar2(), arma11()}, gaussian_noise(2)),
                                      Mixing::identity(), name);
        case SettingName::kH2:
            return SimSetting::custom(
                concat({sparse_ma(10, 0.03, 2), sparse_ma(15, 0.02, 3), sparse_ma(20, 0.01, 4)},
                       gaussian_noise(2)),
                Mixing::identity(), name);
        case SettingName::kH3:
            return SimSetting::custom(concat({ma3(), ma3(), ma3()}, gaussian_noise(2)),
                                      Mixing::identity(), name);
        case SettingName::kD1:
            return SimSetting::custom(concat({ar2(), ar3(), arma11(), arma32(), ma3()}, gaussian_noise(5)),
                                      Mixing::identity(), name);
        case SettingName::kD2:
            return SimSetting::custom(
                concat({ar2(), ar3(), arma11(), arma32(), ProcessSpec::ma({0.1})}, gaussian_noise(5)),
                Mixing::identity(), name);
        case SettingName::kD3:
            return SimSetting::custom(
                concat(std::vector<ProcessSpec>(5, ProcessSpec::ma({0.1, 0.1})), gaussian_noise(5)),
                Mixing::identity(), name);
        case SettingName::kSound: {
            // three strongly autocorrelated signals, 17 t5 noise series, uniform [0, 1] mixing
            std::vector<ProcessSpec> specs{ProcessSpec::ar({1.4, -0.65}), ProcessSpec::ar({-0.7}),
                                           ProcessSpec::arma({0.5}, {0.4})};
            specs.insert(specs.end(), 17, ProcessSpec::white_noise(Innovation::student_t(5.0)));
            return SimSetting::custom(std::move(specs), Mixing::random_uniform01(), name);
        }
        case SettingName::kCustom:
            break;
    }
    throw InvalidInput("no preset for setting '" + std::string(to_string(name)) + "'");
}

inline SettingName parse_setting_name(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    if (s == "H1") return SettingName::kH1;
    if (s == "H2") return SettingName::kH2;
    if (s == "H3") return SettingName::kH3;
    if (s == "D1") return SettingName::kD1;
    if (s == "D2") return SettingName::kD2;
    if (s == "D3") return SettingName::kD3;
    if (s == "SOUND") return SettingName::kSound;
    throw InvalidInput("unknown setting '" + std::string(text) + "'");
}

inline SimSetting make_setting(std::string_view name) { return make_setting(parse_setting_name(name)); }

}  // namespace sosdim
