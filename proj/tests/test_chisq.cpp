#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "sosdim/chisq.hpp"
#include "test_support.hpp"

using namespace sosdim;

TEST(ChisqSf, ZeroIsOne) {
    for (double df : {1.0, 2.0, 7.0, 90.0, 630.0}) EXPECT_EQ(chisq_sf(0.0, df), 1.0);
}

TEST(ChisqSf, TwoDegreesClosedForm) {
    EXPECT_NEAR(chisq_sf(2.0 * std::log(2.0), 2.0), 0.5, 1e-14);
    for (double x : {0.1, 1.0, 5.0, 30.0, 200.0}) EXPECT_NEAR(chisq_sf(x, 2.0), std::exp(-x / 2.0), 1e-14);
}

TEST(ChisqSf, OneDegreeCriticalValueAgainstQuadrature) {
    const double x = 3.841458820694124;
    // P(chi2_1 > x) = P(|Z| > sqrt(x)) = 1 - 2 * integral_0^sqrt(x) phi
    const double phi_mass = sosdim::testing::adaptive_simpson(
        [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }, 0.0, std::sqrt(x),
        1e-14);
    EXPECT_NEAR(1.0 - 2.0 * phi_mass, 0.05, 1e-8);
    EXPECT_NEAR(chisq_sf(x, 1.0), 0.05, 1e-8);
    EXPECT_NEAR(chisq_sf(x, 1.0), 1.0 - 2.0 * phi_mass, 1e-10);
}

TEST(ChisqSf, MatchesBoostAcrossGrid) {
    double worst = 0.0;
    for (double df : {1.0, 2.0, 3.0, 6.0, 15.0, 45.0, 90.0, 210.0, 630.0, 1260.0}) {
        for (double ratio = 0.0; ratio <= 4.0; ratio += 0.01) {
            const double x = ratio * df;
            const double ref = boost::math::gamma_q(df / 2.0, x / 2.0);
            worst = std::max(worst, std::abs(chisq_sf(x, df) - ref));
        }
        for (double x : {1e-8, 1e-3, df + 1.0, df - 1.0, 10.0 * df + 100.0}) {
            if (x < 0.0) continue;
            worst = std::max(worst, std::abs(chisq_sf(x, df) - boost::math::gamma_q(df / 2.0, x / 2.0)));
        }
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(ChisqSf, MonotoneInX) {
    double prev = 1.0;
    for (double x = 0.0; x < 400.0; x += 0.25) {
        const double v = chisq_sf(x, 210.0);
        EXPECT_LE(v, prev);
        EXPECT_GE(v, 0.0);
        prev = v;
    }
}

TEST(ChisqSf, RejectsBadArguments) {
    EXPECT_THROW(chisq_sf(-1e-9, 3.0), InvalidInput);
    EXPECT_THROW(chisq_sf(1.0, 0.0), InvalidInput);
    EXPECT_THROW(chisq_sf(std::nan(""), 3.0), InvalidInput);
}
