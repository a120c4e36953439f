#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "sosdim/harness.hpp"
#include "sosdim/presets.hpp"
#include "sosdim/report.hpp"

using namespace sosdim;

namespace {

HarnessOptions small_options(std::size_t reps, unsigned threads) {
    HarnessOptions o;
    o.reps = reps;
    o.seed = 4242;
    o.threads = threads;
    o.bootstrap_replicates = 20;
    return o;
}

}  // namespace

TEST(Estimator, FromName) {
    EXPECT_EQ(Estimator::from_name("SOBI6").lags, LagSet::sobi6());
    EXPECT_EQ(Estimator::from_name("amuse").method, Method::kAmuse);
    EXPECT_EQ(Estimator::from_name("sobi12").lags.size(), 12u);
    EXPECT_THROW(Estimator::from_name("sobi7"), InvalidInput);
}

TEST(RejectionTable, BitIdenticalAcrossThreadCounts) {
    const auto setting = make_setting(SettingName::kH1);
    const std::vector<Estimator> est{Estimator::amuse(), Estimator::sobi6()};
    const std::vector<TestKind> kinds{TestKind::kAsymptotic, TestKind::kBootstrap};
    const auto a = rejection_table(setting, {300, 600}, est, 3, kinds, small_options(12, 1));
    const auto b = rejection_table(setting, {300, 600}, est, 3, kinds, small_options(12, 4));
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    std::ostringstream ca, cb;
    write_csv(ca, a);
    write_csv(cb, b);
    EXPECT_EQ(ca.str(), cb.str());
    ASSERT_EQ(a.cells.size(), 8u);
    EXPECT_EQ(a.cells[0].n, 300u);
    EXPECT_EQ(a.cells[0].estimator, "AMUSE");
    EXPECT_EQ(a.cells[1].kind, TestKind::kBootstrap);
    EXPECT_EQ(a.cells[4].n, 600u);
}

TEST(RejectionTable, PowerAtStrongSignal) {
    const auto t = rejection_table(make_setting(SettingName::kH1), {1000}, {Estimator::sobi6()}, 2,
                                   {TestKind::kAsymptotic}, small_options(30, 1));
    EXPECT_EQ(t.cells.front().rejections, 30u);
}

TEST(RejectionTable, CsvLayout) {
    const auto t = rejection_table(make_setting(SettingName::kH1), {200, 400}, {Estimator::amuse(), Estimator::sobi6()},
                                   0, {TestKind::kAsymptotic}, small_options(3, 1));
    std::ostringstream out;
    write_csv(out, t);
    EXPECT_EQ(out.str(), "n,AMUSE_asymptotic,SOBI6_asymptotic\n200,1,1\n400,1,1\n");
}

TEST(DimensionTable, SingleReplicateIsOneHot) {
    const auto t = dimension_table(make_setting(SettingName::kH1), {500}, {Estimator::sobi6(), Estimator::amuse()},
                                   Strategy::kDivideAndConquer, {TestKind::kAsymptotic}, small_options(1, 1));
    for (const auto& c : t.cells) {
        ASSERT_EQ(c.counts.size(), 6u);
        EXPECT_EQ(std::accumulate(c.counts.begin(), c.counts.end(), std::size_t{0}), 1u);
        EXPECT_EQ(c.frequency(c.mode()), 1.0);
    }
}

TEST(DimensionTable, BitIdenticalAcrossThreadCounts) {
    const auto setting = make_setting(SettingName::kD1);
    const std::vector<TestKind> kinds{TestKind::kAsymptotic, TestKind::kBootstrap};
    const auto a = dimension_table(setting, {400}, {Estimator::sobi6()}, Strategy::kForward, kinds, small_options(6, 1));
    const auto b = dimension_table(setting, {400}, {Estimator::sobi6()}, Strategy::kForward, kinds, small_options(6, 3));
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    std::ostringstream out;
    write_csv(out, a);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "n,estimator,test_kind,d_hat,count,frequency");
}

TEST(Harness, RejectsBadArguments) {
    const auto setting = make_setting(SettingName::kH1);
    EXPECT_THROW(rejection_table(setting, {500}, {Estimator::amuse()}, 0, {TestKind::kAsymptotic}, small_options(0, 1)),
                 InvalidInput);
    EXPECT_THROW(rejection_table(setting, {500}, {Estimator::amuse()}, 5, {TestKind::kAsymptotic}, small_options(2, 1)),
                 InvalidInput);
    EXPECT_THROW(rejection_table(setting, {}, {Estimator::amuse()}, 0, {TestKind::kAsymptotic}, small_options(2, 1)),
                 InvalidInput);
    EXPECT_THROW(dimension_table(setting, {500}, {}, Strategy::kForward, {TestKind::kAsymptotic}, small_options(2, 1)),
                 InvalidInput);
    auto bad_alpha = small_options(2, 1);
    bad_alpha.alpha = 1.5;
    EXPECT_THROW(dimension_table(setting, {500}, {Estimator::amuse()}, Strategy::kForward, {TestKind::kAsymptotic},
                                 bad_alpha),
                 InvalidInput);
}

// Two lags are needed to see a MA(2) with coefficients (0.1, 0.1); at moderate
// n the single-lag estimator misses most of the weak signals.
TEST(DimensionTable, AmuseDisadvantagedOnWeakMaTwo) {
    HarnessOptions opts;
    opts.reps = 200;
    opts.seed = 20190101;
    const auto t = dimension_table(make_setting(SettingName::kD3), {1000, 2000},
                                   {Estimator::amuse(), Estimator::sobi6()}, Strategy::kDivideAndConquer,
                                   {TestKind::kAsymptotic}, opts);
    for (std::size_t i = 0; i < t.cells.size(); i += 2) {
        const auto& amuse = t.cells[i];
        const auto& sobi = t.cells[i + 1];
        EXPECT_LT(amuse.mode(), 5u) << "n = " << amuse.n;
        EXPECT_LT(amuse.frequency(5), sobi.frequency(5)) << "n = " << amuse.n;
    }
}
