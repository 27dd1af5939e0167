#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qset/errors.hpp"
#include "qset/signal.hpp"
#include "qset/units.hpp"

namespace {

using namespace qset;

constexpr double kPa = 1e-12;

double variance(const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

TEST(DeriveSeed, StreamsDiffer) {
    EXPECT_NE(derive_seed(1, NoiseStream::telegraph), derive_seed(1, NoiseStream::drift));
    EXPECT_NE(derive_seed(1, NoiseStream::pink), derive_seed(2, NoiseStream::pink));
    EXPECT_EQ(derive_seed(7, NoiseStream::white), derive_seed(7, NoiseStream::white));
}

TEST(Drift, ZeroDiffusivityIsZero) {
    for (double v : gen_drift(0.0, 100.0, 0.1, 1).samples) EXPECT_EQ(v, 0.0);
}

TEST(Drift, EnsembleSpreadFollowsSquareRootLaw) {
    const double d = units::per_sqrt_hour_to_per_sqrt_second(0.7 * kPa);
    // sigma(9 h) = 2 * 0.7 * 3 = 4.2 pA
    EXPECT_NEAR(2 * d * std::sqrt(9 * 3600.0), 4.2 * kPa, 1e-15 * kPa);
    const int members = 10000;
    const double dt = 60.0;
    std::vector<double> at_1h, at_9h;
    for (int s = 0; s < members; ++s) {
        const auto t = gen_drift(d, 9 * 3600.0, dt, 1000 + s);
        at_1h.push_back(t.samples[60]);
        at_9h.push_back(t.samples[540]);
    }
    EXPECT_NEAR(std::sqrt(variance(at_1h)) / (1.4 * kPa), 1.0, 0.05);
    EXPECT_NEAR(std::sqrt(variance(at_9h)) / (4.2 * kPa), 1.0, 0.05);
}

TEST(Pink, ZeroAmplitudeIsZero) {
    for (double v : gen_pink(0.0, 1.0, 100.0, 0.1, 1).samples) EXPECT_EQ(v, 0.0);
}

TEST(Pink, SlopeAndLevel) {
    const double amp = 1e-24;
    const auto t = gen_pink(amp, 1.0, 6553.6, 0.1, 3);
    const auto sp = oracle::periodogram(t.samples, 0.1, 8192);
    const double slope = oracle::log_slope(sp, 0.004, 0.4);
    EXPECT_GE(slope, -1.2);
    EXPECT_LE(slope, -0.8);
    EXPECT_NEAR(oracle::band_mean(sp, 0.8, 1.25) / amp, 1.0, 0.2);
}

TEST(Pink, AmplitudeScalesDensity) {
    const auto a = gen_pink(1e-24, 1.0, 3276.8, 0.1, 5);
    const auto b = gen_pink(2e-24, 1.0, 3276.8, 0.1, 5);
    const auto sa = oracle::periodogram(a.samples, 0.1, 4096);
    const auto sb = oracle::periodogram(b.samples, 0.1, 4096);
    EXPECT_NEAR(oracle::band_mean(sb, 0.8, 1.25) / oracle::band_mean(sa, 0.8, 1.25), 2.0, 1e-9);
}

TEST(Pink, SpectralSynthesisLevel) {
    PinkOptions o;
    o.spectral_synthesis = true;
    const auto t = gen_pink(1e-24, 1.0, 6553.6, 0.1, 3, o);
    const auto sp = oracle::periodogram(t.samples, 0.1, 8192);
    EXPECT_NEAR(oracle::log_slope(sp, 0.004, 0.4), -1.0, 0.2);
    EXPECT_NEAR(oracle::band_mean(sp, 0.8, 1.25) / 1e-24, 1.0, 0.2);
}

TEST(Pink, RejectsBadInput) {
    EXPECT_THROW(gen_pink(1e-24, 3.0, 100.0, 0.1, 1), InvalidParameter);
    EXPECT_THROW(gen_pink(1e-24, 1.0, 0.2, 0.1, 1), InvalidParameter);
    EXPECT_THROW(gen_pink(-1.0, 1.0, 100.0, 0.1, 1), InvalidParameter);
}

TEST(Jumps, ZeroRateIsZero) {
    for (double v : gen_jump_cascade(0.0, {1e-12, 1e-13}, 100.0, 0.1, 1).samples) EXPECT_EQ(v, 0.0);
}

TEST(Jumps, PoissonMeanAndPiecewiseConstant) {
    const double rate = 1.0 / 3600.0, duration = 10 * 3600.0;
    const int members = 2000;
    double total = 0.0;
    for (int s = 0; s < members; ++s) {
        const auto t = gen_jump_cascade(rate, {1e-12, 0.2e-12}, duration, 1.0, 50 + s);
        int changes = 0;
        for (std::size_t k = 1; k < t.size(); ++k) changes += t.samples[k] != t.samples[k - 1];
        total += changes;
        EXPECT_EQ(t.samples[0], 0.0);
    }
    const double expected = rate * duration;
    EXPECT_NEAR(total / members, expected, 3 * std::sqrt(expected / members));
}

TEST(Relaxation, StartsAtAmplitudeAndDecays) {
    Relaxation r;
    r.amplitude = 5e-12;
    const auto t = gen_relaxation(r, 12 * 3600.0, 10.0);
    EXPECT_NEAR(t.samples[0], 5e-12, 1e-24);
    for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LT(t.samples[k], t.samples[k - 1]);
    EXPECT_LT(t.samples.back(), 0.2 * 5e-12);
}

TEST(White, OneSidedLevel) {
    const double level = 1e-28, dt = 0.1;
    const auto t = gen_white(level, 20000.0, dt, 9);
    EXPECT_NEAR(variance(t.samples) / (level / (2 * dt)), 1.0, 0.02);
    const double mean = std::accumulate(t.samples.begin(), t.samples.end(), 0.0) / t.size();
    EXPECT_LT(std::abs(mean), 4 * std::sqrt(level / (2 * dt) / t.size()));
}

NoiseRecipe paper_recipe() {
    NoiseRecipe r;
    r.tlf = TlfParams::from_observables(150.0, 2.1, 0.5, 1e10, 0.06, 1.2e-12);
    r.t_tlf = 0.5;
    r.mean_current = 425e-12;
    r.drift_diffusivity = units::per_sqrt_hour_to_per_sqrt_second(0.7 * kPa);
    r.pink_amplitude = 1e-27;
    r.white_level = 1e-28;
    r.jump_rate = 0.25 / 3600.0;
    r.jump_amplitude = {0.0, 0.2e-12};
    r.relaxation.amplitude = 1e-12;
    r.seed = 17;
    return r;
}

TEST(Compose, WhiteOnlyVariance) {
    NoiseRecipe r;
    r.white_level = 4e-28;
    const auto t = compose_trace(r, 10000.0, 0.1);
    EXPECT_NEAR(variance(t.samples) / (4e-28 / 0.2), 1.0, 0.05);
}

TEST(Compose, TelegraphOnlyMatchesSimulator) {
    NoiseRecipe r;
    r.tlf = TlfParams::from_observables(150.0, 2.1, 0.5, 1e10, 0.06, 1.2e-12);
    r.t_tlf = 0.5;
    r.seed = 4;
    const auto t = compose_trace(r, 7200.0, 0.1);
    const auto sim = simulate_telegraph(*r.tlf, 0.5, 7200.0, 10.0, derive_seed(4, NoiseStream::telegraph));
    EXPECT_EQ(t.samples, sim.trace.samples);
    EXPECT_EQ(t.states, sim.states);
}

TEST(Compose, ComponentsAddUp) {
    const auto t = compose_trace(paper_recipe(), 3600.0, 0.1);
    ASSERT_EQ(t.components.size(), 7u);
    for (std::size_t k = 0; k < t.size(); ++k) {
        double sum = 0.0;
        for (const auto& c : t.components) sum += c.samples[k];
        EXPECT_NEAR(sum, t.samples[k], 1e-12 * 1e-12);
    }
}

TEST(Compose, DeterministicWithIndependentStreams) {
    const auto a = compose_trace(paper_recipe(), 3600.0, 0.1);
    const auto b = compose_trace(paper_recipe(), 3600.0, 0.1);
    EXPECT_EQ(a.samples, b.samples);
    auto changed = paper_recipe();
    changed.pink_amplitude *= 3;
    changed.white_level *= 2;
    const auto c = compose_trace(changed, 3600.0, 0.1);
    EXPECT_EQ(a.component("telegraph")->samples, c.component("telegraph")->samples);
    EXPECT_EQ(a.component("drift")->samples, c.component("drift")->samples);
    EXPECT_EQ(a.component("jumps")->samples, c.component("jumps")->samples);
    EXPECT_NE(a.component("pink")->samples, c.component("pink")->samples);
}

TEST(Compose, SampleCountOnTwelveHours) {
    NoiseRecipe r;
    r.white_level = 1e-30;
    EXPECT_EQ(compose_trace(r, 43200.0, 0.1).size(), 432001u);
}

TEST(Compose, RecipeValidation) {
    auto r = paper_recipe();
    r.t_tlf = 0.0;
    EXPECT_THROW(compose_trace(r, 100.0, 0.1), InvalidParameter);
    r = paper_recipe();
    r.white_level = -1.0;
    EXPECT_THROW(compose_trace(r, 100.0, 0.1), InvalidParameter);
    EXPECT_THROW(compose_trace(paper_recipe(), 0.0, 0.1), InvalidParameter);
}

}  // namespace
