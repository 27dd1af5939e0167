#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qset/errors.hpp"
#include "qset/thermal.hpp"

namespace {

using namespace qset;

TEST(ThermalParams, DefaultCriticalTemperature) {
    // 180 ueV / (1.764 k_B)
    EXPECT_NEAR(ThermalParams::default_t_c(), 180e-6 * 1.602176634e-19 / (1.764 * 1.380649e-23), 1e-12);
    EXPECT_NEAR(ThermalParams::default_t_c(), 1.184, 0.001);
}

TEST(ElectronPhonon, VanishesAtEquilibriumAndIsAntisymmetric) {
    const ThermalParams p;
    EXPECT_EQ(q_eph(0.3, 0.3, p), 0.0);
    EXPECT_DOUBLE_EQ(q_eph(0.4, 0.1, p), -q_eph(0.1, 0.4, p));
}

TEST(ElectronPhonon, PaperScalePower) {
    const ThermalParams p;
    const double oracle = 0.4e9 * 9e-21 * (std::pow(0.561, 5) - std::pow(0.01, 5));
    EXPECT_DOUBLE_EQ(q_eph(0.561, 0.01, p), oracle);
    EXPECT_NEAR(q_eph(0.561, 0.01, p), 0.2e-12, 0.01e-12);
}

TEST(Quasiparticle, VanishesAtEquilibrium) {
    const ThermalParams p;
    EXPECT_EQ(q_qp(0.3, 0.3, p), 0.0);
}

TEST(Quasiparticle, KappaAt240mK) {
    ThermalParams p;
    p.t_c = 1.184;
    const double kappa = 120.0 * std::exp(-1.36 * 1.184 / 0.24);
    EXPECT_NEAR(kappa, 0.147, 0.005);
    const double oracle = 2 * kappa * 0.1 * p.s_lead / p.l_lead;
    EXPECT_NEAR(q_qp(0.34, 0.24, p), oracle, 1e-12 * oracle);
}

TEST(Quasiparticle, SuppressedAtLowBath) {
    const ThermalParams p;
    EXPECT_LT(q_qp(0.5, 0.01, p), 1e-60);
    EXPECT_LT(q_qp(0.5, 0.001, p), q_qp(0.5, 0.01, p));
}

TEST(Quasiparticle, MeanTemperatureVariant) {
    ThermalParams p;
    p.kappa_at_mean_temperature = true;
    const double kappa = p.kappa_s * std::exp(-p.beta * p.t_c / 0.3);
    EXPECT_NEAR(q_qp(0.4, 0.2, p), 2 * kappa * 0.2 * p.s_lead / p.l_lead, 1e-20);
}

TEST(Conductances, MatchFiniteDifferences) {
    const ThermalParams p;
    for (double t : {0.05, 0.2, 0.6}) {
        const double h = 1e-6 * t;
        EXPECT_NEAR(g_eph(t, p), q_eph(t + h, t, p) / h, 1e-4 * g_eph(t, p));
        EXPECT_NEAR(g_qp(t, p), q_qp(t + h, t, p) / h, 1e-9 * g_qp(t, p));
    }
}

TEST(HeatBalance, ZeroPowerIsExact) {
    const ThermalParams p;
    for (double t : {0.01, 0.24, 1.0}) EXPECT_EQ(solve_electron_temperature(0.0, t, p).t_e, t);
}

TEST(HeatBalance, ElectronPhononAsymptote) {
    const ThermalParams p;
    const auto r = solve_electron_temperature(0.2e-12, 0.01, p);
    const double asymptote = std::pow(0.2e-12 / (0.4e9 * 9e-21), 0.2);
    EXPECT_NEAR(r.t_e / asymptote, 1.0, 0.005);
    EXPECT_NEAR(r.t_e, 0.56, 0.005);
}

TEST(HeatBalance, EnergyConservedAndBracketIndependent) {
    const ThermalParams p;
    for (double power : {1e-15, 0.2e-12, 5e-12}) {
        for (double t : {0.01, 0.1, 0.3, 0.6}) {
            const auto a = solve_electron_temperature(power, t, p);
            EXPECT_NEAR((a.q_eph + a.q_qp) / power, 1.0, 1e-9);
            HeatBalanceOptions o;
            o.initial_upper = t * 1.0001;
            const auto b = solve_electron_temperature(power, t, p, o);
            EXPECT_NEAR(a.t_e / b.t_e, 1.0, 1e-9);
            EXPECT_GE(a.t_e, t);
        }
    }
}

TEST(HeatBalance, MonotoneInPower) {
    const ThermalParams p;
    double last = 0.0;
    for (double power = 1e-15; power < 1e-11; power *= 1.5) {
        const double t_e = solve_electron_temperature(power, 0.1, p).t_e;
        EXPECT_GT(t_e, last);
        last = t_e;
    }
}

TEST(HeatBalance, RejectsBadInput) {
    const ThermalParams p;
    EXPECT_THROW(solve_electron_temperature(-1e-12, 0.1, p), InvalidParameter);
    EXPECT_THROW(solve_electron_temperature(1e-12, 0.0, p), InvalidParameter);
    HeatBalanceOptions o;
    o.max_bracket_doublings = 0;
    EXPECT_THROW(solve_electron_temperature(1.0, 0.01, p, o), NumericalError);
}

TEST(Curve, PlateauThenMerge) {
    const ThermalParams p;
    std::vector<double> grid;
    for (int k = 0; k < 100; ++k) grid.push_back(0.01 + k * (0.49 / 99));
    const auto curve = te_vs_tph_curve(0.2e-12, grid, p);
    ASSERT_EQ(curve.size(), grid.size());
    const double asymptote = std::pow(0.2e-12 / (0.4e9 * 9e-21), 0.2);
    EXPECT_NEAR(curve.front().t_e / asymptote, 1.0, 0.005);
    // Lead channel dominates at the warm end: the island is well thermalised.
    EXPECT_LT(curve.back().t_e - curve.back().t_ph, 0.01);
    const double t_star = channel_crossover_temperature(p);
    double last_excess = INFINITY;
    for (const auto& r : curve) {
        EXPECT_GE(r.t_e, r.t_ph);
        if (r.t_ph > t_star) {
            EXPECT_LE(r.t_e - r.t_ph, last_excess);
            last_excess = r.t_e - r.t_ph;
        }
    }
}

TEST(Crossover, MatchesDenseScan) {
    const ThermalParams p;
    const double t_star = channel_crossover_temperature(p);
    double scan = 0.0;
    for (double t = 0.01; t < 2.0; t += 1e-5) {
        if (std::log(g_eph(t, p)) < std::log(g_qp(t, p))) {
            scan = t;
            break;
        }
    }
    EXPECT_NEAR(t_star, scan, 2e-5);
    EXPECT_NEAR(g_eph(t_star, p) / g_qp(t_star, p), 1.0, 1e-6);
}

TEST(Crossover, OrderingInParameters) {
    const ThermalParams p;
    const double base = channel_crossover_temperature(p);
    ThermalParams leads = p;
    leads.kappa_s *= 10;
    EXPECT_LT(channel_crossover_temperature(leads), base);
    ThermalParams coupling = p;
    coupling.sigma *= 10;
    EXPECT_GT(channel_crossover_temperature(coupling), base);
}

TEST(Crossover, NoCrossingReported) {
    ThermalParams p;
    p.kappa_s = 1e-30;
    EXPECT_THROW(channel_crossover_temperature(p), NoSolution);
}

}  // namespace
