// Acceptance runner. `qset_acceptance [N ...]` evaluates the listed criteria
// (all of them without arguments) and prints one PASS/FAIL line for each.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/oracles.hpp"
#include "qset/analysis/spectrum.hpp"
#include "qset/device_model.hpp"
#include "qset/signal.hpp"
#include "qset/substrate.hpp"
#include "qset/thermal.hpp"
#include "qset/tlf.hpp"
#include "qset/units.hpp"
#include "qset_cli/scenario.hpp"
#include "qset_cli/scenarios.hpp"

namespace {

using namespace qset;

struct Outcome {
    std::vector<std::string> failures;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [X]");
        if (!ok) failures.push_back(what);
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

cli::ScenarioConfig defaults() { return cli::parse_scenario(cli::Json::object()); }

void feature_geometry(Outcome& o) {
    const auto d = DeviceParams::reference();
    const double v = diamond_features(d).v_djqp / units::mV;
    o.check(std::abs(v / 0.35 - 1.0) <= 0.02, fmt("v_djqp %.4f mV vs 0.35 (2%%)", v));
    const double ec = charging_energy(d) / units::ueV;
    o.check(std::abs(ec / 165.0 - 1.0) <= 0.10, fmt("E_C %.2f ueV vs 165 (10%%)", ec));
    const double ej = std::max(josephson_energy(d, 1), josephson_energy(d, 2)) / units::ueV;
    o.check(ej < 0.01 * ec, fmt("E_J %.4f ueV < E_C / 100", ej));
}

void boltzmann_statistics(Outcome& o) {
    const auto p = TlfParams::from_observables(1.0, 2.1, 0.3, kDefaultAttemptRate, 0.0, 1.0);
    const auto sim = simulate_telegraph(p, 0.3, 1.2e5, 1.0, 2);
    const double n = static_cast<double>(std::min(sim.dwell_l.size(), sim.dwell_r.size()));
    o.check(n >= 1e4, fmt("%.0f dwells per state >= 1e4", n));
    double tl = 0.0, tr = 0.0;
    for (double x : sim.dwell_l) tl += x;
    for (double x : sim.dwell_r) tr += x;
    tl /= sim.dwell_l.size();
    tr /= sim.dwell_r.size();
    const double ratio = tl / tr;
    o.check(std::abs(ratio / std::exp(-2.1) - 1.0) <= 0.05, fmt("dwell ratio %.4f vs %.4f (5%%)", ratio, std::exp(-2.1)));
}

void psd_round_trip(Outcome& o) {
    const auto c = defaults();
    const auto r = cli::run_fig2(c);
    const double tau = r.analysis.fit.tau_bar;
    const double de = r.analysis.delta_e_over_kt;
    o.check(std::abs(tau / 150.0 - 1.0) <= 0.15, fmt("tau_bar %.1f s vs 150 (15%%)", tau));
    o.check(std::abs(de - 2.1) <= 0.15, fmt("delta_E/kT %.3f vs 2.1 (+-0.15)", de));
}

void drift_law(Outcome& o) {
    const double d = units::per_sqrt_hour_to_per_sqrt_second(0.7 * units::pA);
    const double dt = 60.0;
    const int members = 10000;
    const double hours[] = {1.0, 4.0, 9.0};
    double sum[3] = {}, sum2[3] = {};
    for (int m = 0; m < members; ++m) {
        const auto w = gen_drift(d, 9 * units::hour, dt, derive_seed(20000 + m, NoiseStream::drift));
        for (int k = 0; k < 3; ++k) {
            const double x = w.samples[static_cast<std::size_t>(std::lround(hours[k] * units::hour / dt))];
            sum[k] += x;
            sum2[k] += x * x;
        }
    }
    for (int k = 0; k < 3; ++k) {
        const double mean = sum[k] / members;
        const double sigma = std::sqrt((sum2[k] - members * mean * mean) / (members - 1));
        const double law = 2.0 * d * std::sqrt(hours[k] * units::hour);
        o.check(std::abs(sigma / law - 1.0) <= 0.05,
                fmt("sigma(%.0f h) %.3f pA vs %.3f (5%%)", hours[k], sigma / units::pA, law / units::pA));
    }
}

void heat_balance(Outcome& o) {
    const ThermalParams p;
    double worst = 0.0;
    for (double t : {0.01, 0.05, 0.24, 0.6}) {
        const auto r = solve_electron_temperature(0.0, t, p);
        worst = std::max(worst, std::abs(r.t_e / t - 1.0));
    }
    o.check(worst <= 1e-9, fmt("P = 0: max |T_e/T_ph - 1| %.1e <= 1e-9", worst));
    const double power = 0.2e-12;
    const double te = solve_electron_temperature(power, 0.01, p).t_e;
    const double asym = std::pow(power / (p.sigma * p.omega), 0.2);
    o.check(std::abs(te / asym - 1.0) <= 0.005, fmt("T_e %.4f K vs asymptote %.4f (0.5%%)", te, asym));
    const double tx = channel_crossover_temperature(p);
    o.check(within(tx, 0.150, 0.250), fmt("crossover %.1f mK in [150, 250]", tx * 1e3));
}

void substrate_model(Outcome& o) {
    const SubstrateModel m;
    const auto cold = substrate_temperature_field(0.5e-12, 0.01, m);
    o.check(within(cold.t_at_source, 0.040, 0.160), fmt("T_source %.1f mK in [40, 160]", cold.t_at_source * 1e3));
    for (double tb : {0.2, 0.24}) {
        const auto warm = substrate_temperature_field(0.5e-12, tb, m);
        const double rise = warm.t_at_source / tb - 1.0;
        o.check(rise < 0.05, fmt("rise at %.0f mK %.2f%% < 5%%", tb * 1e3, rise * 100));
    }
    double flux = std::abs(cold.boundary_flux / cold.power - 1.0);
    for (std::size_t ir : {cold.nr / 2, cold.nr}) {
        for (std::size_t jz : {cold.oxide_rows, cold.nz}) {
            flux = std::max(flux, std::abs(cold.contour_flux(ir, jz) / cold.power - 1.0));
        }
    }
    o.check(flux <= 0.01, fmt("flux imbalance %.2e <= 1%%", flux));
    const auto fine = substrate_temperature_field(0.5e-12, 0.01, m.refined());
    const double drift = std::abs(fine.t_at_source / cold.t_at_source - 1.0);
    o.check(drift < 0.02, fmt("refinement drift %.2f%% < 2%%", drift * 100));
}

void temperature_ratio(Outcome& o) {
    const double r = temperature_ratio_from_dwell(std::exp(-2.0), std::exp(-6.0));
    o.check(std::abs(r - 1.0 / 3.0) <= 4 * std::numeric_limits<double>::epsilon(),
            fmt("ln ratio formula %.17g vs 1/3", r));
    const auto f = cli::run_fig3(defaults());
    o.check(std::abs(f.temperature_ratio * 3.0 - 1.0) <= 0.10,
            fmt("fig3 T_TLF(He)/T_TLF(empty) %.4f vs 1/3 (10%%)", f.temperature_ratio));
}

void charge_sensitivity(Outcome& o) {
    const auto r = cli::run_fig2(defaults());
    const double s = r.analysis.sensitivity.value_or(NAN);
    o.check(within(s, 1e-3, 4e-3), fmt("sensitivity %.3e e/sqrt(Hz) within 2x of 2e-3", s));
}

void estimator_sanity(Outcome& o) {
    {
        std::mt19937_64 rng(9);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> y(1 << 18);
        for (double& v : y) v = g(rng);
        WelchOptions w;
        w.segment_length = 4096;
        const auto psd = psd_welch(y, 0.1, w);
        double var = 0.0;
        for (double v : y) var += v * v;
        var /= y.size();
        double integral = 0.0;
        for (double s : psd.density) integral += s;
        integral *= psd.frequency[1] - psd.frequency[0];
        o.check(std::abs(integral / var - 1.0) <= 0.03, fmt("Parseval %.4f (3%%)", integral / var));
    }
    const auto d = DeviceParams::reference();
    {
        std::vector<double> q, shifted;
        for (int k = 0; k < 64; ++k) {
            q.push_back((k + 0.5) / 64.0 * constants::e);
            shifted.push_back(q.back() + 3.0 * constants::e);
        }
        const auto a = orthodox_transfer_curve(d, 0.85e-3, 0.6, q);
        const auto b = orthodox_transfer_curve(d, 0.85e-3, 0.6, shifted);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(b[k] / a[k] - 1.0));
        o.check(worst <= 1e-10, fmt("gate period %.1e <= 1e-10", worst));
        double zero = 0.0;
        for (double i : orthodox_transfer_curve(d, 0.0, 0.6, q)) zero = std::max(zero, std::abs(i));
        o.check(zero <= 1e-24, fmt("zero bias |I| %.1e A", zero));
    }
    double worst = 0.0;
    for (double v : {0.2e-3, 0.85e-3, 1.3e-3}) {
        for (double ng : {0.1, 0.3, 0.45}) {
            OrthodoxOptions opt;
            opt.charge_state_cutoff = 1;
            const auto s = orthodox_steady_state(d, v, 0.6, ng * constants::e, opt);
            const auto ref = oracle::three_state(d, v, 0.6, ng * constants::e, s.charge_states[1]);
            for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(s.populations[k] - ref.populations[k]));
            worst = std::max(worst, std::abs(s.current / ref.current - 1.0));
        }
    }
    o.check(worst <= 1e-9, fmt("3-state oracle %.1e <= 1e-9", worst));
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "feature geometry", 1e-3, feature_geometry},
        {2, "Boltzmann statistics", 10.0, boltzmann_statistics},
        {3, "PSD round trip", 60.0, psd_round_trip},
        {4, "drift law", 30.0, drift_law},
        {5, "heat balance", 1.0, heat_balance},
        {6, "substrate model", 120.0, substrate_model},
        {7, "temperature ratio", 10.0, temperature_ratio},
        {8, "charge sensitivity", 60.0, charge_sensitivity},
        {9, "estimator sanity", 10.0, estimator_sanity},
    };
    return all;
}

bool evaluate(const Criterion& c) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.run(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("threw: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(elapsed < c.budget_s, fmt("runtime %.3g s < %g s", elapsed, c.budget_s));
    const bool pass = o.failures.empty();
    std::printf("%s criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
    std::fflush(stdout);
    return pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        char* end = nullptr;
        const long id = std::strtol(argv[i], &end, 10);
        if (*end != '\0' || id < 1 || id > static_cast<long>(criteria().size())) {
            std::fprintf(stderr, "usage: %s [criterion 1-%zu ...]\n", argv[0], criteria().size());
            return 2;
        }
        wanted.push_back(static_cast<int>(id));
    }
    if (wanted.empty()) {
        for (const auto& c : criteria()) wanted.push_back(c.id);
    }
    int failed = 0;
    for (int id : wanted) failed += !evaluate(criteria()[static_cast<std::size_t>(id - 1)]);
    return failed ? 1 : 0;
}
