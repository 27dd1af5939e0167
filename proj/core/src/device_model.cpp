#include "qset/device_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qset/errors.hpp"
#include "qset/units.hpp"

namespace qset {

namespace {

using constants::e;
using constants::k_b;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidParameter(std::string(name) + " must be strictly positive and finite");
    }
}

// log of x / (1 - exp(-x)), stable for any finite x.
double log_activation(double x) {
    if (x == 0.0) return 0.0;
    if (x > 0.0) return std::log(x) - std::log(-std::expm1(-x));
    return std::log(-x) + x - std::log(-std::expm1(x));
}

double log_sum_exp(double a, double b) {
    const double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

void DeviceParams::validate() const {
    require_positive(r1, "r1");
    require_positive(r2, "r2");
    require_positive(c1, "c1");
    require_positive(c2, "c2");
    require_positive(cgt, "cgt");
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidParameter("delta must be non-negative and finite");
    }
}

DeviceParams DeviceParams::reference() {
    DeviceParams p;
    p.r1 = 0.65e6;
    p.r2 = 0.65e6;
    p.delta = 180.0 * units::ueV;
    p.c1 = 0.24 * units::fF;
    p.c2 = 0.19 * units::fF;
    p.cgt = 0.03 * units::fF;
    return p;
}

double charging_energy(const DeviceParams& p) {
    p.validate();
    return e * e / (2.0 * p.c_sigma());
}

double josephson_energy(const DeviceParams& p, int junction) {
    p.validate();
    if (junction != 1 && junction != 2) {
        throw InvalidParameter("junction index must be 1 or 2, got " + std::to_string(junction));
    }
    const double r = junction == 1 ? p.r1 : p.r2;
    return constants::pi * constants::hbar * p.delta / ((2.0 * e) * (2.0 * e) * r);
}

DiamondFeatures diamond_features(const DeviceParams& p) {
    p.validate();
    const double cs = p.c_sigma();
    DiamondFeatures f;
    f.v_qp_min = 4.0 * p.delta / e;
    f.v_qp_max = f.v_qp_min + e / cs;
    f.slope_neg = -p.cgt / p.c2;
    f.slope_pos = p.cgt / (p.c1 + p.cgt);
    f.v_jqp = 2.0 * e / cs;
    f.v_djqp = e / cs;
    return f;
}

DeviceParams fit_params_from_features(const DiamondFeatures& f, double r_total,
                                      const FeatureFitOptions& options) {
    require_positive(r_total, "r_total");
    if (!(options.r1_fraction > 0.0 && options.r1_fraction < 1.0)) {
        throw InvalidParameter("r1_fraction must lie in (0, 1)");
    }
    if (!(f.v_qp_min >= 0.0)) throw NoSolution("v_qp_min must be non-negative");
    const double span = f.v_qp_max - f.v_qp_min;
    if (!(span > 0.0) || !std::isfinite(span)) {
        throw NoSolution("v_qp_max must exceed v_qp_min");
    }
    // cgt/c2 = -slope_neg and cgt/(c1+cgt) = slope_pos need 0 < slope_pos < 1.
    const double gate_over_c2 = -f.slope_neg;
    if (!(gate_over_c2 > 0.0) || !(f.slope_pos > 0.0) || !(f.slope_pos < 1.0)) {
        std::ostringstream msg;
        msg << "threshold slopes (" << f.slope_neg << ", " << f.slope_pos
            << ") admit no positive-capacitance solution";
        throw NoSolution(msg.str());
    }

    const double cs = e / span;
    if (options.check_cooper_pair_features) {
        const auto check = [&](double measured, double expected, const char* name) {
            if (std::abs(measured - expected) > options.consistency_rel_tol * std::abs(expected)) {
                std::ostringstream msg;
                msg << name << " = " << measured << " V is inconsistent with C_sigma from the "
                    << "quasiparticle span (expected " << expected << " V)";
                throw NoSolution(msg.str());
            }
        };
        check(f.v_jqp, 2.0 * e / cs, "v_jqp");
        check(f.v_djqp, e / cs, "v_djqp");
    }

    DeviceParams p;
    p.delta = e * f.v_qp_min / 4.0;
    p.cgt = cs / (1.0 / gate_over_c2 + 1.0 / f.slope_pos);
    p.c2 = p.cgt / gate_over_c2;
    p.c1 = p.cgt * (1.0 / f.slope_pos - 1.0);
    p.r1 = r_total * options.r1_fraction;
    p.r2 = r_total - p.r1;
    return p;
}

DeviceParams helium_capacitance_shift(const DeviceParams& p, double epsilon, double fill_factor) {
    p.validate();
    if (!(epsilon >= 1.0) || !std::isfinite(epsilon)) {
        throw InvalidParameter("relative permittivity must be >= 1");
    }
    if (!(fill_factor >= 0.0 && fill_factor <= 1.0)) {
        throw InvalidParameter("fill_factor must lie in [0, 1]");
    }
    DeviceParams shifted = p;
    shifted.cgt = p.cgt * (1.0 + fill_factor * (epsilon - 1.0));
    return shifted;
}

double orthodox_rate(double energy_gain, double r, double t_e) {
    require_positive(r, "junction resistance");
    require_positive(t_e, "electron temperature");
    const double kt = k_b * t_e;
    return kt / (e * e * r) * std::exp(log_activation(energy_gain / kt));
}

OrthodoxSolution orthodox_steady_state(const DeviceParams& p, double v_sd, double t_e,
                                       double gate_charge, const OrthodoxOptions& options) {
    p.validate();
    require_positive(t_e, "electron temperature");
    if (!std::isfinite(v_sd) || !std::isfinite(gate_charge)) {
        throw InvalidParameter("bias and gate charge must be finite");
    }
    if (options.charge_state_cutoff < 1) {
        throw InvalidParameter("charge-state cutoff must be >= 1");
    }

    const double cs = p.c_sigma();
    const double v1 = 0.5 * v_sd;
    const double v2 = -0.5 * v_sd;
    const double q_ext = gate_charge + p.c1 * v1 + p.c2 * v2;
    const double kt = k_b * t_e;
    const double log_pref1 = std::log(kt / (e * e * p.r1));
    const double log_pref2 = std::log(kt / (e * e * p.r2));

    // Island potential halfway through a transition n -> n +/- 1.
    const auto phi_up = [&](int n) { return (e * (n + 0.5) + q_ext) / cs; };
    const auto phi_down = [&](int n) { return (e * (n - 0.5) + q_ext) / cs; };
    // Gains for a charge +e entering the island from lead j / leaving to lead j.
    const auto log_on = [&](int n, double vj, double log_pref) {
        return log_pref + log_activation(e * (vj - phi_up(n)) / kt);
    };
    const auto log_off = [&](int n, double vj, double log_pref) {
        return log_pref + log_activation(e * (phi_down(n) - vj) / kt);
    };

    // Centre the window on the gate-periodic ground state so that shifting the
    // gate charge by e shifts the window by one state.
    const int n0 = static_cast<int>(std::lround(-gate_charge / e));
    const int cutoff = options.charge_state_cutoff;
    const int count = 2 * cutoff + 1;

    OrthodoxSolution sol;
    sol.charge_states.resize(count);
    std::vector<double> log_p(count);
    log_p[0] = 0.0;
    sol.charge_states[0] = n0 - cutoff;
    // Birth-death chain: the stationary state satisfies pairwise flux balance
    // p_n up(n) = p_{n+1} down(n+1).
    for (int k = 1; k < count; ++k) {
        const int n = n0 - cutoff + k;
        sol.charge_states[k] = n;
        const double log_up = log_sum_exp(log_on(n - 1, v1, log_pref1), log_on(n - 1, v2, log_pref2));
        const double log_down = log_sum_exp(log_off(n, v1, log_pref1), log_off(n, v2, log_pref2));
        log_p[k] = log_p[k - 1] + log_up - log_down;
        if (!std::isfinite(log_p[k])) {
            std::ostringstream msg;
            msg << "orthodox rate matrix is singular between states " << n - 1 << " and " << n
                << " (log up rate " << log_up << ", log down rate " << log_down << ")";
            throw NumericalError(msg.str());
        }
    }
    const double log_max = *std::max_element(log_p.begin(), log_p.end());
    double norm = 0.0;
    sol.populations.resize(count);
    for (int k = 0; k < count; ++k) {
        sol.populations[k] = std::exp(log_p[k] - log_max);
        norm += sol.populations[k];
    }
    double current = 0.0;
    for (int k = 0; k < count; ++k) {
        sol.populations[k] /= norm;
        const int n = sol.charge_states[k];
        // Transitions leaving the window are not part of the truncated chain.
        double net = 0.0;
        if (k + 1 < count) net += std::exp(log_on(n, v1, log_pref1));
        if (k > 0) net -= std::exp(log_off(n, v1, log_pref1));
        current += sol.populations[k] * net;
    }
    sol.current = e * current;
    return sol;
}

std::vector<double> orthodox_transfer_curve(const DeviceParams& p, double v_sd, double t_e,
                                            std::span<const double> gate_charge_grid,
                                            const OrthodoxOptions& options) {
    std::vector<double> out;
    out.reserve(gate_charge_grid.size());
    for (double q : gate_charge_grid) {
        out.push_back(orthodox_steady_state(p, v_sd, t_e, q, options).current);
    }
    return out;
}

double transfer_gain(const DeviceParams& p, double v_sd, double t_e, double gate_charge,
                     const OrthodoxOptions& options) {
    const double h = 1e-4 * e;
    const double up = orthodox_steady_state(p, v_sd, t_e, gate_charge + h, options).current;
    const double down = orthodox_steady_state(p, v_sd, t_e, gate_charge - h, options).current;
    return (up - down) / (2.0 * h) * e;
}

}  // namespace qset
