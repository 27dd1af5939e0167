#pragma once

// Thermally activated two-level fluctuator in an asymmetric double well.
//
// Energies are measured from the lower well bottom; the barrier top sits at
// e_b. The L -> R rate is attempt_rate * exp(-(e_b - E_L) / kT) and vice
// versa, so that tau_L / tau_R = exp(-delta_e / kT) with delta_e = E_L - E_R.

#include <cstdint>
#include <vector>

#include "qset/tlf_state.hpp"
#include "qset/trace.hpp"

namespace qset {

inline constexpr double kDefaultAttemptRate = 1e10;  // Hz

struct TlfParams {
    double delta_e = 0.0;                      // E_L - E_R, J
    double e_b = 0.0;                          // barrier top above the lower well, J
    double attempt_rate = kDefaultAttemptRate;  // Hz
    double dq = 0.0;                           // induced island charge on switching, units of e
    double di = 0.0;                           // current jump in state R, A

    void validate() const;

    double energy_l() const;
    double energy_r() const;

    // Parameters reproducing a switching time `tau_bar` (s) and a Boltzmann
    // exponent delta_e / kT at temperature `t_tlf`.
    static TlfParams from_observables(double tau_bar, double delta_e_over_kt, double t_tlf,
                                      double attempt_rate = kDefaultAttemptRate, double dq = 0.0,
                                      double di = 0.0);
};

struct SwitchingRates {
    double l_to_r = 0.0;  // Hz, 1 / tau_L
    double r_to_l = 0.0;  // Hz, 1 / tau_R
};

SwitchingRates switching_rates(const TlfParams& p, double t_tlf);

// tau_L / tau_R.
double dwell_ratio(const TlfParams& p, double t_tlf);

// 1 / (1/tau_L + 1/tau_R).
double mean_switching_time(const TlfParams& p, double t_tlf);
double mean_switching_time(double tau_l, double tau_r);

struct TelegraphOptions {
    // Simulations whose expected number of switches exceeds this are refused.
    double max_expected_events = 1e8;
};

struct TelegraphRealization {
    CurrentTrace trace;              // 0 in L, di in R
    std::vector<TlfState> states;    // state at every sample
    // Complete dwells in event order, s. The dwell interrupted by t = 0 and the
    // one still running at the end are not included.
    std::vector<double> dwell_l;
    std::vector<double> dwell_r;
    std::size_t switch_count = 0;
};

// Exact event-driven simulation sampled at t_k = k / sample_rate for
// k = 0 .. floor(duration * sample_rate). The initial state is drawn from the
// stationary distribution.
TelegraphRealization simulate_telegraph(const TlfParams& p, double t_tlf, double duration,
                                        double sample_rate, std::uint64_t seed,
                                        const TelegraphOptions& options = {});

// One-sided RTS spectral density, A^2/Hz:
// S(f) = 4 di^2 p_L p_R tau_bar / (1 + (2 pi f tau_bar)^2).
double lorentzian_psd_theory(const TlfParams& p, double t_tlf, double f);

// ln(r_a) / ln(r_b). For dwell ratios measured on the same fluctuator at
// temperatures T_a, T_b this equals T_b / T_a.
double temperature_ratio_from_dwell(double r_a, double r_b);

}  // namespace qset
