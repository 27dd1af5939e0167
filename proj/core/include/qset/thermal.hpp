#pragma once

// Electron heat balance of the SET island: Joule power leaves either through
// electron-phonon coupling in the island volume or through thermal
// quasiparticles in the superconducting leads.
//
//   P = Sigma Omega (T_e^n - T_ph^n) + 2 kappa(T) (T_e - T_ph) S / L
//   kappa(T) = kappa_s exp(-beta T_c / T)

#include <span>
#include <vector>

namespace qset {

struct ThermalParams {
    double sigma = 0.4e9;        // electron-phonon constant, W K^-5 m^-3 (Al)
    double omega = 9e-21;        // island volume 1.5 um x 0.3 um x 20 nm, m^3
    double n = 5.0;              // electron-phonon exponent
    double kappa_s = 120.0;      // W K^-1 m^-1
    double beta = 1.36;
    double t_c = default_t_c();  // K
    double s_lead = 100e-9 * 40e-9;  // lead cross-section, m^2
    double l_lead = 10e-6;           // lead length, m
    // Evaluate kappa at (T_e + T_ph) / 2 instead of at the bath temperature.
    bool kappa_at_mean_temperature = false;

    void validate() const;

    // T_c from the reference 180 ueV gap through Delta = 1.764 k_B T_c.
    static double default_t_c();
};

double q_eph(double t_e, double t_ph, const ThermalParams& p);
double q_qp(double t_e, double t_ph, const ThermalParams& p);

// Small-signal conductances dQ/dT_e evaluated at T_e = T_ph = t, W/K.
double g_eph(double t, const ThermalParams& p);
double g_qp(double t, const ThermalParams& p);

struct HeatBalanceResult {
    double t_ph = 0.0;      // K
    double t_e = 0.0;       // K
    double q_eph = 0.0;     // W
    double q_qp = 0.0;      // W
    double residual = 0.0;  // q_eph + q_qp - power, W
    int iterations = 0;
};

struct HeatBalanceOptions {
    double initial_upper = 0.0;  // first upper bracket; 0 picks 2 t_ph + 0.1 K
    double rel_tol = 1e-12;      // on T_e - T_ph
    int max_bracket_doublings = 60;
    int max_iterations = 300;
};

HeatBalanceResult solve_electron_temperature(double power, double t_ph, const ThermalParams& p,
                                             const HeatBalanceOptions& options = {});

std::vector<HeatBalanceResult> te_vs_tph_curve(double power, std::span<const double> t_ph_grid,
                                               const ThermalParams& p,
                                               const HeatBalanceOptions& options = {});

// Bath temperature at which g_eph and g_qp are equal, searched in
// [1 mK, 2 K]. Throws NoSolution if they do not cross there.
double channel_crossover_temperature(const ThermalParams& p);

}  // namespace qset
