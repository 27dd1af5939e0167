#pragma once

// SET energy scales, Coulomb-diamond feature geometry and a normal-state
// orthodox sequential-tunnelling transfer curve.

#include <optional>
#include <span>
#include <vector>

namespace qset {

struct DeviceParams {
    double r1 = 0.0;     // junction 1 normal-state resistance, Ohm
    double r2 = 0.0;     // junction 2 normal-state resistance, Ohm
    double delta = 0.0;  // superconducting gap, J
    double c1 = 0.0;     // junction 1 capacitance, F
    double c2 = 0.0;     // junction 2 capacitance, F
    double cgt = 0.0;    // gate-island capacitance, F

    double r_total() const { return r1 + r2; }
    double c_sigma() const { return c1 + c2 + cgt; }

    // Throws InvalidParameter unless resistances and capacitances are
    // strictly positive and the gap is non-negative (zero is the normal-metal
    // limit).
    void validate() const;

    // Reference Al device: R_T = 1.3 MOhm split evenly,
    // Delta = 180 ueV, C1 = 0.24 fF, C2 = 0.19 fF, Cgt = 0.03 fF.
    static DeviceParams reference();
};

struct DiamondFeatures {
    double v_qp_min = 0.0;   // V, quasiparticle threshold minimum (4 Delta / e)
    double v_qp_max = 0.0;   // V, 4 Delta / e + e / C_sigma
    double slope_neg = 0.0;  // -Cgt / C2
    double slope_pos = 0.0;  // Cgt / (C1 + Cgt)
    double v_jqp = 0.0;      // V, 2 e / C_sigma
    double v_djqp = 0.0;     // V, e / C_sigma
};

double charging_energy(const DeviceParams& p);

// junction is 1 or 2.
double josephson_energy(const DeviceParams& p, int junction);

DiamondFeatures diamond_features(const DeviceParams& p);

struct FeatureFitOptions {
    // Fraction of r_total assigned to junction 1; the split cannot be
    // inferred from diamond geometry.
    double r1_fraction = 0.5;
    // When set, v_jqp and v_djqp must agree with C_sigma from the QP span.
    bool check_cooper_pair_features = true;
    double consistency_rel_tol = 1e-6;
};

DeviceParams fit_params_from_features(const DiamondFeatures& f, double r_total,
                                      const FeatureFitOptions& options = {});

// Gate capacitance enhanced by a dielectric filling a fraction of the
// gate-island field region: cgt' = cgt (1 + fill_factor (epsilon - 1)).
DeviceParams helium_capacitance_shift(const DeviceParams& p, double epsilon,
                                      double fill_factor);

inline constexpr int kDefaultChargeStateCutoff = 5;

struct OrthodoxOptions {
    int charge_state_cutoff = kDefaultChargeStateCutoff;  // states n0-N .. n0+N
};

// Island charge-state populations for one gate charge, useful for checks.
struct OrthodoxSolution {
    std::vector<int> charge_states;
    std::vector<double> populations;
    double current = 0.0;  // A, positive for v_sd > 0
};

// Steady state of the orthodox master equation at a single gate charge
// (Coulomb). The source sits at +v_sd/2 and the drain at -v_sd/2.
OrthodoxSolution orthodox_steady_state(const DeviceParams& p, double v_sd, double t_e,
                                       double gate_charge, const OrthodoxOptions& options = {});

// Current (A) for each gate charge (C). Periodic in gate charge with period e.
std::vector<double> orthodox_transfer_curve(const DeviceParams& p, double v_sd, double t_e,
                                            std::span<const double> gate_charge_grid,
                                            const OrthodoxOptions& options = {});

// dI/dq at the operating point, A per electron charge, by central difference.
double transfer_gain(const DeviceParams& p, double v_sd, double t_e, double gate_charge,
                     const OrthodoxOptions& options = {});

// Tunnelling rate (1/s) for a transition releasing `energy_gain` J through a
// junction of resistance `r`, at electron temperature `t_e`.
double orthodox_rate(double energy_gain, double r, double t_e);

}  // namespace qset
