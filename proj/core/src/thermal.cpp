#include "qset/thermal.hpp"

#include <cmath>
#include <sstream>

#include "qset/errors.hpp"
#include "qset/units.hpp"

namespace qset {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidParameter(std::string(name) + " must be strictly positive and finite");
    }
}

double kappa_al(double t, const ThermalParams& p) { return p.kappa_s * std::exp(-p.beta * p.t_c / t); }

}  // namespace

double ThermalParams::default_t_c() {
    return 180.0 * units::ueV / (constants::bcs_gap_ratio * constants::k_b);
}

void ThermalParams::validate() const {
    require_positive(sigma, "sigma");
    require_positive(omega, "omega");
    require_positive(kappa_s, "kappa_s");
    require_positive(beta, "beta");
    require_positive(t_c, "t_c");
    require_positive(s_lead, "s_lead");
    require_positive(l_lead, "l_lead");
    if (!(n >= 1.0) || !std::isfinite(n)) throw InvalidParameter("n must be >= 1");
}

double q_eph(double t_e, double t_ph, const ThermalParams& p) {
    require_positive(t_e, "t_e");
    require_positive(t_ph, "t_ph");
    return p.sigma * p.omega * (std::pow(t_e, p.n) - std::pow(t_ph, p.n));
}

double q_qp(double t_e, double t_ph, const ThermalParams& p) {
    require_positive(t_ph, "t_ph");
    if (!(t_e >= 0.0)) throw InvalidParameter("t_e must be non-negative");
    const double t_kappa = p.kappa_at_mean_temperature ? 0.5 * (t_e + t_ph) : t_ph;
    return 2.0 * kappa_al(t_kappa, p) * (t_e - t_ph) * p.s_lead / p.l_lead;
}

double g_eph(double t, const ThermalParams& p) {
    require_positive(t, "temperature");
    return p.n * p.sigma * p.omega * std::pow(t, p.n - 1.0);
}

double g_qp(double t, const ThermalParams& p) {
    require_positive(t, "temperature");
    // At T_e = T_ph the mean-temperature variant has the same derivative.
    return 2.0 * kappa_al(t, p) * p.s_lead / p.l_lead;
}

HeatBalanceResult solve_electron_temperature(double power, double t_ph, const ThermalParams& p,
                                             const HeatBalanceOptions& options) {
    p.validate();
    if (!(power >= 0.0) || !std::isfinite(power)) {
        throw InvalidParameter("dissipated power must be non-negative");
    }
    require_positive(t_ph, "t_ph");

    HeatBalanceResult r;
    r.t_ph = t_ph;
    if (power == 0.0) {
        r.t_e = t_ph;
        return r;
    }

    // Bisect on the rise x = T_e - T_ph so that the tolerance is relative to
    // the rise itself; the balance then holds to the same relative accuracy
    // even when T_e barely exceeds the bath.
    const auto excess = [&](double x) { return q_eph(t_ph + x, t_ph, p) + q_qp(t_ph + x, t_ph, p) - power; };

    // Both channels grow monotonically with T_e, so the root is unique.
    double lo = 0.0;
    double hi = (options.initial_upper > t_ph ? options.initial_upper : 2.0 * t_ph + 0.1) - t_ph;
    int doublings = 0;
    while (excess(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > options.max_bracket_doublings) {
            std::ostringstream msg;
            msg << "heat balance bracket exceeded " << t_ph + hi << " K without enclosing the root "
                << "(P = " << power << " W, T_ph = " << t_ph << " K)";
            throw NumericalError(msg.str());
        }
    }

    int it = 0;
    while (hi - lo > options.rel_tol * hi) {
        if (++it > options.max_iterations) {
            throw NumericalError("heat balance bisection did not converge");
        }
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    r.t_e = t_ph + 0.5 * (lo + hi);
    r.q_eph = q_eph(r.t_e, t_ph, p);
    r.q_qp = q_qp(r.t_e, t_ph, p);
    r.residual = r.q_eph + r.q_qp - power;
    r.iterations = it;
    return r;
}

std::vector<HeatBalanceResult> te_vs_tph_curve(double power, std::span<const double> t_ph_grid,
                                               const ThermalParams& p,
                                               const HeatBalanceOptions& options) {
    std::vector<HeatBalanceResult> out;
    out.reserve(t_ph_grid.size());
    for (double t : t_ph_grid) out.push_back(solve_electron_temperature(power, t, p, options));
    return out;
}

double channel_crossover_temperature(const ThermalParams& p) {
    p.validate();
    // Compare in log space: the quasiparticle channel spans hundreds of decades.
    const auto diff = [&](double t) {
        const double log_qp = std::log(2.0 * p.kappa_s * p.s_lead / p.l_lead) - p.beta * p.t_c / t;
        return std::log(g_eph(t, p)) - log_qp;
    };
    double lo = 1e-3;
    double hi = 2.0;
    const double f_lo = diff(lo);
    const double f_hi = diff(hi);
    if (!(f_lo > 0.0 && f_hi < 0.0)) {
        std::ostringstream msg;
        msg << "electron-phonon and quasiparticle conductances do not cross in [1 mK, 2 K] "
            << "(log ratio " << f_lo << " at 1 mK, " << f_hi << " at 2 K)";
        throw NoSolution(msg.str());
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (diff(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace qset
