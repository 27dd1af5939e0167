#include "qset/tlf.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qset/errors.hpp"
#include "qset/units.hpp"

namespace qset {

namespace {

void require_temperature(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw InvalidParameter("TLF temperature must be strictly positive");
    }
}

}  // namespace

void TlfParams::validate() const {
    if (!(attempt_rate > 0.0) || !std::isfinite(attempt_rate)) {
        throw InvalidParameter("attempt_rate must be strictly positive");
    }
    if (!std::isfinite(delta_e) || !std::isfinite(e_b) || !(e_b - std::abs(delta_e) > 0.0)) {
        throw InvalidParameter("barrier e_b must lie above both wells (e_b - |delta_e| > 0)");
    }
    if (!(dq >= 0.0)) throw InvalidParameter("dq must be non-negative");
    if (!std::isfinite(di)) throw InvalidParameter("di must be finite");
}

double TlfParams::energy_l() const { return delta_e >= 0.0 ? delta_e : 0.0; }
double TlfParams::energy_r() const { return delta_e >= 0.0 ? 0.0 : -delta_e; }

TlfParams TlfParams::from_observables(double tau_bar, double delta_e_over_kt, double t_tlf,
                                      double attempt_rate, double dq, double di) {
    require_temperature(t_tlf);
    if (!(tau_bar > 0.0)) throw InvalidParameter("tau_bar must be strictly positive");
    if (!(attempt_rate > 0.0)) throw InvalidParameter("attempt_rate must be strictly positive");
    const double kt = constants::k_b * t_tlf;
    const double x = std::abs(delta_e_over_kt);
    TlfParams p;
    p.delta_e = delta_e_over_kt * kt;
    // 1/tau_bar = nu0 exp(-e_b/kT) (1 + exp(|delta_e|/kT))
    p.e_b = kt * (std::log(attempt_rate * tau_bar) + x + std::log1p(std::exp(-x)));
    p.attempt_rate = attempt_rate;
    p.dq = dq;
    p.di = di;
    p.validate();
    return p;
}

SwitchingRates switching_rates(const TlfParams& p, double t_tlf) {
    p.validate();
    require_temperature(t_tlf);
    const double kt = constants::k_b * t_tlf;
    return {p.attempt_rate * std::exp(-(p.e_b - p.energy_l()) / kt),
            p.attempt_rate * std::exp(-(p.e_b - p.energy_r()) / kt)};
}

double dwell_ratio(const TlfParams& p, double t_tlf) {
    p.validate();
    require_temperature(t_tlf);
    return std::exp(-p.delta_e / (constants::k_b * t_tlf));
}

double mean_switching_time(double tau_l, double tau_r) {
    if (!(tau_l > 0.0) || !(tau_r > 0.0)) {
        throw InvalidParameter("dwell times must be strictly positive");
    }
    return 1.0 / (1.0 / tau_l + 1.0 / tau_r);
}

double mean_switching_time(const TlfParams& p, double t_tlf) {
    const auto rates = switching_rates(p, t_tlf);
    return 1.0 / (rates.l_to_r + rates.r_to_l);
}

TelegraphRealization simulate_telegraph(const TlfParams& p, double t_tlf, double duration,
                                        double sample_rate, std::uint64_t seed,
                                        const TelegraphOptions& options) {
    if (!(duration > 0.0) || !(sample_rate > 0.0)) {
        throw InvalidParameter("duration and sample_rate must be strictly positive");
    }
    const auto rates = switching_rates(p, t_tlf);
    const double total = rates.l_to_r + rates.r_to_l;
    const double p_l = rates.r_to_l / total;
    const double expected_events = duration * 2.0 * rates.l_to_r * rates.r_to_l / total;
    if (expected_events > options.max_expected_events) {
        std::ostringstream msg;
        msg << "telegraph simulation expects " << expected_events << " switches, above the cap of "
            << options.max_expected_events;
        throw ResourceError(msg.str());
    }

    const double dt = 1.0 / sample_rate;
    const std::size_t n = sample_count(duration, dt);

    TelegraphRealization out;
    out.trace.t0 = 0.0;
    out.trace.dt = dt;
    out.trace.samples.resize(n);
    out.states.resize(n);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    TlfState state = uniform(rng) < p_l ? TlfState::L : TlfState::R;
    const auto dwell = [&](TlfState s) {
        const double rate = s == TlfState::L ? rates.l_to_r : rates.r_to_l;
        if (rate == 0.0) return std::numeric_limits<double>::infinity();
        return std::exponential_distribution<double>(rate)(rng);
    };

    double entered = 0.0;
    bool censored = true;
    double next_switch = dwell(state);
    std::size_t k = 0;
    const double end_time = out.trace.time(n - 1);
    while (true) {
        while (k < n && out.trace.time(k) < next_switch) {
            out.states[k] = state;
            out.trace.samples[k] = state == TlfState::R ? p.di : 0.0;
            ++k;
        }
        if (k == n || next_switch > end_time) break;
        if (!censored) {
            (state == TlfState::L ? out.dwell_l : out.dwell_r).push_back(next_switch - entered);
        }
        censored = false;
        entered = next_switch;
        state = state == TlfState::L ? TlfState::R : TlfState::L;
        ++out.switch_count;
        next_switch = entered + dwell(state);
    }
    out.trace.states = out.states;
    return out;
}

double lorentzian_psd_theory(const TlfParams& p, double t_tlf, double f) {
    if (!(f >= 0.0)) throw InvalidParameter("frequency must be non-negative");
    const auto rates = switching_rates(p, t_tlf);
    const double total = rates.l_to_r + rates.r_to_l;
    const double p_l = rates.r_to_l / total;
    const double p_r = rates.l_to_r / total;
    const double tau_bar = 1.0 / total;
    const double w = 2.0 * constants::pi * f * tau_bar;
    return 4.0 * p.di * p.di * p_l * p_r * tau_bar / (1.0 + w * w);
}

double temperature_ratio_from_dwell(double r_a, double r_b) {
    if (!(r_a > 0.0) || !(r_b > 0.0) || !std::isfinite(r_a) || !std::isfinite(r_b)) {
        throw InvalidParameter("dwell ratios must be strictly positive and finite");
    }
    if (r_a == 1.0 || r_b == 1.0) {
        throw InvalidParameter("undefined temperature ratio: a dwell ratio of 1 has zero logarithm");
    }
    return std::log(r_a) / std::log(r_b);
}

}  // namespace qset
