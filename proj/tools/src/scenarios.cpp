#include "qset_cli/scenarios.hpp"

#include <cmath>

#include "qset/signal.hpp"
#include "qset/thermal.hpp"
#include "qset/tlf.hpp"
#include "qset/units.hpp"

namespace qset::cli {

namespace {

Json band(double value, double lo, double hi) {
    return Json{{"value", value}, {"min", lo}, {"max", hi}, {"pass", value >= lo && value <= hi}};
}

const char* envelope_name(Envelope e) {
    switch (e) {
        case Envelope::lower: return "lower";
        case Envelope::upper: return "upper";
        case Envelope::automatic: return "automatic";
    }
    return "?";
}

Json fig3_row(const Fig3Point& p) {
    return Json{{"v_sd_V", p.v_sd},       {"p_set_W", p.p_set},       {"t_ph_K", p.t_ph},
                {"t_tlf_K", p.t_e},       {"tau_bar_s", p.tau_bar},   {"tau_l_s", p.tau_l},
                {"tau_r_s", p.tau_r},     {"dwell_ratio", p.dwell_ratio}};
}

bool strictly_decreasing_tau(const std::vector<Fig3Point>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i].tau_bar < v[i - 1].tau_bar)) return false;
    }
    return true;
}

}  // namespace

Json analysis_report(const PipelineResult& r) {
    const LorentzianFit& f = r.fit;
    Json fit{
        {"lorentzian_amplitude_A2_per_Hz", f.lorentzian_amplitude},
        {"tau_bar_s", f.tau_bar},
        {"pink_amplitude_A2_per_Hz", f.pink_amplitude},
        {"pink_alpha", f.pink_alpha},
        {"white_level_A2_per_Hz", f.white_level},
        {"stderr",
         {{"lorentzian_amplitude", f.se_lorentzian_amplitude},
          {"tau_bar", f.se_tau_bar},
          {"pink_amplitude", f.se_pink_amplitude},
          {"pink_alpha", f.se_pink_alpha},
          {"white_level", f.se_white_level}}},
        {"log_residual_rms", f.residual},
        {"iterations", f.iterations},
        {"converged", f.converged},
        {"flagged", f.flagged()},
    };
    const StateDetection& d = r.detection;
    Json diagnostics{
        {"baseline_envelope", envelope_name(r.envelope)},
        {"level_low_A", d.mean_low},
        {"level_high_A", d.mean_high},
        {"sigma_low_A", d.sigma_low},
        {"sigma_high_A", d.sigma_high},
        {"threshold_A", d.threshold},
        {"hysteresis_A", d.hysteresis},
        {"em_iterations", d.em_iterations},
        {"transitions", r.dwell.transitions},
        {"dwell_count_l", r.dwell.count_l},
        {"dwell_count_r", r.dwell.count_r},
        {"occupancy_l", r.dwell.p_l},
        {"dwell_tau_bar_s", r.dwell.tau_bar},
        {"psd_bins", r.psd.size()},
        {"psd_bins_fitted", r.psd_binned.size()},
    };
    if (r.drift) diagnostics["drift_stderr_pA_per_sqrt_hour"] =
        units::per_sqrt_second_to_per_sqrt_hour(r.drift->d_stderr) / units::pA;
    if (r.state_accuracy) diagnostics["state_accuracy"] = *r.state_accuracy;

    Json out{
        {"tau_bar_s", f.tau_bar},
        {"tau_L_s", r.dwell.tau_l},
        {"tau_R_s", r.dwell.tau_r},
        {"ratio", r.dwell.ratio},
        {"delta_e_over_kt", r.delta_e_over_kt},
        {"D_pA_per_sqrt_hour",
         r.drift ? Json(units::per_sqrt_second_to_per_sqrt_hour(r.drift->d) / units::pA) : Json(nullptr)},
        {"sensitivity_e_per_sqrtHz", r.sensitivity ? Json(*r.sensitivity) : Json(nullptr)},
        {"fit", fit},
        {"diagnostics", diagnostics},
    };
    return out;
}

Fig2Result run_fig2(const ScenarioConfig& c) {
    Fig2Result out;
    out.trace = compose_trace(c.noise_recipe(), c.run.duration, c.run.dt);
    out.analysis = analyze_trace(out.trace, c.analysis);
    out.truth = dwell_statistics(out.trace.states, out.trace.dt);

    const double tau = c.tlf.tau_bar;
    const double de = c.tlf.delta_e_over_kt;
    const double sens = 2e-3;
    Json report = analysis_report(out.analysis);
    report["truth"] = {
        {"configured_tau_bar_s", tau},
        {"configured_delta_e_over_kt", de},
        {"configured_D_pA_per_sqrt_hour", units::per_sqrt_second_to_per_sqrt_hour(c.recipe.drift) / units::pA},
        {"realized_tau_bar_s", out.truth.tau_bar},
        {"realized_tau_L_s", out.truth.tau_l},
        {"realized_tau_R_s", out.truth.tau_r},
        {"realized_delta_e_over_kt", delta_e_over_kt(out.truth)},
    };
    report["checks"] = {
        {"tau_bar_s", band(out.analysis.fit.tau_bar, 0.85 * tau, 1.15 * tau)},
        {"delta_e_over_kt", band(out.analysis.delta_e_over_kt, de - 0.15, de + 0.15)},
        {"sensitivity_e_per_sqrtHz", band(out.analysis.sensitivity.value_or(NAN), sens / 2.0, sens * 2.0)},
    };
    out.report = std::move(report);
    return out;
}

Fig3Point fig3_point(const ScenarioConfig& c, const TlfParams& tlf, double v_sd, bool helium) {
    const CellConfig& cell = c.cell;
    const DeviceParams device =
        helium ? helium_capacitance_shift(c.device, cell.helium_epsilon, cell.helium_fill_factor) : c.device;
    Fig3Point p;
    p.v_sd = v_sd;
    p.p_set = std::abs(v_sd * orthodox_steady_state(device, v_sd, cell.t_mxc, c.operating_point.gate_charge).current);
    p.t_ph = helium ? cell.t_mxc : cell.t_mxc + cell.empty_cell_resistance * p.p_set;
    p.t_e = solve_electron_temperature(p.p_set, p.t_ph, c.thermal.params).t_e;
    const SwitchingRates rates = switching_rates(tlf, p.t_e);
    p.tau_l = 1.0 / rates.l_to_r;
    p.tau_r = 1.0 / rates.r_to_l;
    p.tau_bar = mean_switching_time(tlf, p.t_e);
    p.dwell_ratio = dwell_ratio(tlf, p.t_e);
    return p;
}

Fig3Result run_fig3(const ScenarioConfig& c) {
    Fig3Result out;
    const double v_op = c.operating_point.v_sd;
    out.anchor_temperature = fig3_point(c, c.tlf.params(), v_op, true).t_e;
    TlfConfig anchored = c.tlf;
    anchored.t_tlf = out.anchor_temperature;
    out.tlf = anchored.params();

    const Fig3Config& g = c.fig3;
    for (int k = 0; k < g.points; ++k) {
        const double v = g.v_sd_min + (g.v_sd_max - g.v_sd_min) * k / (g.points - 1);
        out.helium.push_back(fig3_point(c, out.tlf, v, true));
        out.empty.push_back(fig3_point(c, out.tlf, v, false));
    }
    out.helium_at_operating_point = fig3_point(c, out.tlf, v_op, true);
    out.empty_at_operating_point = fig3_point(c, out.tlf, v_op, false);
    out.temperature_ratio = temperature_ratio_from_dwell(out.empty_at_operating_point.dwell_ratio,
                                                         out.helium_at_operating_point.dwell_ratio);
    out.report = {
        {"t_mxc_K", c.cell.t_mxc},
        {"tlf_anchor_K", out.anchor_temperature},
        {"tlf_delta_e_ueV", out.tlf.delta_e / units::ueV},
        {"tlf_barrier_ueV", out.tlf.e_b / units::ueV},
        {"operating_point",
         {{"helium", fig3_row(out.helium_at_operating_point)}, {"empty", fig3_row(out.empty_at_operating_point)}}},
        {"temperature_ratio_he_over_empty", out.temperature_ratio},
        {"checks",
         {{"temperature_ratio", band(out.temperature_ratio, 0.9 / 3.0, 1.1 / 3.0)},
          {"tau_bar_decreases_with_bias_helium", strictly_decreasing_tau(out.helium)},
          {"tau_bar_decreases_with_bias_empty", strictly_decreasing_tau(out.empty)}}},
    };
    return out;
}

}  // namespace qset::cli
