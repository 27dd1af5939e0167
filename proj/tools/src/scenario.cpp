#include "qset_cli/scenario.hpp"

#include <cmath>

#include "qset/errors.hpp"
#include "qset/units.hpp"

namespace qset::cli {

namespace {


template <class F>
void validated(const std::string& block, F&& check) {
    try {
        check();
    } catch (const InvalidParameter& e) {
        throw ConfigError(block + ": " + e.what());
    }
}

int positive_int(ObjectReader& r, const std::string& key, std::int64_t fallback) {
    const auto v = r.integer(key, fallback);
    if (v <= 0 || v > 1'000'000'000) r.fail(key, "must be a positive integer");
    return static_cast<int>(v);
}

void read_run(ObjectReader r, RunConfig& c, const ParseOptions& o) {
    if (o.require_run_length) {
        c.duration = r.required_positive("duration_s");
        c.dt = r.required_positive("dt_s");
    } else {
        c.duration = r.positive("duration_s", c.duration);
        c.dt = r.positive("dt_s", c.dt);
    }
    if (c.dt > c.duration) r.fail("dt_s", "must not exceed duration_s");
    c.seed = r.unsigned_integer("seed", c.seed);
    c.output_dir = r.string("output_dir", c.output_dir.string());
    r.finish();
}

void read_device(ObjectReader r, DeviceParams& d) {
    d = DeviceParams::reference();
    d.r1 = r.positive("r1_ohm", d.r1);
    d.r2 = r.positive("r2_ohm", d.r2);
    d.delta = r.non_negative("delta_ueV", d.delta / units::ueV) * units::ueV;
    d.c1 = r.positive("c1_fF", d.c1 / units::fF) * units::fF;
    d.c2 = r.positive("c2_fF", d.c2 / units::fF) * units::fF;
    d.cgt = r.positive("cgt_fF", d.cgt / units::fF) * units::fF;
    r.finish();
    validated("device", [&] { d.validate(); });
}

void read_operating_point(ObjectReader r, const DeviceParams& d, OperatingPoint& op) {
    op.v_sd = r.number("v_sd_mV", op.v_sd / units::mV) * units::mV;
    op.t_e = r.positive("t_e_K", op.t_e);
    const auto gate = r.optional_number("gate_charge_e");
    const int grid = positive_int(r, "gate_grid_points", 200);
    r.finish();

    if (gate) {
        op.gate_charge = *gate * constants::e;
    } else {
        // Steepest point of the transfer curve.
        double best = -1.0;
        for (int k = 0; k < grid; ++k) {
            const double q = (k + 0.5) / grid * constants::e;
            const double g = std::abs(transfer_gain(d, op.v_sd, op.t_e, q));
            if (g > best) {
                best = g;
                op.gate_charge = q;
            }
        }
        r.resolve("gate_charge_e", op.gate_charge / constants::e);
    }
    op.current = orthodox_steady_state(d, op.v_sd, op.t_e, op.gate_charge).current;
    op.gain = transfer_gain(d, op.v_sd, op.t_e, op.gate_charge);
    r.resolve("current_A", op.current);
    r.resolve("gain_A_per_e", op.gain);
}

void read_tlf(ObjectReader r, const OperatingPoint& op, TlfConfig& t) {
    t.tau_bar = r.positive("tau_bar_s", t.tau_bar);
    t.delta_e_over_kt = r.number("delta_e_over_kt", t.delta_e_over_kt);
    t.t_tlf = r.positive("t_tlf_K", t.t_tlf);
    t.attempt_rate = r.positive("attempt_rate_Hz", t.attempt_rate);
    t.dq = r.non_negative("dq_e", t.dq);
    const auto di = r.optional_number("di_A");
    r.finish();
    t.di = di ? *di : std::abs(op.gain) * t.dq;
    if (!di) r.resolve("di_A", t.di);
    validated("tlf", [&] { t.params().validate(); });
}

void read_recipe(ObjectReader r, const OperatingPoint& op, const TlfConfig& tlf, RecipeConfig& c) {
    const double gain2 = op.gain * op.gain;
    c.telegraph = r.boolean("telegraph", true);
    const auto mean = r.optional_number("mean_current_A");
    c.mean_current = mean.value_or(op.current);
    if (!mean) r.resolve("mean_current_A", c.mean_current);
    c.drift = r.non_negative("drift_pA_per_sqrt_hour", 0.7) * units::pA / std::sqrt(units::hour);
    const double pink_e = r.non_negative("pink_e_per_sqrt_Hz", 1.7e-3);
    c.pink = pink_e * pink_e * gain2;
    c.pink_alpha = r.number("pink_alpha", 1.0);
    c.pink_options.components_per_decade = positive_int(r, "pink_components_per_decade", 32);
    c.pink_options.spectral_synthesis = r.boolean("pink_spectral_synthesis", false);
    const double white_e = r.non_negative("white_e_per_sqrt_Hz", 0.8e-3);
    c.white = white_e * white_e * gain2;
    c.jump_rate = r.non_negative("jump_rate_per_hour", 0.25) / units::hour;
    c.jump.mean = r.number("jump_mean_A", 0.0);
    const auto jump_sd = r.optional_number("jump_stddev_A");
    c.jump.stddev = jump_sd.value_or(0.2 * tlf.di);
    if (!jump_sd) r.resolve("jump_stddev_A", c.jump.stddev);
    if (c.jump.stddev < 0.0) r.fail("jump_stddev_A", "must be >= 0");
    {
        ObjectReader x = r.object("relaxation");
        c.relaxation.amplitude = x.number("amplitude_A", 0.0);
        c.relaxation.tau_min = x.positive("tau_min_s", c.relaxation.tau_min);
        c.relaxation.tau_max = x.positive("tau_max_s", c.relaxation.tau_max);
        c.relaxation.count = positive_int(x, "count", c.relaxation.count);
        x.finish();
    }
    r.resolve("pink_A2_per_Hz", c.pink);
    r.resolve("white_A2_per_Hz", c.white);
    r.finish();
}

void read_analysis(ObjectReader r, const OperatingPoint& op, PipelineOptions& a) {
    a.detrend = r.boolean("detrend", a.detrend);
    a.als.lambda = r.positive("als_lambda_s4", a.als.lambda);
    a.als.p = r.positive("als_p", a.als.p);
    if (a.als.p >= 1.0) r.fail("als_p", "must be < 1");
    a.als.envelope = r.choice("als_envelope", a.als.envelope,
                              {{"lower", Envelope::lower}, {"upper", Envelope::upper}, {"automatic", Envelope::automatic}});
    a.als.max_iterations = positive_int(r, "als_max_iterations", a.als.max_iterations);
    a.refine_passes = static_cast<int>(r.integer("refine_passes", a.refine_passes));
    if (a.refine_passes < 0) r.fail("refine_passes", "must be >= 0");
    a.refine_lambda = r.positive("refine_lambda_s4", a.refine_lambda);
    a.spectral_lambda = r.non_negative("spectral_lambda_s4", a.spectral_lambda);
    a.detect.histogram_bins = positive_int(r, "histogram_bins", a.detect.histogram_bins);
    a.detect.max_em_iterations = positive_int(r, "max_em_iterations", a.detect.max_em_iterations);
    a.detect.min_separation = r.non_negative("min_separation", a.detect.min_separation);
    a.detect.polarity =
        r.choice("polarity", a.detect.polarity, {{"r_high", StatePolarity::r_high}, {"r_low", StatePolarity::r_low}});
    a.welch.segment_length = static_cast<std::size_t>(r.unsigned_integer("psd_segment", a.welch.segment_length));
    a.welch.overlap = r.non_negative("psd_overlap", a.welch.overlap);
    if (a.welch.overlap >= 1.0) r.fail("psd_overlap", "must be < 1");
    a.welch.window =
        r.choice("psd_window", a.welch.window, {{"hann", Window::hann}, {"rectangular", Window::rectangular}});
    a.welch.detrend = r.choice("psd_detrend", a.welch.detrend,
                               {{"segment_mean", Detrend::segment_mean}, {"global_mean", Detrend::global_mean}});
    a.rebin_per_decade = positive_int(r, "rebin_per_decade", a.rebin_per_decade);
    a.fit.max_iterations = positive_int(r, "fit_max_iterations", a.fit.max_iterations);
    a.fit.weighting =
        r.choice("fit_weighting", a.fit.weighting, {{"uniform", FitWeighting::uniform}, {"chi2", FitWeighting::chi2}});
    a.fit.log_bias_correction = r.boolean("log_bias_correction", a.fit.log_bias_correction);
    a.fit.max_frequency = r.non_negative("fit_max_frequency_Hz", a.fit.max_frequency);
    a.estimate_drift = r.boolean("estimate_drift", a.estimate_drift);
    a.sensitivity_frequency = r.positive("sensitivity_frequency_Hz", a.sensitivity_frequency);
    const auto gain = r.optional_number("transfer_gain_A_per_e");
    a.transfer_gain = gain.value_or(op.gain);
    if (!gain) r.resolve("transfer_gain_A_per_e", *a.transfer_gain);
    r.finish();
}

void read_thermal(ObjectReader r, ThermalConfig& c) {
    ThermalParams& p = c.params;
    p.sigma = r.positive("sigma_W_per_K5_m3", p.sigma);
    p.omega = r.positive("omega_m3", p.omega);
    p.n = r.positive("n", p.n);
    p.kappa_s = r.non_negative("kappa_s_W_per_K_m", p.kappa_s);
    p.beta = r.non_negative("beta", p.beta);
    p.t_c = r.positive("t_c_K", p.t_c);
    p.s_lead = r.positive("s_lead_m2", p.s_lead);
    p.l_lead = r.positive("l_lead_m", p.l_lead);
    p.kappa_at_mean_temperature = r.boolean("kappa_at_mean_temperature", p.kappa_at_mean_temperature);
    c.p_set = r.non_negative("p_set_W", c.p_set);
    c.t_ph_min = r.positive("t_ph_min_K", c.t_ph_min);
    c.t_ph_max = r.positive("t_ph_max_K", c.t_ph_max);
    if (c.t_ph_max <= c.t_ph_min) r.fail("t_ph_max_K", "must exceed t_ph_min_K");
    c.points = positive_int(r, "points", c.points);
    if (c.points < 2) r.fail("points", "must be at least 2");
    r.finish();
    validated("thermal", [&] { p.validate(); });
}

void read_substrate(ObjectReader r, SubstrateConfig& c) {
    SubstrateModel& m = c.model;
    c.enabled = r.boolean("enabled", c.enabled);
    c.power = r.non_negative("power_W", c.power);
    c.t_boundary = r.positive("t_boundary_K", c.t_boundary);
    m.sio2_thickness = r.positive("sio2_thickness_m", m.sio2_thickness);
    m.si_depth = r.positive("si_depth_m", m.si_depth);
    m.domain_radius = r.positive("domain_radius_m", m.domain_radius);
    m.kappa_si_coeff = r.positive("kappa_si_W_per_K4_m", m.kappa_si_coeff);
    m.kappa_sio2_coeff = r.positive("kappa_sio2_W_per_K3_m", m.kappa_sio2_coeff);
    m.source_area = r.positive("source_area_m2", m.source_area);
    m.cells_source_radius = positive_int(r, "cells_source_radius", m.cells_source_radius);
    m.cells_oxide = positive_int(r, "cells_oxide", m.cells_oxide);
    m.growth = r.positive("growth", m.growth);
    m.max_iterations = positive_int(r, "max_iterations", m.max_iterations);
    m.rel_tol = r.positive("rel_tol", m.rel_tol);
    c.options.check_refinement = r.boolean("check_refinement", c.options.check_refinement);
    c.options.refinement_tol = r.positive("refinement_tol", c.options.refinement_tol);
    r.finish();
    validated("substrate", [&] { m.validate(); });
}

void read_cell(ObjectReader r, CellConfig& c) {
    c.helium = r.boolean("helium", c.helium);
    c.t_mxc = r.positive("t_mxc_K", c.t_mxc);
    c.empty_cell_resistance = r.non_negative("empty_cell_resistance_K_per_W", c.empty_cell_resistance);
    c.helium_epsilon = r.positive("helium_epsilon", c.helium_epsilon);
    c.helium_fill_factor = r.non_negative("helium_fill_factor", c.helium_fill_factor);
    if (c.helium_fill_factor > 1.0) r.fail("helium_fill_factor", "must be <= 1");
    r.finish();
}

void read_fig3(ObjectReader r, Fig3Config& c) {
    c.v_sd_min = r.positive("v_sd_min_mV", c.v_sd_min / units::mV) * units::mV;
    c.v_sd_max = r.positive("v_sd_max_mV", c.v_sd_max / units::mV) * units::mV;
    if (c.v_sd_max <= c.v_sd_min) r.fail("v_sd_max_mV", "must exceed v_sd_min_mV");
    c.points = positive_int(r, "points", c.points);
    if (c.points < 2) r.fail("points", "must be at least 2");
    r.finish();
}

}  // namespace

TlfParams TlfConfig::params() const {
    return TlfParams::from_observables(tau_bar, delta_e_over_kt, t_tlf, attempt_rate, dq, di);
}

NoiseRecipe ScenarioConfig::noise_recipe() const {
    NoiseRecipe n;
    if (recipe.telegraph) n.tlf = tlf.params();
    n.t_tlf = tlf.t_tlf;
    n.mean_current = recipe.mean_current;
    n.drift_diffusivity = recipe.drift;
    n.pink_amplitude = recipe.pink;
    n.pink_alpha = recipe.pink_alpha;
    n.pink = recipe.pink_options;
    n.white_level = recipe.white;
    n.jump_rate = recipe.jump_rate;
    n.jump_amplitude = recipe.jump;
    n.relaxation = recipe.relaxation;
    n.seed = run.seed;
    return n;
}

ScenarioConfig parse_scenario(const Json& input, const ParseOptions& options) {
    Json root = input.is_null() ? Json::object() : input;
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    // Command-line overrides enter the tree so that the manifest shows them.
    if (options.seed) root["run"]["seed"] = *options.seed;
    if (options.output_dir) root["run"]["output_dir"] = options.output_dir->string();

    ScenarioConfig c;
    c.resolved = Json::object();
    ObjectReader top(root, "", c.resolved);
    read_run(top.object("run"), c.run, options);
    read_device(top.object("device"), c.device);
    try {
        read_operating_point(top.object("operating_point"), c.device, c.operating_point);
    } catch (const Error& e) {
        throw ConfigError(std::string("operating_point: ") + e.what());
    }
    read_tlf(top.object("tlf"), c.operating_point, c.tlf);
    read_recipe(top.object("recipe"), c.operating_point, c.tlf, c.recipe);
    read_analysis(top.object("analysis"), c.operating_point, c.analysis);
    read_thermal(top.object("thermal"), c.thermal);
    read_substrate(top.object("substrate"), c.substrate);
    read_cell(top.object("cell"), c.cell);
    read_fig3(top.object("fig3"), c.fig3);
    top.finish();
    validated("recipe", [&] { c.noise_recipe().validate(); });
    return c;
}

}  // namespace qset::cli
