#include "qset_cli/cli.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "output.hpp"
#include "qset/device_model.hpp"
#include "qset/errors.hpp"
#include "qset/substrate.hpp"
#include "qset/thermal.hpp"
#include "qset/trace.hpp"
#include "qset/units.hpp"
#include "qset_cli/scenario.hpp"
#include "qset_cli/scenarios.hpp"

#ifndef QSET_VERSION
#define QSET_VERSION "unknown"
#endif

namespace qset::cli {

namespace {

namespace fs = std::filesystem;

struct Invocation {
    std::string command;
    std::optional<fs::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> out;
    // analyze
    fs::path trace;
    bool no_detrend = false;
    std::optional<std::uint64_t> psd_segment;
    std::optional<fs::path> report_out;
    // reproduce
    std::string figure;
};

Json manifest(const Invocation& inv, const ScenarioConfig& c, const Json& outputs) {
    Json m{{"tool", "qset"}, {"version", QSET_VERSION}, {"command", inv.command}};
    if (inv.command == "reproduce") m["figure"] = inv.figure;
    if (inv.command == "analyze") m["input"] = inv.trace.string();
    m["config"] = c.resolved;
    m["outputs"] = outputs;
    return m;
}

void note(std::ostream& out, const fs::path& dir, const std::string& name) {
    out << "wrote " << (dir / name).string() << '\n';
}

void write_psd(const fs::path& dir, const std::string& name, const PsdEstimate& psd, const LorentzianFit& fit) {
    std::vector<double> model(psd.size());
    for (std::size_t i = 0; i < psd.size(); ++i) model[i] = fit.evaluate(psd.frequency[i]);
    write_columns(dir, name, {"frequency_Hz", "density_A2_per_Hz", "fit_A2_per_Hz", "averages"},
                  {psd.frequency, psd.density, model, psd.averages});
}

void write_histogram(const fs::path& dir, const std::string& name, const Histogram& h) {
    const std::size_t n = h.counts.size();
    std::vector<double> lo(h.edges.begin(), h.edges.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<double> hi(h.edges.begin() + 1, h.edges.end());
    write_columns(dir, name, {"bin_low_A", "bin_high_A", "count"}, {lo, hi, h.counts});
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    return g;
}

void write_thermal_curve(const fs::path& dir, const std::string& name, const std::vector<HeatBalanceResult>& curve) {
    std::vector<double> tph, te, qe, qq;
    for (const auto& r : curve) {
        tph.push_back(r.t_ph);
        te.push_back(r.t_e);
        qe.push_back(r.q_eph);
        qq.push_back(r.q_qp);
    }
    write_columns(dir, name, {"t_ph_K", "t_e_K", "q_eph_W", "q_qp_W"}, {tph, te, qe, qq});
}

int cmd_simulate(const Invocation& inv, const ScenarioConfig& c, std::ostream& out) {
    const CurrentTrace trace = compose_trace(c.noise_recipe(), c.run.duration, c.run.dt);
    const fs::path& dir = c.run.output_dir;
    {
        auto f = open_output(dir, "trace.csv");
        write_trace(trace, f);
        if (!f) throw IoError("write failed: " + (dir / "trace.csv").string());
    }
    note(out, dir, "trace.csv");
    Json outputs{{"trace", "trace.csv"}, {"samples", trace.size()}};
    write_json(dir, "manifest.json", manifest(inv, c, outputs));
    note(out, dir, "manifest.json");
    return exit_ok;
}

int cmd_analyze(const Invocation& inv, const ScenarioConfig& c, std::ostream& out) {
    const CurrentTrace trace = read_trace(inv.trace);
    const PipelineResult r = analyze_trace(trace, c.analysis);
    const fs::path& dir = c.run.output_dir;
    Json report = analysis_report(r);

    Json outputs = Json::object();
    if (inv.report_out) {
        const fs::path p = *inv.report_out;
        write_json(p.has_parent_path() ? p.parent_path() : fs::path("."), p.filename().string(), report);
        out << "wrote " << p.string() << '\n';
        outputs["report"] = p.string();
    } else {
        write_json(dir, "report.json", report);
        note(out, dir, "report.json");
        outputs["report"] = "report.json";
    }
    write_psd(dir, "psd.csv", r.psd, r.fit);
    write_psd(dir, "psd_binned.csv", r.psd_binned, r.fit);
    write_histogram(dir, "histogram.csv", r.detection.histogram);
    for (const char* name : {"psd.csv", "psd_binned.csv", "histogram.csv"}) note(out, dir, name);
    outputs["psd"] = "psd.csv";
    outputs["psd_binned"] = "psd_binned.csv";
    outputs["histogram"] = "histogram.csv";
    write_json(dir, "manifest.json", manifest(inv, c, outputs));
    note(out, dir, "manifest.json");
    out << "tau_bar " << r.fit.tau_bar << " s, delta_e/kT " << r.delta_e_over_kt << '\n';
    return exit_ok;
}

int cmd_thermal(const Invocation& inv, const ScenarioConfig& c, std::ostream& out) {
    const fs::path& dir = c.run.output_dir;
    const ThermalConfig& t = c.thermal;
    const auto grid = log_grid(t.t_ph_min, t.t_ph_max, t.points);
    write_thermal_curve(dir, "curve.csv", te_vs_tph_curve(t.p_set, grid, t.params));
    note(out, dir, "curve.csv");

    Json summary{{"p_set_W", t.p_set},
                 {"eph_asymptote_K", std::pow(t.p_set / (t.params.sigma * t.params.omega), 1.0 / t.params.n)}};
    try {
        summary["channel_crossover_K"] = channel_crossover_temperature(t.params);
    } catch (const NoSolution&) {
        summary["channel_crossover_K"] = nullptr;
    }
    const double t_ph =
        c.cell.helium ? c.cell.t_mxc : c.cell.t_mxc + c.cell.empty_cell_resistance * t.p_set;
    const HeatBalanceResult op = solve_electron_temperature(t.p_set, t_ph, t.params);
    summary["cell"] = {{"helium", c.cell.helium}, {"t_ph_K", op.t_ph}, {"t_e_K", op.t_e},
                       {"q_eph_W", op.q_eph}, {"q_qp_W", op.q_qp}};

    Json outputs{{"curve", "curve.csv"}, {"summary", "thermal.json"}};
    if (c.substrate.enabled) {
        const SubstrateConfig& s = c.substrate;
        const SubstrateField f = substrate_temperature_field(s.power, s.t_boundary, s.model, s.options);
        std::vector<double> r, z;
        for (std::size_t j = 0; j < f.nz; ++j) {
            for (std::size_t i = 0; i < f.nr; ++i) {
                r.push_back(f.r[i]);
                z.push_back(f.z[j]);
            }
        }
        write_columns(dir, "substrate_field.csv", {"r_m", "z_m", "T_K"}, {r, z, f.temperature});
        note(out, dir, "substrate_field.csv");
        summary["substrate"] = {{"power_W", f.power},
                                {"t_boundary_K", f.t_boundary},
                                {"t_at_source_K", f.t_at_source},
                                {"boundary_flux_W", f.boundary_flux},
                                {"iterations", f.iterations},
                                {"grid", {{"nr", f.nr}, {"nz", f.nz}}}};
        outputs["substrate_field"] = "substrate_field.csv";
    }
    write_json(dir, "thermal.json", summary);
    note(out, dir, "thermal.json");
    write_json(dir, "manifest.json", manifest(inv, c, outputs));
    note(out, dir, "manifest.json");
    return exit_ok;
}

int cmd_device(const Invocation& inv, const ScenarioConfig& c, std::ostream& out) {
    const fs::path& dir = c.run.output_dir;
    const DeviceParams& d = c.device;
    const OperatingPoint& op = c.operating_point;
    const DiamondFeatures f = diamond_features(d);
    Json summary{
        {"c_sigma_fF", d.c_sigma() / units::fF},
        {"charging_energy_ueV", charging_energy(d) / units::ueV},
        {"josephson_energy_ueV", {josephson_energy(d, 1) / units::ueV, josephson_energy(d, 2) / units::ueV}},
        {"features",
         {{"v_qp_min_mV", f.v_qp_min / units::mV},
          {"v_qp_max_mV", f.v_qp_max / units::mV},
          {"slope_neg", f.slope_neg},
          {"slope_pos", f.slope_pos},
          {"v_jqp_mV", f.v_jqp / units::mV},
          {"v_djqp_mV", f.v_djqp / units::mV}}},
        {"operating_point",
         {{"v_sd_mV", op.v_sd / units::mV},
          {"t_e_K", op.t_e},
          {"gate_charge_e", op.gate_charge / constants::e},
          {"current_A", op.current},
          {"gain_A_per_e", op.gain}}},
    };
    write_json(dir, "device.json", summary);
    note(out, dir, "device.json");

    constexpr int n = 401;
    std::vector<double> q(n), qc(n);
    for (int k = 0; k < n; ++k) {
        q[k] = 2.0 * k / (n - 1);
        qc[k] = q[k] * constants::e;
    }
    const auto current = orthodox_transfer_curve(d, op.v_sd, op.t_e, qc);
    write_columns(dir, "transfer.csv", {"gate_charge_e", "current_A"}, {q, current});
    note(out, dir, "transfer.csv");
    write_json(dir, "manifest.json", manifest(inv, c, {{"summary", "device.json"}, {"transfer", "transfer.csv"}}));
    note(out, dir, "manifest.json");
    return exit_ok;
}

int reproduce_fig2(const Invocation& inv, const ScenarioConfig& c, std::ostream& out) {
    const fs::path& dir = c.run.output_dir;
    Fig2Result r = run_fig2(c);
    {
        // The bundle keeps the true state but not the per-component columns.
        CurrentTrace slim = r.trace;
        slim.components.clear();
        auto f = open_output(dir, "trace.csv");
        write_trace(slim, f);
        if (!f) throw IoError("write failed: " + (dir / "trace.csv").string());
    }
    write_histogram(dir, "histogram.csv", r.analysis.detection.histogram);
    write_psd(dir, "psd.csv", r.analysis.psd, r.analysis.fit);
    write_psd(dir, "psd_binned.csv", r.analysis.psd_binned, r.analysis.fit);
    write_json(dir, "report.json", r.report);
    for (const char* name : {"trace.csv", "histogram.csv", "psd.csv", "psd_binned.csv", "report.json"}) {
        note(out, dir, name);
    }
    Json outputs{{"trace", "trace.csv"}, {"histogram", "histogram.csv"}, {"psd", "psd.csv"},
                 {"psd_binned", "psd_binned.csv"}, {"report", "report.json"}};
    write_json(dir, "manifest.json", manifest(inv, c, outputs));
    note(out, dir, "manifest.json");
    for (const auto& [name, check] : r.report["checks"].items()) {
        out << name << " " << check["value"].dump() << (check["pass"].get<bool>() ? " within " : " OUTSIDE ") << "["
            << check["min"].dump() << ", " << check["max"].dump() << "]\n";
    }
    return exit_ok;
}

void write_fig3_curve(const fs::path& dir, const std::string& name, const std::vector<Fig3Point>& pts) {
    std::vector<double> v, p, tph, te, tau, tl, tr, ratio;
    for (const auto& x : pts) {
        v.push_back(x.v_sd);
        p.push_back(x.p_set);
        tph.push_back(x.t_ph);
        te.push_back(x.t_e);
        tau.push_back(x.tau_bar);
        tl.push_back(x.tau_l);
        tr.push_back(x.tau_r);
        ratio.push_back(x.dwell_ratio);
    }
    write_columns(dir, name,
                  {"v_sd_V", "p_set_W", "t_ph_K", "t_tlf_K", "tau_bar_s", "tau_l_s", "tau_r_s", "tau_l_over_tau_r"},
                  {v, p, tph, te, tau, tl, tr, ratio});
}

int reproduce_fig3(const Invocation& inv, const ScenarioConfig& c, std::ostream& out) {
    const fs::path& dir = c.run.output_dir;
    const Fig3Result r = run_fig3(c);
    write_fig3_curve(dir, "fig3_helium.csv", r.helium);
    write_fig3_curve(dir, "fig3_empty.csv", r.empty);
    const ThermalConfig& t = c.thermal;
    write_thermal_curve(dir, "fig3d.csv", te_vs_tph_curve(t.p_set, log_grid(t.t_ph_min, t.t_ph_max, t.points), t.params));
    write_json(dir, "report.json", r.report);
    for (const char* name : {"fig3_helium.csv", "fig3_empty.csv", "fig3d.csv", "report.json"}) note(out, dir, name);
    Json outputs{{"helium", "fig3_helium.csv"}, {"empty", "fig3_empty.csv"}, {"heat_balance", "fig3d.csv"},
                 {"report", "report.json"}};
    write_json(dir, "manifest.json", manifest(inv, c, outputs));
    note(out, dir, "manifest.json");
    out << "T_TLF(He)/T_TLF(empty) " << r.temperature_ratio << '\n';
    return exit_ok;
}

int dispatch(const Invocation& inv, std::ostream& out) {
    Json root = inv.config ? load_config(*inv.config) : Json::object();
    if (inv.command == "analyze") {
        if (inv.no_detrend) root["analysis"]["detrend"] = false;
        if (inv.psd_segment) root["analysis"]["psd_segment"] = *inv.psd_segment;
    }
    ParseOptions po;
    po.require_run_length = inv.command == "simulate";
    po.seed = inv.seed;
    po.output_dir = inv.out;
    const ScenarioConfig c = parse_scenario(root, po);

    if (inv.command == "simulate") return cmd_simulate(inv, c, out);
    if (inv.command == "analyze") return cmd_analyze(inv, c, out);
    if (inv.command == "thermal") return cmd_thermal(inv, c, out);
    if (inv.command == "device") return cmd_device(inv, c, out);
    if (inv.figure == "fig2") return reproduce_fig2(inv, c, out);
    return reproduce_fig3(inv, c, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Telegraph-noise and heat-balance toolkit for single-electron transistors", "qset"};
    app.require_subcommand(1);
    Invocation inv;

    auto common = [&inv](CLI::App* sub) {
        sub->add_option("--config", inv.config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", inv.seed, "Master seed, overrides run.seed");
        sub->add_option("--out", inv.out, "Output directory, overrides run.output_dir");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "Synthesize a current trace");
    CLI::App* analyze = app.add_subcommand("analyze", "Analyze a trace CSV");
    CLI::App* thermal = app.add_subcommand("thermal", "Heat balance curve and optional substrate field");
    CLI::App* device = app.add_subcommand("device", "Energy scales, diamond features and transfer curve");
    CLI::App* reproduce = app.add_subcommand("reproduce", "Regenerate a figure bundle");
    for (CLI::App* s : {simulate, analyze, thermal, device, reproduce}) common(s);
    analyze->add_option("trace", inv.trace, "Trace CSV (time_s,current_A[,state,...])")->required();
    analyze->add_flag("--no-detrend", inv.no_detrend, "Skip baseline removal");
    analyze->add_option("--psd-segment", inv.psd_segment, "Welch segment length in samples");
    analyze->add_option("--report-out", inv.report_out, "Report path (default <out>/report.json)");
    reproduce->add_option("figure", inv.figure, "fig2 or fig3")->required()->check(CLI::IsMember({"fig2", "fig3"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }
    inv.command = app.get_subcommands().front()->get_name();

    try {
        return dispatch(inv, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_io;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

}  // namespace qset::cli
