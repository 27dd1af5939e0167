#pragma once

// The two paper-reproduction scenarios, free of file I/O so that tests can
// drive them directly.

#include <vector>

#include "qset/analysis/pipeline.hpp"
#include "qset/trace.hpp"
#include "qset_cli/config.hpp"
#include "qset_cli/scenario.hpp"

namespace qset::cli {

// Report of one analysis run in the documented JSON layout.
Json analysis_report(const PipelineResult& r);

struct Fig2Result {
    CurrentTrace trace;
    PipelineResult analysis;
    DwellStats truth;  // dwell statistics of the true state sequence
    Json report;
};

// Synthesize the configured trace and run the pipeline on it. The report
// carries recovered and true values plus the recovery bands.
Fig2Result run_fig2(const ScenarioConfig& c);

struct Fig3Point {
    double v_sd = 0.0;   // V
    double p_set = 0.0;  // W
    double t_ph = 0.0;   // K
    double t_e = 0.0;    // K, taken as the fluctuator temperature
    double tau_bar = 0.0;
    double tau_l = 0.0;
    double tau_r = 0.0;
    double dwell_ratio = 0.0;  // tau_L / tau_R
};

// One bias point under helium (phonons at the mixing chamber) or empty-cell
// (phonons raised by resistance * P_SET) conditions, for a given fluctuator.
Fig3Point fig3_point(const ScenarioConfig& c, const TlfParams& tlf, double v_sd, bool helium);

struct Fig3Result {
    // The configured tau_bar and delta_E / kT hold at the helium operating
    // point; this is its fluctuator temperature.
    double anchor_temperature = 0.0;
    TlfParams tlf;
    std::vector<Fig3Point> helium;
    std::vector<Fig3Point> empty;
    Fig3Point helium_at_operating_point;
    Fig3Point empty_at_operating_point;
    double temperature_ratio = 0.0;  // T_TLF(He) / T_TLF(empty) from the dwell ratios
    Json report;
};

Fig3Result run_fig3(const ScenarioConfig& c);

}  // namespace qset::cli
