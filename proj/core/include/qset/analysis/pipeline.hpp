#pragma once

// Trace -> baseline removal -> state detection -> dwell statistics, and
// trace -> Welch PSD -> Lorentzian + 1/f fit, with optional drift and charge
// sensitivity estimates.

#include <optional>
#include <string>
#include <vector>

#include "qset/analysis/baseline.hpp"
#include "qset/analysis/drift.hpp"
#include "qset/analysis/spectral_fit.hpp"
#include "qset/analysis/spectrum.hpp"
#include "qset/analysis/states.hpp"
#include "qset/trace.hpp"

namespace qset {

struct PipelineOptions {
    bool detrend = true;
    AlsOptions als{.lambda = 1e9, .p = 0.01, .envelope = Envelope::automatic, .max_iterations = 20};
    // After the ALS pass: re-smooth using only samples in the more occupied
    // state, subtract, re-detect. Removes the envelope bias and the sag of
    // the ALS baseline across excursions into the other state.
    int refine_passes = 2;
    double refine_lambda = 1e8;  // s^4
    DetectOptions detect;
    // The spectrum is taken after removing a stiffer baseline, again fitted
    // to the more occupied state only, so that it keeps the telegraph
    // Lorentzian and the 1/f background above ~1/(2 pi spectral_lambda^1/4).
    // 0 uses the detection baseline.
    double spectral_lambda = 3e10;  // s^4
    WelchOptions welch;
    int rebin_per_decade = 10;
    FitOptions fit;
    // Diffusion constant from the increments of the ALS baseline.
    bool estimate_drift = true;
    std::optional<double> transfer_gain;  // A per e
    double sensitivity_frequency = 1.0;   // Hz
};

struct PipelineResult {
    std::vector<double> baseline;   // final baseline, empty without detrending
    std::vector<double> als;        // ALS pass alone
    std::vector<double> detrended;  // input minus baseline
    Envelope envelope = Envelope::lower;
    StateDetection detection;
    DwellStats dwell;
    double delta_e_over_kt = 0.0;
    std::vector<double> spectral_baseline;
    PsdEstimate psd;         // Welch estimate of the trace minus spectral_baseline
    PsdEstimate psd_binned;  // log-rebinned, fitted
    LorentzianFit fit;
    std::optional<DriftEstimate> drift;
    std::optional<double> sensitivity;  // e / sqrt(Hz)
    // Fraction of samples whose recovered state matches the annotation, when
    // the trace carries one.
    std::optional<double> state_accuracy;
};

PipelineResult analyze_trace(const CurrentTrace& trace, const PipelineOptions& options = {});

}  // namespace qset
