#include "qset/analysis/pipeline.hpp"

#include <algorithm>

#include "qset/analysis/sensitivity.hpp"
#include "qset/errors.hpp"

namespace qset {

namespace {

std::vector<double> majority_mask(const std::vector<TlfState>& states) {
    const auto in_l = static_cast<std::size_t>(std::count(states.begin(), states.end(), TlfState::L));
    const TlfState majority = 2 * in_l >= states.size() ? TlfState::L : TlfState::R;
    std::vector<double> w(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) w[i] = states[i] == majority ? 1.0 : 0.0;
    return w;
}

}  // namespace

PipelineResult analyze_trace(const CurrentTrace& trace, const PipelineOptions& options) {
    trace.validate();
    PipelineResult out;
    const std::span<const double> y(trace.samples);

    if (options.detrend) {
        out.envelope = resolve_envelope(y, trace.dt, options.als);
        AlsOptions als = options.als;
        als.envelope = out.envelope;
        out.als = als_baseline(y, trace.dt, als);
        out.baseline = out.als;
        out.detrended.resize(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) out.detrended[i] = y[i] - out.baseline[i];
    } else {
        out.detrended.assign(y.begin(), y.end());
    }

    // With refinement to follow, the first pass only seeds the state mask and
    // residual drift may still blur the two levels together.
    DetectOptions first = options.detect;
    if (options.detrend && options.refine_passes > 0) first.min_separation = 0.0;
    out.detection = detect_states(out.detrended, first);
    if (options.detrend) {
        for (int pass = 0; pass < options.refine_passes; ++pass) {
            out.baseline = whittaker_smooth(y, majority_mask(out.detection.states), trace.dt, options.refine_lambda);
            for (std::size_t i = 0; i < y.size(); ++i) out.detrended[i] = y[i] - out.baseline[i];
            out.detection = detect_states(out.detrended, options.detect);
        }
    }
    out.dwell = dwell_statistics(out.detection.states, trace.dt);
    out.delta_e_over_kt = delta_e_over_kt(out.dwell);
    if (trace.states.size() == trace.size()) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < trace.size(); ++i) hits += trace.states[i] == out.detection.states[i];
        out.state_accuracy = static_cast<double>(hits) / static_cast<double>(trace.size());
    }

    if (options.detrend && options.spectral_lambda > 0.0) {
        out.spectral_baseline =
            whittaker_smooth(y, majority_mask(out.detection.states), trace.dt, options.spectral_lambda);
        std::vector<double> d(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) d[i] = y[i] - out.spectral_baseline[i];
        out.psd = psd_welch(d, trace.dt, options.welch);
    } else {
        out.psd = psd_welch(out.detrended, trace.dt, options.welch);
    }
    out.psd_binned = log_rebin(out.psd, options.rebin_per_decade);
    out.fit = fit_lorentzian_plus_pink(out.psd_binned, options.fit);

    if (options.estimate_drift && !out.baseline.empty()) {
        out.drift = drift_diffusivity(std::span<const double>(out.baseline), trace.dt);
    }
    if (options.transfer_gain) {
        out.sensitivity = charge_sensitivity(out.psd, *options.transfer_gain, options.sensitivity_frequency);
    }
    return out;
}

}  // namespace qset
