#pragma once

// Two-level state recovery from a detrended trace and the dwell statistics
// derived from it.

#include <cstddef>
#include <span>
#include <vector>

#include "qset/tlf_state.hpp"

namespace qset {

// Which current level belongs to the R well. The simulator adds di in R, so
// for di > 0 the R state is the high level.
enum class StatePolarity { r_high, r_low };

struct DetectOptions {
    int histogram_bins = 200;
    int max_em_iterations = 500;
    StatePolarity polarity = StatePolarity::r_high;
    // Required mode separation in units of (sigma_low + sigma_high).
    double min_separation = 1.0;
};

struct Histogram {
    std::vector<double> edges;   // size bins + 1
    std::vector<double> counts;  // size bins
};

// Histogram over [min, max] of the samples.
Histogram amplitude_histogram(std::span<const double> y, int bins);

struct StateDetection {
    std::vector<TlfState> states;
    double mean_low = 0.0;
    double mean_high = 0.0;
    double sigma_low = 0.0;
    double sigma_high = 0.0;
    double weight_low = 0.0;  // mixture weight of the low mode
    double threshold = 0.0;   // midpoint of the two means
    double hysteresis = 0.0;  // half-width of the dead band
    int em_iterations = 0;
    Histogram histogram;
};

// Two-Gaussian mixture fitted to the amplitude histogram, midpoint threshold
// and a dead band of +-1 sigma of the narrower mode. Throws
// NoTelegraphDetected when the modes are not resolved.
StateDetection detect_states(std::span<const double> y, const DetectOptions& options = {});

struct DwellStats {
    double tau_l = 0.0;  // s
    double tau_r = 0.0;
    std::size_t count_l = 0;
    std::size_t count_r = 0;
    double ratio = 0.0;  // tau_l / tau_r
    double p_l = 0.0;    // tau_l / (tau_l + tau_r)
    double tau_bar = 0.0;
    std::size_t transitions = 0;
};

// Complete dwells only: the first and last runs are censored and dropped.
// Needs at least one complete dwell in each state.
DwellStats dwell_statistics(std::span<const TlfState> states, double dt);

// -ln(tau_l / tau_r).
double delta_e_over_kt(const DwellStats& stats);

}  // namespace qset
