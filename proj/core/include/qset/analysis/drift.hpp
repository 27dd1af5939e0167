#pragma once

// Diffusion constant of a drifting current from sigma(t) = 2 D sqrt(t),
// fitted as sigma^2 = 4 D^2 t by least squares through the origin.

#include <cstddef>
#include <span>
#include <vector>

namespace qset {

struct DriftEstimate {
    double d = 0.0;         // A / sqrt(s)
    double d_stderr = 0.0;  // A / sqrt(s)
    std::vector<double> lag;       // s
    std::vector<double> variance;  // A^2, sigma^2 at each lag
};

// Ensemble of equally sampled walks; sigma^2(t) is the across-member variance
// of x(t) - x(0) at up to `max_points` evenly spaced times.
DriftEstimate drift_diffusivity(std::span<const std::vector<double>> ensemble, double dt,
                                std::size_t max_points = 200);

// One trace: mean squared increment over log-spaced lags up to
// `max_lag_fraction` of the duration.
DriftEstimate drift_diffusivity(std::span<const double> y, double dt, double max_lag_fraction = 0.1,
                                int lags = 24);

}  // namespace qset
