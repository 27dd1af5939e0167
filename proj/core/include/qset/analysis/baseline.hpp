#pragma once

// Asymmetric least squares baseline: minimise
//   sum_i w_i (y_i - z_i)^2 + lambda sum_i (second difference of z)_i^2
// with w_i = p above the baseline and 1 - p below, re-weighting until the
// weights stop changing.

#include <span>
#include <vector>

namespace qset {

enum class Envelope {
    lower,  // weight p above the baseline: tracks the lower envelope for p < 0.5
    upper,  // mirrored, weight p below
    // Decide from the skewness of a symmetric pre-fit residual: the baseline
    // follows the side holding most of the samples.
    automatic,
};

struct AlsOptions {
    // Smoothness in sampling-rate-invariant form, s^4; the discrete penalty
    // is lambda / dt^4. (1000 s)^4 lets the baseline bend on ~1000 s scales.
    double lambda = 1e12;
    double p = 0.01;
    Envelope envelope = Envelope::lower;
    int max_iterations = 20;
};

// Returns the baseline sampled like `y`. Throws InvalidParameter for p outside
// (0, 1), lambda <= 0 or fewer than 3 samples and NumericalError if the
// banded system cannot be factorised.
std::vector<double> als_baseline(std::span<const double> y, double dt, const AlsOptions& options = {});

// Weighted Whittaker smoother: minimise sum w (y - z)^2 + lambda/dt^4 sum
// (second difference of z)^2 for fixed weights. Zero weights are allowed
// (the smoother interpolates across them) as long as two samples carry
// weight.
std::vector<double> whittaker_smooth(std::span<const double> y, std::span<const double> weights, double dt,
                                     double lambda);

// Envelope that `automatic` resolves to for this input.
Envelope resolve_envelope(std::span<const double> y, double dt, const AlsOptions& options);

}  // namespace qset
