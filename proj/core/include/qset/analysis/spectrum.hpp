#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qset {

struct PsdEstimate {
    std::vector<double> frequency;  // Hz, strictly increasing
    std::vector<double> density;    // one-sided, A^2/Hz
    std::vector<double> averages;   // periodogram values averaged into each bin

    std::size_t size() const { return frequency.size(); }
    void validate() const;
};

enum class Window { hann, rectangular };

enum class Detrend {
    segment_mean,  // subtract each segment's own mean
    global_mean,   // subtract the mean of the whole record once
};

struct WelchOptions {
    std::size_t segment_length = 0;  // 0: largest power of two <= N / 4 (at least 256, at most N)
    double overlap = 0.5;
    Window window = Window::hann;
    Detrend detrend = Detrend::segment_mean;
};

// One-sided Welch estimate with the DC bin dropped. Normalised so that
// sum S df equals the variance of a white input.
PsdEstimate psd_welch(std::span<const double> y, double dt, const WelchOptions& options = {});

// Average neighbouring bins into logarithmically spaced groups.
PsdEstimate log_rebin(const PsdEstimate& psd, int bins_per_decade);

}  // namespace qset
