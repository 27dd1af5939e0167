#pragma once

// S(f) = A / (1 + (2 pi f tau)^2) + B / f^alpha + C fitted to a PSD by bounded
// Levenberg-Marquardt on log S.

#include <array>
#include <string>

#include "qset/analysis/spectrum.hpp"

namespace qset {

struct LorentzianFit {
    double lorentzian_amplitude = 0.0;  // A, A^2/Hz at f = 0
    double tau_bar = 0.0;               // s
    double pink_amplitude = 0.0;        // B, A^2/Hz at 1 Hz
    double pink_alpha = 1.0;
    double white_level = 0.0;           // C, A^2/Hz

    double se_lorentzian_amplitude = 0.0;
    double se_tau_bar = 0.0;
    double se_pink_amplitude = 0.0;
    double se_pink_alpha = 0.0;
    double se_white_level = 0.0;

    double residual = 0.0;  // rms of the log residuals
    int iterations = 0;
    bool converged = false;
    // Parameters that ended on a bound (amplitudes at 0, alpha at 0.5 or 2).
    std::array<bool, 5> at_bound{};

    bool flagged() const;
    double evaluate(double f) const;
    double lorentzian(double f) const;
    double pink(double f) const;
};

enum class FitWeighting {
    uniform,  // equal weight per bin
    // Weight by the number of averaged periodogram values. This hands the
    // fit to the top decade, where a sampled telegraph spectrum is lifted
    // above the Lorentzian by aliasing; pair it with max_frequency well
    // below Nyquist.
    chi2,
};

struct FitOptions {
    int max_iterations = 500;
    FitWeighting weighting = FitWeighting::uniform;
    // Subtract the mean-log bias of an average of n exponential variates.
    bool log_bias_correction = true;
    double max_frequency = 0.0;  // Hz; bins above are ignored, 0 keeps all
};

// Throws InvalidParameter with fewer than 2 decades of coverage or fewer
// than 8 bins, NumericalError if the iteration cap is reached without
// convergence.
LorentzianFit fit_lorentzian_plus_pink(const PsdEstimate& psd, const FitOptions& options = {});

}  // namespace qset
