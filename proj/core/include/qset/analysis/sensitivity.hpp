#pragma once

#include "qset/analysis/spectrum.hpp"

namespace qset {

// Log-log interpolation of the density at f; f must lie within the band.
double interpolate_psd(const PsdEstimate& psd, double f);

// sqrt(S_I(f)) / |gain| in e / sqrt(Hz), gain in A per e.
double charge_sensitivity(const PsdEstimate& psd, double transfer_gain, double f_eval);

}  // namespace qset
