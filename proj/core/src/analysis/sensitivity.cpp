#include "qset/analysis/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qset/errors.hpp"

namespace qset {

double interpolate_psd(const PsdEstimate& psd, double f) {
    psd.validate();
    const auto& fr = psd.frequency;
    if (!(f >= fr.front() && f <= fr.back())) {
        std::ostringstream msg;
        msg << "frequency " << f << " Hz outside the PSD band [" << fr.front() << ", " << fr.back() << "] Hz";
        throw InvalidParameter(msg.str());
    }
    const auto it = std::lower_bound(fr.begin(), fr.end(), f);
    const auto k = static_cast<std::size_t>(it - fr.begin());
    if (fr[k] == f) return psd.density[k];
    const double x0 = std::log(fr[k - 1]), x1 = std::log(fr[k]);
    const double y0 = std::log(psd.density[k - 1]), y1 = std::log(psd.density[k]);
    return std::exp(y0 + (y1 - y0) * (std::log(f) - x0) / (x1 - x0));
}

double charge_sensitivity(const PsdEstimate& psd, double transfer_gain, double f_eval) {
    if (!(transfer_gain != 0.0) || !std::isfinite(transfer_gain)) {
        throw InvalidParameter("transfer gain must be non-zero and finite");
    }
    return std::sqrt(interpolate_psd(psd, f_eval)) / std::abs(transfer_gain);
}

}  // namespace qset
