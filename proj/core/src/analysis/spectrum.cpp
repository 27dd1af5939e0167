#include "qset/analysis/spectrum.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <mutex>

#include <fftw3.h>

#include "../fftw_lock.hpp"
#include "qset/errors.hpp"
#include "qset/units.hpp"

namespace qset {

void PsdEstimate::validate() const {
    if (frequency.empty() || frequency.size() != density.size() || frequency.size() != averages.size()) {
        throw InvalidParameter("PSD arrays must be non-empty and equally sized");
    }
    for (std::size_t k = 0; k < frequency.size(); ++k) {
        if (!(frequency[k] > 0.0) || (k > 0 && !(frequency[k] > frequency[k - 1]))) {
            throw InvalidParameter("PSD frequencies must be positive and strictly increasing");
        }
        if (!(density[k] > 0.0) || !std::isfinite(density[k])) {
            throw InvalidParameter("PSD densities must be positive and finite");
        }
    }
}

PsdEstimate psd_welch(std::span<const double> y, double dt, const WelchOptions& options) {
    const std::size_t n = y.size();
    if (!(dt > 0.0)) throw InvalidParameter("dt must be strictly positive");
    if (!(options.overlap >= 0.0 && options.overlap <= 0.9)) {
        throw InvalidParameter("Welch overlap must lie in [0, 0.9]");
    }
    std::size_t len = options.segment_length;
    if (len == 0) {
        len = 256;
        while (len * 2 <= n / 4) len *= 2;
        len = std::min(len, n);
    }
    if (len < 4 || len > n) {
        throw InvalidParameter("Welch segment length must lie in [4, " + std::to_string(n) + "], got " +
                               std::to_string(len));
    }
    const auto shift = static_cast<std::size_t>(std::round(options.overlap * static_cast<double>(len)));
    const std::size_t step = std::max<std::size_t>(1, len - shift);
    const std::size_t segments = 1 + (n - len) / step;

    std::vector<double> w(len, 1.0);
    if (options.window == Window::hann) {
        for (std::size_t i = 0; i < len; ++i) {
            w[i] = 0.5 - 0.5 * std::cos(2.0 * constants::pi * static_cast<double>(i) / static_cast<double>(len));
        }
    }
    double u = 0.0;
    for (double v : w) u += v * v;

    const std::size_t nc = len / 2 + 1;
    std::vector<double> buf(len);
    std::vector<std::complex<double>> spec(nc);
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), buf.data(),
                                    reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalError("FFTW could not plan the forward transform");

    double global = 0.0;
    for (double v : y) global += v;
    global /= static_cast<double>(n);

    std::vector<double> acc(nc, 0.0);
    for (std::size_t s = 0; s < segments; ++s) {
        const double* x = y.data() + s * step;
        double mean = global;
        if (options.detrend == Detrend::segment_mean) {
            mean = 0.0;
            for (std::size_t i = 0; i < len; ++i) mean += x[i];
            mean /= static_cast<double>(len);
        }
        for (std::size_t i = 0; i < len; ++i) buf[i] = (x[i] - mean) * w[i];
        fftw_execute(plan);
        for (std::size_t k = 1; k < nc; ++k) acc[k] += std::norm(spec[k]);
    }
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    const double fs = 1.0 / dt;
    PsdEstimate out;
    for (std::size_t k = 1; k < nc; ++k) {
        const bool nyquist = 2 * k == len;
        const double scale = (nyquist ? 1.0 : 2.0) / (fs * u * static_cast<double>(segments));
        out.frequency.push_back(static_cast<double>(k) * fs / static_cast<double>(len));
        // A zero bin (constant input) would break log-space fitting downstream.
        out.density.push_back(std::max(acc[k] * scale, std::numeric_limits<double>::min()));
        out.averages.push_back(static_cast<double>(segments));
    }
    return out;
}

PsdEstimate log_rebin(const PsdEstimate& psd, int bins_per_decade) {
    psd.validate();
    if (bins_per_decade < 1) throw InvalidParameter("bins_per_decade must be >= 1");
    const double f0 = psd.frequency.front();
    const double step = std::pow(10.0, 1.0 / bins_per_decade);
    PsdEstimate out;
    std::size_t k = 0;
    double edge = f0 * std::sqrt(step);  // first group ends half a step above the lowest bin
    while (k < psd.size()) {
        double sf = 0.0, ss = 0.0, sa = 0.0;
        std::size_t m = 0;
        while (k < psd.size() && (psd.frequency[k] < edge || m == 0)) {
            sf += psd.frequency[k];
            ss += psd.density[k];
            sa += psd.averages[k];
            ++m;
            ++k;
        }
        out.frequency.push_back(sf / static_cast<double>(m));
        out.density.push_back(ss / static_cast<double>(m));
        out.averages.push_back(sa);
        while (edge <= (k < psd.size() ? psd.frequency[k] : 0.0)) edge *= step;
    }
    return out;
}

}  // namespace qset
