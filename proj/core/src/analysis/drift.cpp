#include "qset/analysis/drift.hpp"

#include <algorithm>
#include <cmath>

#include "qset/errors.hpp"

namespace qset {

namespace {

// sigma^2 = s t through the origin; D = sqrt(s / 4).
void fit(DriftEstimate& e) {
    double stt = 0.0, sty = 0.0;
    for (std::size_t k = 0; k < e.lag.size(); ++k) {
        stt += e.lag[k] * e.lag[k];
        sty += e.lag[k] * e.variance[k];
    }
    if (!(stt > 0.0)) throw InvalidParameter("drift fit needs positive lags");
    const double slope = std::max(0.0, sty / stt);
    double ssr = 0.0;
    for (std::size_t k = 0; k < e.lag.size(); ++k) {
        const double r = e.variance[k] - slope * e.lag[k];
        ssr += r * r;
    }
    const double dof = std::max<double>(1.0, static_cast<double>(e.lag.size()) - 1.0);
    const double se_slope = std::sqrt(ssr / dof / stt);
    e.d = std::sqrt(slope / 4.0);
    // Delta method away from zero, the square root of the slope error at zero.
    e.d_stderr = e.d > 0.0 ? std::min(se_slope / (8.0 * e.d), std::sqrt(se_slope / 4.0))
                           : std::sqrt(se_slope / 4.0);
}

}  // namespace

DriftEstimate drift_diffusivity(std::span<const std::vector<double>> ensemble, double dt, std::size_t max_points) {
    if (ensemble.size() < 2) throw InvalidParameter("drift ensemble needs at least 2 members");
    if (!(dt > 0.0)) throw InvalidParameter("dt must be strictly positive");
    const std::size_t n = ensemble.front().size();
    for (const auto& m : ensemble) {
        if (m.size() != n) throw InvalidParameter("drift ensemble members must have equal length");
    }
    if (n < 2) throw InvalidParameter("drift ensemble members need at least 2 samples");
    if (max_points < 1) throw InvalidParameter("max_points must be >= 1");
    const std::size_t points = std::min(max_points, n - 1);

    DriftEstimate e;
    const double members = static_cast<double>(ensemble.size());
    for (std::size_t q = 1; q <= points; ++q) {
        const std::size_t k = q * (n - 1) / points;
        double mean = 0.0;
        for (const auto& m : ensemble) mean += m[k] - m[0];
        mean /= members;
        double var = 0.0;
        for (const auto& m : ensemble) var += (m[k] - m[0] - mean) * (m[k] - m[0] - mean);
        e.lag.push_back(static_cast<double>(k) * dt);
        e.variance.push_back(var / (members - 1.0));
    }
    fit(e);
    return e;
}

DriftEstimate drift_diffusivity(std::span<const double> y, double dt, double max_lag_fraction, int lags) {
    if (!(dt > 0.0)) throw InvalidParameter("dt must be strictly positive");
    if (y.size() < 16) throw InvalidParameter("single-trace drift estimate needs at least 16 samples");
    if (!(max_lag_fraction > 0.0 && max_lag_fraction <= 0.5)) {
        throw InvalidParameter("max_lag_fraction must lie in (0, 0.5]");
    }
    if (lags < 2) throw InvalidParameter("need at least 2 lags");
    const auto max_lag = std::max<std::size_t>(
        1, static_cast<std::size_t>(max_lag_fraction * static_cast<double>(y.size() - 1)));

    DriftEstimate e;
    std::size_t last = 0;
    for (int q = 0; q < lags; ++q) {
        const auto k = static_cast<std::size_t>(
            std::round(std::pow(static_cast<double>(max_lag), static_cast<double>(q) / (lags - 1))));
        if (k <= last) continue;
        last = k;
        double acc = 0.0;
        const std::size_t m = y.size() - k;
        for (std::size_t i = 0; i < m; ++i) acc += (y[i + k] - y[i]) * (y[i + k] - y[i]);
        e.lag.push_back(static_cast<double>(k) * dt);
        e.variance.push_back(acc / static_cast<double>(m));
    }
    fit(e);
    return e;
}

}  // namespace qset
