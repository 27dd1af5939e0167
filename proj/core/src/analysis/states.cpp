#include "qset/analysis/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qset/errors.hpp"
#include "qset/units.hpp"

namespace qset {

namespace {

double gauss(double x, double mu, double sigma) {
    const double u = (x - mu) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * constants::pi));
}

double quantile(std::vector<double> v, double q) {
    const auto k = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

}  // namespace

Histogram amplitude_histogram(std::span<const double> y, int bins) {
    if (y.empty()) throw InvalidParameter("cannot histogram an empty trace");
    if (bins < 2) throw InvalidParameter("histogram needs at least 2 bins");
    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    h.counts.assign(static_cast<std::size_t>(bins), 0.0);
    const double width = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + b * width;
    h.edges.back() = hi;
    for (double v : y) {
        auto b = static_cast<long>((v - lo) / width);
        b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
        h.counts[static_cast<std::size_t>(b)] += 1.0;
    }
    return h;
}

StateDetection detect_states(std::span<const double> y, const DetectOptions& options) {
    if (y.size() < 2) throw InvalidParameter("state detection needs at least 2 samples");
    StateDetection out;
    out.histogram = amplitude_histogram(y, options.histogram_bins);
    const auto& h = out.histogram;
    const std::size_t nb = h.counts.size();
    const double width = h.edges[1] - h.edges[0];
    if (*std::max_element(y.begin(), y.end()) == *std::min_element(y.begin(), y.end())) {
        throw NoTelegraphDetected("trace is constant");
    }

    std::vector<double> centre(nb);
    for (std::size_t b = 0; b < nb; ++b) centre[b] = 0.5 * (h.edges[b] + h.edges[b + 1]);
    const double total = static_cast<double>(y.size());
    const double var_floor = width * width / 12.0;

    std::vector<double> sample(y.begin(), y.end());
    double mu[2] = {quantile(sample, 0.05), quantile(sample, 0.95)};
    if (mu[1] <= mu[0]) mu[1] = mu[0] + width;
    double var[2];
    var[0] = var[1] = std::max(var_floor, std::pow((mu[1] - mu[0]) / 4.0, 2));
    double weight[2] = {0.5, 0.5};

    // EM on binned data.
    double last_ll = -std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < options.max_em_iterations; ++it) {
        double ll = 0.0;
        double sw[2] = {0, 0}, sx[2] = {0, 0}, sxx[2] = {0, 0};
        for (std::size_t b = 0; b < nb; ++b) {
            if (h.counts[b] == 0.0) continue;
            const double p0 = weight[0] * gauss(centre[b], mu[0], std::sqrt(var[0]));
            const double p1 = weight[1] * gauss(centre[b], mu[1], std::sqrt(var[1]));
            const double s = p0 + p1;
            const double r0 = s > 0.0 ? p0 / s : (std::abs(centre[b] - mu[0]) < std::abs(centre[b] - mu[1]) ? 1.0 : 0.0);
            ll += h.counts[b] * std::log(std::max(s, 1e-300));
            const double c[2] = {h.counts[b] * r0, h.counts[b] * (1.0 - r0)};
            for (int k = 0; k < 2; ++k) {
                sw[k] += c[k];
                sx[k] += c[k] * centre[b];
                sxx[k] += c[k] * centre[b] * centre[b];
            }
        }
        for (int k = 0; k < 2; ++k) {
            if (sw[k] <= 0.0) throw NoTelegraphDetected("one histogram mode is empty");
            weight[k] = sw[k] / total;
            mu[k] = sx[k] / sw[k];
            var[k] = std::max(var_floor, sxx[k] / sw[k] - mu[k] * mu[k]);
        }
        if (std::abs(ll - last_ll) <= 1e-10 * std::abs(ll)) break;
        last_ll = ll;
    }
    out.em_iterations = it;

    const int lo = mu[0] <= mu[1] ? 0 : 1;
    const int hi = 1 - lo;
    out.mean_low = mu[lo];
    out.mean_high = mu[hi];
    out.sigma_low = std::sqrt(var[lo]);
    out.sigma_high = std::sqrt(var[hi]);
    out.weight_low = weight[lo];
    out.threshold = 0.5 * (out.mean_low + out.mean_high);
    out.hysteresis = std::min(out.sigma_low, out.sigma_high);

    // EM splits a single Gaussian into two overlapping halves separated by
    // roughly 0.3 (sigma_low + sigma_high); a resolved pair needs more.
    const double separation = out.mean_high - out.mean_low;
    if (separation < options.min_separation * (out.sigma_low + out.sigma_high)) {
        std::ostringstream msg;
        msg << "amplitude histogram is not bimodal (separation " << separation << ", widths " << out.sigma_low
            << " and " << out.sigma_high << ")";
        throw NoTelegraphDetected(msg.str());
    }

    const TlfState low_state = options.polarity == StatePolarity::r_high ? TlfState::L : TlfState::R;
    const TlfState high_state = low_state == TlfState::L ? TlfState::R : TlfState::L;
    out.states.resize(y.size());
    bool high = std::abs(y[0] - out.mean_high) < std::abs(y[0] - out.mean_low);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (high && y[i] < out.threshold - out.hysteresis) high = false;
        else if (!high && y[i] > out.threshold + out.hysteresis) high = true;
        out.states[i] = high ? high_state : low_state;
    }
    return out;
}

DwellStats dwell_statistics(std::span<const TlfState> states, double dt) {
    if (!(dt > 0.0)) throw InvalidParameter("dt must be strictly positive");
    DwellStats s;
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= states.size(); ++i) {
        if (i < states.size() && states[i] == states[i - 1]) continue;
        if (i < states.size()) ++s.transitions;
        // Runs touching either end are censored.
        if (run_start > 0 && i < states.size()) {
            const int k = states[run_start] == TlfState::L ? 0 : 1;
            sum[k] += static_cast<double>(i - run_start) * dt;
            ++count[k];
        }
        run_start = i;
    }
    if (s.transitions < 2 || count[0] == 0 || count[1] == 0) {
        throw InvalidParameter("dwell statistics need a complete dwell in each state (>= 2 transitions, got " +
                               std::to_string(s.transitions) + ")");
    }
    s.count_l = count[0];
    s.count_r = count[1];
    s.tau_l = sum[0] / static_cast<double>(count[0]);
    s.tau_r = sum[1] / static_cast<double>(count[1]);
    s.ratio = s.tau_l / s.tau_r;
    s.p_l = s.tau_l / (s.tau_l + s.tau_r);
    s.tau_bar = 1.0 / (1.0 / s.tau_l + 1.0 / s.tau_r);
    return s;
}

double delta_e_over_kt(const DwellStats& stats) {
    if (!(stats.ratio > 0.0) || !std::isfinite(stats.ratio)) {
        throw InvalidParameter("dwell ratio must be strictly positive");
    }
    return -std::log(stats.ratio);
}

}  // namespace qset
