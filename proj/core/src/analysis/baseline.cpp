#include "qset/analysis/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "qset/errors.hpp"

namespace qset {

namespace {

// Least squares [sqrt(W); sqrt(lambda) D] z = [sqrt(W) y; 0] by Givens
// rotations on the banded stack. The normal equations square a condition
// number that already reaches ~1e9 for smoothing over 10^4 samples.
class BandedQr {
public:
    explicit BandedQr(std::size_t n) : n_(n), r_(3 * n), qty_(n) {}

    std::vector<double> solve(std::span<const double> y, std::span<const double> w, double lambda) {
        std::fill(r_.begin(), r_.end(), 0.0);
        std::fill(qty_.begin(), qty_.end(), 0.0);
        const double sl = std::sqrt(lambda);
        for (std::size_t c = 0; c < n_; ++c) {
            const double sw = std::sqrt(w[c]);
            double v[3] = {sw, 0.0, 0.0};
            absorb(c, v, sw * y[c]);
            if (c + 2 < n_) {
                double d[3] = {sl, -2.0 * sl, sl};
                absorb(c, d, 0.0);
            }
        }
        std::vector<double> z(n_);
        for (std::size_t j = n_; j-- > 0;) {
            double acc = qty_[j];
            if (j + 1 < n_) acc -= r_[3 * j + 1] * z[j + 1];
            if (j + 2 < n_) acc -= r_[3 * j + 2] * z[j + 2];
            const double diag = r_[3 * j];
            if (diag == 0.0 || !std::isfinite(acc)) throw NumericalError("ALS system is singular");
            z[j] = acc / diag;
        }
        return z;
    }

private:
    // Rotate the row v (columns c .. c+2, right-hand side b) into R.
    void absorb(std::size_t c, double v[3], double b) {
        std::size_t k = c;
        while (k < n_) {
            double* rk = &r_[3 * k];
            if (v[0] == 0.0) {
                v[0] = v[1];
                v[1] = v[2];
                v[2] = 0.0;
                if (v[0] == 0.0 && v[1] == 0.0) return;
                ++k;
                continue;
            }
            if (rk[0] == 0.0) {
                rk[0] = v[0];
                rk[1] = v[1];
                rk[2] = v[2];
                qty_[k] = b;
                return;
            }
            const double h = std::hypot(rk[0], v[0]);
            const double cs = rk[0] / h;
            const double sn = v[0] / h;
            rk[0] = h;
            const double r1 = cs * rk[1] + sn * v[1];
            const double v1 = -sn * rk[1] + cs * v[1];
            const double r2 = cs * rk[2] + sn * v[2];
            const double v2 = -sn * rk[2] + cs * v[2];
            rk[1] = r1;
            rk[2] = r2;
            const double q = cs * qty_[k] + sn * b;
            b = -sn * qty_[k] + cs * b;
            qty_[k] = q;
            // v now starts at column k + 1; R row k + 1 reaches column k + 3.
            v[0] = v1;
            v[1] = v2;
            v[2] = 0.0;
            ++k;
        }
    }

    std::size_t n_;
    std::vector<double> r_;  // row j: R(j, j), R(j, j+1), R(j, j+2)
    std::vector<double> qty_;
};

std::vector<double> solve(std::span<const double> y, double dt, double lambda_c, double p, bool mirrored,
                          int max_iterations) {
    const std::size_t n = y.size();
    const double lambda = lambda_c / std::pow(dt, 4);
    // Centre the data so the rotations work on small numbers.
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> yc(n);
    for (std::size_t i = 0; i < n; ++i) yc[i] = y[i] - mean;

    std::vector<double> w(n, 0.5);
    std::vector<double> z;
    BandedQr qr(n);
    for (int it = 0; it < max_iterations; ++it) {
        z = qr.solve(yc, w, lambda);
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const bool above = mirrored ? yc[i] < z[i] : yc[i] > z[i];
            const double wi = above ? p : 1.0 - p;
            if (wi != w[i]) {
                w[i] = wi;
                changed = true;
            }
        }
        if (!changed && it > 0) break;
    }
    for (double& v : z) v += mean;
    return z;
}

void check(std::span<const double> y, double dt, const AlsOptions& o) {
    if (y.size() < 3) throw InvalidParameter("ALS needs at least 3 samples");
    if (!(dt > 0.0)) throw InvalidParameter("dt must be strictly positive");
    if (!(o.p > 0.0 && o.p < 1.0)) throw InvalidParameter("ALS asymmetry p must lie in (0, 1)");
    if (!(o.lambda > 0.0) || !std::isfinite(o.lambda)) throw InvalidParameter("ALS lambda must be positive");
    if (o.max_iterations < 1) throw InvalidParameter("ALS needs at least one iteration");
}

}  // namespace

std::vector<double> whittaker_smooth(std::span<const double> y, std::span<const double> weights, double dt,
                                     double lambda) {
    if (y.size() < 3 || weights.size() != y.size()) {
        throw InvalidParameter("smoother needs at least 3 samples and one weight per sample");
    }
    if (!(dt > 0.0)) throw InvalidParameter("dt must be strictly positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidParameter("smoother lambda must be positive");
    std::size_t weighted = 0;
    double mean = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
            throw InvalidParameter("smoother weights must be non-negative");
        }
        weighted += weights[i] > 0.0;
        mean += weights[i] * y[i];
        wsum += weights[i];
    }
    if (weighted < 2) throw InvalidParameter("smoother needs at least two weighted samples");
    mean /= wsum;
    std::vector<double> yc(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) yc[i] = y[i] - mean;
    BandedQr qr(y.size());
    auto z = qr.solve(yc, weights, lambda / std::pow(dt, 4));
    for (double& v : z) v += mean;
    return z;
}

Envelope resolve_envelope(std::span<const double> y, double dt, const AlsOptions& options) {
    if (options.envelope != Envelope::automatic) return options.envelope;
    check(y, dt, options);
    const auto z = solve(y, dt, options.lambda, 0.5, false, 1);
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) mean += y[i] - z[i];
    mean /= n;
    double m3 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - z[i] - mean;
        m3 += d * d * d;
    }
    // A tail towards high values means most samples sit low.
    return m3 >= 0.0 ? Envelope::lower : Envelope::upper;
}

std::vector<double> als_baseline(std::span<const double> y, double dt, const AlsOptions& options) {
    check(y, dt, options);
    const Envelope env = resolve_envelope(y, dt, options);
    return solve(y, dt, options.lambda, options.p, env == Envelope::upper, options.max_iterations);
}

}  // namespace qset
