#include "qset/analysis/spectral_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "qset/errors.hpp"
#include "qset/units.hpp"

namespace qset {

namespace {

// Parameter vector: A, ln tau, B, alpha, C with amplitudes in units of the
// median density.
enum { kA = 0, kLnTau = 1, kB = 2, kAlpha = 3, kC = 4, kParams = 5 };

using Vec = Eigen::Matrix<double, kParams, 1>;
using Mat = Eigen::Matrix<double, kParams, kParams>;

struct Problem {
    std::vector<double> f;
    std::vector<double> target;  // bias-corrected ln S (scaled)
    std::vector<double> weight;  // sqrt of the per-bin weight
    Vec lower;
    Vec upper;
};

struct Terms {
    double lorentz;  // 1 / (1 + (2 pi f tau)^2)
    double pink;     // f^-alpha
    double model;
};

Terms terms(const Vec& p, double f) {
    const double w = 2.0 * constants::pi * f * std::exp(p[kLnTau]);
    Terms t;
    t.lorentz = 1.0 / (1.0 + w * w);
    t.pink = std::pow(f, -p[kAlpha]);
    t.model = p[kA] * t.lorentz + p[kB] * t.pink + p[kC];
    return t;
}

// Weighted log residuals; infinite cost if the model is not positive.
double cost(const Problem& pr, const Vec& p, Eigen::VectorXd* r = nullptr, Eigen::MatrixXd* j = nullptr) {
    const auto n = static_cast<Eigen::Index>(pr.f.size());
    if (r) r->resize(n);
    if (j) j->resize(n, kParams);
    double c = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double f = pr.f[static_cast<std::size_t>(i)];
        const Terms t = terms(p, f);
        if (!(t.model > 0.0) || !std::isfinite(t.model)) return std::numeric_limits<double>::infinity();
        const double w = pr.weight[static_cast<std::size_t>(i)];
        const double ri = w * (std::log(t.model) - pr.target[static_cast<std::size_t>(i)]);
        c += ri * ri;
        if (r) (*r)[i] = ri;
        if (j) {
            const double x = 2.0 * constants::pi * f * std::exp(p[kLnTau]);
            const double x2 = x * x;
            (*j)(i, kA) = w * t.lorentz / t.model;
            (*j)(i, kLnTau) = w * p[kA] * (-2.0 * x2 * t.lorentz * t.lorentz) / t.model;
            (*j)(i, kB) = w * t.pink / t.model;
            (*j)(i, kAlpha) = w * (-p[kB] * std::log(f) * t.pink) / t.model;
            (*j)(i, kC) = w / t.model;
        }
    }
    return c;
}

Vec clip(Vec p, const Problem& pr) { return p.cwiseMax(pr.lower).cwiseMin(pr.upper); }

// Non-negative A, B, C minimising the relative residual sum (model/S - 1)^2
// for fixed tau and alpha: exhaustive over the 7 active sets.
Vec linear_start(const Problem& pr, const std::vector<double>& s, double ln_tau, double alpha) {
    const auto n = static_cast<Eigen::Index>(pr.f.size());
    Eigen::MatrixXd m(n, 3);
    Vec probe = Vec::Zero();
    probe[kLnTau] = ln_tau;
    probe[kAlpha] = alpha;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Terms t = terms(probe, pr.f[static_cast<std::size_t>(i)]);
        const double inv = 1.0 / s[static_cast<std::size_t>(i)];
        m(i, 0) = t.lorentz * inv;
        m(i, 1) = t.pink * inv;
        m(i, 2) = inv;
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector3d best_x = Eigen::Vector3d::Zero();
    for (int mask = 1; mask < 8; ++mask) {
        std::vector<Eigen::Index> cols;
        for (int c = 0; c < 3; ++c) {
            if (mask & (1 << c)) cols.push_back(c);
        }
        Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = m.col(cols[c]);
        const Eigen::VectorXd x = sub.colPivHouseholderQr().solve(ones);
        if ((x.array() < 0.0).any()) continue;
        const double res = (sub * x - ones).squaredNorm();
        if (res < best) {
            best = res;
            best_x.setZero();
            for (std::size_t c = 0; c < cols.size(); ++c) best_x[cols[c]] = x[static_cast<Eigen::Index>(c)];
        }
    }
    Vec p = probe;
    p[kA] = best_x[0];
    p[kB] = best_x[1];
    p[kC] = best_x[2];
    return p;
}

struct LmResult {
    Vec p;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

LmResult levenberg_marquardt(const Problem& pr, Vec p, int max_iterations) {
    p = clip(p, pr);
    Eigen::VectorXd r;
    Eigen::MatrixXd j;
    double c = cost(pr, p, &r, &j);
    double mu = 1e-3;
    LmResult out;
    std::vector<double> history;
    for (int it = 1; it <= max_iterations; ++it) {
        out.iterations = it;
        // Gauss-Newton converges only linearly on a non-zero-residual problem.
        // Stop once ten steps gain less than 1e-6 of the cost, which moves the
        // parameters by well under a percent of their standard errors.
        history.push_back(c);
        constexpr std::size_t window = 10;
        if (history.size() > window && history[history.size() - 1 - window] - c <= 1e-6 * c) {
            out.converged = true;
            break;
        }
        const Vec g = j.transpose() * r;
        const Mat h = j.transpose() * j;
        // Parameters pinned at a bound with the gradient pushing outwards stay fixed.
        std::array<bool, kParams> free{};
        for (int k = 0; k < kParams; ++k) {
            const bool at_lo = p[k] <= pr.lower[k] && g[k] > 0.0;
            const bool at_hi = p[k] >= pr.upper[k] && g[k] < 0.0;
            free[k] = !(at_lo || at_hi);
        }
        double gnorm = 0.0;
        for (int k = 0; k < kParams; ++k) {
            if (free[k]) gnorm = std::max(gnorm, std::abs(g[k]) * std::sqrt(std::max(h(k, k), 0.0)));
        }
        if (gnorm <= 1e-14 * std::max(c, 1e-300)) {
            out.converged = true;
            break;
        }
        bool accepted = false;
        while (mu < 1e16) {
            Mat a = h;
            for (int k = 0; k < kParams; ++k) {
                a(k, k) += mu * std::max(h(k, k), 1e-12);
                if (!free[k]) {
                    a.row(k).setZero();
                    a.col(k).setZero();
                    a(k, k) = 1.0;
                }
            }
            Vec rhs = -g;
            for (int k = 0; k < kParams; ++k) {
                if (!free[k]) rhs[k] = 0.0;
            }
            const Vec step = a.ldlt().solve(rhs);
            const Vec trial = clip(p + step, pr);
            Eigen::VectorXd r2;
            Eigen::MatrixXd j2;
            const double c2 = cost(pr, trial, &r2, &j2);
            if (c2 < c) {
                const double drop = c - c2;
                const double move = (trial - p).cwiseAbs().maxCoeff();
                p = trial;
                c = c2;
                r = std::move(r2);
                j = std::move(j2);
                mu = std::max(mu / 10.0, 1e-12);
                accepted = true;
                if (drop <= 1e-12 * c || move <= 1e-12) out.converged = true;
                break;
            }
            mu *= 4.0;
        }
        if (!accepted) {
            // No descent direction left at any damping: a (bounded) minimum.
            out.converged = true;
        }
        if (out.converged) break;
    }
    out.p = p;
    out.cost = c;
    return out;
}

}  // namespace

bool LorentzianFit::flagged() const {
    return !converged || std::any_of(at_bound.begin(), at_bound.end(), [](bool b) { return b; });
}

double LorentzianFit::lorentzian(double f) const {
    const double w = 2.0 * constants::pi * f * tau_bar;
    return lorentzian_amplitude / (1.0 + w * w);
}

double LorentzianFit::pink(double f) const { return pink_amplitude * std::pow(f, -pink_alpha); }

double LorentzianFit::evaluate(double f) const { return lorentzian(f) + pink(f) + white_level; }

LorentzianFit fit_lorentzian_plus_pink(const PsdEstimate& full, const FitOptions& options) {
    full.validate();
    if (options.max_frequency < 0.0) throw InvalidParameter("max_frequency must be >= 0");
    PsdEstimate psd;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (options.max_frequency > 0.0 && full.frequency[i] > options.max_frequency) break;
        psd.frequency.push_back(full.frequency[i]);
        psd.density.push_back(full.density[i]);
        psd.averages.push_back(full.averages[i]);
    }
    const std::size_t n = psd.size();
    if (n < 8) throw InvalidParameter("spectral fit needs at least 8 PSD bins");
    const double f_lo = psd.frequency.front();
    const double f_hi = psd.frequency.back();
    if (f_hi / f_lo < 100.0) {
        std::ostringstream msg;
        msg << "spectral fit needs at least 2 decades of frequency coverage, got "
            << std::log10(f_hi / f_lo);
        throw InvalidParameter(msg.str());
    }

    std::vector<double> sorted = psd.density;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
    const double scale = sorted[n / 2];

    Problem pr;
    pr.f = psd.frequency;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = psd.density[i] / scale;
        const double m = std::max(psd.averages[i], 1.0);
        // E ln(mean of m unit exponentials) = psi(m) - ln m
        const double bias = options.log_bias_correction ? -1.0 / (2.0 * m) - 1.0 / (12.0 * m * m) : 0.0;
        pr.target.push_back(std::log(s[i]) - bias);
        pr.weight.push_back(options.weighting == FitWeighting::chi2 ? std::sqrt(m) : 1.0);
    }
    const double tau_lo = 1.0 / (2.0 * constants::pi * f_hi * 100.0);
    const double tau_hi = 100.0 / (2.0 * constants::pi * f_lo);
    const double inf = std::numeric_limits<double>::infinity();
    pr.lower << 0.0, std::log(tau_lo), 0.0, 0.5, 0.0;
    pr.upper << inf, std::log(tau_hi), inf, 2.0, inf;

    // Starting points: the knee of f S(f) above the high-frequency floor,
    // plus a coarse grid in tau and alpha.
    std::vector<double> tail(s.end() - static_cast<std::ptrdiff_t>(std::max<std::size_t>(n / 10, 1)), s.end());
    std::nth_element(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(tail.size() / 2), tail.end());
    const double floor = tail[tail.size() / 2];
    std::size_t knee = 0;
    double best_fs = -inf;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = pr.f[i] * (s[i] - floor);
        if (v > best_fs) {
            best_fs = v;
            knee = i;
        }
    }
    std::vector<double> taus{1.0 / (2.0 * constants::pi * pr.f[knee])};
    for (int k = 0; k <= 12; ++k) {
        const double f = f_lo * std::pow(f_hi / f_lo, k / 12.0);
        taus.push_back(1.0 / (2.0 * constants::pi * f));
    }

    std::vector<std::pair<double, Vec>> starts;
    for (double tau : taus) {
        for (double alpha : {0.7, 1.0, 1.4}) {
            Vec p = linear_start(pr, s, std::log(tau), alpha);
            starts.emplace_back(cost(pr, clip(p, pr)), p);
        }
    }
    std::sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    LmResult best;
    best.cost = inf;
    const std::size_t tries = std::min<std::size_t>(4, starts.size());
    for (std::size_t k = 0; k < tries; ++k) {
        if (!std::isfinite(starts[k].first)) continue;
        LmResult r = levenberg_marquardt(pr, starts[k].second, options.max_iterations);
        if (r.cost < best.cost) best = r;
    }
    if (!std::isfinite(best.cost)) throw NumericalError("spectral fit found no admissible starting point");
    if (!best.converged) {
        std::ostringstream msg;
        msg << "spectral fit did not converge within " << options.max_iterations << " iterations";
        throw NumericalError(msg.str());
    }

    const Vec& p = best.p;
    LorentzianFit fit;
    fit.lorentzian_amplitude = p[kA] * scale;
    fit.tau_bar = std::exp(p[kLnTau]);
    fit.pink_amplitude = p[kB] * scale;
    fit.pink_alpha = p[kAlpha];
    fit.white_level = p[kC] * scale;
    fit.iterations = best.iterations;
    fit.converged = best.converged;
    for (int k = 0; k < kParams; ++k) {
        const double span = std::isfinite(pr.upper[k]) ? pr.upper[k] - pr.lower[k] : 1.0;
        fit.at_bound[static_cast<std::size_t>(k)] =
            p[k] <= pr.lower[k] + 1e-9 * span || p[k] >= pr.upper[k] - 1e-9 * span;
    }

    Eigen::VectorXd r;
    Eigen::MatrixXd j;
    const double c = cost(pr, p, &r, &j);
    double wsum = 0.0;
    for (double w : pr.weight) wsum += w * w;
    fit.residual = std::sqrt(c / wsum);
    const double dof = std::max<double>(1.0, static_cast<double>(n) - static_cast<double>(kParams));
    const Eigen::MatrixXd cov =
        (c / dof) * Eigen::MatrixXd(j.transpose() * j).completeOrthogonalDecomposition().pseudoInverse();
    const auto se = [&](int k) { return std::sqrt(std::max(cov(k, k), 0.0)); };
    fit.se_lorentzian_amplitude = se(kA) * scale;
    fit.se_tau_bar = se(kLnTau) * fit.tau_bar;
    fit.se_pink_amplitude = se(kB) * scale;
    fit.se_pink_alpha = se(kAlpha);
    fit.se_white_level = se(kC) * scale;
    return fit;
}

}  // namespace qset
