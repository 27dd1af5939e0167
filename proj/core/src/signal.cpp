#include "qset/signal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <sstream>

#include <fftw3.h>

#include "fftw_lock.hpp"
#include "qset/errors.hpp"
#include "qset/units.hpp"

namespace qset {

namespace {

void check_grid(double duration, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be strictly positive");
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw InvalidParameter("duration must be strictly positive");
    }
}

void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidParameter(std::string(name) + " must be non-negative and finite");
    }
}

CurrentTrace zero_trace(double duration, double dt) {
    check_grid(duration, dt);
    CurrentTrace t;
    t.t0 = 0.0;
    t.dt = dt;
    t.samples.assign(sample_count(duration, dt), 0.0);
    return t;
}

struct FftwPlan {
    fftw_plan plan = nullptr;
    ~FftwPlan() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        if (plan) fftw_destroy_plan(plan);
    }
};

// Gaussian noise with one-sided density amplitude / f^alpha shaped in the
// Fourier domain. Zero DC and Nyquist bins.
std::vector<double> spectral_pink(double amplitude, double alpha, std::size_t n, double dt,
                                  std::mt19937_64& rng) {
    std::vector<double> out(n, 0.0);
    if (n < 4) return out;
    const std::size_t nc = n / 2 + 1;
    std::vector<std::complex<double>> spec(nc);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double fs = 1.0 / dt;
    for (std::size_t k = 1; k < nc; ++k) {
        if (2 * k == n) break;
        const double f = static_cast<double>(k) * fs / static_cast<double>(n);
        // E|X_k|^2 = S(f_k) fs / (2 n) for an unnormalized inverse transform.
        const double sd = std::sqrt(amplitude / std::pow(f, alpha) * fs / (2.0 * static_cast<double>(n)) / 2.0);
        const double re = normal(rng);
        const double im = normal(rng);
        spec[k] = {sd * re, sd * im};
    }
    FftwPlan p;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        p.plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(spec.data()),
                                      out.data(), FFTW_ESTIMATE);
    }
    if (!p.plan) throw NumericalError("FFTW could not plan the inverse transform");
    fftw_execute(p.plan);
    return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, NoiseStream stream) {
    const auto id = static_cast<std::uint64_t>(stream);
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

void NoiseRecipe::validate() const {
    if (tlf) {
        tlf->validate();
        if (!(t_tlf > 0.0) || !std::isfinite(t_tlf)) {
            throw InvalidParameter("t_tlf must be strictly positive when a TLF is configured");
        }
    }
    if (!std::isfinite(mean_current)) throw InvalidParameter("mean_current must be finite");
    require_non_negative(drift_diffusivity, "drift_diffusivity");
    require_non_negative(pink_amplitude, "pink_amplitude");
    if (!(pink_alpha >= 0.5 && pink_alpha <= 2.0)) throw InvalidParameter("pink_alpha must lie in [0.5, 2]");
    if (pink.components_per_decade < 1) throw InvalidParameter("pink components_per_decade must be >= 1");
    require_non_negative(white_level, "white_level");
    require_non_negative(jump_rate, "jump_rate");
    if (!std::isfinite(jump_amplitude.mean)) throw InvalidParameter("jump amplitude mean must be finite");
    require_non_negative(jump_amplitude.stddev, "jump amplitude stddev");
    if (!std::isfinite(relaxation.amplitude)) throw InvalidParameter("relaxation amplitude must be finite");
    if (!(relaxation.tau_min > 0.0) || !(relaxation.tau_max >= relaxation.tau_min)) {
        throw InvalidParameter("relaxation time constants must satisfy 0 < tau_min <= tau_max");
    }
    if (relaxation.count < 1) throw InvalidParameter("relaxation count must be >= 1");
}

CurrentTrace gen_drift(double diffusivity, double duration, double dt, std::uint64_t seed) {
    require_non_negative(diffusivity, "drift diffusivity");
    CurrentTrace t = zero_trace(duration, dt);
    if (diffusivity == 0.0) return t;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0, 2.0 * diffusivity * std::sqrt(dt));
    double x = 0.0;
    for (std::size_t k = 1; k < t.samples.size(); ++k) {
        x += step(rng);
        t.samples[k] = x;
    }
    return t;
}

CurrentTrace gen_pink(double amplitude, double alpha, double duration, double dt, std::uint64_t seed,
                      const PinkOptions& options) {
    require_non_negative(amplitude, "pink amplitude");
    if (!(alpha >= 0.5 && alpha <= 2.0)) throw InvalidParameter("pink alpha must lie in [0.5, 2]");
    if (options.components_per_decade < 1) throw InvalidParameter("components_per_decade must be >= 1");
    check_grid(duration, dt);
    if (duration < 4.0 * dt) {
        throw InvalidParameter("pink band too narrow: duration must be at least 4 dt");
    }
    CurrentTrace t = zero_trace(duration, dt);
    if (amplitude == 0.0) return t;
    const std::size_t n = t.samples.size();

    std::mt19937_64 rng(seed);
    if (options.spectral_synthesis) {
        t.samples = spectral_pink(amplitude, alpha, n, dt, rng);
        return t;
    }

    // Flip rates lambda_k per direction; a symmetric +-a telegraph with flip
    // rate lambda has S(f) = 4 a^2 tau / (1 + (2 pi f tau)^2), tau = 1/(2 lambda).
    const double lambda_lo = 1.0 / duration;
    const double lambda_hi = 1.0 / (2.0 * dt);
    const double decades = std::log10(lambda_hi / lambda_lo);
    const int count = std::max(1, static_cast<int>(std::ceil(decades * options.components_per_decade)));
    std::vector<double> tau(count);
    std::vector<double> weight(count);
    for (int k = 0; k < count; ++k) {
        const double lambda = lambda_lo * std::pow(lambda_hi / lambda_lo, (k + 0.5) / count);
        tau[k] = 1.0 / (2.0 * lambda);
        weight[k] = std::pow(tau[k], alpha - 1.0);
    }
    const double w1 = 2.0 * constants::pi * 1.0;
    double s1 = 0.0;
    for (int k = 0; k < count; ++k) s1 += 4.0 * weight[k] * tau[k] / (1.0 + w1 * w1 * tau[k] * tau[k]);
    const double scale = amplitude / s1;

    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int k = 0; k < count; ++k) {
        const double a = std::sqrt(scale * weight[k]);
        std::exponential_distribution<double> gap(1.0 / (2.0 * tau[k]));
        double level = uniform(rng) < 0.5 ? a : -a;
        double next = gap(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double time = t.time(i);
            while (next <= time) {
                level = -level;
                next += gap(rng);
            }
            t.samples[i] += level;
        }
    }
    return t;
}

CurrentTrace gen_jump_cascade(double rate, const JumpAmplitude& amplitude, double duration, double dt,
                              std::uint64_t seed) {
    require_non_negative(rate, "jump rate");
    require_non_negative(amplitude.stddev, "jump amplitude stddev");
    if (!std::isfinite(amplitude.mean)) throw InvalidParameter("jump amplitude mean must be finite");
    CurrentTrace t = zero_trace(duration, dt);
    if (rate == 0.0) return t;
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gap(rate);
    std::normal_distribution<double> size(amplitude.mean, amplitude.stddev);
    double level = 0.0;
    double next = gap(rng);
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        const double time = t.time(i);
        while (next <= time) {
            level += size(rng);
            next += gap(rng);
        }
        t.samples[i] = level;
    }
    return t;
}

CurrentTrace gen_relaxation(const Relaxation& r, double duration, double dt) {
    CurrentTrace t = zero_trace(duration, dt);
    if (r.amplitude == 0.0) return t;
    if (!(r.tau_min > 0.0) || !(r.tau_max >= r.tau_min) || r.count < 1) {
        throw InvalidParameter("relaxation needs 0 < tau_min <= tau_max and count >= 1");
    }
    const double a = r.amplitude / r.count;
    for (int m = 0; m < r.count; ++m) {
        const double frac = r.count == 1 ? 0.5 : static_cast<double>(m) / (r.count - 1);
        const double tau = r.tau_min * std::pow(r.tau_max / r.tau_min, frac);
        for (std::size_t i = 0; i < t.samples.size(); ++i) t.samples[i] += a * std::exp(-t.time(i) / tau);
    }
    return t;
}

CurrentTrace gen_white(double level, double duration, double dt, std::uint64_t seed) {
    require_non_negative(level, "white level");
    CurrentTrace t = zero_trace(duration, dt);
    if (level == 0.0) return t;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(level / (2.0 * dt)));
    for (double& v : t.samples) v = noise(rng);
    return t;
}

CurrentTrace compose_trace(const NoiseRecipe& recipe, double duration, double dt) {
    recipe.validate();
    check_grid(duration, dt);
    // The telegraph simulator works from a sample rate; use its grid everywhere.
    const double sample_rate = 1.0 / dt;
    const double grid_dt = 1.0 / sample_rate;

    CurrentTrace out = zero_trace(duration, grid_dt);
    const std::size_t n = out.samples.size();
    std::fill(out.samples.begin(), out.samples.end(), recipe.mean_current);
    out.components.push_back({"offset", out.samples});

    const auto add = [&](std::string name, std::vector<double> samples) {
        if (samples.size() != n) throw NumericalError("component '" + name + "' has a mismatched length");
        for (std::size_t i = 0; i < n; ++i) out.samples[i] += samples[i];
        out.components.push_back({std::move(name), std::move(samples)});
    };

    if (recipe.tlf) {
        auto tele = simulate_telegraph(*recipe.tlf, recipe.t_tlf, duration, sample_rate,
                                       derive_seed(recipe.seed, NoiseStream::telegraph));
        out.states = std::move(tele.states);
        add("telegraph", std::move(tele.trace.samples));
    }
    if (recipe.drift_diffusivity > 0.0) {
        add("drift", gen_drift(recipe.drift_diffusivity, duration, grid_dt,
                               derive_seed(recipe.seed, NoiseStream::drift)).samples);
    }
    if (recipe.pink_amplitude > 0.0) {
        add("pink", gen_pink(recipe.pink_amplitude, recipe.pink_alpha, duration, grid_dt,
                             derive_seed(recipe.seed, NoiseStream::pink), recipe.pink).samples);
    }
    if (recipe.jump_rate > 0.0) {
        add("jumps", gen_jump_cascade(recipe.jump_rate, recipe.jump_amplitude, duration, grid_dt,
                                      derive_seed(recipe.seed, NoiseStream::jumps)).samples);
    }
    if (recipe.relaxation.amplitude != 0.0) {
        add("relaxation", gen_relaxation(recipe.relaxation, duration, grid_dt).samples);
    }
    if (recipe.white_level > 0.0) {
        add("white", gen_white(recipe.white_level, duration, grid_dt,
                               derive_seed(recipe.seed, NoiseStream::white)).samples);
    }
    out.validate();
    return out;
}

}  // namespace qset
