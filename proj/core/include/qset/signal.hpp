#pragma once

// Synthetic SET current traces: telegraph switching from a single strongly
// coupled fluctuator, diffusive drift, a 1/f^alpha background built from an
// ensemble of weak fluctuators, cascades of persistent jumps, an optional
// gate-step relaxation and white measurement noise.

#include <cstdint>
#include <optional>

#include "qset/tlf.hpp"
#include "qset/trace.hpp"

namespace qset {

// Independent RNG streams derived from one master seed, so that changing one
// component's parameters leaves the other realizations untouched.
enum class NoiseStream : std::uint64_t {
    telegraph = 1,
    drift = 2,
    pink = 3,
    jumps = 4,
    white = 5,
};

std::uint64_t derive_seed(std::uint64_t master, NoiseStream stream);

struct JumpAmplitude {
    double mean = 0.0;    // A
    double stddev = 0.0;  // A
};

// Superposition of exponential decays with log-uniform time constants.
struct Relaxation {
    double amplitude = 0.0;  // A at t = 0
    double tau_min = 60.0;   // s
    double tau_max = 3.0 * 3600.0;
    int count = 8;
};

struct PinkOptions {
    int components_per_decade = 32;
    // Gaussian noise shaped in the Fourier domain instead of a fluctuator
    // ensemble; much faster, not a superposition of telegraph processes.
    bool spectral_synthesis = false;
};

struct NoiseRecipe {
    std::optional<TlfParams> tlf;  // telegraph component, absent = none
    double t_tlf = 0.0;            // K
    double mean_current = 0.0;     // A
    double drift_diffusivity = 0.0;  // D in A / sqrt(s); sigma(t) = 2 D sqrt(t)
    double pink_amplitude = 0.0;     // A^2/Hz at 1 Hz
    double pink_alpha = 1.0;
    PinkOptions pink;
    double white_level = 0.0;        // one-sided A^2/Hz
    double jump_rate = 0.0;          // 1/s
    JumpAmplitude jump_amplitude;
    Relaxation relaxation;
    std::uint64_t seed = 1;

    void validate() const;
};

// Gaussian random walk with increment variance 4 D^2 dt starting at zero.
CurrentTrace gen_drift(double diffusivity, double duration, double dt, std::uint64_t seed);

// Sum of symmetric telegraph processes with flip rates log-uniform over
// [1/duration, 1/(2 dt)] and weights giving S(f) = amplitude / f^alpha.
CurrentTrace gen_pink(double amplitude, double alpha, double duration, double dt, std::uint64_t seed,
                      const PinkOptions& options = {});

// Poisson-timed persistent steps.
CurrentTrace gen_jump_cascade(double rate, const JumpAmplitude& amplitude, double duration, double dt,
                              std::uint64_t seed);

CurrentTrace gen_relaxation(const Relaxation& r, double duration, double dt);

// Zero-mean Gaussian samples with one-sided density `level`.
CurrentTrace gen_white(double level, double duration, double dt, std::uint64_t seed);

// Sum of all components around the mean current. The result carries the
// true fluctuator state at every sample and one annotation per component
// ("offset", "telegraph", "drift", "pink", "jumps", "relaxation", "white");
// the annotations add up to the samples.
CurrentTrace compose_trace(const NoiseRecipe& recipe, double duration, double dt);

}  // namespace qset
