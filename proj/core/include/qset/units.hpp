#pragma once

// Physical constants (CODATA 2018 exact values where defined) and the unit
// conversions used at the I/O boundary. Everything inside the library is SI.

#include <cmath>

namespace qset {

namespace constants {
inline constexpr double e = 1.602176634e-19;       // C
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double k_b = 1.380649e-23;        // J / K
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double bcs_gap_ratio = 1.764;     // Delta / (k_B T_c)
}  // namespace constants

namespace units {
inline constexpr double milli = 1e-3;
inline constexpr double micro = 1e-6;
inline constexpr double nano = 1e-9;
inline constexpr double pico = 1e-12;
inline constexpr double femto = 1e-15;

inline constexpr double ueV = micro * constants::e;  // J
inline constexpr double meV = milli * constants::e;  // J
inline constexpr double mV = milli;                  // V
inline constexpr double pA = pico;                   // A
inline constexpr double mK = milli;                  // K
inline constexpr double fF = femto;                  // F
inline constexpr double pW = pico;                   // W
inline constexpr double hour = 3600.0;               // s

// Diffusivity D enters sigma(t) = 2 D sqrt(t); the library keeps A / sqrt(s).
inline double per_sqrt_hour_to_per_sqrt_second(double d) { return d / std::sqrt(hour); }
inline double per_sqrt_second_to_per_sqrt_hour(double d) { return d * std::sqrt(hour); }
}  // namespace units

}  // namespace qset
