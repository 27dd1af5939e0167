#pragma once

// Uniformly sampled current record and its CSV representation.
//
// CSV layout: header `time_s,current_A` optionally followed by `state` and
// any number of `component_<name>` columns; one row per sample, values
// printed with 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qset/tlf_state.hpp"

namespace qset {

struct TraceComponent {
    std::string name;
    std::vector<double> samples;
};

struct CurrentTrace {
    double t0 = 0.0;              // s
    double dt = 0.0;              // s
    std::vector<double> samples;  // A

    // Ground-truth annotations, present on synthesized traces.
    std::vector<TlfState> states;
    std::vector<TraceComponent> components;

    std::size_t size() const { return samples.size(); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double duration() const { return samples.empty() ? 0.0 : dt * static_cast<double>(size() - 1); }
    double sample_rate() const { return 1.0 / dt; }

    const TraceComponent* component(const std::string& name) const;

    // dt > 0, samples non-empty and finite, annotations sized like samples.
    void validate() const;
};

// Number of samples on the grid t = 0, dt, ... not exceeding `duration`.
std::size_t sample_count(double duration, double dt);

// Maximum relative deviation of any time step from the mean step accepted by
// the reader.
inline constexpr double kTraceTimeJitterTolerance = 1e-6;

void write_trace(const CurrentTrace& trace, std::ostream& out);
void write_trace(const CurrentTrace& trace, const std::filesystem::path& path);

// Throws ParseError (with the offending line) for malformed rows, NaN,
// non-monotone or non-uniform time, or an empty file.
CurrentTrace read_trace(std::istream& in);
CurrentTrace read_trace(const std::filesystem::path& path);

}  // namespace qset
