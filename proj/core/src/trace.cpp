#include "qset/trace.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "qset/errors.hpp"

namespace qset {

namespace {

constexpr std::string_view kComponentPrefix = "component_";

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view field, std::size_t line, const char* column) {
    field = trim(field);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError("cannot parse " + std::string(column) + " value '" + std::string(field) + "'",
                         line);
    }
    if (!std::isfinite(value)) {
        throw ParseError(std::string(column) + " value is not finite", line);
    }
    return value;
}

void append_number(std::string& out, double v) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

std::size_t sample_count(double duration, double dt) {
    if (!(duration >= 0.0) || !(dt > 0.0)) {
        throw InvalidParameter("duration must be non-negative and dt strictly positive");
    }
    return static_cast<std::size_t>(std::floor(duration / dt * (1.0 + 1e-12))) + 1;
}

const TraceComponent* CurrentTrace::component(const std::string& name) const {
    for (const auto& c : components) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

void CurrentTrace::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("trace dt must be positive");
    if (!std::isfinite(t0)) throw InvalidParameter("trace t0 must be finite");
    if (samples.empty()) throw InvalidParameter("trace has no samples");
    for (double v : samples) {
        if (!std::isfinite(v)) throw InvalidParameter("trace contains non-finite samples");
    }
    if (!states.empty() && states.size() != samples.size()) {
        throw InvalidParameter("state annotation length differs from sample count");
    }
    for (const auto& c : components) {
        if (c.samples.size() != samples.size()) {
            throw InvalidParameter("component '" + c.name + "' length differs from sample count");
        }
    }
}

void write_trace(const CurrentTrace& trace, std::ostream& out) {
    trace.validate();
    std::string line = "time_s,current_A";
    if (!trace.states.empty()) line += ",state";
    for (const auto& c : trace.components) {
        line += ',';
        line += kComponentPrefix;
        line += c.name;
    }
    line += '\n';
    out << line;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        line.clear();
        append_number(line, trace.time(k));
        line += ',';
        append_number(line, trace.samples[k]);
        if (!trace.states.empty()) {
            line += trace.states[k] == TlfState::L ? ",L" : ",R";
        }
        for (const auto& c : trace.components) {
            line += ',';
            append_number(line, c.samples[k]);
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoError("failed while writing trace");
}

void write_trace(const CurrentTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_trace(trace, out);
}

CurrentTrace read_trace(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty trace file", 1);
    ++line_no;
    const auto header = split(trim(line));
    if (header.size() < 2 || trim(header[0]) != "time_s" || trim(header[1]) != "current_A") {
        throw ParseError("header must start with 'time_s,current_A'", line_no);
    }

    CurrentTrace trace;
    bool has_state = false;
    for (std::size_t c = 2; c < header.size(); ++c) {
        const auto name = trim(header[c]);
        if (name == "state" && c == 2) {
            has_state = true;
        } else if (name.starts_with(kComponentPrefix) && name.size() > kComponentPrefix.size()) {
            trace.components.push_back({std::string(name.substr(kComponentPrefix.size())), {}});
        } else {
            throw ParseError("unknown column '" + std::string(name) + "'", line_no);
        }
    }

    std::vector<double> times;
    std::vector<std::size_t> row_lines;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto fields = split(body);
        if (fields.size() != header.size()) {
            std::ostringstream msg;
            msg << "expected " << header.size() << " fields, found " << fields.size();
            throw ParseError(msg.str(), line_no);
        }
        times.push_back(parse_double(fields[0], line_no, "time_s"));
        trace.samples.push_back(parse_double(fields[1], line_no, "current_A"));
        std::size_t next = 2;
        if (has_state) {
            const auto s = trim(fields[next++]);
            if (s == "L") {
                trace.states.push_back(TlfState::L);
            } else if (s == "R") {
                trace.states.push_back(TlfState::R);
            } else {
                throw ParseError("state must be 'L' or 'R', found '" + std::string(s) + "'", line_no);
            }
        }
        for (auto& c : trace.components) {
            c.samples.push_back(parse_double(fields[next++], line_no, "component"));
        }
        row_lines.push_back(line_no);
    }

    if (times.empty()) throw ParseError("trace has no data rows", line_no);
    if (times.size() < 2) throw ParseError("trace needs at least two rows to define dt", line_no);
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw ParseError("time_s is not strictly increasing", row_lines[k]);
        }
    }
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double step = times[k] - times[k - 1];
        if (std::abs(step - dt) > kTraceTimeJitterTolerance * dt) {
            std::ostringstream msg;
            msg << "non-uniform sampling: step " << step << " s deviates from mean step " << dt
                << " s by more than " << kTraceTimeJitterTolerance << " relative";
            throw ParseError(msg.str(), row_lines[k]);
        }
    }
    trace.t0 = times.front();
    trace.dt = dt;
    return trace;
}

CurrentTrace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return read_trace(in);
}

}  // namespace qset
