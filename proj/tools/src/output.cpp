#include "output.hpp"

#include <cstdio>

#include "qset/errors.hpp"

namespace qset::cli {

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw IoError("cannot open " + (dir / name).string() + " for writing");
    return f;
}

void write_json(const std::filesystem::path& dir, const std::string& name, const Json& j) {
    auto f = open_output(dir, name);
    f << j.dump(2) << '\n';
    if (!f) throw IoError("write failed: " + (dir / name).string());
}

void write_columns(const std::filesystem::path& dir, const std::string& name, const std::vector<std::string>& header,
                   std::initializer_list<std::span<const double>> columns) {
    auto f = open_output(dir, name);
    for (std::size_t c = 0; c < header.size(); ++c) f << (c ? "," : "") << header[c];
    f << '\n';
    const std::size_t rows = columns.size() ? columns.begin()->size() : 0;
    char buf[32];
    for (std::size_t i = 0; i < rows; ++i) {
        bool first = true;
        for (const auto& col : columns) {
            std::snprintf(buf, sizeof buf, "%.17g", col[i]);
            f << (first ? "" : ",") << buf;
            first = false;
        }
        f << '\n';
    }
    if (!f) throw IoError("write failed: " + (dir / name).string());
}

}  // namespace qset::cli
