#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "qset_cli/config.hpp"

namespace qset::cli {

// Opens `dir / name` for writing, creating `dir` on demand. Throws IoError.
std::ofstream open_output(const std::filesystem::path& dir, const std::string& name);

void write_json(const std::filesystem::path& dir, const std::string& name, const Json& j);

// Columns of equal length, printed with 17 significant digits.
void write_columns(const std::filesystem::path& dir, const std::string& name, const std::vector<std::string>& header,
                   std::initializer_list<std::span<const double>> columns);

}  // namespace qset::cli
