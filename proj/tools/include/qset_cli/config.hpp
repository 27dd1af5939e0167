#pragma once

// Strict reader for the JSON configuration tree. Every value read is also
// written to a "resolved" tree, so that the manifest carries the defaults
// that were actually used. Keys that are never read are rejected.

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace qset::cli {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Throws ConfigError for unreadable files and syntax errors.
Json load_config(const std::filesystem::path& path);

class ObjectReader {
public:
    // `node` may be null (block absent), otherwise it must be an object.
    // The materialized block is written to `resolved` at `at`.
    ObjectReader(const Json& node, std::string path, Json& resolved,
                 Json::json_pointer at = Json::json_pointer());

    double number(const std::string& key, double fallback);
    double positive(const std::string& key, double fallback);
    double non_negative(const std::string& key, double fallback);
    double required_positive(const std::string& key);
    // Absent or null: nullopt, recorded as null until the caller resolves it.
    std::optional<double> optional_number(const std::string& key);
    std::int64_t integer(const std::string& key, std::int64_t fallback);
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback);
    bool boolean(const std::string& key, bool fallback);
    std::string string(const std::string& key, const std::string& fallback);

    template <class E>
    E choice(const std::string& key, E fallback, std::initializer_list<std::pair<const char*, E>> names);

    ObjectReader object(const std::string& key);

    // Overwrite a resolved value (used for defaults derived from other blocks).
    void resolve(const std::string& key, Json value) { out(key) = std::move(value); }

    // Throws ConfigError naming the first key that was never read.
    void finish() const;

    std::string key_path(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

private:
    const Json* lookup(const std::string& key);
    Json& out(const std::string& key) { return (*resolved_)[at_ / key]; }

    const Json* node_;
    std::string path_;
    Json* resolved_;
    Json::json_pointer at_;
    std::vector<std::string> seen_;
};

template <class E>
E ObjectReader::choice(const std::string& key, E fallback, std::initializer_list<std::pair<const char*, E>> names) {
    const Json* v = lookup(key);
    if (!v) {
        for (const auto& [name, value] : names) {
            if (value == fallback) out(key) = name;
        }
        return fallback;
    }
    if (!v->is_string()) fail(key, "expected a string");
    const auto s = v->get<std::string>();
    std::string allowed;
    for (const auto& [name, value] : names) {
        if (s == name) {
            out(key) = name;
            return value;
        }
        allowed += allowed.empty() ? name : std::string(", ") + name;
    }
    fail(key, "unknown value \"" + s + "\" (expected one of " + allowed + ")");
}

}  // namespace qset::cli
