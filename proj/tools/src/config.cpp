#include "qset_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace qset::cli {

Json load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        Json j = Json::parse(in, nullptr, true, /*ignore_comments=*/true);
        if (!j.is_object()) throw ConfigError(path.string() + ": top level must be an object");
        return j;
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

ObjectReader::ObjectReader(const Json& node, std::string path, Json& resolved, Json::json_pointer at)
    : node_(&node), path_(std::move(path)), resolved_(&resolved), at_(std::move(at)) {
    if (!node.is_null() && !node.is_object()) {
        throw ConfigError((path_.empty() ? std::string("config") : path_) + ": expected an object");
    }
    Json& self = (*resolved_)[at_];
    if (!self.is_object()) self = Json::object();
}

std::string ObjectReader::key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

void ObjectReader::fail(const std::string& key, const std::string& what) const {
    throw ConfigError(key_path(key) + ": " + what);
}

const Json* ObjectReader::lookup(const std::string& key) {
    seen_.push_back(key);
    if (node_->is_null()) return nullptr;
    const auto it = node_->find(key);
    if (it == node_->end() || it->is_null()) return nullptr;
    return &*it;
}

double ObjectReader::number(const std::string& key, double fallback) {
    const Json* v = lookup(key);
    double x = fallback;
    if (v) {
        if (!v->is_number()) fail(key, "expected a number");
        x = v->get<double>();
        if (!std::isfinite(x)) fail(key, "must be finite");
    }
    out(key) = x;
    return x;
}

double ObjectReader::positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) fail(key, "must be > 0");
    return x;
}

double ObjectReader::non_negative(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (x < 0.0) fail(key, "must be >= 0");
    return x;
}

double ObjectReader::required_positive(const std::string& key) {
    if (!lookup(key)) fail(key, "missing required key");
    return positive(key, 0.0);
}

std::optional<double> ObjectReader::optional_number(const std::string& key) {
    const Json* v = lookup(key);
    if (!v) {
        out(key) = nullptr;
        return std::nullopt;
    }
    return number(key, 0.0);
}

std::int64_t ObjectReader::integer(const std::string& key, std::int64_t fallback) {
    const Json* v = lookup(key);
    std::int64_t x = fallback;
    if (v) {
        if (!v->is_number_integer()) fail(key, "expected an integer");
        x = v->get<std::int64_t>();
    }
    out(key) = x;
    return x;
}

std::uint64_t ObjectReader::unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const Json* v = lookup(key);
    std::uint64_t x = fallback;
    if (v) {
        if (!v->is_number_unsigned()) {
            fail(key, "expected a non-negative integer");
        }
        x = v->get<std::uint64_t>();
    }
    out(key) = x;
    return x;
}

bool ObjectReader::boolean(const std::string& key, bool fallback) {
    const Json* v = lookup(key);
    bool x = fallback;
    if (v) {
        if (!v->is_boolean()) fail(key, "expected true or false");
        x = v->get<bool>();
    }
    out(key) = x;
    return x;
}

std::string ObjectReader::string(const std::string& key, const std::string& fallback) {
    const Json* v = lookup(key);
    std::string x = fallback;
    if (v) {
        if (!v->is_string()) fail(key, "expected a string");
        x = v->get<std::string>();
    }
    out(key) = x;
    return x;
}

ObjectReader ObjectReader::object(const std::string& key) {
    static const Json null_node;
    const Json* v = lookup(key);
    if (v && !v->is_object()) fail(key, "expected an object");
    return ObjectReader(v ? *v : null_node, key_path(key), *resolved_, at_ / key);
}

void ObjectReader::finish() const {
    if (node_->is_null()) return;
    for (const auto& [key, value] : node_->items()) {
        if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
            throw ConfigError(key_path(key) + ": unknown key");
        }
    }
}

}  // namespace qset::cli
