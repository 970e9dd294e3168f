#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cpm/errors.hpp"
#include "cpm/workload.hpp"

namespace cpm {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    if (bound == 0) return next();
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = ~0ULL - (~0ULL % bound);
    std::uint64_t v;
    do v = next();
    while (v >= limit);
    return v % bound;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string scalar_text(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "on" : "off";
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == std::floor(d) && std::fabs(d) < 9.0e15) return std::to_string(static_cast<long long>(d));
        return v.dump();
    }
    throw ConfigError("field '" + key + "' must be a number, string or boolean");
}

WorkloadConfig parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("JSON config must be an object");
    WorkloadConfig cfg;
    for (const auto& [key, v] : doc.items()) {
        if (v.is_array()) {
            std::string joined;
            for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + scalar_text(v[i], key);
            cfg.set(key, joined);
        } else {
            cfg.set(key, scalar_text(v, key));
        }
    }
    return cfg;
}

}  // namespace

WorkloadConfig WorkloadConfig::parse(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json(text);
    WorkloadConfig cfg;
    std::istringstream in(text);
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(no) + ": empty field name");
        if (cfg.has(key)) throw ConfigError("field '" + key + "' given twice");
        cfg.set(key, trim(line.substr(eq + 1)));
    }
    return cfg;
}

WorkloadConfig WorkloadConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

void WorkloadConfig::set(const std::string& key, const std::string& value) { fields_[key] = value; }

const std::string& WorkloadConfig::get(const std::string& key) const {
    const auto it = fields_.find(key);
    if (it == fields_.end()) throw ConfigError("missing field '" + key + "'");
    return it->second;
}

ExponentFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ArgumentError("a fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0 || y[i] <= 0) throw ArgumentError("log-log fit needs positive values");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0) throw ArgumentError("a fit needs at least two distinct x values");
    ExponentFit f;
    f.exponent = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.exponent * sx) / n;
    return f;
}

double feasibility_delay(double length, double oxide, double copper) {
    if (!(length > 0) || !(oxide > 0) || !(copper > 0))
        throw ArgumentError("feasibility lengths must be positive");
    return 0.6e-18 * length * length / oxide / copper;
}

double feasibility_max_length(double budget, double oxide, double copper) {
    if (!(budget > 0) || !(oxide > 0) || !(copper > 0))
        throw ArgumentError("feasibility budget and lengths must be positive");
    return std::sqrt(budget * oxide * copper / 0.6e-18);
}

}  // namespace cpm
