#include "strauss/config.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace strauss {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

int to_int(const std::string& key, const std::string& value) {
    int v = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
    return v;
}

}  // namespace

void apply_setting(LabConfig& config, const std::string& key, const std::string& value) {
    ModelParams& m = config.model;
    if (key == "n") m.n = to_int(key, value);
    else if (key == "mu") m.mu = to_double(key, value);
    else if (key == "beta") m.beta = to_double(key, value);
    else if (key == "p") m.p = to_double(key, value);
    else if (key == "nonlinearity") {
        try {
            m.nonlinearity = parse_nonlinearity(value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    else if (key == "eps") m.eps = to_double(key, value);
    else if (key == "data_k") m.data_k = to_int(key, value);
    else if (key == "f_amp") m.f_amp = to_double(key, value);
    else if (key == "g_amp") m.g_amp = to_double(key, value);
    else if (key == "t_max") config.t_max = to_double(key, value);
    else if (key == "dr") config.dr = to_double(key, value);
    else if (key == "cfl") config.cfl = to_double(key, value);
    else if (key == "u_threshold") config.u_threshold = to_double(key, value);
    else if (key == "refine_levels") config.refine_levels = to_int(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

LabConfig parse_config(std::istream& in, LabConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        }
        apply_setting(base, key, value);
    }
    return base;
}

LabConfig load_config(const std::string& path, LabConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

}  // namespace strauss
