#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include "strauss/model.hpp"

namespace strauss {

/// Everything a run needs: the model instance plus discretisation settings.
struct LabConfig {
    ModelParams model;
    double t_max = 50.0;
    double dr = 5e-3;
    double cfl = 0.5;
    double u_threshold = 1e6;
    int refine_levels = 2;
};

/// Thrown for malformed configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sets one key. Unknown keys and unparsable values throw ConfigError.
void apply_setting(LabConfig& config, const std::string& key, const std::string& value);

/// Reads `key = value` lines; `#` starts a comment, blank lines are ignored.
LabConfig parse_config(std::istream& in, LabConfig base = {});
LabConfig load_config(const std::string& path, LabConfig base = {});

}  // namespace strauss
