#pragma once

#include <string>
#include <vector>

#include "strauss/sweep.hpp"

namespace strauss {

/// Scatter of (log(1/eps), log T) with the fitted line and a theory-slope line
/// through the data centroid.
std::string fit_svg(const ScalingFit& fit, const std::string& title);

/// Ratio series against the grid point; the y axis switches to log scale when
/// max/min exceeds 100.
std::string series_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& title);

/// True when series_svg would use a log y axis.
bool wants_log_axis(const std::vector<double>& y);

}  // namespace strauss
