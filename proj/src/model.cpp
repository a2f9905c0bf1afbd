#include "strauss/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace strauss {

void ModelParams::validate(bool allow_zero_data) const {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (!(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    if (!(p > 1.0)) throw std::invalid_argument("p must be > 1");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    if (data_k < 3) throw std::invalid_argument("data_k must be >= 3");
    if (!(f_amp >= 0.0) || !(g_amp >= 0.0)) throw std::invalid_argument("f_amp and g_amp must be >= 0");
    if (!allow_zero_data && f_amp == 0.0 && g_amp == 0.0) throw std::invalid_argument("f_amp and g_amp must not both vanish");
}

double potential(double r, double mu, double beta) {
    if (mu == 0.0) return 0.0;
    return mu * std::pow(1.0 + r, -beta);
}

double bump(double r, int k, double amp) {
    if (r >= 1.0 || amp == 0.0) return 0.0;
    const double base = 1.0 - r * r;
    double value = amp;
    for (int i = 0; i < k; ++i) value *= base;
    return value;
}

RadialGrid build_grid(double t_max, double dr, double cfl) {
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
    if (!(dr > 0.0)) throw std::invalid_argument("dr must be > 0");
    if (!(cfl > 0.0) || cfl > kMaxCfl) throw std::invalid_argument("cfl must lie in (0, 0.9]");

    // Snap before ceil so that (t_max + 1)/dr landing on an integer is not
    // pushed up one node by rounding noise; this keeps nr - 1 exactly doubling
    // under dr -> dr/2.
    const double cells = (t_max + 1.0 + 2.0 * dr) / dr;
    const double snapped = std::ceil(cells - 1e-9 * cells);

    RadialGrid grid;
    grid.dr = dr;
    grid.nr = static_cast<std::size_t>(snapped) + 1;
    grid.r_max = static_cast<double>(grid.nr - 1) * dr;
    grid.t_max = t_max;
    grid.dt = cfl * dr;
    return grid;
}

}  // namespace strauss
