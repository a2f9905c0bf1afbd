#pragma once

#include <cstddef>

#include "strauss/exponents.hpp"

namespace strauss {

/// One instance of the damped semilinear Cauchy problem
///   u_tt - Δu + μ(1+r)^{-β} u_t = N(u, u_t),  u(0) = ε f,  u_t(0) = ε g,
/// with radial bump data f, g supported in the unit ball.
struct ModelParams {
    int n = 3;
    double mu = 1.0;
    double beta = 3.0;
    double p = 2.0;
    Nonlinearity nonlinearity = Nonlinearity::power_u;
    double eps = 1.0;
    int data_k = 4;
    double f_amp = 1.0;
    double g_amp = 1.0;

    /// Throws std::invalid_argument when a field is out of range. The solver
    /// itself accepts zero data (u ≡ 0); problem instances do not.
    void validate(bool allow_zero_data = false) const;

    /// Blow-up results assume β > 2.
    bool theorem_regime() const { return beta > 2.0; }

    double p_conj() const { return p / (p - 1.0); }
};

/// μ(1+r)^{-β}
double potential(double r, double mu, double beta);

/// amp (1 - r^2)^k for r < 1, zero outside.
double bump(double r, int k, double amp);

inline double initial_u(const ModelParams& m, double r) { return m.eps * bump(r, m.data_k, m.f_amp); }
inline double initial_ut(const ModelParams& m, double r) { return m.eps * bump(r, m.data_k, m.g_amp); }

/// Uniform radial grid r_i = i dr, i = 0..nr-1, sized so that a solution with
/// data in the unit ball never reaches the outer node before t_max.
struct RadialGrid {
    double dr = 0.0;
    std::size_t nr = 0;
    double r_max = 0.0;
    double t_max = 0.0;
    double dt = 0.0;

    double radius(std::size_t i) const { return static_cast<double>(i) * dr; }
};

inline constexpr double kMaxCfl = 0.9;

RadialGrid build_grid(double t_max, double dr, double cfl = 0.5);

}  // namespace strauss
