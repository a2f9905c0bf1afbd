#pragma once

#include <string>

namespace strauss {

/// Which right-hand side drives the equation: |u|^p, |u_t|^p, or nothing.
enum class Nonlinearity { power_u, power_ut, none };

std::string to_string(Nonlinearity kind);
Nonlinearity parse_nonlinearity(const std::string& text);

struct ExponentTable {
    int n = 0;
    double pS = 0.0;  ///< Strauss exponent, positive root of gamma(p, n) = 0
    double pF = 0.0;  ///< Fujita exponent 1 + 2/n
    double pG = 0.0;  ///< Glassey exponent (n+1)/(n-1)
};

enum class BoundKind { polynomial, exponential, infinite };

std::string to_string(BoundKind kind);

/// Shape of the lifespan upper bound for a given (n, p, nonlinearity).
///
/// polynomial:  T <= C eps^{-exponent}
/// exponential: T <= exp(C eps^{-exponent})
/// infinite:    no bound is asserted (supercritical, or linear problem)
struct TheoryBound {
    BoundKind kind = BoundKind::infinite;
    double exponent = 0.0;
    std::string branch;
    double p_conj = 0.0;  ///< p' = p/(p-1)
};

/// Equality tolerance used when deciding that p sits on a critical exponent.
inline constexpr double kCriticalTolerance = 1e-9;

ExponentTable critical_exponents(int n);

/// 2 + (n+1)p - (n-1)p^2.
double gamma(double p, int n);

TheoryBound theory_lifespan(int n, double p, Nonlinearity kind);

}  // namespace strauss
