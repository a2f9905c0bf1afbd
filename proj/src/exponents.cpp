#include "strauss/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace strauss {

std::string to_string(Nonlinearity kind) {
    switch (kind) {
        case Nonlinearity::power_u: return "power_u";
        case Nonlinearity::power_ut: return "power_ut";
        case Nonlinearity::none: return "none";
    }
    return "none";
}

Nonlinearity parse_nonlinearity(const std::string& text) {
    if (text == "power_u" || text == "u") return Nonlinearity::power_u;
    if (text == "power_ut" || text == "ut") return Nonlinearity::power_ut;
    if (text == "none" || text == "linear") return Nonlinearity::none;
    throw std::invalid_argument("unknown nonlinearity '" + text + "' (expected power_u, power_ut or none)");
}

std::string to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::polynomial: return "polynomial";
        case BoundKind::exponential: return "exponential";
        case BoundKind::infinite: return "infinite";
    }
    return "infinite";
}

ExponentTable critical_exponents(int n) {
    if (n < 2) throw std::invalid_argument("critical exponents need n >= 2");
    const double nn = n;
    ExponentTable table;
    table.n = n;
    table.pS = (nn + 1.0 + std::sqrt(nn * nn + 10.0 * nn - 7.0)) / (2.0 * (nn - 1.0));
    table.pF = 1.0 + 2.0 / nn;
    table.pG = (nn + 1.0) / (nn - 1.0);
    return table;
}

double gamma(double p, int n) {
    return 2.0 + (n + 1.0) * p - (n - 1.0) * p * p;
}

TheoryBound theory_lifespan(int n, double p, Nonlinearity kind) {
    if (n < 2) throw std::invalid_argument("theory_lifespan needs n >= 2");
    if (!(p > 1.0)) throw std::invalid_argument("theory_lifespan needs p > 1");

    const ExponentTable table = critical_exponents(n);
    const double nn = n;
    TheoryBound bound;
    bound.p_conj = p / (p - 1.0);

    if (kind == Nonlinearity::none) {
        bound.branch = "linear";
        return bound;
    }

    if (kind == Nonlinearity::power_u) {
        if (std::abs(p - table.pS) <= kCriticalTolerance) {
            bound.kind = BoundKind::exponential;
            bound.exponent = p * (p - 1.0);
            bound.branch = "strauss_critical";
        } else if (p > table.pS) {
            bound.branch = "strauss_supercritical";
        } else if (p <= nn / (nn - 1.0)) {
            bound.kind = BoundKind::polynomial;
            bound.exponent = 2.0 * (p - 1.0) / (nn + 1.0 - (nn - 1.0) * p);
            bound.branch = "strauss_small_p";
        } else {
            bound.kind = BoundKind::polynomial;
            bound.exponent = 2.0 * p * (p - 1.0) / gamma(p, n);
            bound.branch = "strauss_subcritical";
        }
        return bound;
    }

    if (std::abs(p - table.pG) <= kCriticalTolerance) {
        bound.kind = BoundKind::exponential;
        bound.exponent = p - 1.0;
        bound.branch = "glassey_critical";
    } else if (p > table.pG) {
        bound.branch = "glassey_supercritical";
    } else {
        bound.kind = BoundKind::polynomial;
        bound.exponent = 1.0 / (1.0 / (p - 1.0) - (nn - 1.0) / 2.0);
        bound.branch = "glassey_subcritical";
    }
    return bound;
}

}  // namespace strauss
