#pragma once

#include <functional>
#include <vector>

namespace strauss {

/// Nodes and weights of a quadrature rule on [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// m-point Gauss rule for ∫_0^1 x^{a-1} f(x) dx, a > 0 (Golub-Welsch on the
/// shifted Jacobi recurrence). Exact for polynomials f of degree 2m-1.
GaussRule gauss_jacobi_unit(int m, double a);

/// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// Double-exponential rule; tolerates integrable endpoint singularities.
double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

}  // namespace strauss
