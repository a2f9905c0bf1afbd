#include "strauss/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace strauss {

GaussRule gauss_jacobi_unit(int m, double a) {
    if (m < 1) throw std::invalid_argument("gauss_jacobi_unit: need at least one node");
    if (!(a > 0.0)) throw std::invalid_argument("gauss_jacobi_unit: weight exponent must be positive");

    // Jacobi weight (1-x)^al (1+x)^be on [-1, 1] with al = 0, be = a - 1.
    const double al = 0.0;
    const double be = a - 1.0;
    const double ab = al + be;

    Eigen::VectorXd diag(m);
    Eigen::VectorXd sub(std::max(m - 1, 1));
    for (int k = 0; k < m; ++k) {
        const double s = 2.0 * k + ab;
        if (k == 0) {
            diag[k] = (be - al) / (ab + 2.0);
        } else {
            diag[k] = (be * be - al * al) / (s * (s + 2.0));
        }
        if (k + 1 < m) {
            const double j = k + 1.0;
            const double sj = 2.0 * j + ab;
            const double num = 4.0 * j * (j + al) * (j + be) * (j + ab);
            const double den = sj * sj * (sj + 1.0) * (sj - 1.0);
            sub[k] = std::sqrt(num / den);
        }
    }

    GaussRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    if (m == 1) {
        rule.nodes[0] = 0.5 * (1.0 + diag[0]);
        rule.weights[0] = 1.0 / a;
        return rule;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub.head(m - 1), Eigen::ComputeEigenvectors);
    if (eig.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi_unit: eigensolver failed");

    // ∫_0^1 x^{a-1} dx = 1/a is the zeroth moment after mapping x -> (1+x)/2.
    const double mu0 = 1.0 / a;
    for (int k = 0; k < m; ++k) {
        rule.nodes[k] = 0.5 * (1.0 + eig.eigenvalues()[k]);
        const double v = eig.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v * v;
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    boost::math::quadrature::tanh_sinh<double> rule;
    return rule.integrate(f, a, b, tol);
}

}  // namespace strauss
