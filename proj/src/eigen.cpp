#include "strauss/eigen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "strauss/model.hpp"
#include "strauss/quadrature.hpp"
#include "strauss/solver.hpp"

namespace strauss {

namespace {

constexpr int kSeriesTerms = 40;

// Taylor coefficients of ψ at the origin: ψ'' + (n-1)/r ψ' = (ηV + η²) ψ.
std::array<double, kSeriesTerms> origin_series(double eta, double mu, double beta, int n) {
    std::array<double, kSeriesTerms> q{};
    double binom = 1.0;  // binom(-β, j)
    for (int j = 0; j < kSeriesTerms; ++j) {
        q[j] = eta * mu * binom;
        binom *= (-beta - j) / (j + 1.0);
    }
    q[0] += eta * eta;

    std::array<double, kSeriesTerms> a{};
    a[0] = 1.0;
    a[1] = 0.0;
    for (int k = 2; k < kSeriesTerms; ++k) {
        double acc = 0.0;
        for (int j = 0; j <= k - 2; ++j) acc += q[j] * a[k - 2 - j];
        a[k] = acc / (k * (k + n - 2.0));
    }
    return a;
}

struct SeriesValue {
    double psi;
    double dpsi;
};

SeriesValue eval_series(const std::array<double, kSeriesTerms>& a, double r) {
    double psi = 0.0;
    double dpsi = 0.0;
    for (int k = kSeriesTerms - 1; k >= 1; --k) {
        psi = psi * r + a[k];
        dpsi = dpsi * r + k * a[k];
    }
    psi = psi * r + a[0];
    return {psi, dpsi};
}

double hermite(double x0, double h, double f0, double f1, double d0, double d1, double x) {
    const double u = (x - x0) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * h * d1;
}

double hermite_slope(double x0, double h, double f0, double f1, double d0, double d1, double x) {
    const double u = (x - x0) / h;
    const double u2 = u * u;
    return ((6 * u2 - 6 * u) * f0 + (3 * u2 - 4 * u + 1) * h * d0 + (-6 * u2 + 6 * u) * f1 + (3 * u2 - 2 * u) * h * d1) / h;
}

}  // namespace

double EigenSolution::scaled(double radius) const {
    if (radius < 0.0 || radius > r.back() + 1e-12) throw std::out_of_range("EigenSolution: radius outside table");
    const std::size_t last = r.size() - 1;
    std::size_t i = std::min(static_cast<std::size_t>(radius / store_dr), last == 0 ? 0 : last - 1);
    if (last == 0) return s[0] / lambda;
    return hermite(r[i], store_dr, s[i], s[i + 1], ds[i], ds[i + 1], radius) / lambda;
}

double EigenSolution::scaled_derivative(double radius) const {
    if (radius < 0.0 || radius > r.back() + 1e-12) throw std::out_of_range("EigenSolution: radius outside table");
    const std::size_t last = r.size() - 1;
    if (last == 0) return ds[0] / lambda;
    std::size_t i = std::min(static_cast<std::size_t>(radius / store_dr), last - 1);
    return hermite_slope(r[i], store_dr, s[i], s[i + 1], ds[i], ds[i + 1], radius) / lambda;
}

double EigenSolution::value(double radius) const {
    return std::exp(eta * radius) * scaled(radius);
}

double EigenSolution::derivative(double radius) const {
    return std::exp(eta * radius) * (scaled_derivative(radius) + eta * scaled(radius));
}

double EigenSolution::w_sup() const {
    return w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
}

double min_eigen_r_max(double eta) {
    return 30.0 / std::max(eta, 0.1);
}

EigenSolution solve_psi(double eta, double mu, double beta, int n, double r_max, const EigenOptions& options) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("solve_psi: eta must lie in [0, 1]");
    if (n < 2) throw std::invalid_argument("solve_psi: n must be >= 2");
    if (mu < 0.0 || !(beta > 0.0)) throw std::invalid_argument("solve_psi: need mu >= 0 and beta > 0");
    if (!(options.dr > 0.0) || !(options.store_dr >= options.dr))
        throw std::invalid_argument("solve_psi: need 0 < dr <= store_dr");
    if (r_max < min_eigen_r_max(eta) * (1.0 - 1e-12))
        throw std::invalid_argument("solve_psi: r_max below 30/max(eta, 0.1) = " + std::to_string(min_eigen_r_max(eta)));

    const double ratio = options.store_dr / options.dr;
    const long stride = std::lround(ratio);
    if (stride < 1 || std::abs(ratio - stride) > 1e-9 * ratio)
        throw std::invalid_argument("solve_psi: store_dr must be an integer multiple of dr");

    EigenSolution sol;
    sol.eta = eta;
    sol.mu = mu;
    sol.beta = beta;
    sol.n = n;
    sol.dr = options.dr;
    sol.store_dr = options.store_dr;
    sol.theorem_regime = beta > 2.0;

    const auto cells = static_cast<std::size_t>(std::ceil(r_max / options.store_dr - 1e-9));
    const std::size_t count = cells + 1;
    sol.r_max = cells * options.store_dr;
    sol.r.resize(count);
    sol.s.resize(count);
    sol.ds.resize(count);
    for (std::size_t i = 0; i < count; ++i) sol.r[i] = i * options.store_dr;

    if (eta == 0.0) {
        std::fill(sol.s.begin(), sol.s.end(), 1.0);
        std::fill(sol.ds.begin(), sol.ds.end(), 0.0);
    } else {
        const auto series = origin_series(eta, mu, beta, n);
        const double h = options.dr;
        // Series up to r0, where h (n-1)/r is small enough for explicit steps.
        const long start_step = std::max<long>(stride, static_cast<long>(std::ceil(0.01 / h)));
        const long start_store = (start_step + stride - 1) / stride;
        const long first_step = start_store * stride;

        auto scaled_from_series = [&](double r) {
            const SeriesValue v = eval_series(series, r);
            const double e = std::exp(-eta * r);
            return std::pair<double, double>{e * v.psi, e * (v.dpsi - eta * v.psi)};
        };

        for (long k = 0; k <= start_store && k < static_cast<long>(count); ++k) {
            auto [sv, dv] = scaled_from_series(sol.r[k]);
            sol.s[k] = sv;
            sol.ds[k] = dv;
        }

        const double nm1 = n - 1.0;
        auto rhs = [&](double r, double V, double y0, double y1) {
            return -(2.0 * eta + nm1 / r) * y1 - (nm1 * eta / r - eta * V) * y0;
        };

        double y0 = sol.s[std::min<std::size_t>(start_store, count - 1)];
        double y1 = sol.ds[std::min<std::size_t>(start_store, count - 1)];
        const long total_steps = static_cast<long>(cells) * stride;
        double v_here = potential(first_step * h, mu, beta);
        for (long m = first_step; m < total_steps; ++m) {
            const double r = m * h;
            const double v_mid = potential(r + 0.5 * h, mu, beta);
            const double v_next = potential(r + h, mu, beta);

            const double k1a = y1;
            const double k1b = rhs(r, v_here, y0, y1);
            const double k2a = y1 + 0.5 * h * k1b;
            const double k2b = rhs(r + 0.5 * h, v_mid, y0 + 0.5 * h * k1a, y1 + 0.5 * h * k1b);
            const double k3a = y1 + 0.5 * h * k2b;
            const double k3b = rhs(r + 0.5 * h, v_mid, y0 + 0.5 * h * k2a, y1 + 0.5 * h * k2b);
            const double k4a = y1 + h * k3b;
            const double k4b = rhs(r + h, v_next, y0 + h * k3a, y1 + h * k3b);
            y0 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
            y1 += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
            v_here = v_next;

            if (!(y0 > 0.0) || !std::isfinite(y1)) {
                throw std::runtime_error("solve_psi: integration fault, psi lost positivity at r = " +
                                         std::to_string(r + h));
            }
            if ((m + 1) % stride == 0) {
                const auto k = static_cast<std::size_t>((m + 1) / stride);
                sol.s[k] = y0;
                sol.ds[k] = y1;
            }
        }
    }

    sol.psi.resize(count);
    sol.w.resize(count);
    const double half = 0.5 * (n - 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        const double r = sol.r[i];
        sol.psi[i] = std::exp(eta * r) * sol.s[i];
        sol.w[i] = std::pow(1.0 + r, half) * sol.s[i];
    }
    return sol;
}

double varphi_scaled(double eta, double r, int n) {
    if (n < 2) throw std::invalid_argument("varphi: n must be >= 2");
    if (r < 0.0) throw std::invalid_argument("varphi: r must be >= 0");
    const double x = eta * r;
    const double area = sphere_area(n);
    if (x < 1e-12) return area;
    if (n == 3) return -2.0 * std::numbers::pi * std::expm1(-2.0 * x) / x;
    const double nu = 0.5 * n - 1.0;
    if (x <= 600.0) {
        return std::pow(2.0 * std::numbers::pi, 0.5 * n) * std::pow(x, -nu) *
               boost::math::cyl_bessel_i(nu, x) * std::exp(-x);
    }
    // Large-argument expansion of e^{-x} I_ν(x).
    const double mu4 = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        term *= -(mu4 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::pow(2.0 * std::numbers::pi, 0.5 * n) * std::pow(x, -nu) * sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double varphi(double eta, double r, int n) {
    return std::exp(eta * r) * varphi_scaled(eta, r, n);
}

std::vector<double> ratio_slope(const EigenSolution& sol) {
    const std::size_t count = sol.size();
    std::vector<double> rho(count);
    for (std::size_t i = 0; i < count; ++i) rho[i] = sol.s[i] / varphi_scaled(sol.eta, sol.r[i], sol.n);
    std::vector<double> slope(count, 0.0);
    if (count < 3) return slope;
    for (std::size_t i = 1; i + 1 < count; ++i)
        slope[i] = std::abs(rho[i + 1] - rho[i - 1]) / (2.0 * sol.store_dr * rho[i]);
    slope[0] = slope[1];
    slope[count - 1] = slope[count - 2];
    return slope;
}

double find_plateau(const EigenSolution& sol) {
    const std::vector<double> slope = ratio_slope(sol);
    std::size_t first = slope.size();
    for (std::size_t i = slope.size(); i-- > 0;) {
        if (!(slope[i] < kPlateauSlope)) break;
        first = i;
    }
    if (first == slope.size() || sol.r[first] > 0.8 * sol.r_max) {
        throw std::runtime_error("normalize: no plateau of psi/varphi before 0.8 r_max (eta = " + std::to_string(sol.eta) +
                                 ", r_max = " + std::to_string(sol.r_max) + "); increase r_max");
    }
    return sol.r[first];
}

double far_field_ratio(const EigenSolution& sol, double r_ref) {
    const double eta = sol.eta;
    const int n = sol.n;
    const double phi_ref = varphi_scaled(eta, r_ref, n);
    const double rho = sol.scaled(r_ref) * sol.lambda / phi_ref;
    if (eta == 0.0 || sol.mu == 0.0) return rho;

    // With P = r^{n-1} φ_η^2, (P ρ')' = η V P ρ. Freezing ρ at ρ(r_ref) beyond
    // r_ref gives ρ(∞) - ρ(r_ref) = ρ'(r_ref) K(r_ref) + η ρ ∫ V K, where
    // K(σ) = P(σ) ∫_σ^∞ ds / P(s).
    boost::math::quadrature::exp_sinh<double> half_line;
    auto kernel = [&](double sigma) {
        if (sigma <= 0.0) return 0.0;
        const double base = varphi_scaled(eta, sigma, n);
        auto f = [&](double u) {
            const double q = base / varphi_scaled(eta, sigma + u, n);
            return std::pow(sigma / (sigma + u), n - 1.0) * q * q * std::exp(-2.0 * eta * u);
        };
        return half_line.integrate(f, 1e-12);
    };

    const double h = 1e-4;
    const double phi_slope = (varphi_scaled(eta, r_ref + h, n) - varphi_scaled(eta, std::max(0.0, r_ref - h), n)) /
                             (r_ref + h - std::max(0.0, r_ref - h));
    const double s_ref = sol.scaled(r_ref) * sol.lambda;
    const double s_slope = sol.scaled_derivative(r_ref) * sol.lambda;
    const double rho_slope = (s_slope * phi_ref - s_ref * phi_slope) / (phi_ref * phi_ref);

    auto outer = [&](double v) { return potential(r_ref + v, sol.mu, sol.beta) * kernel(r_ref + v); };
    const double tail = rho_slope * kernel(r_ref) + eta * rho * half_line.integrate(outer, 1e-10);
    return rho + tail;
}

EigenSolution normalize(EigenSolution sol) {
    const double r_ref = find_plateau(sol);
    return normalize(std::move(sol), r_ref);
}

EigenSolution normalize(EigenSolution sol, double r_ref) {
    if (sol.normalized) throw std::invalid_argument("normalize: solution already normalized");
    const double plateau = find_plateau(sol);
    if (r_ref < plateau - 1e-12 || r_ref > sol.r_max)
        throw std::invalid_argument("normalize: r_ref = " + std::to_string(r_ref) + " is before the plateau at r = " +
                                    std::to_string(plateau));
    const double lambda = far_field_ratio(sol, r_ref);
    if (!(lambda > 0.0)) throw std::runtime_error("normalize: nonpositive far-field factor");
    sol.lambda = lambda;
    sol.r_ref = r_ref;
    sol.normalized = true;
    for (double& v : sol.psi) v /= lambda;
    return sol;
}

double lemma31_ratio(double alpha, double beta_rate, double R, double t) {
    if (!(beta_rate > 0.0) || !(R > 0.0) || t < 0.0)
        throw std::invalid_argument("lemma31_ratio: need beta > 0, R > 0, t >= 0");
    const double top = t + R;
    // Rescale by e^{-β R} so the integrand stays O(1) near the upper end.
    auto f = [&](double r) { return std::pow(1.0 + r, alpha) * std::exp(-beta_rate * (top - r)); };
    const double split = std::max(0.0, top - 60.0 / beta_rate);
    double total = integrate(f, split, top, 1e-13);
    if (split > 0.0) total += integrate(f, 0.0, split, 1e-13);
    return total * std::exp(beta_rate * R) / std::pow(top, alpha);
}

}  // namespace strauss
