#include "strauss/testfunc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "strauss/quadrature.hpp"

namespace strauss {

namespace {

// Fornberg's finite-difference weights for derivatives 0..2 at x0.
std::vector<std::array<double, 3>> fd_weights(double x0, const std::vector<double>& x) {
    const std::size_t m = x.size();
    std::vector<std::array<double, 3>> c(m, {0.0, 0.0, 0.0});
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < m; ++i) {
        const int mn = static_cast<int>(std::min<std::size_t>(i, 2));
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    return c;
}

struct Stencil {
    std::vector<int> offsets;
    std::vector<double> d1;
    std::vector<double> d2;
};

Stencil make_stencil(int at, int first, int count) {
    std::vector<double> x(count);
    Stencil st;
    for (int i = 0; i < count; ++i) {
        x[i] = first + i;
        st.offsets.push_back(first + i - at);
    }
    const auto w = fd_weights(at, x);
    for (int i = 0; i < count; ++i) {
        st.d1.push_back(w[i][1]);
        st.d2.push_back(w[i][2]);
    }
    return st;
}

double relative(double residual, double scale) {
    return scale > 0.0 ? std::abs(residual) / scale : 0.0;
}

}  // namespace

PsiCache::PsiCache(int n, double mu, double beta, double q, double r_cover, int nodes, const EigenOptions& options)
    : n_(n), mu_(mu), beta_(beta), q_(q), r_cover_(r_cover) {
    if (!(q > 0.0)) throw std::invalid_argument("PsiCache: q must be positive");
    if (!(r_cover > 0.0)) throw std::invalid_argument("PsiCache: r_cover must be positive");
    rule_ = gauss_jacobi_unit(nodes, q);
    solutions_.reserve(rule_.nodes.size());
    for (double eta : rule_.nodes) {
        const double r_max = std::max(min_eigen_r_max(eta), r_cover + 1.0);
        EigenSolution sol = normalize(solve_psi(eta, mu, beta, n, r_max, options));
        const auto keep = static_cast<std::size_t>(std::ceil(r_cover / sol.store_dr)) + 2;
        if (keep < sol.size()) {
            sol.r.resize(keep);
            sol.s.resize(keep);
            sol.ds.resize(keep);
            sol.psi.resize(keep);
            sol.w.resize(keep);
            sol.r_max = sol.r.back();
        }
        solutions_.push_back(std::move(sol));
    }
}

std::vector<double> PsiCache::lambdas() const {
    std::vector<double> out;
    for (const auto& sol : solutions_) out.push_back(sol.lambda);
    return out;
}

BqBasis::BqBasis(const PsiCache& cache, std::vector<double> radii) : cache_(&cache), radii_(std::move(radii)) {
    const std::size_t J = cache.rule().nodes.size();
    const std::size_t K = radii_.size();
    for (double r : radii_) {
        if (r < 0.0 || r > cache.r_cover() + 1e-9)
            throw std::out_of_range("BqBasis: radius " + std::to_string(r) + " not covered by the psi cache");
    }
    basis_.resize(J * K);
    for (std::size_t j = 0; j < J; ++j) {
        const EigenSolution& sol = cache.solutions()[j];
        const double w = cache.rule().weights[j];
        for (std::size_t i = 0; i < K; ++i) basis_[j * K + i] = w * std::exp(sol.eta * radii_[i]) * sol.scaled(radii_[i]);
    }
}

std::vector<double> BqBasis::row(double t, int shift) const {
    const std::size_t J = cache_->rule().nodes.size();
    const std::size_t K = radii_.size();
    Eigen::VectorXd coeff(J);
    for (std::size_t j = 0; j < J; ++j) {
        const double eta = cache_->rule().nodes[j];
        coeff[j] = std::pow(eta, shift) * std::exp(-eta * t);
    }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> B(basis_.data(), J, K);
    std::vector<double> out(K);
    Eigen::Map<Eigen::VectorXd> result(out.data(), K);
    result.noalias() = B.transpose() * coeff;
    return out;
}

double bq_value(const PsiCache& cache, double t, double r, int shift) {
    double sum = 0.0;
    const auto& rule = cache.rule();
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const EigenSolution& sol = cache.solutions()[j];
        const double eta = rule.nodes[j];
        sum += rule.weights[j] * std::pow(eta, shift) * std::exp(-eta * (t - r)) * sol.scaled(r);
    }
    return sum;
}

BqTable build_bq(const PsiCache& cache, const std::vector<double>& t_grid, const std::vector<double>& r_grid, double R,
                 int shift) {
    if (!(R > 1.0)) throw std::invalid_argument("build_bq: R must exceed 1");
    if (shift < 0) throw std::invalid_argument("build_bq: shift must be nonnegative");
    BqTable table;
    table.q = cache.q() + shift;
    table.R = R;
    table.n = cache.n();
    table.mu = cache.mu();
    table.beta = cache.beta();
    table.nodes = static_cast<int>(cache.rule().nodes.size());
    table.eta_nodes = cache.rule().nodes;
    table.eta_weights = cache.rule().weights;
    table.lambdas = cache.lambdas();
    table.t = t_grid;
    table.r = r_grid;
    BqBasis basis(cache, r_grid);
    table.values.reserve(t_grid.size() * r_grid.size());
    for (double t : t_grid) {
        const auto row = basis.row(t, shift);
        table.values.insert(table.values.end(), row.begin(), row.end());
    }
    return table;
}

BqTable build_bq(double q, const ModelParams& params, const std::vector<double>& t_grid,
                 const std::vector<double>& r_grid, double R, int nodes) {
    if (!(q > 0.0)) throw std::invalid_argument("build_bq: q must be positive");
    if (r_grid.empty() || t_grid.empty()) throw std::invalid_argument("build_bq: empty grid");
    const double r_cover = *std::max_element(r_grid.begin(), r_grid.end());
    PsiCache cache(params.n, params.mu, params.beta, q, std::max(r_cover, 1.0), nodes);
    return build_bq(cache, t_grid, r_grid, R, 0);
}

double IdentityResiduals::max() const {
    return std::max({dt_first, dt_second, laplace, wave});
}

std::vector<double> radial_laplacian_4th(const std::vector<double>& u, double dr, int n) {
    const int N = static_cast<int>(u.size());
    if (N < 6) throw std::invalid_argument("radial_laplacian_4th: need at least 6 nodes");
    static thread_local std::vector<Stencil> cached;
    if (cached.empty()) {
        cached.push_back(make_stencil(0, 0, 6));
        cached.push_back(make_stencil(1, 0, 6));
        cached.push_back(make_stencil(2, 0, 5));
        cached.push_back(make_stencil(4, 0, 6));
        cached.push_back(make_stencil(5, 0, 6));
    }
    const double nm1 = n - 1.0;
    std::vector<double> out(N, 0.0);
    auto apply = [&](const Stencil& st, int k) {
        double d1 = 0.0;
        double d2 = 0.0;
        for (std::size_t i = 0; i < st.offsets.size(); ++i) {
            const double v = u[k + st.offsets[i]];
            d1 += st.d1[i] * v;
            d2 += st.d2[i] * v;
        }
        d1 /= dr;
        d2 /= dr * dr;
        if (k == 0) return n * d2;
        return d2 + nm1 / (k * dr) * d1;
    };
    out[0] = apply(cached[0], 0);
    out[1] = apply(cached[1], 1);
    for (int k = 2; k + 2 < N; ++k) out[k] = apply(cached[2], k);
    out[N - 2] = apply(cached[3], N - 2);
    out[N - 1] = apply(cached[4], N - 1);
    return out;
}

namespace {

void accumulate(IdentityResiduals& res, double V, double bm, double b0, double bp, double b1, double b2, double lap,
                double dt) {
    const double d1 = (bp - bm) / (2.0 * dt);
    const double d2 = (bp - 2.0 * b0 + bm) / (dt * dt);
    res.dt_first = std::max(res.dt_first, relative(d1 + b1, std::abs(d1) + std::abs(b1)));
    res.dt_second = std::max(res.dt_second, relative(d2 - b2, std::abs(d2) + std::abs(b2)));
    res.laplace = std::max(res.laplace, relative(lap - V * b1 - b2, std::abs(lap) + std::abs(V * b1) + std::abs(b2)));
    res.wave = std::max(res.wave, relative(d2 - lap - V * d1, std::abs(d2) + std::abs(lap) + std::abs(V * d1)));
    ++res.points;
}

}  // namespace

IdentityResiduals verify_bq_identities(const PsiCache& cache, const IdentityRegion& region) {
    if (!(region.dt > 0.0) || !(region.dr > 0.0) || region.t_max < region.t_min || region.t_min - region.dt < 0.0)
        throw std::invalid_argument("verify_bq_identities: bad region");
    const auto K = static_cast<std::size_t>(std::ceil(region.t_max / region.dr - 1e-9)) + 4;
    std::vector<double> radii(K);
    for (std::size_t k = 0; k < K; ++k) radii[k] = k * region.dr;
    std::vector<double> V(K);
    for (std::size_t k = 0; k < K; ++k) V[k] = potential(radii[k], cache.mu(), cache.beta());
    const BqBasis basis(cache, radii);

    const auto steps = static_cast<long>(std::llround((region.t_max - region.t_min) / region.dt));
    IdentityResiduals res;
    std::vector<double> prev = basis.row(region.t_min - region.dt, 0);
    std::vector<double> here = basis.row(region.t_min, 0);
    for (long i = 0; i <= steps; ++i) {
        const double t = region.t_min + i * region.dt;
        std::vector<double> next = basis.row(t + region.dt, 0);
        const auto b1 = basis.row(t, 1);
        const auto b2 = basis.row(t, 2);
        const auto lap = radial_laplacian_4th(here, region.dr, cache.n());
        for (std::size_t k = 0; k < K && radii[k] <= t + 1e-12; ++k)
            accumulate(res, V[k], prev[k], here[k], next[k], b1[k], b2[k], lap[k], region.dt);
        prev = std::move(here);
        here = std::move(next);
    }
    return res;
}

IdentityResiduals verify_bq_identities(const BqTable& bq, const BqTable& bq1, const BqTable& bq2) {
    if (bq.t != bq1.t || bq.t != bq2.t || bq.r != bq1.r || bq.r != bq2.r)
        throw std::invalid_argument("verify_bq_identities: tables must share one grid");
    if (std::abs(bq1.q - bq.q - 1.0) > 1e-12 || std::abs(bq2.q - bq.q - 2.0) > 1e-12)
        throw std::invalid_argument("verify_bq_identities: tables must hold q, q+1, q+2");
    if (bq.t.size() < 3 || bq.r.size() < 6) throw std::invalid_argument("verify_bq_identities: grid too small");
    const double dt = bq.t[1] - bq.t[0];
    const double dr = bq.r[1] - bq.r[0];
    const std::size_t K = bq.r.size();
    IdentityResiduals res;
    for (std::size_t i = 1; i + 1 < bq.t.size(); ++i) {
        std::vector<double> here(bq.values.begin() + i * K, bq.values.begin() + (i + 1) * K);
        const auto lap = radial_laplacian_4th(here, dr, bq.n);
        for (std::size_t k = 0; k + 2 < K && bq.r[k] <= bq.t[i] + 1e-12; ++k) {
            const double V = potential(bq.r[k], bq.mu, bq.beta);
            accumulate(res, V, bq.at(i - 1, k), bq.at(i, k), bq.at(i + 1, k), bq1.at(i, k), bq2.at(i, k), lap[k], dt);
        }
    }
    return res;
}

std::string to_string(AsymptoticRegime regime) {
    return regime == AsymptoticRegime::q_below ? "q_below" : "q_above";
}

namespace {

template <class Weight>
AsymptoticReport sample_cone(const PsiCache& cache, const ConeSample& sample, Weight weight) {
    if (sample.t_points < 2 || sample.r_points < 1 || !(sample.t_max > sample.t_min) || sample.t_min <= 0.0)
        throw std::invalid_argument("cone sample: bad sampling parameters");
    if (sample.t_max + 1.0 > cache.r_cover() + 1e-9)
        throw std::invalid_argument("cone sample: psi cache does not cover r <= t_max + 1");
    AsymptoticReport report;
    report.ratio_min = std::numeric_limits<double>::infinity();
    report.ratio_max = 0.0;
    const double lt0 = std::log(sample.t_min);
    const double lt1 = std::log(sample.t_max);
    for (int i = 0; i < sample.t_points; ++i) {
        const double t = std::exp(lt0 + (lt1 - lt0) * i / (sample.t_points - 1));
        for (int k = 0; k <= sample.r_points; ++k) {
            const double r = (t + 1.0) * k / sample.r_points;
            const double ratio = bq_value(cache, t, r) * weight(t, r);
            report.ratio_min = std::min(report.ratio_min, ratio);
            report.ratio_max = std::max(report.ratio_max, ratio);
            ++report.samples;
        }
    }
    return report;
}

}  // namespace

AsymptoticReport verify_bq_asymptotics(const PsiCache& cache, double R, const ConeSample& sample) {
    if (!(R > 1.0)) throw std::invalid_argument("verify_bq_asymptotics: R must exceed 1");
    const double q = cache.q();
    const double half = 0.5 * (cache.n() - 1.0);
    if (std::abs(q - half) < 1e-12) throw std::invalid_argument("verify_bq_asymptotics: q = (n-1)/2 is excluded");
    if (q < half) {
        auto report = sample_cone(cache, sample, [&](double t, double r) { return std::pow(t + R + r, q); });
        report.regime = AsymptoticRegime::q_below;
        return report;
    }
    auto report = sample_cone(cache, sample, [&](double t, double r) {
        return std::pow(t + R + r, half) * std::pow(t + R - r, q - half);
    });
    report.regime = AsymptoticRegime::q_above;
    return report;
}

double hyper2f1(double a, double b, double c, double z) {
    if (!(std::abs(z) < 1.0)) throw std::domain_error("hyper2f1: need |z| < 1");
    if (c <= 0.0 && std::floor(c) == c) throw std::domain_error("hyper2f1: c must not be a nonpositive integer");
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 10000000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum) && k > 2) return sum;
        if (term == 0.0) return sum;
    }
    throw std::runtime_error("hyper2f1: series did not converge");
}

double hyper2f1_euler(double a, double b, double c, double z) {
    if (!(z < 1.0)) throw std::domain_error("hyper2f1_euler: need z < 1");
    if (!(c > b && b > 0.0)) throw std::domain_error("hyper2f1_euler: need c > b > 0");
    using boost::math::lgamma;
    const double log_norm = lgamma(c) - lgamma(b) - lgamma(c - b);
    // xc is the signed distance to the nearer endpoint, so 1 - s keeps full precision near s = 1.
    auto f = [&](double s, double xc) {
        const double left = s < 0.5 ? -xc : s;
        const double right = s >= 0.5 ? xc : 1.0 - s;
        return std::pow(left, b - 1.0) * std::pow(right, c - b - 1.0) * std::pow(1.0 - z * s, -a);
    };
    boost::math::quadrature::tanh_sinh<double> rule;
    return std::exp(log_norm) * rule.integrate(f, 0.0, 1.0, 1e-15);
}

AsymptoticReport bq_hypergeometric_ratio(const PsiCache& cache, double R, const ConeSample& sample) {
    if (!(R > 1.0)) throw std::invalid_argument("bq_hypergeometric_ratio: R must exceed 1");
    const double q = cache.q();
    const double b = 0.5 * (cache.n() - 1.0);
    const double c = cache.n() - 1.0;
    auto report = sample_cone(cache, sample, [&](double t, double r) {
        const double z = 2.0 * r / (t + R + r);
        return std::pow(t + R + r, q) / hyper2f1(q, b, c, z);
    });
    report.regime = q < b ? AsymptoticRegime::q_below : AsymptoticRegime::q_above;
    return report;
}

}  // namespace strauss
