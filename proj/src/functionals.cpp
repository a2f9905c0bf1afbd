#include "strauss/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include "strauss/quadrature.hpp"

namespace strauss {

namespace {

struct Mollifier {
    double g = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

// g(x) = e^{-1/x} and its first two derivatives; zero once e^{-1/x} underflows.
Mollifier mollifier(double x) {
    if (x <= 0.0 || 1.0 / x > 700.0) return {};
    const double inv = 1.0 / x;
    const double g = std::exp(-inv);
    return {g, g * inv * inv, g * (inv * inv * inv * inv - 2.0 * inv * inv * inv)};
}

double positive_power(double x, double k) {
    return x > 0.0 ? std::pow(x, k) : 0.0;
}

}  // namespace

CutoffValue cutoff(double t) {
    if (t <= 0.5) return {1.0, 0.0, 0.0};
    if (t >= 1.0) return {0.0, 0.0, 0.0};
    const Mollifier a = mollifier(2.0 * (1.0 - t));
    const Mollifier b = mollifier(2.0 * t - 1.0);
    const double N = a.g;
    const double N1 = -2.0 * a.d1;
    const double N2 = 4.0 * a.d2;
    const double D = a.g + b.g;
    const double D1 = N1 + 2.0 * b.d1;
    const double D2 = N2 + 4.0 * b.d2;
    CutoffValue out;
    out.value = N / D;
    // N1 <= 0 <= b.d1, so the first derivative keeps its sign exactly.
    out.d1 = (N1 * b.g - N * 2.0 * b.d1) / (D * D);
    out.d2 = (N2 * D - N * D2) / (D * D) - 2.0 * D1 * (N1 * D - N * D1) / (D * D * D);
    return out;
}

CutoffValue cutoff_T(double t, double T) {
    const CutoffValue c = cutoff(t / T);
    return {c.value, c.d1 / T, c.d2 / (T * T)};
}

CutoffValue theta(double t) {
    if (t < 0.5) return {};
    return cutoff(t);
}

CutoffValue theta_M(double t, double M) {
    const CutoffValue c = theta(t / M);
    return {c.value, c.d1 / M, c.d2 / (M * M)};
}

CutoffValue cutoff_power(double t, double T, double k) {
    const CutoffValue c = cutoff_T(t, T);
    if (c.value <= 0.0) return {};
    CutoffValue out;
    out.value = std::pow(c.value, k);
    out.d1 = k * std::pow(c.value, k - 1.0) * c.d1;
    out.d2 = k * (k - 1.0) * std::pow(c.value, k - 2.0) * c.d1 * c.d1 + k * std::pow(c.value, k - 1.0) * c.d2;
    return out;
}

YWeight::YWeight(double p_conj, int cells) : p_conj_(p_conj), h_(0.5 / cells) {
    if (!(p_conj > 1.0)) throw std::invalid_argument("YWeight: p' must exceed 1");
    if (cells < 8) throw std::invalid_argument("YWeight: too few cells");
    const double k = 2.0 * p_conj;
    auto integrand = [k](double s) { return positive_power(theta(s).value, k) / s; };
    cumulative_.assign(cells + 1, 0.0);
    slope_.assign(cells + 1, 0.0);
    for (int i = 0; i <= cells; ++i) {
        const double s = 0.5 + i * h_;
        slope_[i] = i == 0 ? 2.0 : integrand(s);
        if (i > 0) cumulative_[i] = cumulative_[i - 1] + boost::math::quadrature::gauss<double, 10>::integrate(integrand, s - h_, s);
    }
}

double YWeight::G(double s) const {
    if (s <= 0.5) return 0.0;
    if (s >= 1.0) return cumulative_.back();
    const double x = (s - 0.5) / h_;
    const auto i = std::min(static_cast<std::size_t>(x), cumulative_.size() - 2);
    const double u = x - i;
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * cumulative_[i] + (u3 - 2 * u2 + u) * h_ * slope_[i] +
           (-2 * u3 + 3 * u2) * cumulative_[i + 1] + (u3 - u2) * h_ * slope_[i + 1];
}

double YWeight::operator()(double t, double M) const {
    if (!(M > 1.0)) throw std::invalid_argument("y_weight: M must exceed 1");
    const double lo = std::max(t / M, 0.5);
    const double hi = std::min(t, 1.0);
    if (hi <= lo) return 0.0;
    return G(hi) - G(lo);
}

double y_weight(double t, double M, double p_conj) {
    thread_local std::vector<YWeight> tables;
    for (const auto& table : tables)
        if (table.p_conj() == p_conj) return table(t, M);
    tables.emplace_back(p_conj);
    return tables.back()(t, M);
}

double time_integral(const TimeSeries& series, const std::function<double(double)>& weight, std::vector<double> breaks) {
    const std::size_t K = series.t.size();
    if (K != series.value.size()) throw std::invalid_argument("time_integral: size mismatch");
    if (K < 2) return 0.0;
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    using Rule = boost::math::quadrature::gauss<double, 10>;
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const double t0 = series.t[k];
        const double t1 = series.t[k + 1];
        const double w0 = series.value[k];
        const double w1 = series.value[k + 1];
        auto f = [&](double t) { return (w0 + (w1 - w0) * (t - t0) / (t1 - t0)) * weight(t); };
        double a = t0;
        for (double b : breaks) {
            if (b > a && b < t1) {
                total += Rule::integrate(f, a, b);
                a = b;
            }
        }
        total += Rule::integrate(f, a, t1);
    }
    return total;
}

double radial_integral(std::span<const double> f, double dr, int n) {
    if (f.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) sum += std::pow(i * dr, n - 1.0) * f[i];
    sum -= 0.5 * std::pow((f.size() - 1) * dr, n - 1.0) * f.back();
    if (n == 1) sum += 0.5 * f[0];
    return sphere_area(n) * sum * dr;
}

TimeSeries spatial_integrals(const SpaceTimeField& field) {
    TimeSeries out;
    out.t = field.t;
    out.value.reserve(field.w.size());
    for (const auto& row : field.w) out.value.push_back(radial_integral(row, field.dr, field.n));
    return out;
}

double y_eval(const SpaceTimeField& field, double M, const YWeight& weight) {
    const TimeSeries W = spatial_integrals(field);
    return time_integral(W, [&](double t) { return weight(t, M); }, {0.5, 1.0, 0.5 * M, M});
}

FunctionalSeries y_series(const SpaceTimeField& field, const std::vector<double>& M_grid, double p_conj) {
    const YWeight weight(p_conj);
    const TimeSeries W = spatial_integrals(field);
    const double k = 2.0 * p_conj;
    auto Y = [&](double M) { return time_integral(W, [&](double t) { return weight(t, M); }, {0.5, 1.0, 0.5 * M, M}); };
    FunctionalSeries out;
    for (double M : M_grid) {
        const double h = 1e-4 * M;
        out.M.push_back(M);
        out.Y.push_back(Y(M));
        out.dY.push_back((Y(M + h) - Y(M - h)) / (2.0 * h));
        out.MdY_direct.push_back(
            time_integral(W, [&](double t) { return positive_power(theta_M(t, M).value, k); }, {0.5 * M, M}));
    }
    return out;
}

Trajectory make_trajectory(const ModelParams& params, const SolveOutcome& outcome) {
    Trajectory traj;
    traj.params = params;
    traj.dr = outcome.dr;
    traj.snapshots = outcome.snapshots;
    traj.t_blowup = outcome.t_blowup;
    return traj;
}

DataConstants data_constants(const ModelParams& params, const EigenSolution& phi) {
    const int n = params.n;
    const double area = sphere_area(n);
    auto f = [&](double r) { return bump(r, params.data_k, params.f_amp); };
    auto g = [&](double r) { return bump(r, params.data_k, params.g_amp); };
    auto V = [&](double r) { return potential(r, params.mu, params.beta); };
    auto jac = [&](double r) { return std::pow(r, n - 1.0); };
    DataConstants c;
    c.C1 = area * integrate([&](double r) { return (g(r) + V(r) * f(r)) * jac(r); }, 0.0, 1.0);
    c.C2 = area * integrate([&](double r) { return (g(r) + (1.0 + V(r)) * f(r)) * phi.value(r) * jac(r); }, 0.0, 1.0);
    return c;
}

std::string to_string(TestKind kind) {
    switch (kind) {
        case TestKind::eta2p: return "eta2p";
        case TestKind::eta2p_Phi: return "eta2p_Phi";
        case TestKind::dtpsi: return "dtpsi";
    }
    return "eta2p";
}

TestKind parse_test_kind(const std::string& text) {
    if (text == "eta2p") return TestKind::eta2p;
    if (text == "eta2p_Phi") return TestKind::eta2p_Phi;
    if (text == "dtpsi") return TestKind::dtpsi;
    throw std::invalid_argument("unknown test function kind '" + text + "'");
}

namespace {

double nonlinearity(const ModelParams& params, double u, double ut) {
    switch (params.nonlinearity) {
        case Nonlinearity::power_u: return std::pow(std::abs(u), params.p);
        case Nonlinearity::power_ut: return std::pow(std::abs(ut), params.p);
        case Nonlinearity::none: return 0.0;
    }
    return 0.0;
}

void require_cover(const Trajectory& traj, double T) {
    if (traj.snapshots.size() < 2) throw std::invalid_argument("trajectory needs at least two snapshots");
    if (T > traj.t_last() + 1e-9)
        throw std::invalid_argument("requested time " + std::to_string(T) + " exceeds stored trajectory (t <= " +
                                    std::to_string(traj.t_last()) + ")");
}

void require_phi(const EigenSolution* phi, const Trajectory& traj) {
    if (phi == nullptr) throw std::invalid_argument("this check needs the eigenfunction phi");
    const double r_needed = (traj.snapshots.front().u.size() - 1) * traj.dr;
    if (phi->r_max < r_needed - 1e-9)
        throw std::invalid_argument("phi table covers r <= " + std::to_string(phi->r_max) + " but the grid reaches " +
                                    std::to_string(r_needed));
    if (phi->eta != 1.0) throw std::invalid_argument("phi must be the eta = 1 eigenfunction");
}

}  // namespace

WeakResidual weak_residual(const Trajectory& traj, TestKind kind, double T, const EigenSolution* phi) {
    require_cover(traj, T);
    const ModelParams& m = traj.params;
    const bool spatial = kind != TestKind::eta2p;
    if (spatial) require_phi(phi, traj);

    const int n = m.n;
    const double k = 2.0 * m.p_conj();
    const std::size_t nr = traj.snapshots.front().u.size();
    const double dr = traj.dr;

    std::vector<double> b(nr, 1.0);
    std::vector<double> b_mid(nr - 1, 0.0);
    std::vector<double> V(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        V[i] = potential(i * dr, m.mu, m.beta);
        if (spatial) b[i] = phi->value(i * dr);
    }
    if (spatial)
        for (std::size_t i = 0; i + 1 < nr; ++i) b_mid[i] = phi->derivative((i + 0.5) * dr);

    // Ψ(t, r) = a(t) b(r); returns (a, a').
    auto time_part = [&](double t) -> std::pair<double, double> {
        const CutoffValue A = cutoff_power(t, T, k);
        switch (kind) {
            case TestKind::eta2p: return {A.value, A.d1};
            case TestKind::eta2p_Phi: {
                const double e = std::exp(-t);
                return {A.value * e, (A.d1 - A.value) * e};
            }
            case TestKind::dtpsi: {
                const double e = std::exp(-t);
                return {(A.value - A.d1) * e, (2.0 * A.d1 - A.d2 - A.value) * e};
            }
        }
        return {0.0, 0.0};
    };

    TimeSeries N_t, ut_t, grad_t, damp_t;
    std::vector<double> buf(nr);
    for (const Snapshot& snap : traj.snapshots) {
        if (snap.t > T + 1e-12 && !N_t.t.empty() && N_t.t.back() >= T) break;
        for (auto* s : {&N_t, &ut_t, &grad_t, &damp_t}) s->t.push_back(snap.t);
        for (std::size_t i = 0; i < nr; ++i) buf[i] = nonlinearity(m, snap.u[i], snap.ut[i]) * b[i];
        N_t.value.push_back(radial_integral(buf, dr, n));
        for (std::size_t i = 0; i < nr; ++i) buf[i] = snap.ut[i] * b[i];
        ut_t.value.push_back(radial_integral(buf, dr, n));
        for (std::size_t i = 0; i < nr; ++i) buf[i] = V[i] * snap.u[i] * b[i];
        damp_t.value.push_back(radial_integral(buf, dr, n));
        double grad = 0.0;
        if (spatial) {
            for (std::size_t i = 0; i + 1 < nr; ++i)
                grad += std::pow((i + 0.5) * dr, n - 1.0) * (snap.u[i + 1] - snap.u[i]) * b_mid[i];
            grad *= sphere_area(n);
        }
        grad_t.value.push_back(grad);
    }

    const std::vector<double> breaks = {0.5 * T, T};
    auto a = [&](double t) { return time_part(t).first; };
    auto da = [&](double t) { return time_part(t).second; };
    const double I_N = time_integral(N_t, a, breaks);
    const double I_ut = -time_integral(ut_t, da, breaks);
    const double I_grad = time_integral(grad_t, a, breaks);
    const double I_damp = -time_integral(damp_t, da, breaks);

    const double a0 = time_part(0.0).first;
    const double area = sphere_area(n);
    auto data_integral = [&](auto&& density) {
        return area * integrate([&](double r) {
            const double br = spatial ? phi->value(r) : 1.0;
            return density(r) * br * std::pow(r, n - 1.0);
        }, 0.0, 1.0);
    };
    const double D_g = m.eps * a0 * data_integral([&](double r) { return bump(r, m.data_k, m.g_amp); });
    const double D_f = m.eps * a0 *
                       data_integral([&](double r) { return potential(r, m.mu, m.beta) * bump(r, m.data_k, m.f_amp); });

    WeakResidual out;
    out.lhs = D_g + D_f + I_N;
    out.rhs = I_ut + I_grad + I_damp;
    out.scale = std::abs(D_g) + std::abs(D_f) + std::abs(I_N) + std::abs(I_ut) + std::abs(I_grad) + std::abs(I_damp);
    out.relative = out.scale > 0.0 ? std::abs(out.lhs - out.rhs) / out.scale : 0.0;
    return out;
}

std::string to_string(InequalityKind kind) {
    switch (kind) {
        case InequalityKind::ineq_3_4: return "ineq_3_4";
        case InequalityKind::ineq_3_16: return "ineq_3_16";
        case InequalityKind::ineq_4_9: return "ineq_4_9";
        case InequalityKind::ineq_4_15: return "ineq_4_15";
        case InequalityKind::ineq_5_1: return "ineq_5_1";
        case InequalityKind::ineq_5_11: return "ineq_5_11";
    }
    return "ineq_3_4";
}

InequalityKind parse_inequality(const std::string& text) {
    std::string key = text;
    if (key.rfind("ineq_", 0) == 0) key = key.substr(5);
    std::replace(key.begin(), key.end(), '.', '_');
    if (key == "3_4") return InequalityKind::ineq_3_4;
    if (key == "3_16") return InequalityKind::ineq_3_16;
    if (key == "4_9") return InequalityKind::ineq_4_9;
    if (key == "4_15") return InequalityKind::ineq_4_15;
    if (key == "5_1") return InequalityKind::ineq_5_1;
    if (key == "5_11") return InequalityKind::ineq_5_11;
    throw std::invalid_argument("unknown inequality check '" + text + "'");
}

double inequality_grid_start(InequalityKind kind) {
    return (kind == InequalityKind::ineq_4_9 || kind == InequalityKind::ineq_4_15) ? 4.0 : 2.0;
}

InequalityReport inequality_check(const InequalityContext& ctx, InequalityKind kind) {
    if (ctx.trajectory == nullptr) throw std::invalid_argument("inequality_check: no trajectory");
    const Trajectory& traj = *ctx.trajectory;
    const ModelParams& m = traj.params;
    const double t_num = ctx.t_num > 0.0 ? ctx.t_num : traj.t_blowup;
    if (!(t_num > 0.0)) throw std::invalid_argument("inequality_check: numerical lifespan unknown");
    const double lo = inequality_grid_start(kind);
    const double hi = 0.8 * t_num;
    if (!(hi > lo)) throw std::invalid_argument("inequality_check: 0.8 T_num does not exceed the grid start");
    if (ctx.grid_points < 2) throw std::invalid_argument("inequality_check: grid needs at least two points");
    require_cover(traj, hi);

    const int n = m.n;
    const double p = m.p;
    const double k = 2.0 * m.p_conj();
    const double eps = m.eps;
    const std::size_t nr = traj.snapshots.front().u.size();
    const double dr = traj.dr;

    std::vector<double> grid(ctx.grid_points);
    for (int i = 0; i < ctx.grid_points; ++i) grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (ctx.grid_points - 1));

    const bool needs_phi = kind == InequalityKind::ineq_3_16 || kind == InequalityKind::ineq_5_1 ||
                           kind == InequalityKind::ineq_5_11;
    if (needs_phi) require_phi(ctx.phi, traj);
    std::vector<double> phi_nodes;
    if (needs_phi)
        for (std::size_t i = 0; i < nr; ++i) phi_nodes.push_back(ctx.phi->value(i * dr));

    InequalityReport report;
    report.kind = kind;
    report.spread_factor = ctx.spread_factor;

    auto power_k = [k](const CutoffValue& c) { return positive_power(c.value, k); };

    // W(t_k) = ∫ weight_k(r) N(u, u_t) dx on every snapshot up to hi.
    auto build_series = [&](auto&& radial_weight) {
        TimeSeries series;
        std::vector<double> buf(nr);
        for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
            const Snapshot& snap = traj.snapshots[s];
            for (std::size_t i = 0; i < nr; ++i) buf[i] = nonlinearity(m, snap.u[i], snap.ut[i]) * radial_weight(s, i);
            series.t.push_back(snap.t);
            series.value.push_back(radial_integral(buf, dr, n));
            if (snap.t >= hi) break;
        }
        return series;
    };

    switch (kind) {
        case InequalityKind::ineq_3_4:
        case InequalityKind::ineq_3_16: {
            const TimeSeries W = build_series([](std::size_t, std::size_t) { return 1.0; });
            double C = 0.0;
            if (kind == InequalityKind::ineq_3_4) {
                const double area = sphere_area(n);
                C = area * integrate([&](double r) {
                    return (bump(r, m.data_k, m.g_amp) + potential(r, m.mu, m.beta) * bump(r, m.data_k, m.f_amp)) *
                           std::pow(r, n - 1.0);
                }, 0.0, 1.0);
            } else {
                C = data_constants(m, *ctx.phi).C2;
            }
            for (double T : grid) {
                const double I = time_integral(W, [&](double t) { return power_k(cutoff_T(t, T)); }, {0.5 * T, T});
                InequalityRow row;
                row.point = T;
                if (kind == InequalityKind::ineq_3_4) {
                    row.lhs = C * eps + I;
                    row.rhs = std::pow(T, n - 1.0 - 2.0 / (p - 1.0));
                    row.ratio = row.lhs / row.rhs;
                } else {
                    row.lhs = std::pow(C * eps, p) * std::pow(T, n - 0.5 * (n - 1.0) * p);
                    row.rhs = I;
                    row.ratio = row.rhs / row.lhs;
                }
                report.rows.push_back(row);
            }
            break;
        }
        case InequalityKind::ineq_4_9:
        case InequalityKind::ineq_4_15: {
            if (ctx.bq == nullptr) throw std::invalid_argument("inequality_check: this check needs b_q");
            std::vector<double> radii(nr);
            for (std::size_t i = 0; i < nr; ++i) radii[i] = i * dr;
            // Only radii inside the support cone matter; cap the basis there.
            const double r_need = std::min((nr - 1) * dr, hi + 1.0 + 4.0 * dr);
            radii.resize(static_cast<std::size_t>(r_need / dr) + 1);
            const BqBasis basis(*ctx.bq, radii);
            std::vector<double> row_cache;
            std::size_t cached_snapshot = static_cast<std::size_t>(-1);
            const TimeSeries W = build_series([&](std::size_t s, std::size_t i) {
                if (s != cached_snapshot) {
                    row_cache = basis.row(traj.snapshots[s].t, 0);
                    cached_snapshot = s;
                }
                return i < row_cache.size() ? row_cache[i] : 0.0;
            });
            const YWeight yw(m.p_conj());
            for (double M : grid) {
                const double MdY =
                    time_integral(W, [&](double t) { return power_k(theta_M(t, M)); }, {0.5 * M, M});
                const double Y = time_integral(W, [&](double t) { return yw(t, M); }, {0.5, 1.0, 0.5 * M, M});
                InequalityRow row;
                row.point = M;
                if (kind == InequalityKind::ineq_4_9) {
                    row.lhs = MdY;
                    row.rhs = std::pow(eps, p);
                    row.ratio = row.lhs / row.rhs;
                } else {
                    row.lhs = std::pow(Y, p);
                    row.rhs = std::pow(std::log(M), p - 1.0) * MdY;
                    row.ratio = row.rhs / row.lhs;
                }
                report.rows.push_back(row);
            }
            break;
        }
        case InequalityKind::ineq_5_1: {
            bool ok = true;
            for (double M : grid) {
                double worst = std::numeric_limits<double>::infinity();
                double worst_rel = std::numeric_limits<double>::infinity();
                for (const Snapshot& snap : traj.snapshots) {
                    const double t = snap.t;
                    if (t > M) break;
                    const CutoffValue A = cutoff_power(t, M, k);
                    const double e = std::exp(-t);
                    for (std::size_t i = 0; i < nr && i * dr <= t + 1.0 + 1e-12; ++i) {
                        const double Phi = e * phi_nodes[i];
                        const double dpsi = (A.value - A.d1) * Phi;
                        const double gap = dpsi - A.value * Phi;
                        const double scale = std::abs(dpsi) + std::abs(A.value * Phi);
                        worst = std::min(worst, gap);
                        if (scale > 0.0) worst_rel = std::min(worst_rel, gap / scale);
                    }
                }
                InequalityRow row;
                row.point = M;
                row.lhs = worst;
                row.rhs = 0.0;
                row.ratio = worst_rel;
                if (!(worst >= 0.0)) ok = false;
                report.rows.push_back(row);
            }
            report.ratio_min = std::numeric_limits<double>::infinity();
            report.ratio_max = -std::numeric_limits<double>::infinity();
            for (const auto& row : report.rows) {
                report.ratio_min = std::min(report.ratio_min, row.ratio);
                report.ratio_max = std::max(report.ratio_max, row.ratio);
            }
            report.pass = ok;
            return report;
        }
        case InequalityKind::ineq_5_11: {
            const TimeSeries W = build_series(
                [&](std::size_t s, std::size_t i) { return std::exp(-traj.snapshots[s].t) * phi_nodes[i]; });
            const YWeight yw(m.p_conj());
            const double C2 = data_constants(m, *ctx.phi).C2;
            const double a = 0.5 * (n - 1.0) * (p - 1.0);
            for (double M : grid) {
                const double MdY =
                    time_integral(W, [&](double t) { return power_k(theta_M(t, M)); }, {0.5 * M, M});
                const double Y = time_integral(W, [&](double t) { return yw(t, M); }, {0.5, 1.0, 0.5 * M, M});
                InequalityRow row;
                row.point = M;
                row.lhs = std::pow(M, a) * MdY / M;
                row.rhs = std::pow(C2 * eps + Y, p);
                row.ratio = row.lhs / row.rhs;
                report.rows.push_back(row);
            }
            break;
        }
    }

    report.ratio_min = std::numeric_limits<double>::infinity();
    report.ratio_max = 0.0;
    bool finite = true;
    for (const auto& row : report.rows) {
        if (!std::isfinite(row.ratio) || !(row.ratio > 0.0)) finite = false;
        report.ratio_min = std::min(report.ratio_min, row.ratio);
        report.ratio_max = std::max(report.ratio_max, row.ratio);
    }
    report.pass = finite && report.spread() <= ctx.spread_factor;
    return report;
}

double ode_lemma_escape(double p1, double p2, double K1, double K2, double delta, double cap) {
    if (!(p1 > 1.0) || !(p2 > 1.0)) throw std::invalid_argument("ode_lemma: need p1, p2 > 1");
    if (!(p2 < p1 + 1.0)) throw std::invalid_argument("ode_lemma: need p2 < p1 + 1");
    if (!(K1 > 0.0) || !(K2 > 0.0) || !(delta > 0.0)) throw std::invalid_argument("ode_lemma: need K1, K2, delta > 0");
    if (!(cap > 1.0)) throw std::invalid_argument("ode_lemma: cap must exceed 1");

    // Independent variable s = log φ, unknown τ = log t:
    // dτ/ds = φ min(K1/δ, K2 τ^{p2-1} φ^{-p1}).
    using State = std::array<double, 1>;
    auto rhs = [&](const State& x, State& dxds, double s) {
        const double phi = std::exp(s);
        const double tau = x[0];
        dxds[0] = std::min(phi * K1 / delta, K2 * std::pow(tau, p2 - 1.0) * std::exp((1.0 - p1) * s));
    };
    const double phi0 = 1e-8 * delta / K1;
    double s0 = std::log(phi0);
    const double s1 = std::log(cap);
    if (s1 <= s0) throw std::invalid_argument("ode_lemma: cap below the starting value");
    State x{1.0 + K1 * phi0 / delta};
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, x, s0, s1, 1e-3);
    return x[0];
}

OdeLemmaResult ode_lemma_fit(double p1, double p2, double K1, double K2, const std::vector<double>& delta_grid,
                             double cap) {
    if (!(p2 < p1 + 1.0)) throw std::invalid_argument("ode_lemma_fit: need p2 < p1 + 1");
    if (delta_grid.size() < 2) throw std::invalid_argument("ode_lemma_fit: need at least two delta values");
    OdeLemmaResult out;
    out.p1 = p1;
    out.p2 = p2;
    out.K1 = K1;
    out.K2 = K2;
    out.cap = cap;
    out.theory_exponent = (p1 - 1.0) / (p1 - p2 + 1.0);
    out.delta = delta_grid;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double d : delta_grid) {
        const double logT = ode_lemma_escape(p1, p2, K1, K2, d, cap);
        const double logT_far = ode_lemma_escape(p1, p2, K1, K2, d, cap * 1e4);
        out.cap_shift = std::max(out.cap_shift, std::abs(logT_far - logT) / logT);
        out.log_T.push_back(logT);
        const double x = std::log(1.0 / d);
        const double y = std::log(logT);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double N = static_cast<double>(delta_grid.size());
    out.fitted_exponent = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    return out;
}

}  // namespace strauss
