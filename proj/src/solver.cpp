#include "strauss/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace strauss {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ipow(double x, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= x;
    return v;
}

}  // namespace

double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

RadialLaplacian::RadialLaplacian(const RadialGrid& grid, int n) {
    if (grid.nr < 3) throw std::invalid_argument("radial grid needs at least 3 nodes");
    const std::size_t nr = grid.nr;
    const double dr = grid.dr;
    plus_.assign(nr, 0.0);
    minus_.assign(nr, 0.0);
    volume_.assign(nr, 0.0);
    flux_.assign(nr, 0.0);

    for (std::size_t i = 0; i < nr; ++i) {
        const double outer = (static_cast<double>(i) + 0.5) * dr;
        flux_[i] = ipow(outer, n - 1) / dr;
        if (i == 0) {
            volume_[i] = ipow(outer, n) / n;
        } else {
            // (a^n - b^n)/n written as a sum to avoid cancellation at large r.
            const double inner = (static_cast<double>(i) - 0.5) * dr;
            double sum = 0.0;
            for (int k = 0; k < n; ++k) sum += ipow(outer, k) * ipow(inner, n - 1 - k);
            volume_[i] = dr * sum / n;
        }
    }
    for (std::size_t i = 0; i + 1 < nr; ++i) {
        plus_[i] = flux_[i] / volume_[i];
        minus_[i] = i == 0 ? 0.0 : flux_[i - 1] / volume_[i];
    }
}

std::vector<double> RadialLaplacian::apply(std::span<const double> u) const {
    if (u.size() != size()) throw std::invalid_argument("laplacian: array size does not match grid");
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) out[i] = at(u, i);
    return out;
}

std::vector<double> apply_radial_laplacian(std::span<const double> u, const RadialGrid& grid, int n) {
    return RadialLaplacian(grid, n).apply(u);
}

WaveSolver::WaveSolver(ModelParams params, RadialGrid grid, SolverHooks hooks)
    : params_(params), grid_(grid), hooks_(std::move(hooks)), lap_(grid_, params_.n) {
    params_.validate(true);
    const std::size_t nr = grid_.nr;
    damping_.resize(nr);
    inv_denominator_.resize(nr);
    lag_factor_.resize(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        damping_[i] = potential(grid_.radius(i), params_.mu, params_.beta);
        const double a = 0.5 * damping_[i] * grid_.dt;
        inv_denominator_[i] = 1.0 / (1.0 + a);
        lag_factor_[i] = 1.0 - a;
    }
    if (params_.p == 2.0) pow_kind_ = 1;
    else if (params_.p == 1.5) pow_kind_ = 2;
    else if (params_.p == 3.0) pow_kind_ = 3;
    scratch_.assign(nr, 0.0);
}

double WaveSolver::nonlinear(double value) const {
    const double a = std::abs(value);
    switch (pow_kind_) {
        case 1: return a * a;
        case 2: return a * std::sqrt(a);
        case 3: return a * a * a;
        default: return std::pow(a, params_.p);
    }
}

double WaveSolver::forcing(double t, std::size_t i) const {
    return hooks_.forcing ? hooks_.forcing(t, grid_.radius(i)) : 0.0;
}

std::size_t WaveSolver::front_index(double t) const {
    const double cells = (t + 1.0) / grid_.dr;
    const auto idx = static_cast<std::size_t>(std::floor(cells + 1e-9 * (1.0 + cells))) + 2;
    return std::min(idx, grid_.nr - 2);
}

WaveState WaveSolver::initial_state() const {
    const std::size_t nr = grid_.nr;
    const double dt = grid_.dt;
    WaveState state;
    state.u.assign(nr, 0.0);
    state.u_prev.assign(nr, 0.0);
    std::vector<double> g(nr, 0.0);
    for (std::size_t i = 0; i + 1 < nr; ++i) {
        const double r = grid_.radius(i);
        state.u[i] = hooks_.initial_u ? hooks_.initial_u(r) : initial_u(params_, r);
        g[i] = hooks_.initial_ut ? hooks_.initial_ut(r) : initial_ut(params_, r);
    }
    // Ghost level from the Taylor expansion u(-dt) = u0 - dt g + dt^2/2 u_tt(0),
    // which makes the first leapfrog step second-order accurate.
    for (std::size_t i = 0; i + 1 < nr; ++i) {
        double n0 = 0.0;
        if (params_.nonlinearity == Nonlinearity::power_u) n0 = nonlinear(state.u[i]);
        else if (params_.nonlinearity == Nonlinearity::power_ut) n0 = nonlinear(g[i]);
        const double utt = lap_.at(state.u, i) - damping_[i] * g[i] + n0 + forcing(0.0, i);
        state.u_prev[i] = state.u[i] - dt * g[i] + 0.5 * dt * dt * utt;
    }
    return state;
}

StepInfo WaveSolver::advance(WaveState& state) const {
    const double dt = grid_.dt;
    const double dt2 = dt * dt;
    const double t_now = static_cast<double>(state.step) * dt;
    const double t_next = static_cast<double>(state.step + 1) * dt;
    const std::size_t last = front_index(t_next);

    const std::vector<double>& u = state.u;
    const std::vector<double>& up = state.u_prev;
    std::vector<double>& base = scratch_;
    const bool forced = static_cast<bool>(hooks_.forcing);

    for (std::size_t i = 0; i <= last; ++i) {
        double rhs = lap_.at(u, i);
        if (forced) rhs += forcing(t_now, i);
        base[i] = 2.0 * u[i] - lag_factor_[i] * up[i] + dt2 * rhs;
    }

    // The new level overwrites u^{m-1} in place. Every node past `last` is
    // already zero there because the front only moves outward.
    std::vector<double> next = std::move(state.u_prev);
    const double inv_2dt = 0.5 / dt;
    StepInfo info;
    for (std::size_t i = 0; i <= last; ++i) {
        const double older = next[i];
        double value = 0.0;
        switch (params_.nonlinearity) {
            case Nonlinearity::none:
                value = base[i] * inv_denominator_[i];
                break;
            case Nonlinearity::power_u:
                value = (base[i] + dt2 * nonlinear(u[i])) * inv_denominator_[i];
                break;
            case Nonlinearity::power_ut: {
                // Predictor with the backward difference, then one corrector
                // pass with the centred difference of the predicted level.
                const double trial = (base[i] + dt2 * nonlinear((u[i] - older) / dt)) * inv_denominator_[i];
                value = (base[i] + dt2 * nonlinear((trial - older) * inv_2dt)) * inv_denominator_[i];
                break;
            }
        }
        next[i] = value;
        if (!std::isfinite(value)) info.finite = false;
        info.max_abs_u = std::max(info.max_abs_u, std::abs(value));
        info.max_abs_ut = std::max(info.max_abs_ut, std::abs(value - older) * inv_2dt);
    }

    state.u_prev = std::move(state.u);
    state.u = std::move(next);
    state.step += 1;
    state.t = t_next;
    return info;
}

double WaveSolver::energy(const WaveState& state) const {
    const double dt = grid_.dt;
    const auto w = lap_.volumes();
    const auto flux = lap_.flux_weights();
    double kinetic = 0.0;
    double potential_part = 0.0;
    const std::size_t nr = grid_.nr;
    for (std::size_t i = 0; i < nr; ++i) {
        const double v = (state.u[i] - state.u_prev[i]) / dt;
        kinetic += w[i] * v * v;
        if (i + 1 < nr) {
            potential_part += flux[i] * (state.u[i + 1] - state.u[i]) * (state.u_prev[i + 1] - state.u_prev[i]);
        }
    }
    return 0.5 * sphere_area(params_.n) * (kinetic + potential_part);
}

WaveState advance(const WaveState& state, const ModelParams& params, const RadialGrid& grid) {
    const WaveSolver solver(params, grid);
    WaveState next = state;
    solver.advance(next);
    return next;
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::completed: return "completed";
        case SolveStatus::blew_up: return "blew_up";
        case SolveStatus::unstable: return "unstable";
    }
    return "completed";
}

namespace {

/// Root of the quadratic through y = monitor^{-1/k} on the last three levels,
/// which are already in the self-similar blow-up regime (monitor ~ C (T - t)^{-k}).
/// y ~ c (T - t)(1 + a (T - t)), so the quadratic captures the first correction.
double extrapolate_blowup(const std::vector<double>& monitor, std::size_t last, double dt, double k) {
    const double t_b = static_cast<double>(last) * dt;
    if (last < 1) return t_b;
    const double q_a = monitor[last - 1];
    const double q_b = monitor[last];
    if (!(q_a > 0.0) || !(q_b > q_a)) return t_b;
    const double y_a = std::pow(q_a, -1.0 / k);
    const double y_b = std::pow(q_b, -1.0 / k);
    const double slope = (y_a - y_b) / dt;
    const double linear = t_b + y_b / slope;
    if (last < 2 || !(monitor[last - 2] > 0.0) || !(q_a > monitor[last - 2])) return linear;
    // y(t_b + s) = y_b - b s + c s², s measured from t_b.
    const double y_z = std::pow(monitor[last - 2], -1.0 / k);
    const double c = (y_z - 2.0 * y_a + y_b) / (2.0 * dt * dt);
    const double b = (4.0 * y_a - 3.0 * y_b - y_z) / (2.0 * dt);
    const double disc = b * b - 4.0 * c * y_b;
    if (!(b > 0.0) || !(disc >= 0.0)) return linear;
    return t_b + 2.0 * y_b / (b + std::sqrt(disc));
}

std::vector<std::size_t> snapshot_steps(const RunOptions& options, const RadialGrid& grid) {
    std::vector<std::size_t> steps;
    const auto to_step = [&](double t) { return static_cast<std::size_t>(std::llround(t / grid.dt)); };
    for (double t : options.snapshot_times) {
        if (t >= 0.0 && t <= grid.t_max) steps.push_back(to_step(t));
    }
    if (options.snapshot_every > 0.0) {
        for (std::size_t k = 0;; ++k) {
            const double t = static_cast<double>(k) * options.snapshot_every;
            if (t > grid.t_max + 1e-12) break;
            steps.push_back(to_step(t));
        }
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

}  // namespace

SolveOutcome run(const ModelParams& params, const RadialGrid& grid, const RunOptions& options,
                 const SolverHooks& hooks) {
    const WaveSolver solver(params, grid, hooks);
    WaveState state = solver.initial_state();
    const double dt = grid.dt;

    SolveOutcome out;
    out.dr = grid.dr;
    out.dt = dt;
    out.threshold = options.threshold;
    out.t_blowup = kNaN;

    const std::vector<std::size_t> snaps = snapshot_steps(options, grid);
    auto next_snap = snaps.begin();

    std::vector<double> ut_history;
    auto max_abs = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    std::vector<double> u_history{max_abs(state.u)};
    if (options.record_energy) out.energy_history.push_back(solver.energy(state));

    const auto total_steps = static_cast<std::size_t>(std::floor(grid.t_max / dt + 1e-9));
    std::vector<double> older;
    while (state.step < total_steps) {
        const std::size_t m = state.step;
        const bool snap_here = next_snap != snaps.end() && *next_snap == m;
        if (snap_here) older = state.u_prev;

        const StepInfo info = solver.advance(state);
        if (!info.finite) {
            out.status = SolveStatus::unstable;
            out.t_end = static_cast<double>(m) * dt;
            break;
        }
        ut_history.push_back(info.max_abs_ut);
        u_history.push_back(info.max_abs_u);
        if (options.record_energy) out.energy_history.push_back(solver.energy(state));

        if (snap_here) {
            Snapshot snap;
            snap.t = static_cast<double>(m) * dt;
            snap.u = state.u_prev;
            snap.ut.resize(snap.u.size());
            for (std::size_t i = 0; i < snap.u.size(); ++i) snap.ut[i] = (state.u[i] - older[i]) / (2.0 * dt);
            out.snapshots.push_back(std::move(snap));
            ++next_snap;
        }

        if (options.check_support) {
            const double limit = state.t + 1.0 + 2.0 * grid.dr;
            for (std::size_t i = 0; i < grid.nr; ++i) {
                if (grid.radius(i) > limit * (1.0 + 1e-12) && state.u[i] != 0.0) {
                    out.support_ok = false;
                    break;
                }
            }
        }

        if (info.max_abs_u > options.threshold) {
            out.status = SolveStatus::blew_up;
            out.t_end = state.t;
            const std::size_t lvl = state.step;  // index of the crossing level in u_history
            if (params.nonlinearity == Nonlinearity::power_ut && ut_history.size() >= 2) {
                // u_t^{m} is the centred derivative at level m = lvl - 1.
                const std::size_t k = ut_history.size() - 1;
                out.t_blowup = extrapolate_blowup(ut_history, k, dt, 1.0 / (params.p - 1.0));
            } else if (lvl >= 2) {
                out.t_blowup = extrapolate_blowup(u_history, lvl - 1, dt, 2.0 / (params.p - 1.0));
            } else {
                out.t_blowup = state.t;
            }
            break;
        }
        out.t_end = state.t;
    }
    out.steps = state.step;
    if (options.record_history) out.max_abs_u_history = std::move(u_history);
    return out;
}

LifespanResult estimate_lifespan(const ModelParams& params, double base_dr, int levels,
                                 const LifespanOptions& options) {
    if (levels < 2) throw std::invalid_argument("estimate_lifespan needs at least 2 refinement levels");
    if (!(base_dr > 0.0)) throw std::invalid_argument("base_dr must be > 0");

    LifespanResult result;
    result.eps = params.eps;
    RunOptions run_options;
    run_options.threshold = options.threshold;
    run_options.record_history = false;

    double dr = base_dr;
    for (int level = 0; level < levels; ++level, dr *= 0.5) {
        const RadialGrid grid = build_grid(options.t_max, dr, options.cfl);
        const SolveOutcome outcome = run(params, grid, run_options);
        result.dr_levels.push_back(dr);
        switch (outcome.status) {
            case SolveStatus::blew_up:
                result.T_levels.push_back(outcome.t_blowup);
                break;
            case SolveStatus::completed:
                result.censored = true;
                result.T_levels.push_back(kNaN);
                break;
            case SolveStatus::unstable:
                result.unstable = true;
                result.T_levels.push_back(kNaN);
                break;
        }
        if (result.censored || result.unstable) break;
    }

    if (result.censored || result.unstable) {
        result.T_extrapolated = kNaN;
        result.uncertainty = kNaN;
        return result;
    }

    const std::size_t last = result.T_levels.size() - 1;
    const double fine = result.T_levels[last];
    const double coarse = result.T_levels[last - 1];
    // Second-order Richardson step: the blow-up time inherits the O(dt^2)
    // error of the scheme once the crossing time is interpolated.
    result.T_extrapolated = fine + (fine - coarse) / 3.0;
    result.uncertainty = std::abs(fine - coarse);
    for (std::size_t i = 1; i < result.T_levels.size(); ++i) {
        const double a = result.T_levels[i - 1];
        const double b = result.T_levels[i];
        if (std::abs(b - a) > 0.2 * std::abs(b)) result.unreliable = true;
    }
    return result;
}

namespace {

struct MmsSetup {
    ModelParams params;
    SolverHooks hooks;
};

double mms_profile(double r) { return bump(r, 4, 1.0); }

double mms_profile_laplacian(double r, int n) {
    if (r >= 1.0) return 0.0;
    const double q = 1.0 - r * r;
    return -8.0 * n * q * q * q + 48.0 * r * r * q * q;
}

MmsSetup mms_setup(MmsCase which) {
    MmsSetup setup;
    ModelParams& m = setup.params;
    m.n = 3;
    m.mu = 1.0;
    m.beta = 3.0;
    m.eps = 1.0;
    switch (which) {
        case MmsCase::linear_damped: m.nonlinearity = Nonlinearity::none; break;
        case MmsCase::power_u: m.nonlinearity = Nonlinearity::power_u; m.p = 2.0; break;
        case MmsCase::power_ut: m.nonlinearity = Nonlinearity::power_ut; m.p = 1.5; break;
    }
    const ModelParams copy = m;
    setup.hooks.initial_u = [](double r) { return mms_profile(r); };
    setup.hooks.initial_ut = [](double r) { return -mms_profile(r); };
    setup.hooks.forcing = [copy](double t, double r) {
        const double decay = std::exp(-t);
        const double s = mms_profile(r);
        const double exact = decay * s;
        // u = e^{-t}s: u_tt = u, u_t = -u, and |u_t| = |u| for the nonlinearity.
        double f = decay * (s - mms_profile_laplacian(r, copy.n)) - potential(r, copy.mu, copy.beta) * exact;
        if (copy.nonlinearity != Nonlinearity::none) f -= std::pow(std::abs(exact), copy.p);
        return f;
    };
    return setup;
}

}  // namespace

double mms_error(MmsCase which, double dr) {
    const MmsSetup setup = mms_setup(which);
    const double t_final = 1.0;
    const RadialGrid grid = build_grid(t_final, dr, 0.5);
    const WaveSolver solver(setup.params, grid, setup.hooks);
    WaveState state = solver.initial_state();
    const auto steps = static_cast<std::size_t>(std::llround(t_final / grid.dt));
    for (std::size_t k = 0; k < steps; ++k) solver.advance(state);
    const double decay = std::exp(-state.t);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.nr; ++i) {
        err = std::max(err, std::abs(state.u[i] - decay * mms_profile(grid.radius(i))));
    }
    return err;
}

double mms_order(MmsCase which, std::span<const double> dr_levels) {
    if (dr_levels.size() < 3) throw std::invalid_argument("mms_order needs at least 3 refinement levels");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(dr_levels.size());
    for (double dr : dr_levels) {
        const double x = std::log(dr);
        const double y = std::log(mms_error(which, dr));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double mms_order(MmsCase which) {
    static constexpr double levels[] = {0.04, 0.02, 0.01, 0.005};
    return mms_order(which, levels);
}

}  // namespace strauss
