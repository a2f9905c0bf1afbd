#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strauss/model.hpp"

namespace strauss {

/// Conservative (flux-form) discretisation of u_rr + (n-1)/r u_r on a
/// RadialGrid. Interior rows read
///   (Lu)_i = [r_{i+1/2}^{n-1}(u_{i+1}-u_i) - r_{i-1/2}^{n-1}(u_i-u_{i-1})] / (dr W_i)
/// with W_i the radial cell volume, which reduces to 2n(u_1-u_0)/dr^2 at the
/// origin and is exact on constants and r^2. The outer node is Dirichlet 0.
class RadialLaplacian {
public:
    RadialLaplacian(const RadialGrid& grid, int n);

    double at(std::span<const double> u, std::size_t i) const {
        return plus_[i] * (u[i + 1] - u[i]) - minus_[i] * (u[i] - (i == 0 ? 0.0 : u[i - 1]));
    }

    /// Full operator; the outer node is left at zero.
    std::vector<double> apply(std::span<const double> u) const;

    /// Cell volumes W_i; multiply by |S^{n-1}| for the physical measure.
    std::span<const double> volumes() const { return volume_; }
    /// r_{i+1/2}^{n-1} / dr, the weight of the flux between nodes i and i+1.
    std::span<const double> flux_weights() const { return flux_; }
    std::size_t size() const { return volume_.size(); }

private:
    std::vector<double> plus_;
    std::vector<double> minus_;
    std::vector<double> volume_;
    std::vector<double> flux_;
};

std::vector<double> apply_radial_laplacian(std::span<const double> u, const RadialGrid& grid, int n);

/// Area of the unit sphere S^{n-1}.
double sphere_area(int n);

/// Two consecutive time levels of the leapfrog scheme.
struct WaveState {
    double t = 0.0;
    std::size_t step = 0;
    std::vector<double> u;       ///< level m
    std::vector<double> u_prev;  ///< level m-1 (a Taylor ghost level at m = 0)
};

/// Optional overrides used by manufactured-solution runs.
struct SolverHooks {
    std::function<double(double t, double r)> forcing;
    std::function<double(double r)> initial_u;
    std::function<double(double r)> initial_ut;
};

struct StepInfo {
    bool finite = true;
    double max_abs_u = 0.0;   ///< max |u^{m+1}|
    double max_abs_ut = 0.0;  ///< max |(u^{m+1}-u^{m-1})/(2dt)|, the centred u_t at level m
};

/// Leapfrog integrator with the damping term centred in time and solved
/// pointwise. Only nodes with r <= t + 1 + 2dr are updated; the rest stay zero.
class WaveSolver {
public:
    WaveSolver(ModelParams params, RadialGrid grid, SolverHooks hooks = {});

    WaveState initial_state() const;
    StepInfo advance(WaveState& state) const;

    /// Largest node index that may be nonzero at time t.
    std::size_t front_index(double t) const;

    const ModelParams& params() const { return params_; }
    const RadialGrid& grid() const { return grid_; }
    const RadialLaplacian& laplacian() const { return lap_; }
    std::span<const double> damping() const { return damping_; }

    /// Staggered discrete energy E^{m-1/2} built from u^{m-1}, u^m. For the
    /// linear problem it is non-increasing along the scheme.
    double energy(const WaveState& state) const;

private:
    double nonlinear(double value) const;
    double forcing(double t, std::size_t i) const;

    ModelParams params_;
    RadialGrid grid_;
    SolverHooks hooks_;
    RadialLaplacian lap_;
    std::vector<double> damping_;  ///< V(r_i)
    std::vector<double> inv_denominator_;
    std::vector<double> lag_factor_;
    int pow_kind_ = 0;
    mutable std::vector<double> scratch_;
};

/// One leapfrog step (convenience form; WaveSolver is the efficient path).
WaveState advance(const WaveState& state, const ModelParams& params, const RadialGrid& grid);

enum class SolveStatus { completed, blew_up, unstable };
std::string to_string(SolveStatus status);

struct Snapshot {
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> ut;
};

struct RunOptions {
    double threshold = 1e6;
    /// Store a snapshot every `snapshot_every` time units (0 disables).
    double snapshot_every = 0.0;
    std::vector<double> snapshot_times;
    bool record_history = true;
    /// Verify the discrete finite-propagation property after every step.
    bool check_support = false;
    /// Record the staggered energy after every step.
    bool record_energy = false;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::completed;
    double t_end = 0.0;             ///< time of the last accepted level
    double t_blowup = 0.0;          ///< extrapolated blow-up time (NaN unless blew_up)
    std::size_t steps = 0;
    std::vector<double> max_abs_u_history;  ///< one entry per level, starting at t = 0
    std::vector<double> energy_history;
    std::vector<Snapshot> snapshots;
    bool support_ok = true;
    double dr = 0.0;
    double dt = 0.0;
    double threshold = 0.0;
};

SolveOutcome run(const ModelParams& params, const RadialGrid& grid, const RunOptions& options = {},
                 const SolverHooks& hooks = {});

struct LifespanResult {
    double eps = 0.0;
    std::vector<double> dr_levels;
    std::vector<double> T_levels;
    double T_extrapolated = 0.0;
    double uncertainty = 0.0;
    bool censored = false;
    bool unreliable = false;
    bool unstable = false;
};

struct LifespanOptions {
    double t_max = 50.0;
    double cfl = 0.5;
    double threshold = 1e6;
};

LifespanResult estimate_lifespan(const ModelParams& params, double base_dr, int levels,
                                 const LifespanOptions& options = {});

enum class MmsCase { linear_damped, power_u, power_ut };

/// Observed order of accuracy for a manufactured solution u = e^{-t}(1-r^2)^4_+.
double mms_order(MmsCase which, std::span<const double> dr_levels);
double mms_order(MmsCase which);

/// Max-norm error at t = 1 for one manufactured case and one grid spacing.
double mms_error(MmsCase which, double dr);

}  // namespace strauss
