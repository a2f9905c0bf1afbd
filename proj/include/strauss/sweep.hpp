#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strauss/exponents.hpp"
#include "strauss/model.hpp"
#include "strauss/solver.hpp"

namespace strauss {

struct SweepSpec {
    ModelParams base;
    double eps_min = 0.2;
    double eps_max = 1.0;
    int count = 6;
    double dr = 5e-3;
    int refine_levels = 2;
    LifespanOptions options;
    int jobs = 1;

    /// Geometric grid from eps_min to eps_max, strictly increasing.
    std::vector<double> eps_grid() const;
    void validate() const;
};

/// Worker count from STRAUSS_LAB_JOBS, falling back to 1.
int default_jobs();

/// One lifespan estimate per eps, in grid order. The output does not depend on `jobs`.
std::vector<LifespanResult> run_sweep(const SweepSpec& spec);

/// Runs `task(i)` for i in [0, count) on `jobs` threads; exceptions are rethrown in index order.
void parallel_for(int count, int jobs, const std::function<void(int)>& task);

enum class FitVerdict { consistent, inconsistent, not_applicable };
std::string to_string(FitVerdict verdict);

struct ScalingFit {
    std::vector<double> x;  ///< log(1/eps)
    std::vector<double> y;  ///< log T
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double theory_exponent = 0.0;
    double tolerance = 0.0;
    FitVerdict verdict = FitVerdict::not_applicable;
};

inline constexpr double kMinRSquared = 0.95;
inline constexpr std::size_t kMinFitPoints = 4;

/// Least squares of log T against log(1/eps). Rejects fewer than four points.
ScalingFit fit_powerlaw(const std::vector<double>& eps, const std::vector<double>& T, double theory_exponent,
                        double tolerance);

/// Thrown when a sweep sits on a critical exponent, where lifespans are exponential in 1/eps.
class CriticalCaseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fits the usable rows of a sweep against the theory exponent for `model`.
/// Censored, unstable and unreliable rows are dropped; too few rows or a
/// supercritical model give verdict not_applicable.
ScalingFit fit_sweep(const ModelParams& model, const std::vector<LifespanResult>& rows, double tolerance);

/// CSV `eps,T,uncertainty,censored,unreliable,unstable,T_level0,...`.
std::string sweep_csv(const std::vector<LifespanResult>& rows);
std::vector<LifespanResult> parse_sweep_csv(const std::string& text);

/// One-row CSV `points,slope,intercept,r_squared,theory_exponent,tolerance,verdict`.
std::string fit_csv(const ScalingFit& fit);

}  // namespace strauss
