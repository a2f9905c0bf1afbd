#include "strauss/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "strauss/csv.hpp"

namespace strauss {

std::vector<double> SweepSpec::eps_grid() const {
    validate();
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i)
        grid[i] = eps_min * std::pow(eps_max / eps_min, static_cast<double>(i) / (count - 1));
    grid.back() = eps_max;
    return grid;
}

void SweepSpec::validate() const {
    if (!(eps_min > 0.0) || !(eps_max > eps_min)) throw std::invalid_argument("sweep needs 0 < eps_min < eps_max");
    if (count < 2) throw std::invalid_argument("sweep needs at least two eps values");
    if (refine_levels < 2) throw std::invalid_argument("sweep needs at least two refinement levels");
    if (!(dr > 0.0)) throw std::invalid_argument("sweep dr must be > 0");
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

int default_jobs() {
    const char* env = std::getenv("STRAUSS_LAB_JOBS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 1 || value > 1024) throw std::invalid_argument("STRAUSS_LAB_JOBS must be a positive integer");
    return static_cast<int>(value);
}

void parallel_for(int count, int jobs, const std::function<void(int)>& task) {
    if (count <= 0) return;
    jobs = std::max(1, std::min(jobs, count));
    std::vector<std::exception_ptr> errors(count);
    std::mutex mutex;
    int next = 0;
    auto worker = [&] {
        for (;;) {
            int i;
            {
                std::lock_guard<std::mutex> lock(mutex);
                if (next >= count) return;
                i = next++;
            }
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<LifespanResult> run_sweep(const SweepSpec& spec) {
    const std::vector<double> eps = spec.eps_grid();
    spec.base.validate();
    std::vector<LifespanResult> rows(eps.size());
    parallel_for(static_cast<int>(eps.size()), spec.jobs, [&](int i) {
        ModelParams params = spec.base;
        params.eps = eps[i];
        rows[i] = estimate_lifespan(params, spec.dr, spec.refine_levels, spec.options);
    });
    return rows;
}

std::string to_string(FitVerdict verdict) {
    switch (verdict) {
        case FitVerdict::consistent: return "consistent";
        case FitVerdict::inconsistent: return "inconsistent";
        case FitVerdict::not_applicable: return "not_applicable";
    }
    return "not_applicable";
}

ScalingFit fit_powerlaw(const std::vector<double>& eps, const std::vector<double>& T, double theory_exponent,
                        double tolerance) {
    if (eps.size() != T.size()) throw std::invalid_argument("fit_powerlaw: size mismatch");
    if (eps.size() < kMinFitPoints)
        throw std::invalid_argument("fit_powerlaw needs at least " + std::to_string(kMinFitPoints) + " points");
    ScalingFit fit;
    fit.theory_exponent = theory_exponent;
    fit.tolerance = tolerance;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || !(T[i] > 0.0) || !std::isfinite(T[i]))
            throw std::invalid_argument("fit_powerlaw needs positive finite eps and T");
        fit.x.push_back(-std::log(eps[i]));
        fit.y.push_back(std::log(T[i]));
    }
    const double N = static_cast<double>(fit.x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < fit.x.size(); ++i) {
        mx += fit.x[i];
        my += fit.y[i];
    }
    mx /= N;
    my /= N;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < fit.x.size(); ++i) {
        const double dx = fit.x[i] - mx;
        const double dy = fit.y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_powerlaw needs distinct eps values");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < fit.x.size(); ++i) {
        const double e = fit.y[i] - (fit.intercept + fit.slope * fit.x[i]);
        sse += e * e;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    const bool ok = std::abs(fit.slope - theory_exponent) <= tolerance && fit.r_squared >= kMinRSquared;
    fit.verdict = ok ? FitVerdict::consistent : FitVerdict::inconsistent;
    return fit;
}

ScalingFit fit_sweep(const ModelParams& model, const std::vector<LifespanResult>& rows, double tolerance) {
    const TheoryBound bound = theory_lifespan(model.n, model.p, model.nonlinearity);
    if (bound.kind == BoundKind::exponential)
        throw CriticalCaseError(
            "p sits on a critical exponent: lifespans grow like exp(C eps^-r) and no power law is fitted; use the "
            "odelemma and verify subcommands instead");
    std::vector<double> eps, T;
    for (const auto& row : rows) {
        if (row.censored || row.unstable || row.unreliable || !std::isfinite(row.T_extrapolated)) continue;
        eps.push_back(row.eps);
        T.push_back(row.T_extrapolated);
    }
    if (bound.kind == BoundKind::infinite || eps.size() < kMinFitPoints) {
        ScalingFit fit;
        fit.theory_exponent = bound.exponent;
        fit.tolerance = tolerance;
        for (std::size_t i = 0; i < eps.size(); ++i) {
            fit.x.push_back(-std::log(eps[i]));
            fit.y.push_back(std::log(T[i]));
        }
        fit.slope = fit.intercept = fit.r_squared = std::numeric_limits<double>::quiet_NaN();
        fit.verdict = FitVerdict::not_applicable;
        return fit;
    }
    return fit_powerlaw(eps, T, bound.exponent, tolerance);
}

std::string sweep_csv(const std::vector<LifespanResult>& rows) {
    std::size_t levels = 0;
    for (const auto& row : rows) levels = std::max(levels, row.T_levels.size());
    std::string out = "eps,T,uncertainty,censored,unreliable,unstable";
    for (std::size_t l = 0; l < levels; ++l) out += ",dr_level" + std::to_string(l) + ",T_level" + std::to_string(l);
    out += '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& row : rows) {
        out += format_double(row.eps) + "," + format_double(row.T_extrapolated) + "," + format_double(row.uncertainty) +
               "," + (row.censored ? "1" : "0") + "," + (row.unreliable ? "1" : "0") + "," + (row.unstable ? "1" : "0");
        for (std::size_t l = 0; l < levels; ++l) {
            out += "," + format_double(l < row.dr_levels.size() ? row.dr_levels[l] : nan);
            out += "," + format_double(l < row.T_levels.size() ? row.T_levels[l] : nan);
        }
        out += '\n';
    }
    return out;
}

std::vector<LifespanResult> parse_sweep_csv(const std::string& text) {
    const CsvTable table = parse_csv(text);
    std::vector<LifespanResult> rows;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        LifespanResult row;
        row.eps = table.number(i, "eps");
        row.T_extrapolated = table.number(i, "T");
        row.uncertainty = table.number(i, "uncertainty");
        row.censored = table.number(i, "censored") != 0.0;
        row.unreliable = table.number(i, "unreliable") != 0.0;
        row.unstable = table.number(i, "unstable") != 0.0;
        for (std::size_t l = 0;; ++l) {
            const std::string dr_name = "dr_level" + std::to_string(l);
            bool present = false;
            for (const auto& h : table.header) present = present || h == dr_name;
            if (!present) break;
            const double dr = table.number(i, dr_name);
            if (std::isnan(dr)) break;
            row.dr_levels.push_back(dr);
            row.T_levels.push_back(table.number(i, "T_level" + std::to_string(l)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string fit_csv(const ScalingFit& fit) {
    std::string out = "points,slope,intercept,r_squared,theory_exponent,tolerance,verdict\n";
    out += std::to_string(fit.x.size()) + "," + format_double(fit.slope) + "," + format_double(fit.intercept) + "," +
           format_double(fit.r_squared) + "," + format_double(fit.theory_exponent) + "," +
           format_double(fit.tolerance) + "," + to_string(fit.verdict) + "\n";
    return out;
}

}  // namespace strauss
