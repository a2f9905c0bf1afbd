// Acceptance run: one pass/fail line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "oracles.hpp"
#include "strauss/csv.hpp"
#include "strauss/eigen.hpp"
#include "strauss/exponents.hpp"
#include "strauss/functionals.hpp"
#include "strauss/solver.hpp"
#include "strauss/sweep.hpp"
#include "strauss/testfunc.hpp"

using namespace strauss;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 1. Exponent arithmetic.
void criterion1(Outcome& out) {
    const double pS3 = critical_exponents(3).pS;
    const double pS2 = critical_exponents(2).pS;
    out.require(rel(pS3, 1.0 + std::sqrt(2.0)) < 1e-12, "pS(3)");
    out.require(rel(pS2, (3.0 + std::sqrt(17.0)) / 2.0) < 1e-12, "pS(2)");
    double worst_gamma = 0.0;
    for (int n = 2; n <= 8; ++n) {
        const ExponentTable e = critical_exponents(n);
        out.require(rel(e.pF, 1.0 + 2.0 / n) < 1e-15, "pF");
        out.require(rel(e.pG, (n + 1.0) / (n - 1.0)) < 1e-15, "pG");
        worst_gamma = std::max(worst_gamma, std::abs(gamma(e.pS, n)));
        // Branch classifier against the formulas evaluated here.
        for (double frac : {0.1, 0.5, 0.9}) {
            const double lo = n / (n - 1.0);
            const double p1 = 1.0 + (lo - 1.0) * frac;
            const double f1 = 2.0 * (p1 - 1.0) / (n + 1.0 - (n - 1.0) * p1);
            out.require(rel(theory_lifespan(n, p1, Nonlinearity::power_u).exponent, f1) < 1e-14, "first branch");
            const double p2 = lo + (e.pS - lo) * frac;
            const double g2 = 2.0 + (n + 1.0) * p2 - (n - 1.0) * p2 * p2;
            const double f2 = 2.0 * p2 * (p2 - 1.0) / g2;
            out.require(rel(theory_lifespan(n, p2, Nonlinearity::power_u).exponent, f2) < 1e-14, "second branch");
            const double p3 = 1.0 + (e.pG - 1.0) * frac;
            const double f3 = 1.0 / (1.0 / (p3 - 1.0) - (n - 1.0) / 2.0);
            out.require(rel(theory_lifespan(n, p3, Nonlinearity::power_ut).exponent, f3) < 1e-14, "glassey branch");
        }
        const TheoryBound crit = theory_lifespan(n, e.pS, Nonlinearity::power_u);
        out.require(crit.kind == BoundKind::exponential && rel(crit.exponent, e.pS * (e.pS - 1.0)) < 1e-14,
                    "critical Strauss rate");
        const TheoryBound critg = theory_lifespan(n, e.pG, Nonlinearity::power_ut);
        out.require(critg.kind == BoundKind::exponential && rel(critg.exponent, e.pG - 1.0) < 1e-14,
                    "critical Glassey rate");
    }
    out.require(worst_gamma < 1e-9, "gamma(pS) = 0");
    out.detail << "pS(3)=" << fmt(pS3) << " pS(2)=" << fmt(pS2) << " max|gamma(pS)|=" << fmt(worst_gamma);
}

// 2. Eigenfunction oracle and the w bound.
void criterion2(Outcome& out) {
    const EigenSolution free = solve_psi(1.0, 0.0, 3.0, 3, 40.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < free.size(); ++i) {
        const double r = free.r[i];
        const double exact = r == 0.0 ? 1.0 : std::sinh(r) / r;
        worst = std::max(worst, std::abs(free.psi[i] - exact) / exact);
    }
    out.require(worst <= 1e-8, "sinh(r)/r to 1e-8");
    const EigenSolution a = solve_psi(1.0, 1.0, 3.0, 3, 40.0);
    const EigenSolution b = solve_psi(1.0, 1.0, 3.0, 3, 80.0);
    const double change = std::abs(b.w_sup() / a.w_sup() - 1.0);
    out.require(std::isfinite(a.w_sup()) && change <= 0.01, "sup w stable to 1%");
    out.detail << "sinh error " << fmt(worst) << ", sup w " << fmt(a.w_sup()) << " -> " << fmt(b.w_sup())
               << " (change " << fmt(change) << "), w(r_max) " << fmt(a.w.back()) << " -> " << fmt(b.w.back());
}

// 3. b_q identities, asymptotics and the incomplete-gamma check.
void criterion3(Outcome& out) {
    const PsiCache cache(3, 1.0, 3.0, 0.5, 51.0);
    IdentityRegion coarse;
    const IdentityResiduals r1 = verify_bq_identities(cache, coarse);
    IdentityRegion fine = coarse;
    fine.dt = fine.dr = 5e-3;
    const IdentityResiduals r2 = verify_bq_identities(cache, fine);
    out.require(r1.max() <= 1e-3, "identity residual <= 1e-3");
    const double gains[] = {r1.dt_first / r2.dt_first, r1.dt_second / r2.dt_second, r1.laplace / r2.laplace,
                            r1.wave / r2.wave};
    double min_gain = 1e300;
    for (double g : gains) min_gain = std::min(min_gain, g);
    out.require(min_gain >= 3.0, "improvement >= 3x when steps halve");

    double worst_spread = 0.0;
    for (double q : {0.5, 2.0}) {
        const PsiCache c = q == 0.5 ? PsiCache(3, 1.0, 3.0, q, 51.0) : PsiCache(3, 1.0, 3.0, q, 51.0);
        const AsymptoticReport rep = verify_bq_asymptotics(c);
        out.require(rep.ratio_min > 0.0, "asymptotic ratio positive");
        worst_spread = std::max(worst_spread, rep.spread());
    }
    out.require(worst_spread <= 10.0, "asymptotic spread <= 10");

    const PsiCache free(3, 0.0, 3.0, 0.5, 5.0);
    double gamma_err = 0.0;
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
        const double exact = 4.0 * kPi * std::pow(t, -0.5) * boost::math::tgamma_lower(0.5, t);
        gamma_err = std::max(gamma_err, rel(bq_value(free, t, 0.0), exact));
    }
    out.require(gamma_err <= 1e-6, "incomplete gamma to 1e-6");
    out.detail << "residual " << fmt(r1.max()) << " -> " << fmt(r2.max()) << " (min gain " << fmt(min_gain)
               << "), asymptotic spread " << fmt(worst_spread) << ", incomplete gamma " << fmt(gamma_err);
}

double free_wave_error(double dr) {
    ModelParams m;
    m.mu = 0.0;
    m.nonlinearity = Nonlinearity::none;
    const RadialGrid g = build_grid(2.0, dr, 0.5);
    const WaveSolver solver(m, g);
    WaveState s = solver.initial_state();
    const auto steps = static_cast<std::size_t>(std::llround(2.0 / g.dt));
    for (std::size_t k = 0; k < steps; ++k) solver.advance(s);
    const oracle::FreeWave3 exact(m);
    double err = 0.0;
    for (std::size_t i = 0; i < g.nr; ++i) err = std::max(err, std::abs(s.u[i] - exact.u(s.t, g.radius(i))));
    return err;
}

// 4. Solver validation.
void criterion4(Outcome& out) {
    const double lin = mms_order(MmsCase::linear_damped);
    const double pu = mms_order(MmsCase::power_u);
    const double put = mms_order(MmsCase::power_ut);
    out.require(lin >= 1.8 && lin <= 2.2, "linear MMS order in [1.8, 2.2]");
    out.require(pu >= 1.8 && pu <= 2.2, "power_u MMS order in [1.8, 2.2]");
    out.require(put >= 1.5, "power_ut MMS order >= 1.5");

    const double e1 = free_wave_error(0.04), e2 = free_wave_error(0.02), e3 = free_wave_error(0.01);
    const double oracle_order = std::log2(e2 / e3);
    out.require(std::log2(e1 / e2) >= 1.8 && oracle_order >= 1.8, "1D reduction error O(dr^2)");

    bool support = true;
    for (auto kind : {Nonlinearity::power_u, Nonlinearity::power_ut, Nonlinearity::none}) {
        ModelParams m;
        m.nonlinearity = kind;
        m.p = 2.0;
        m.eps = 0.5;
        RunOptions o;
        o.check_support = true;
        support = support && run(m, build_grid(10.0, 0.01, 0.5), o).support_ok;
    }
    out.require(support, "finite propagation speed on every step");

    ModelParams lm;
    lm.mu = 1.0;
    lm.nonlinearity = Nonlinearity::none;
    RunOptions eo;
    eo.record_energy = true;
    const SolveOutcome energy = run(lm, build_grid(10.0, 0.01, 0.5), eo);
    bool monotone = energy.energy_history.size() > 1;
    for (std::size_t k = 1; k < energy.energy_history.size(); ++k)
        monotone = monotone && energy.energy_history[k] <= energy.energy_history[k - 1];
    out.require(monotone, "linear damped energy non-increasing");
    out.detail << "MMS orders " << fmt(lin) << "/" << fmt(pu) << "/" << fmt(put) << ", oracle order "
               << fmt(oracle_order) << ", support " << (support ? "ok" : "violated") << ", energy "
               << (monotone ? "monotone" : "not monotone");
}

SweepSpec strauss_spec(double mu) {
    SweepSpec spec;
    spec.base.n = 3;
    spec.base.p = 2.0;
    spec.base.mu = mu;
    spec.base.beta = 3.0;
    spec.base.nonlinearity = Nonlinearity::power_u;
    spec.base.f_amp = spec.base.g_amp = 10.0;
    spec.eps_min = 0.2;
    spec.eps_max = 1.0;
    spec.count = 6;
    spec.dr = 5e-3;
    spec.refine_levels = 2;
    spec.options.t_max = 180.0;
    spec.jobs = default_jobs();
    return spec;
}

bool decreasing(const std::vector<LifespanResult>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].T_extrapolated < rows[i - 1].T_extrapolated)) return false;
    return true;
}

std::string lifespans(const std::vector<LifespanResult>& rows) {
    std::string s;
    for (const auto& r : rows) s += (s.empty() ? "" : ",") + fmt(r.T_extrapolated);
    return s;
}

// 5. Subcritical Strauss scaling.
void criterion5(Outcome& out) {
    const SweepSpec s0 = strauss_spec(0.0);
    const auto rows0 = run_sweep(s0);
    const ScalingFit f0 = fit_sweep(s0.base, rows0, 0.3);
    out.require(f0.x.size() == 6, "6 finite lifespans at mu = 0");
    out.require(decreasing(rows0), "T decreasing in eps at mu = 0");
    out.require(f0.verdict == FitVerdict::consistent, "mu = 0 slope 2 +/- 0.3, r2 >= 0.95");

    const SweepSpec s1 = strauss_spec(1.0);
    const auto rows1 = run_sweep(s1);
    const ScalingFit f1 = fit_sweep(s1.base, rows1, 0.4);
    out.require(f1.x.size() == 6, "6 finite lifespans at mu = 1");
    out.require(decreasing(rows1), "T decreasing in eps at mu = 1");
    out.require(f1.verdict == FitVerdict::consistent, "mu = 1 slope within 0.4 of 2");

    // Ratio of each damped lifespan to the undamped fit curve.
    double lo = 1e300, hi = 0.0;
    for (const auto& r : rows1) {
        const double curve = std::exp(f0.intercept + f0.slope * (-std::log(r.eps)));
        const double ratio = r.T_extrapolated / curve;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    out.require(lo > 0.0 && hi / lo <= 2.0, "damped T within a constant multiple of the undamped curve (spread <= 2)");
    out.detail << "mu=0 slope " << fmt(f0.slope) << " r2 " << fmt(f0.r_squared) << " T=[" << lifespans(rows0)
               << "]; mu=1 slope " << fmt(f1.slope) << " r2 " << fmt(f1.r_squared) << " T=[" << lifespans(rows1)
               << "]; T1/fit0 in [" << fmt(lo) << ", " << fmt(hi) << "]";
}

// 6. Glassey scaling.
void criterion6(Outcome& out) {
    SweepSpec spec;
    spec.base.n = 3;
    spec.base.p = 1.5;
    spec.base.mu = 1.0;
    spec.base.beta = 3.0;
    spec.base.nonlinearity = Nonlinearity::power_ut;
    spec.base.f_amp = spec.base.g_amp = 1.0;
    spec.eps_min = 0.2;
    spec.eps_max = 1.0;
    spec.count = 6;
    spec.dr = 5e-3;
    spec.refine_levels = 2;
    spec.options.t_max = 120.0;
    spec.jobs = default_jobs();
    const auto rows = run_sweep(spec);
    const ScalingFit fit = fit_sweep(spec.base, rows, 0.25);
    out.require(fit.x.size() == 6, "6 finite lifespans");
    out.require(decreasing(rows), "T decreasing in eps");
    out.require(fit.verdict == FitVerdict::consistent, "slope 1 +/- 0.25, r2 >= 0.95");
    out.detail << "slope " << fmt(fit.slope) << " r2 " << fmt(fit.r_squared) << " T=[" << lifespans(rows) << "]";
}

// Blow-up run with snapshots every T_num/200 up to T_num.
Trajectory blowup_trajectory(const ModelParams& m, double dr, double t_cap, double& t_num) {
    const SolveOutcome probe = run(m, build_grid(t_cap, dr, 0.5));
    if (probe.status != SolveStatus::blew_up) throw std::runtime_error("reference run did not blow up");
    t_num = probe.t_blowup;
    RunOptions o;
    o.snapshot_every = t_num / 200.0;
    return make_trajectory(m, run(m, build_grid(t_num, dr, 0.5), o));
}

// 7. Critical-case substitutes.
void criterion7(Outcome& out) {
    const std::vector<double> deltas = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    out.detail << "ODE slopes";
    for (auto [p1, p2] : {std::pair{2.0, 2.0}, std::pair{2.5, 2.5}, std::pair{2.5, 2.0}}) {
        const OdeLemmaResult r = ode_lemma_fit(p1, p2, 1.0, 1.0, deltas);
        out.require(rel(r.fitted_exponent, r.theory_exponent) <= 0.1, "ODE lemma slope within 10%");
        out.require(r.cap_shift <= 1e-6, "escape time insensitive to the cap");
        out.detail << " " << fmt(r.fitted_exponent) << "/" << fmt(r.theory_exponent);
    }

    ModelParams s;
    s.n = 3;
    s.mu = 1.0;
    s.beta = 3.0;
    s.p = critical_exponents(3).pS;
    s.nonlinearity = Nonlinearity::power_u;
    s.eps = 0.6;
    s.f_amp = s.g_amp = 10.0;
    double t_s = 0.0;
    const Trajectory ts = blowup_trajectory(s, 0.01, 200.0, t_s);
    const double q = 0.5 * (s.n - 1) - 1.0 / s.p;
    const PsiCache cache(s.n, s.mu, s.beta, q, std::min((ts.snapshots.front().u.size() - 1) * ts.dr, 0.8 * t_s + 1.1));
    InequalityContext cs;
    cs.trajectory = &ts;
    cs.bq = &cache;
    cs.t_num = t_s;
    const InequalityReport r415 = inequality_check(cs, InequalityKind::ineq_4_15);
    out.require(r415.pass && r415.ratio_min > 0.0, "ineq_4_15 ratio bounded below, spread <= 20");

    ModelParams g;
    g.n = 3;
    g.mu = 1.0;
    g.beta = 3.0;
    g.p = critical_exponents(3).pG;
    g.nonlinearity = Nonlinearity::power_ut;
    g.eps = 0.2;
    g.f_amp = g.g_amp = 10.0;
    double t_g = 0.0;
    const Trajectory tg = blowup_trajectory(g, 0.01, 200.0, t_g);
    const EigenSolution phi = solve_psi(1.0, g.mu, g.beta, g.n, std::max(30.0, t_g + 3.0));
    InequalityContext cg;
    cg.trajectory = &tg;
    cg.phi = &phi;
    cg.t_num = t_g;
    const InequalityReport r51 = inequality_check(cg, InequalityKind::ineq_5_1);
    out.require(r51.pass, "ineq_5_1 pointwise positivity");
    out.detail << "; ineq_4_15 at pS, T_num " << fmt(t_s) << ": spread " << fmt(r415.spread()) << "; ineq_5_1 at pG, T_num "
               << fmt(t_g) << ": min " << fmt(r51.ratio_min);
}

// 8. Weak-form residual on the exact free wave.
void criterion8(Outcome& out) {
    ModelParams m;
    m.mu = 0.0;
    m.nonlinearity = Nonlinearity::none;
    const EigenSolution phi = solve_psi(1.0, 0.0, 3.0, 3, 30.0);
    for (auto kind : {TestKind::eta2p, TestKind::eta2p_Phi, TestKind::dtpsi}) {
        std::vector<double> res;
        for (double dr : {0.02, 0.01, 0.005}) {
            const Trajectory traj = oracle::free_wave_trajectory(m, dr, dr, 4.0, 6.0);
            res.push_back(weak_residual(traj, kind, 4.0, &phi).relative);
        }
        const double o1 = std::log2(res[0] / res[1]);
        const double o2 = std::log2(res[1] / res[2]);
        out.require(o1 >= 1.8 && o2 >= 1.8, "second-order decrease for " + to_string(kind));
        out.detail << to_string(kind) << " " << fmt(res[0]) << "->" << fmt(res[2]) << " (orders " << fmt(o1) << ", "
                   << fmt(o2) << ") ";
    }
}

int exit_status(const std::string& cmd) {
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// 9. Determinism and exit codes.
void criterion9(Outcome& out) {
    SweepSpec spec;
    spec.base.mu = 1.0;
    spec.base.p = 2.0;
    spec.base.f_amp = spec.base.g_amp = 10.0;
    spec.eps_min = 0.6;
    spec.eps_max = 1.0;
    spec.count = 6;
    spec.dr = 0.04;
    spec.options.t_max = 60.0;
    spec.jobs = 1;
    const std::string one = sweep_csv(run_sweep(spec));
    spec.jobs = 4;
    const std::string four = sweep_csv(run_sweep(spec));
    out.require(one == four, "sweep CSV identical for 1 and 4 workers");

    std::vector<double> eps, T;
    for (int i = 0; i < 6; ++i) {
        eps.push_back(0.2 * std::pow(5.0, i / 5.0));
        T.push_back(5.0 * std::pow(eps.back(), -2.0));
    }
    const ScalingFit fit = fit_powerlaw(eps, T, 2.0, 0.3);
    out.require(std::abs(fit.slope - 2.0) <= 1e-12 && std::abs(fit.r_squared - 1.0) <= 1e-12,
                "exact fit on a synthetic power law");

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "strauss_lab_acceptance";
    fs::create_directories(dir);
    std::vector<LifespanResult> rows;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        LifespanResult r;
        r.eps = eps[i];
        r.T_extrapolated = T[i];
        rows.push_back(r);
    }
    const std::string sweep_file = (dir / "synthetic.csv").string();
    write_file(sweep_file, sweep_csv(rows));
    const std::string exe = STRAUSS_LAB_EXE;
    const std::string quiet = " > /dev/null 2>&1";
    const int ok = exit_status(exe + " fit --input " + sweep_file + " --p 2 --mu 0" + quiet);
    const int bad_fit = exit_status(exe + " fit --input " + sweep_file + " --theory 3" + quiet);
    const int bad_ode = exit_status(exe + " odelemma --p1 2 --p2 2 --tolerance 1e-9" + quiet);
    const int bad_bq =
        exit_status(exe + " bq --mu 1 --q 0.5 --t-max 3 --verify-t-max 3 --identity-threshold 1e-12" + quiet);
    const int bad_usage = exit_status(exe + " fit --input " + sweep_file + " --bogus" + quiet);
    out.require(ok == 0, "consistent fit exits 0");
    out.require(bad_fit == 1 && bad_ode == 1 && bad_bq == 1, "injected check failures exit 1");
    out.require(bad_usage == 2, "usage error exits 2");
    fs::remove_all(dir);
    out.detail << "worker-count invariance " << (one == four ? "ok" : "broken") << ", fit slope error "
               << fmt(std::abs(fit.slope - 2.0)) << ", exit codes " << ok << "/" << bad_fit << "/" << bad_ode << "/"
               << bad_bq << "/" << bad_usage;
}

struct Criterion {
    int id;
    double limit_s;
    std::function<void(Outcome&)> body;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-9)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all = {
        {1, 1.0, criterion1},     {2, 10.0, criterion2},  {3, 120.0, criterion3},
        {4, 120.0, criterion4},   {5, 900.0, criterion5}, {6, 900.0, criterion6},
        {7, 600.0, criterion7},   {8, 120.0, criterion8}, {9, 60.0, criterion9},
    };
    bool all_pass = true;
    for (const auto& c : all) {
        if (only != 0 && c.id != only) continue;
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= c.limit_s) out.require(false, "runtime " + fmt(secs) + " s over " + fmt(c.limit_s) + " s");
        all_pass = all_pass && out.pass;
        std::printf("criterion %d: %s (%.1f s, limit %.0f s) %s\n", c.id, out.pass ? "PASS" : "FAIL", secs, c.limit_s,
                    out.detail.str().c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
