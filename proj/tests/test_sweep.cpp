#include <doctest.h>

#include <cmath>
#include <random>

#include "strauss/csv.hpp"
#include "strauss/plot.hpp"
#include "strauss/sweep.hpp"

using namespace strauss;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

SweepSpec small_spec() {
    SweepSpec spec;
    spec.base.mu = 0.0;
    spec.base.p = 2.0;
    spec.base.f_amp = spec.base.g_amp = 10.0;
    spec.eps_min = 0.7;
    spec.eps_max = 1.0;
    spec.count = 4;
    spec.dr = 0.04;
    spec.refine_levels = 2;
    spec.options.t_max = 30.0;
    return spec;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("eps grid is geometric and strictly increasing") {
    SweepSpec spec;
    const auto g = spec.eps_grid();
    REQUIRE(g.size() == 6);
    CHECK(g.front() == 0.2);
    CHECK(g.back() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(g[i] > g[i - 1]);
        CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(5.0, 0.2)));
    }
    spec.eps_max = 0.1;
    CHECK_THROWS(spec.eps_grid());
}

TEST_CASE("exact fit on a noiseless power law") {
    std::vector<double> eps, T;
    for (int i = 0; i < 6; ++i) {
        eps.push_back(0.2 * std::pow(5.0, i / 5.0));
        T.push_back(5.0 * std::pow(eps.back(), -2.0));
    }
    const ScalingFit fit = fit_powerlaw(eps, T, 2.0, 0.3);
    CHECK(std::abs(fit.slope - 2.0) < 1e-12);
    CHECK(std::abs(fit.intercept - std::log(5.0)) < 1e-12);
    CHECK(std::abs(fit.r_squared - 1.0) < 1e-12);
    CHECK(fit.verdict == FitVerdict::consistent);
    CHECK(fit_powerlaw(eps, T, 3.0, 0.3).verdict == FitVerdict::inconsistent);
    CHECK_THROWS(fit_powerlaw({0.1, 0.2, 0.3}, {1.0, 2.0, 3.0}, 1.0, 0.1));
}

TEST_CASE("fit with 5% multiplicative noise") {
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> eps, T;
        for (int i = 0; i < 6; ++i) {
            eps.push_back(0.2 * std::pow(5.0, i / 5.0));
            T.push_back(5.0 * std::pow(eps.back(), -2.0) * std::exp(noise(rng)));
        }
        CHECK(std::abs(fit_powerlaw(eps, T, 2.0, 0.3).slope - 2.0) < 0.1);
    }
}

TEST_CASE("fit_sweep drops flagged rows and refuses critical cases") {
    ModelParams m;
    m.p = 2.0;
    m.mu = 0.0;
    std::vector<LifespanResult> rows(6);
    for (auto& r : rows) {
        r.censored = true;
        r.T_extrapolated = std::nan("");
    }
    CHECK(fit_sweep(m, rows, 0.3).verdict == FitVerdict::not_applicable);
    m.p = 1.0 + std::sqrt(2.0);
    CHECK_THROWS_AS(fit_sweep(m, rows, 0.3), CriticalCaseError);
    m.p = 2.0;
    m.nonlinearity = Nonlinearity::power_ut;
    CHECK_THROWS_AS(fit_sweep(m, rows, 0.3), CriticalCaseError);
}

TEST_CASE("sweep output is identical for any worker count") {
    SweepSpec spec = small_spec();
    spec.jobs = 1;
    const std::string one = sweep_csv(run_sweep(spec));
    spec.jobs = 3;
    const std::string three = sweep_csv(run_sweep(spec));
    CHECK(one == three);
    const auto rows = parse_sweep_csv(one);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].T_extrapolated < rows[i - 1].T_extrapolated);
    CHECK(sweep_csv(rows) == one);
}

TEST_CASE("parallel_for propagates the first failing index") {
    std::vector<int> seen(10, 0);
    parallel_for(10, 4, [&](int i) { seen[i] = 1; });
    for (int v : seen) CHECK(v == 1);
    CHECK_THROWS_WITH(parallel_for(10, 4,
                                   [](int i) {
                                       if (i >= 3) throw std::runtime_error("fail " + std::to_string(i));
                                   }),
                      "fail 3");
}

TEST_CASE("CSV numbers round trip and NaN is literal") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(parse_double(format_double(v)) == v);
    CHECK(format_double(std::nan("")) == "NaN");
    CHECK(std::isnan(parse_double("NaN")));
    CHECK_THROWS(parse_double("1.5x"));
    const CsvTable t = parse_csv("a,b\n1,NaN\n\n2,3\n");
    CHECK(t.rows.size() == 2);
    CHECK(std::isnan(t.number(0, "b")));
    CHECK_THROWS(parse_csv("a,b\n1\n"));
}

TEST_CASE("snapshot CSV round trip") {
    std::vector<Snapshot> snaps(2);
    for (int k = 0; k < 2; ++k) {
        snaps[k].t = 0.1 * k;
        for (int i = 0; i < 5; ++i) {
            snaps[k].u.push_back(std::sin(0.3 * i + k));
            snaps[k].ut.push_back(std::cos(0.7 * i - k));
        }
    }
    const std::string text = snapshot_csv(snaps, 0.25);
    CHECK(text.rfind("t,r,u,ut\n", 0) == 0);
    double dr = 0.0;
    const auto back = parse_snapshot_csv(text, dr);
    CHECK(dr == 0.25);
    REQUIRE(back.size() == 2);
    CHECK(back[1].u == snaps[1].u);
    CHECK(back[1].ut == snaps[1].ut);
}

TEST_CASE("SVG output") {
    std::vector<double> eps, T;
    for (int i = 0; i < 6; ++i) {
        eps.push_back(0.2 * std::pow(5.0, i / 5.0));
        T.push_back(5.0 * std::pow(eps.back(), -2.1));
    }
    const ScalingFit fit = fit_powerlaw(eps, T, 2.0, 0.3);
    const std::string a = fit_svg(fit, "fit");
    CHECK(a == fit_svg(fit, "fit"));
    CHECK(count(a, "<circle") == 6);
    CHECK(count(a, "<line x1") - 2 == 2);
    CHECK_THROWS(fit_svg(ScalingFit{}, "empty"));

    CHECK_FALSE(wants_log_axis({1.0, 5.0, 50.0}));
    CHECK(wants_log_axis({1.0, 5.0, 500.0}));
    const std::string s = series_svg({1, 2, 3}, {1.0, 10.0, 1000.0}, "ratios");
    CHECK(s.find("log scale") != std::string::npos);
    CHECK(series_svg({1, 2}, {1.0, 2.0}, "r").find("log scale") == std::string::npos);
    CHECK_THROWS(series_svg({}, {}, "none"));
}

TEST_CASE("STRAUSS_LAB_JOBS") {
    setenv("STRAUSS_LAB_JOBS", "3", 1);
    CHECK(default_jobs() == 3);
    setenv("STRAUSS_LAB_JOBS", "zero", 1);
    CHECK_THROWS(default_jobs());
    unsetenv("STRAUSS_LAB_JOBS");
    CHECK(default_jobs() == 1);
}

}
