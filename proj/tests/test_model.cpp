#include <doctest.h>

#include <cmath>
#include <sstream>

#include "strauss/config.hpp"
#include "strauss/model.hpp"

using namespace strauss;

TEST_SUITE("model") {

TEST_CASE("potential") {
    CHECK(potential(0.0, 1.0, 3.0) == 1.0);
    CHECK(potential(1.0, 1.0, 3.0) == 0.125);
    CHECK(potential(7.0, 0.0, 3.0) == 0.0);
    double prev = potential(0.0, 2.0, 2.5);
    for (int i = 1; i < 100; ++i) {
        const double v = potential(0.1 * i, 2.0, 2.5);
        CHECK(v > 0.0);
        CHECK(v <= prev);
        CHECK(v <= 2.0);
        prev = v;
    }
}

TEST_CASE("bump") {
    CHECK(bump(0.0, 4, 1.0) == 1.0);
    CHECK(bump(1.0, 4, 3.0) == 0.0);
    CHECK(bump(0.5, 4, 2.0) == doctest::Approx(0.6328125).epsilon(1e-15));
    for (int i = 0; i < 300; ++i) {
        const double r = 0.01 * i;
        CHECK(bump(r, 4, 1.0) >= 0.0);
        if (r >= 1.0) CHECK(bump(r, 4, 1.0) == 0.0);
    }
}

TEST_CASE("grid sizing") {
    const RadialGrid g = build_grid(10.0, 0.01, 0.5);
    CHECK(g.r_max >= 11.02 - 1e-12);
    CHECK(g.dt == doctest::Approx(0.005));
    CHECK(build_grid(0.5, 0.1, 0.9).dt == doctest::Approx(0.09));
    const RadialGrid fine = build_grid(10.0, 0.005, 0.5);
    CHECK(fine.nr - 1 == doctest::Approx(2.0 * (g.nr - 1)).epsilon(2e-3));
    CHECK(fine.dt == doctest::Approx(0.5 * g.dt));
    CHECK_THROWS(build_grid(0.0, 0.01, 0.5));
    CHECK_THROWS(build_grid(1.0, -0.01, 0.5));
    CHECK_THROWS(build_grid(1.0, 0.01, 0.95));
}

TEST_CASE("parameter validation and regime flag") {
    ModelParams m;
    m.beta = 3.0;
    CHECK(m.theorem_regime());
    m.beta = 1.5;
    CHECK_FALSE(m.theorem_regime());
    CHECK_NOTHROW(m.validate());
    m.f_amp = m.g_amp = 0.0;
    CHECK_THROWS(m.validate());
    ModelParams bad;
    bad.p = 1.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("config parsing") {
    std::istringstream in("# comment\n n = 2\nmu=0.5 # trailing\n\nnonlinearity = power_ut\ndr = 0.01\n");
    const LabConfig c = parse_config(in);
    CHECK(c.model.n == 2);
    CHECK(c.model.mu == 0.5);
    CHECK(c.model.nonlinearity == Nonlinearity::power_ut);
    CHECK(c.dr == 0.01);

    std::istringstream unknown("n = 3\nfoo = 1\n");
    CHECK_THROWS_AS(parse_config(unknown), ConfigError);
    std::istringstream garbage("n = three\n");
    CHECK_THROWS_AS(parse_config(garbage), ConfigError);
    std::istringstream no_eq("n 3\n");
    CHECK_THROWS_AS(parse_config(no_eq), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

}
