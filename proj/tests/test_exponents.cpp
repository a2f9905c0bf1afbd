#include <doctest.h>

#include <cmath>

#include "strauss/exponents.hpp"

using namespace strauss;

TEST_SUITE("exponents") {

TEST_CASE("closed forms for n = 2 and n = 3") {
    const ExponentTable e3 = critical_exponents(3);
    CHECK(e3.pS == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(e3.pF == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(e3.pG == doctest::Approx(2.0).epsilon(1e-14));
    const ExponentTable e2 = critical_exponents(2);
    CHECK(e2.pS == doctest::Approx((3.0 + std::sqrt(17.0)) / 2.0).epsilon(1e-14));
    CHECK(e2.pG == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("pS is the positive root of gamma and exceeds pF") {
    for (int n = 2; n <= 8; ++n) {
        const ExponentTable e = critical_exponents(n);
        CHECK(std::abs(gamma(e.pS, n)) < 1e-12);
        CHECK(e.pF < e.pS);
        CHECK(e.pG == doctest::Approx((n + 1.0) / (n - 1.0)));
        CHECK(e.pF == doctest::Approx(1.0 + 2.0 / n));
    }
    CHECK_THROWS(critical_exponents(1));
}

TEST_CASE("gamma by substitution") {
    CHECK(gamma(2.0, 3) == doctest::Approx(2.0));
    CHECK(gamma(1.0, 2) == doctest::Approx(4.0));
}

TEST_CASE("theory branches") {
    const TheoryBound a = theory_lifespan(3, 2.0, Nonlinearity::power_u);
    CHECK(a.kind == BoundKind::polynomial);
    CHECK(a.exponent == doctest::Approx(2.0));

    const TheoryBound b = theory_lifespan(3, 1.4, Nonlinearity::power_u);
    CHECK(b.kind == BoundKind::polynomial);
    CHECK(b.exponent == doctest::Approx(2.0 * 0.4 / (4.0 - 2.8)));

    const TheoryBound c = theory_lifespan(3, 1.5, Nonlinearity::power_ut);
    CHECK(c.kind == BoundKind::polynomial);
    CHECK(c.exponent == doctest::Approx(1.0));

    const double pS = 1.0 + std::sqrt(2.0);
    const TheoryBound d = theory_lifespan(3, pS, Nonlinearity::power_u);
    CHECK(d.kind == BoundKind::exponential);
    CHECK(d.exponent == doctest::Approx(pS * (pS - 1.0)));

    const TheoryBound g = theory_lifespan(3, 2.0, Nonlinearity::power_ut);
    CHECK(g.kind == BoundKind::exponential);
    CHECK(g.exponent == doctest::Approx(1.0));

    CHECK(theory_lifespan(3, 3.0, Nonlinearity::power_u).kind == BoundKind::infinite);
    CHECK(theory_lifespan(3, 2.5, Nonlinearity::power_ut).kind == BoundKind::infinite);
    CHECK_THROWS(theory_lifespan(3, 1.0, Nonlinearity::power_u));
    CHECK(theory_lifespan(3, 2.0, Nonlinearity::power_u).p_conj == doctest::Approx(2.0));
}

TEST_CASE("boundary p = n/(n-1) takes the first branch") {
    for (int n = 2; n <= 6; ++n) {
        const double p = n / (n - 1.0);
        const TheoryBound b = theory_lifespan(n, p, Nonlinearity::power_u);
        CHECK(b.exponent == doctest::Approx(2.0 * (p - 1.0) / (n + 1.0 - (n - 1.0) * p)));
    }
}

TEST_CASE("second-branch exponent grows without bound towards pS") {
    for (int n = 2; n <= 5; ++n) {
        const double pS = critical_exponents(n).pS;
        const double lo = n / (n - 1.0);
        double prev = 0.0;
        for (int i = 1; i < 200; ++i) {
            const double p = lo + (pS - lo) * i / 200.0;
            const double e = theory_lifespan(n, p, Nonlinearity::power_u).exponent;
            CHECK(e > prev);
            prev = e;
        }
        CHECK(theory_lifespan(n, pS - 1e-7, Nonlinearity::power_u).exponent > 1e5);
    }
}

TEST_CASE("second branch lies below the first-branch formula between n/(n-1) and (n+1)/(n-1)") {
    for (int n = 2; n <= 6; ++n) {
        const double lo = n / (n - 1.0);
        const double hi = (n + 1.0) / (n - 1.0);
        for (int i = 1; i < 50; ++i) {
            const double p = lo + (hi - lo) * i / 50.0;
            const double second = theory_lifespan(n, p, Nonlinearity::power_u).exponent;
            const double first = 2.0 * (p - 1.0) / (n + 1.0 - (n - 1.0) * p);
            CHECK(second < first);
        }
    }
}

TEST_CASE("names round trip") {
    for (auto k : {Nonlinearity::power_u, Nonlinearity::power_ut, Nonlinearity::none})
        CHECK(parse_nonlinearity(to_string(k)) == k);
    CHECK(parse_nonlinearity("ut") == Nonlinearity::power_ut);
    CHECK_THROWS(parse_nonlinearity("cubic"));
}

}
