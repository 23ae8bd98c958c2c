#include <cmath>
#include <random>

#include "doctest.h"
#include "minorant/interval.hpp"

using minorant::Interval;

TEST_CASE("basic arithmetic encloses exact results")
{
    const Interval a(1.0, 2.0);
    const Interval b(-3.0, 0.5);
    CHECK((a + b).contains(Interval(-2.0, 2.5)));
    CHECK((a - b).contains(Interval(0.5, 5.0)));
    CHECK((a * b).contains(Interval(-6.0, 1.0)));
    CHECK((a / Interval(2.0, 4.0)).contains(Interval(0.25, 1.0)));
    CHECK(sqr(Interval(-1.0, 2.0)).lo() <= 0.0);
    CHECK(sqr(Interval(-1.0, 2.0)).lo() >= -1e-300);
    CHECK(sqr(Interval(-1.0, 2.0)).contains(4.0));
}

TEST_CASE("rational enclosure brackets the fraction")
{
    const Interval t = Interval::rational(1, 3);
    CHECK(static_cast<long double>(t.lo()) * 3.0L <= 1.0L);
    CHECK(static_cast<long double>(t.hi()) * 3.0L >= 1.0L);
    CHECK(t.width() < 1e-15);
    const Interval e = Interval::rational(8, 19);
    CHECK(static_cast<long double>(e.lo()) * 19.0L <= 8.0L);
    CHECK(static_cast<long double>(e.hi()) * 19.0L >= 8.0L);
}

TEST_CASE("outward rounding strictly widens inexact operations")
{
    const Interval third = Interval(1.0) / Interval(3.0);
    CHECK(third.lo() < third.hi());
    const Interval sum = Interval(0.1) + Interval(0.2);
    CHECK(sum.contains(0.1 + 0.2));
    CHECK(sum.lo() < sum.hi());
}

TEST_CASE("exact sums stay degenerate")
{
    const Interval z = Interval(0.0) + Interval(0.0) + Interval(0.0);
    CHECK(z.lo() == 0.0);
    CHECK(z.hi() == 0.0);
    const Interval d = Interval(0.75) - Interval(0.25);
    CHECK(d.lo() == 0.5);
    CHECK(d.hi() == 0.5);
}

TEST_CASE("property: sums of doubles in [1, 2] enclose the long double sum")
{
    // Two doubles in [1, 2] add exactly in a 64-bit mantissa.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1.0, 2.0);
    for (int i = 0; i < 100'000; ++i) {
        const double a = u(rng), b = u(rng);
        const long double exact = static_cast<long double>(a) + static_cast<long double>(b);
        const Interval s = Interval(a) + Interval(b);
        REQUIRE(static_cast<long double>(s.lo()) <= exact);
        REQUIRE(static_cast<long double>(s.hi()) >= exact);
        const long double diff = static_cast<long double>(a) - static_cast<long double>(b);
        const Interval d = Interval(a) - Interval(b);
        REQUIRE(static_cast<long double>(d.lo()) <= diff);
        REQUIRE(static_cast<long double>(d.hi()) >= diff);
    }
}

TEST_CASE("log encloses libm and long double values")
{
    for (double v : {1.0, 1.5, 2.0, 0.3, 1e-3, 123.456}) {
        const Interval l = log(Interval(v));
        CHECK(l.contains(std::log(v)));
        const long double ref = std::log(static_cast<long double>(v));
        CHECK(static_cast<long double>(l.lo()) <= ref);
        CHECK(static_cast<long double>(l.hi()) >= ref);
    }
    CHECK_THROWS_AS(log(Interval(-1.0, 1.0)), std::domain_error);
}

TEST_CASE("errors: empty intersection, reciprocal of zero, bad bounds")
{
    CHECK_THROWS_AS(intersect(Interval(0.0, 1.0), Interval(2.0, 3.0)), std::domain_error);
    CHECK_THROWS_AS(recip(Interval(-1.0, 1.0)), std::domain_error);
    CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(NAN, 1.0), std::invalid_argument);
}

TEST_CASE("property: inclusion isotonicity on random nested inputs")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(0.1, 4.0);
    for (int i = 0; i < 20000; ++i) {
        double a0 = d(rng), a1 = d(rng), b0 = d(rng), b1 = d(rng);
        if (a0 > a1) std::swap(a0, a1);
        if (b0 > b1) std::swap(b0, b1);
        const Interval a(a0, a1);
        const Interval b(b0, b1);
        std::uniform_real_distribution<double> ua(a0, a1);
        std::uniform_real_distribution<double> ub(b0, b1);
        double s0 = ua(rng), s1 = ua(rng), t0 = ub(rng), t1 = ub(rng);
        if (s0 > s1) std::swap(s0, s1);
        if (t0 > t1) std::swap(t0, t1);
        const Interval as(s0, s1);
        const Interval bs(t0, t1);
        REQUIRE((a + b).contains(as + bs));
        REQUIRE((a - b).contains(as - bs));
        REQUIRE((a * b).contains(as * bs));
        REQUIRE((a / b).contains(as / bs));
        REQUIRE(log(a).contains(log(as)));
        // point samples are enclosed
        REQUIRE((a * b).contains(s0 * t1));
        REQUIRE((a / b).contains(s1 / t0));
    }
}
