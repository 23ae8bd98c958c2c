#include <array>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "minorant/quadrature.hpp"

using namespace minorant;
using namespace minorant::quadrature;
using regions::LinearConstraint;
using regions::Rational;
using regions::Relation;

namespace {

struct One {
    template <class T, std::size_t D>
    T operator()(const std::array<T, D>& t) const
    {
        return t[0] * 0.0 + 1.0;
    }
};

struct Product {
    template <class T>
    T operator()(const std::array<T, 2>& t) const
    {
        return t[0] * t[1] + 1.0;
    }
};

struct CKernel {
    template <class T>
    T operator()(const std::array<T, 2>& t) const
    {
        return recip(t[0] * sqr(t[1]));
    }
};

RegionPredicate everything2()
{
    return RegionPredicate::leaf(LinearConstraint({Rational{1, 1}, Rational{0, 1}}, Relation::GreaterEqual, Rational{-1, 1}));
}

RegionPredicate simplex()
{
    return RegionPredicate::leaf(LinearConstraint({Rational{1, 1}, Rational{1, 1}}, Relation::LessEqual, Rational{1, 1}));
}

struct Inv {
    template <class T>
    T operator()(const std::array<T, 2>& t) const
    {
        return recip(t[0]);
    }
};

const Box kUnit{Interval(0.0, 1.0), Interval(0.0, 1.0)};

// int_C dt/(t1 t2^2), inner integral in closed form, outer by 30-digit quadrature
constexpr double kKernelC = 0.30792817059935506;

}  // namespace

TEST_CASE("constant over the whole box is exact")
{
    const auto f = make_integrand<2>(One{});
    const auto e = integrate_rigorous(f, everything2(), kUnit, {1, 1e-9, 1});
    CHECK(e.lower <= 1.0);
    CHECK(e.upper >= 1.0);
    CHECK(e.upper - e.lower < 1e-14);
    CHECK(e.mode == Mode::Rigorous);
}

TEST_CASE("simplex area converges to 1/2")
{
    const auto f = make_integrand<2>(One{});
    const auto e = integrate_rigorous(f, simplex(), kUnit, {100000, 1e-10, 1});
    CHECK(e.lower <= 0.5);
    CHECK(e.upper >= 0.5);
    CHECK(e.gap() <= 1e-10);
}

TEST_CASE("simplex area without polygon clipping (4-D path) still brackets 1/2")
{
    const RegionPredicate r = RegionPredicate::leaf(LinearConstraint(
        {Rational{1, 1}, Rational{1, 1}, Rational{0, 1}, Rational{0, 1}}, Relation::LessEqual, Rational{1, 1}));
    const auto f = make_integrand<4>(One{});
    const std::array<double, 4> lo{0, 0, 0, 0}, hi{1, 1, 1, 1};
    // Widest-side bisection also splits the idle axes t3, t4; measured gap is 0.092.
    const auto e = integrate_rigorous(f, r, Box(lo, hi), {200000, 1e-3, 1});
    CHECK(e.lower <= 0.5);
    CHECK(e.upper >= 0.5);
    CHECK(e.gap() < 0.1);
}

TEST_CASE("kernel over region C brackets the reference")
{
    const auto f = make_integrand<2>(CKernel{});
    const Box b{Interval(11.0 / 38 - 1e-12, 8.0 / 19 + 1e-12), Interval(9.0 / 38 - 1e-12, 8.0 / 19 + 1e-12)};
    const auto e = integrate_rigorous(f, regions::region_c(), b, {1'000'000, 1e-7, 1});
    CHECK(e.lower <= kKernelC);
    CHECK(e.upper >= kKernelC);
    CHECK(e.gap() <= 1e-7);
    CHECK_FALSE(e.budget_exhausted);
    REQUIRE(e.support.has_value());
    const auto mc = integrate_mc(f, regions::region_c(), *e.support, 200000, 9, 1);
    CHECK(std::fabs(mc.lower - kKernelC) < 4 * mc.std_error);
}

TEST_CASE("Monte Carlo examples")
{
    const auto f = make_integrand<2>(One{});
    const auto full = integrate_mc(f, everything2(), kUnit, 10000, 1, 1);
    CHECK(full.lower == 1.0);
    CHECK(full.std_error == 0.0);
    const auto tri = integrate_mc(f, simplex(), kUnit, 1'000'000, 2, 1);
    CHECK(std::fabs(tri.lower - 0.5) < 3 * tri.std_error);
    CHECK(tri.mode == Mode::MonteCarlo);
    CHECK_THROWS_AS(integrate_mc(f, simplex(), kUnit, 100, 1, 1), std::invalid_argument);
}

TEST_CASE("Monte Carlo with no hits is degenerate")
{
    const auto f = make_integrand<2>(One{});
    const RegionPredicate none = RegionPredicate::leaf(
        LinearConstraint({Rational{1, 1}, Rational{1, 1}}, Relation::Greater, Rational{3, 1}));
    const auto e = integrate_mc(f, none, kUnit, 10000, 1, 1);
    CHECK(e.degenerate);
    CHECK(e.lower == 0.0);
    CHECK(e.std_error == 0.0);
}

TEST_CASE("determinism: rigorous bounds independent of workers, MC fixed by (seed, workers)")
{
    const auto f = make_integrand<2>(CKernel{});
    const Box b{Interval(11.0 / 38, 8.0 / 19), Interval(9.0 / 38, 8.0 / 19)};
    const auto e1 = integrate_rigorous(f, regions::region_c(), b, {50000, 1e-9, 1});
    const auto e3 = integrate_rigorous(f, regions::region_c(), b, {50000, 1e-9, 3});
    CHECK(e1.lower == e3.lower);
    CHECK(e1.upper == e3.upper);
    CHECK(e1.boxes_used == e3.boxes_used);
    const auto m1 = integrate_mc(f, regions::region_c(), b, 50000, 42, 2);
    const auto m2 = integrate_mc(f, regions::region_c(), b, 50000, 42, 2);
    CHECK(m1.lower == m2.lower);
    CHECK(m1.std_error == m2.std_error);
}

TEST_CASE("property: refinement never raises the upper bound or widens the gap")
{
    // Range-only evaluator so that child enclosures nest inside the parent's.
    // Each clipped cell carries ~1e-12 of area slack, hence the tolerance.
    constexpr double kSlack = 1e-10;
    const auto f = make_integrand<2>(Product{}, false);
    const auto r = simplex();
    RigorousIntegrator it(f, r, kUnit, 1);
    auto prev = it.run(1, 1e-12);
    for (std::size_t budget = 2; budget <= 1 << 14; budget *= 2) {
        const auto e = it.run(budget, 1e-12);
        REQUIRE(e.upper <= prev.upper + kSlack);
        REQUIRE(e.gap() <= prev.gap() + kSlack);
        REQUIRE(e.lower >= prev.lower - kSlack);
        prev = e;
    }
    // exact value of int_{x+y<=1} (xy + 1) = 1/24 + 1/2
    CHECK(prev.lower <= 1.0 / 24 + 0.5);
    CHECK(prev.upper >= 1.0 / 24 + 0.5);
}

TEST_CASE("property: doubling the budget never widens the gap (Taylor evaluator)")
{
    const auto f = make_integrand<2>(CKernel{});
    const Box b{Interval(11.0 / 38, 8.0 / 19), Interval(9.0 / 38, 8.0 / 19)};
    double prev_gap = INFINITY;
    for (std::size_t budget = 1000; budget <= 64000; budget *= 2) {
        const auto e = integrate_rigorous(f, regions::region_c(), b, {budget, 1e-12, 1});
        REQUIRE(e.gap() <= prev_gap);
        prev_gap = e.gap();
    }
}

TEST_CASE("budget exhaustion is flagged and bounds stay valid")
{
    const auto f = make_integrand<2>(CKernel{});
    const Box b{Interval(11.0 / 38, 8.0 / 19), Interval(9.0 / 38, 8.0 / 19)};
    const auto e = integrate_rigorous(f, regions::region_c(), b, {100, 1e-12, 1});
    CHECK(e.budget_exhausted);
    CHECK(e.lower <= kKernelC);
    CHECK(e.upper >= kKernelC);
}

TEST_CASE("singular enclosure is reported")
{
    const auto f = make_integrand<2>(Inv{});
    CHECK_THROWS_AS(integrate_rigorous(f, everything2(), kUnit, {10, 1e-3, 1}), std::domain_error);
}

TEST_CASE("clipped_area")
{
    const std::vector<regions::HalfSpace> diag{{{1.0, 1.0}, 1.0}};
    CHECK(clipped_area(kUnit, diag) == doctest::Approx(0.5));
    const std::vector<regions::HalfSpace> none{{{1.0, 0.0}, -1.0}};
    CHECK(clipped_area(kUnit, none) == 0.0);
    const std::vector<regions::HalfSpace> two{{{1.0, 0.0}, 0.5}, {{0.0, -1.0}, -0.25}};
    CHECK(clipped_area(kUnit, two) == doctest::Approx(0.375));
}
