#include <cmath>
#include <random>

#include "doctest.h"
#include "minorant/taylor.hpp"

using minorant::Interval;
using J = minorant::Jet<2>;

namespace {

// f(x, y) = log(x) / (x y^2) + x y
template <class T>
T f(const T& x, const T& y)
{
    return log(x) / (x * sqr(y)) + x * y;
}

}  // namespace

TEST_CASE("jet at a point matches analytic derivatives")
{
    const double x = 1.7;
    const double y = 0.6;
    const J r = f(J::variable(0, Interval(x)), J::variable(1, Interval(y)));
    const double lx = std::log(x);
    CHECK(r.v.contains(lx / (x * y * y) + x * y));
    const double fx = (1 - lx) / (x * x * y * y) + y;
    const double fy = -2 * lx / (x * y * y * y) + x;
    const double fxx = (2 * lx - 3) / (x * x * x * y * y);
    const double fxy = -2 * (1 - lx) / (x * x * y * y * y) + 1;
    const double fyy = 6 * lx / (x * y * y * y * y);
    CHECK(r.g[0].mid() == doctest::Approx(fx).epsilon(1e-12));
    CHECK(r.g[1].mid() == doctest::Approx(fy).epsilon(1e-12));
    CHECK(r.hess(0, 0).mid() == doctest::Approx(fxx).epsilon(1e-12));
    CHECK(r.hess(0, 1).mid() == doctest::Approx(fxy).epsilon(1e-12));
    CHECK(r.hess(1, 1).mid() == doctest::Approx(fyy).epsilon(1e-12));
    CHECK(r.hess(1, 0) == r.hess(0, 1));
}

TEST_CASE("property: box jets enclose derivatives at sampled points")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double x0 = 1.1 + u(rng), y0 = 0.3 + u(rng);
        const double w = 0.05 * u(rng);
        const J box = f(J::variable(0, Interval(x0, x0 + w)), J::variable(1, Interval(y0, y0 + w)));
        const double x = x0 + w * u(rng), y = y0 + w * u(rng);
        const J pt = f(J::variable(0, Interval(x)), J::variable(1, Interval(y)));
        REQUIRE(box.v.contains(pt.v.mid()));
        for (int k = 0; k < 2; ++k) {
            REQUIRE(box.g[k].contains(pt.g[k].mid()));
        }
        for (std::size_t k = 0; k < J::kHess; ++k) {
            REQUIRE(box.h[k].contains(pt.h[k].mid()));
        }
    }
}

TEST_CASE("mixed jet and scalar operations")
{
    const J x = J::variable(0, Interval(2.0));
    const J r = 1.0 - x / 4.0;
    CHECK(r.v.contains(0.5));
    CHECK(r.g[0].contains(-0.25));
    const J q = recip(x);
    CHECK(q.hess(0, 0).contains(0.25));  // 2/x^3
}
