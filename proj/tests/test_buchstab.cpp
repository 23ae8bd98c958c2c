#include <cmath>
#include <sstream>

#include "doctest.h"
#include "minorant/buchstab.hpp"

using namespace minorant;
using namespace minorant::buchstab;

namespace {

const BuchstabTable& table()
{
    static const BuchstabTable t = build_table();
    return t;
}

// Reference values from a 30-digit quadrature, frozen.
constexpr double kLogTerm35 = 0.013317226773258803;     // (1/3.5) int_2^2.5 log(t-1)/t dt
constexpr double kBranch25 = 0.56218604324326575;       // (1+log 1.5)/2.5
constexpr double kBranch29 = 0.56615651247323958;       // (1+log 1.9)/2.9
constexpr double kBranchNear4 = 0.56145824140610670;    // branch expression at 4 - 1e-9

}  // namespace

TEST_CASE("log_integral_term examples")
{
    const Enclosure at3 = log_integral_term(3.0);
    CHECK(at3.contains(0.0));
    CHECK(at3.width() <= 1e-8);
    const Enclosure at35 = log_integral_term(3.5);
    CHECK(at35.contains(kLogTerm35));
    CHECK(at35.width() <= 1e-8);
    const Enclosure br = branch34_expression(4.0 - 1e-9);
    CHECK(br.contains(kBranchNear4));
    CHECK(br.lo() >= kLowerFloor34);
    CHECK(br.hi() <= kUpperCap34);
    CHECK_THROWS_AS(log_integral_term(2.99), std::domain_error);
    CHECK_THROWS_AS(log_integral_term(4.0), std::domain_error);
}

TEST_CASE("omega_bound examples")
{
    CHECK(omega_bound(BoundKind::Upper, 1.6).contains(0.625));
    const Enclosure b25 = omega_bound(BoundKind::Upper, 2.5);
    CHECK(b25.contains(kBranch25));
    CHECK(b25.width() <= 1e-8);
    CHECK(omega_bound(BoundKind::Lower, 7.0).contains(0.5612));
    CHECK(omega_bound(BoundKind::Upper, 7.0).contains(0.5617));
    CHECK(omega_bound(BoundKind::Lower, 7.0).width() <= 1e-8);
    CHECK_THROWS_AS(omega_bound(BoundKind::Upper, 0.99), std::domain_error);
}

TEST_CASE("build_table examples")
{
    const auto& t = table();
    CHECK(omega_enclosure(t, 2.0).contains(0.5));
    CHECK(omega_enclosure(t, 2.5).contains(kBranch25));
    for (double u : {4.0, 5.0, 6.0}) {
        const Enclosure w = omega_enclosure(t, u);
        CHECK(w.lo() >= kLowerPlateau - 1e-7);
        CHECK(w.hi() <= kUpperPlateau + 1e-7);
    }
    CHECK(t.max_width() <= 1e-7);
    CHECK_THROWS_AS(build_table(3.0), std::invalid_argument);
    CHECK_THROWS_AS(build_table(8.0, 2e-3), std::invalid_argument);
    CHECK_THROWS_AS(build_table(8.0, 1.0 / 1500.5), std::invalid_argument);
    // tolerance unreachable at a coarse step
    CHECK_THROWS_AS(build_table(8.0, 1e-3, 1e-12), std::runtime_error);
}

TEST_CASE("omega_enclosure examples")
{
    const auto& t = table();
    CHECK(omega_enclosure(t, 1.5).contains(2.0 / 3.0));
    CHECK(omega_enclosure(t, 2.9).contains(kBranch29));
    const auto e = omega_enclosure(t, 3.5);
    CHECK(omega_bound(BoundKind::Lower, 3.5).lo() <= e.hi());
    CHECK(e.lo() <= omega_bound(BoundKind::Upper, 3.5).hi());
    CHECK_THROWS_AS(omega_enclosure(t, 0.5), std::domain_error);
    CHECK_THROWS_AS(omega_enclosure(t, 8.5), std::domain_error);
}

TEST_CASE("property: table value sandwiched by the piecewise bounds")
{
    const auto& t = table();
    for (double u = 1.0; u <= 8.0; u += 0.0037) {
        const auto e = omega_enclosure(t, u);
        REQUIRE(omega_bound(BoundKind::Lower, u).lo() <= e.hi());
        REQUIRE(e.lo() <= omega_bound(BoundKind::Upper, u).hi());
    }
}

TEST_CASE("property: lower and upper bounds coincide below 3")
{
    for (double u = 1.0; u < 3.0; u += 0.0113) {
        REQUIRE(omega_bound(BoundKind::Lower, u) == omega_bound(BoundKind::Upper, u));
    }
    for (double u = 3.0; u < 8.0; u += 0.0113) {
        REQUIRE(omega_bound(BoundKind::Lower, u).lo() <= omega_bound(BoundKind::Upper, u).hi());
    }
}

TEST_CASE("property: u * omega(u) is nondecreasing on the grid")
{
    const auto& t = table();
    const double tol = 1e-7;
    double prev = -1.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double v = t.abscissa(k).mid() * t.at(k).mid();
        REQUIRE(v >= prev - 2 * tol);
        prev = v;
    }
}

TEST_CASE("property: halving the step does not widen enclosures")
{
    const BuchstabTable coarse = build_table(8.0, 2e-4, 1e-6);
    const BuchstabTable fine = build_table(8.0, 1e-4, 1e-6);
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        const Enclosure& c = coarse.at(k);
        const Enclosure& f = fine.at(2 * k);
        REQUIRE(f.width() <= c.width() + 1e-15);
        // both contain the true value, so they overlap
        REQUIRE(f.lo() <= c.hi());
        REQUIRE(c.lo() <= f.hi());
    }
}

TEST_CASE("range enclosures contain point values")
{
    const auto& t = table();
    for (double a = 1.0; a < 7.5; a += 0.173) {
        const Interval box(a, a + 0.31);
        const Enclosure r = omega_range(t, box);
        const Enclosure lo = omega_bound_range(BoundKind::Lower, box);
        const Enclosure up = omega_bound_range(BoundKind::Upper, box);
        for (double u = a; u <= a + 0.31; u += 0.01) {
            REQUIRE(r.contains(omega_enclosure(t, u).mid()));
            REQUIRE(lo.contains(omega_bound(BoundKind::Lower, u).mid()));
            REQUIRE(up.contains(omega_bound(BoundKind::Upper, u).mid()));
        }
    }
    CHECK(omega_bound_range(BoundKind::Upper, Interval(0.2, 0.9)) == Interval(0.0));
    CHECK(omega_range(t, Interval(0.5, 0.8)) == Interval(0.0));
}

TEST_CASE("constants: branch range and plateau")
{
    const Enclosure r = branch34_range();
    CHECK(r.lo() >= kLowerFloor34);
    CHECK(r.hi() <= kUpperCap34);
    const Enclosure p = table_hull(table(), 4.0, 8.0);
    CHECK(p.lo() >= kLowerPlateau - 1e-4);
    CHECK(p.hi() <= kUpperPlateau + 1e-4);
    CHECK(max_deviation_23(table()) <= 1e-6);
}

TEST_CASE("jets on the 1/u branch")
{
    const Jet<1> u = Jet<1>::variable(0, Interval(1.5, 1.6));
    const Jet<1> w = omega_jet(table(), u);
    CHECK(w.v.contains(1.0 / 1.55));
    CHECK_THROWS_AS(omega_jet(table(), Jet<1>::variable(0, Interval(1.9, 2.1))), JetUnavailable);
    CHECK_THROWS_AS(omega_bound_jet(BoundKind::Upper, Jet<1>::variable(0, Interval(0.9, 1.1))), JetUnavailable);
}

TEST_CASE("csv dump")
{
    const BuchstabTable t = build_table(4.0, 1e-3, 1e-6);
    std::ostringstream os;
    write_csv(t, os);
    const std::string s = os.str();
    CHECK(s.rfind("u,lo,hi\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) == t.size() + 1);
}
