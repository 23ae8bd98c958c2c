#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "minorant/sieve_harness.hpp"

using namespace minorant::sieve;

namespace {

const SieveContext& ctx1e5()
{
    static const SieveContext c(100'000);
    return c;
}

}  // namespace

TEST_CASE("smallest prime factors")
{
    const auto& c = ctx1e5();
    CHECK(c.spf(4) == 2);
    CHECK(c.spf(77) == 7);
    CHECK(c.spf(97) == 97);
    CHECK(c.spf(1) == 1);
    CHECK(c.spf(199'999) == 199'999);  // prime
    CHECK(c.is_prime(100'003));
    CHECK_FALSE(c.is_prime(100'001));  // 11 * 9091
}

TEST_CASE("thresholds")
{
    const auto& c = ctx1e5();
    CHECK(c.z() == doctest::Approx(6.1584821106602637).epsilon(1e-14));
    CHECK(c.z_int() == 7);
    CHECK(c.t8() == 171);
    CHECK(c.t11() == 1173);
    CHECK(c.t9_38() == 19);
    CHECK(c.half() == doctest::Approx(std::sqrt(200'000.0)));
    // ceil_power is the least d with d^b >= (2x)^a
    CHECK(c.ceil_power(1, 2) == 448);
    CHECK(c.ceil_power(1, 1) == 200'000);
}

TEST_CASE("psi")
{
    const auto& c = ctx1e5();
    CHECK(psi(c, 1, 100.0) == 1);
    CHECK(psi(c, 49, 6.16) == 1);
    CHECK(psi(c, 50, 6.16) == 0);
    CHECK(psi_int(c, 77, 7) == 1);
    CHECK(psi_int(c, 77, 8) == 0);
    CHECK_THROWS_AS(psi(c, 0, 2.0), std::invalid_argument);
}

TEST_CASE("type II feasibility over integer groupings")
{
    const auto& c = ctx1e5();
    CHECK(c.type_ii_feasible({200, 3}));  // 200 in [171, 1173]
    CHECK(c.type_ii_feasible({13, 17}));  // 221
    CHECK_FALSE(c.type_ii_feasible({11, 13}));  // 11, 13, 143 all below 171
    CHECK_FALSE(c.type_ii_feasible({1200}));
}

TEST_CASE("records for a prime and an even number")
{
    const auto& c = ctx1e5();
    const auto p = decompose(c, 100'003);
    CHECK(p.is_prime == 1);
    CHECK(p.s1 == 1);
    CHECK(p.s2 == 0);
    CHECK(p.s3 == 0);
    CHECK(p.s4 == 0);
    CHECK(p.rho == 1);

    const auto e = decompose(c, 100'002);
    CHECK(e.is_prime == 0);
    CHECK(e.s1 == 0);
    CHECK(e.rho == 0);

    CHECK_THROWS_AS(decompose(c, 100'000), std::invalid_argument);
    CHECK_THROWS_AS(decompose(c, 200'001), std::invalid_argument);
}

TEST_CASE("property: per-n identities and support, pointwise")
{
    const SieveContext c(20'000);
    for (std::uint64_t n = 20'001; n <= 40'000; ++n) {
        const auto r = decompose(c, n);
        REQUIRE(r.is_prime == r.s1 - r.s2 - r.s3 + r.s4);
        REQUIRE(r.s4 == r.s_strip + r.s_a + r.s_b + r.s_c);
        REQUIRE(r.s_a == r.s_a1 - r.s_a2 + r.s_a3);
        REQUIRE(r.s_b == r.s_b1 - r.s_b2 + r.s_b3);
        REQUIRE(r.rho <= r.is_prime);
        if (c.spf(n) < c.z_int()) {
            REQUIRE(r.rho == 0);
        }
        REQUIRE(r.dropped_a3 <= r.s_a3);
        REQUIRE(r.dropped_b3 <= r.s_b3);
    }
}

TEST_CASE("harness at 1e5 and 2e5")
{
    for (std::uint64_t x : {100'000ULL, 200'000ULL}) {
        const SieveContext c(x);
        const auto h = run_harness(c, 2);
        CHECK(h.identities.checked == x);
        CHECK(h.identities.violations.total() == 0);
        CHECK(h.minorant.minorant_violations == 0);
        CHECK(h.minorant.support_violations == 0);
        CHECK(h.minorant.above_one == 0);
        CHECK(h.passed());
        CHECK(h.minorant.ratio > 0.0);
        CHECK(h.minorant.ratio <= 1.0);
    }
    // prime counts in (x, 2x]
    CHECK(verify_minorant(SieveContext(100'000)).primes == 8392);
    CHECK(verify_minorant(SieveContext(200'000)).primes == 15876);
}

TEST_CASE("S_C total matches an exact-integer enumeration")
{
    // Python enumeration over (p1, p2, m) with the boundary tests done on
    // integer powers: 158 at x = 1e4, 1266 at x = 1e5.
    CHECK(verify_identities(SieveContext(10'000)).totals.s_c == 158);
    CHECK(verify_identities(SieveContext(100'000)).totals.s_c == 1266);
    CHECK(verify_identities(SieveContext(10'000)).totals.primes == 1033);
}

TEST_CASE("results do not depend on the worker count")
{
    const SieveContext c(50'000);
    const auto a = run_harness(c, 1);
    const auto b = run_harness(c, 4);
    CHECK(to_json(a) == to_json(b));
}

TEST_CASE("range checks")
{
    CHECK_THROWS_AS(SieveContext(9'999), std::invalid_argument);
    CHECK_THROWS_AS(SieveContext(100'000'001), std::invalid_argument);
}

TEST_CASE("json report carries the documented keys")
{
    const auto s = to_json(run_harness(SieveContext(10'000)));
    for (const char* k : {"\"x\"", "\"violations\"", "\"identity\"", "\"minorant\"", "\"support\"", "\"totals\"",
                          "\"ratios\"", "\"passed\""}) {
        CHECK(s.find(k) != std::string::npos);
    }
}
