#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace minorant::sieve {

/// Exact integer data for the window x < n <= 2x.
///
/// Exponents are t = log p / log(2x). A condition t (<, >=) a/b is decided by
/// comparing an integer against ceil((2x)^{a/b}); the lower sieve cut p >= z
/// uses z = x^{3/19} the same way. No floating point is involved in any
/// boundary decision.
class SieveContext {
public:
    explicit SieveContext(std::uint64_t x);

    std::uint64_t x() const { return x_; }
    std::uint64_t big_x() const { return 2 * x_; }
    double z() const;      // x^{3/19}
    double half() const;   // (2x)^{1/2}
    std::uint64_t z_int() const { return z_int_; }  // least integer >= z

    /// Smallest prime factor of m, 2 <= m <= 2x; spf(1) = 1.
    std::uint32_t spf(std::uint64_t m) const;
    bool is_prime(std::uint64_t m) const { return m >= 2 && spf(m) == m; }

    /// Least integer d with d^b >= (2x)^a, i.e. log d / log 2x >= a/b.
    std::uint64_t ceil_power(unsigned a, unsigned b) const;

    // Cached thresholds.
    std::uint64_t t8() const { return t8_; }      // ceil((2x)^{8/19})
    std::uint64_t t11() const { return t11_; }    // ceil((2x)^{11/19})
    std::uint64_t t9_38() const { return t9_38_; }  // ceil((2x)^{9/38})

    /// True iff some nonempty subset product P has (2x)^{8/19} <= P <= (2x)^{11/19}.
    bool type_ii_feasible(const std::vector<std::uint64_t>& factors) const;

private:
    std::uint64_t x_;
    std::uint64_t z_int_ = 0;
    std::uint64_t t8_ = 0;
    std::uint64_t t11_ = 0;
    std::uint64_t t9_38_ = 0;
    std::uint64_t t11_floor_ = 0;  // largest P with P^19 <= (2x)^11
    std::vector<std::uint32_t> spf_;
};

/// 1 iff m has no prime factor < w (m = 1 qualifies).
int psi(const SieveContext& ctx, std::uint64_t m, double w);
/// Same with an exact integer cut: no prime factor < w.
int psi_int(const SieveContext& ctx, std::uint64_t m, std::uint64_t w);

struct DecompositionRecord {
    std::uint64_t n = 0;
    std::int64_t is_prime = 0;
    std::int64_t s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::int64_t s_strip = 0, s_a = 0, s_b = 0, s_c = 0;
    std::int64_t s_a1 = 0, s_a2 = 0, s_a3 = 0;
    std::int64_t s_b1 = 0, s_b2 = 0, s_b3 = 0;
    std::int64_t dropped_a3 = 0, dropped_b3 = 0;
    std::int64_t rho = 0;
};

/// Throws std::invalid_argument unless x < n <= 2x.
DecompositionRecord decompose(const SieveContext& ctx, std::uint64_t n);

struct IdentityViolations {
    std::uint64_t buchstab = 0;   // 1_p = S1 - S2 - S3 + S4
    std::uint64_t split = 0;      // S4 = S_strip + S_A + S_B + S_C
    std::uint64_t a_chain = 0;    // S_A = S_A1 - S_A2 + S_A3
    std::uint64_t b_chain = 0;    // S_B = S_B1 - S_B2 + S_B3
    std::uint64_t total() const { return buchstab + split + a_chain + b_chain; }
};

struct Totals {
    std::int64_t rho = 0, primes = 0;
    std::int64_t s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::int64_t s_strip = 0, s_a = 0, s_b = 0, s_c = 0;
    std::int64_t s_a3 = 0, s_b3 = 0;
    std::int64_t dropped_a3 = 0, dropped_b3 = 0;
};

struct IdentityReport {
    std::uint64_t x = 0;
    std::uint64_t checked = 0;
    IdentityViolations violations;
    std::uint64_t first_violation = 0;  // 0 when none
    Totals totals;
};

struct MinorantReport {
    std::uint64_t x = 0;
    std::uint64_t minorant_violations = 0;  // rho(n) > 1_p(n)
    std::uint64_t support_violations = 0;   // spf(n) < z but rho(n) != 0
    std::uint64_t above_one = 0;            // rho(n) > 1
    std::int64_t sum_rho = 0;
    std::int64_t primes = 0;
    double ratio = 0.0;  // sum_rho * log(1.5 x) / x
};

IdentityReport verify_identities(const SieveContext& ctx, unsigned workers = 1);
MinorantReport verify_minorant(const SieveContext& ctx, unsigned workers = 1);

struct HarnessReport {
    IdentityReport identities;
    MinorantReport minorant;
    double s_c_density = 0.0;  // sum S_C * log x / x
    bool passed() const
    {
        return identities.violations.total() == 0 && minorant.minorant_violations == 0 &&
               minorant.support_violations == 0 && minorant.above_one == 0;
    }
};

HarnessReport run_harness(const SieveContext& ctx, unsigned workers = 1);

/// {x, violations: {identity, minorant, support}, totals: {...}, ratios: {...}}
std::string to_json(const HarnessReport& r);

inline constexpr std::uint64_t kMinX = 10'000;
inline constexpr std::uint64_t kMaxX = 100'000'000;

}  // namespace minorant::sieve
