#include "minorant/sieve_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

namespace minorant::sieve {

namespace {

using boost::multiprecision::cpp_int;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Least d >= 0 with d^b >= base^a.
u64 ceil_root_power(u64 base, unsigned a, unsigned b)
{
    const cpp_int target = boost::multiprecision::pow(cpp_int(base), a);
    auto reaches = [&](u64 d) { return boost::multiprecision::pow(cpp_int(d), b) >= target; };
    auto d = static_cast<u64>(std::pow(static_cast<double>(base), static_cast<double>(a) / b));
    while (d > 0 && reaches(d - 1)) {
        --d;
    }
    while (!reaches(d)) {
        ++d;
    }
    return d;
}

std::vector<std::pair<u64, unsigned>> factor(const SieveContext& ctx, u64 m)
{
    std::vector<std::pair<u64, unsigned>> f;
    while (m > 1) {
        const u64 p = ctx.spf(m);
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    return f;
}

bool below(u128 v, u64 bound) { return v < static_cast<u128>(bound); }

}  // namespace

SieveContext::SieveContext(u64 x) : x_(x)
{
    if (x < kMinX || x > kMaxX) {
        throw std::invalid_argument("SieveContext: x must lie in [10^4, 10^8]");
    }
    const u64 big = 2 * x;
    z_int_ = ceil_root_power(x, 3, 19);
    t8_ = ceil_root_power(big, 8, 19);
    t11_ = ceil_root_power(big, 11, 19);
    t9_38_ = ceil_root_power(big, 9, 38);
    // (2x)^{11/19} is irrational, so the floor is t11 - 1; checked anyway.
    const bool exact = boost::multiprecision::pow(cpp_int(t11_), 19) == boost::multiprecision::pow(cpp_int(big), 11);
    t11_floor_ = exact ? t11_ : t11_ - 1;

    // Linear sieve.
    spf_.assign(big + 1, 0);
    std::vector<std::uint32_t> primes;
    for (u64 i = 2; i <= big; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (const auto p : primes) {
            if (p > spf_[i] || i * p > big) {
                break;
            }
            spf_[i * p] = p;
        }
    }
    if (big >= 1) {
        spf_[1] = 1;
    }
}

double SieveContext::z() const { return std::pow(static_cast<double>(x_), 3.0 / 19.0); }
double SieveContext::half() const { return std::sqrt(2.0 * static_cast<double>(x_)); }

std::uint32_t SieveContext::spf(u64 m) const
{
    if (m < 1 || m >= spf_.size()) {
        throw std::out_of_range("spf: argument outside [1, 2x]");
    }
    return spf_[m];
}

u64 SieveContext::ceil_power(unsigned a, unsigned b) const { return ceil_root_power(big_x(), a, b); }

bool SieveContext::type_ii_feasible(const std::vector<u64>& factors) const
{
    for (std::size_t mask = 1; mask < (std::size_t{1} << factors.size()); ++mask) {
        u128 prod = 1;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (mask >> i & 1U) {
                prod *= factors[i];
            }
        }
        if (prod >= t8_ && prod <= t11_floor_) {
            return true;
        }
    }
    return false;
}

int psi(const SieveContext& ctx, u64 m, double w)
{
    if (m == 0) {
        throw std::invalid_argument("psi: m must be positive");
    }
    return m == 1 || static_cast<double>(ctx.spf(m)) >= w ? 1 : 0;
}

int psi_int(const SieveContext& ctx, u64 m, u64 w)
{
    if (m == 0) {
        throw std::invalid_argument("psi: m must be positive");
    }
    return m == 1 || ctx.spf(m) >= w ? 1 : 0;
}

DecompositionRecord decompose(const SieveContext& ctx, u64 n)
{
    const u64 x = ctx.x();
    const u64 big = ctx.big_x();
    if (n <= x || n > big) {
        throw std::invalid_argument("decompose: n must lie in (x, 2x]");
    }
    const u64 z = ctx.z_int();
    DecompositionRecord r;
    r.n = n;
    r.is_prime = ctx.is_prime(n) ? 1 : 0;
    r.s1 = psi_int(ctx, n, z);

    const auto fac = factor(ctx, n);
    std::vector<u64> ps;  // distinct prime factors >= z, ascending
    for (const auto& [p, e] : fac) {
        if (p >= z) {
            ps.push_back(p);
        }
    }

    for (const u64 p1 : ps) {
        if (!below(static_cast<u128>(p1) * p1, big)) {
            continue;  // t1 >= 1/2
        }
        const u64 r1 = n / p1;
        if (p1 >= ctx.t8()) {
            r.s3 += psi_int(ctx, r1, p1);
            continue;
        }
        r.s2 += psi_int(ctx, r1, z);
        for (const u64 p2 : ps) {
            if (p2 >= p1 || !below(static_cast<u128>(p1) * p2 * p2, big)) {
                continue;
            }
            const u64 r2 = r1 / p2;
            const int v = psi_int(ctx, r2, p2);
            r.s4 += v;
            const u64 s = p1 * p2;
            if (s < ctx.t8()) {
                r.s_a += v;
                r.s_a1 += psi_int(ctx, r2, z);
                for (const u64 p3 : ps) {
                    if (p3 >= p2 || !below(static_cast<u128>(s) * p3 * p3, big)) {
                        continue;
                    }
                    const u64 r3 = r2 / p3;
                    r.s_a2 += psi_int(ctx, r3, z);
                    for (const u64 p4 : ps) {
                        if (p4 >= p3 || !below(static_cast<u128>(s) * p3 * p4 * p4, big)) {
                            continue;
                        }
                        const int w = psi_int(ctx, r3 / p4, p4);
                        r.s_a3 += w;
                        if (w != 0 && !ctx.type_ii_feasible({p1, p2, p3}) &&
                            !ctx.type_ii_feasible({p1, p2, p3, p4})) {
                            r.dropped_a3 += 1;
                        }
                    }
                }
            } else if (s < ctx.t11()) {
                r.s_strip += v;
            } else if (p2 < ctx.t9_38()) {
                r.s_b += v;
                r.s_b1 += psi_int(ctx, r2, z);
            } else {
                r.s_c += v;
            }
        }
    }

    // Role-reversed B chain. The prime p1 becomes the cofactor m = n/(beta p2 p3)
    // with beta any p3-rough divisor; its primality is expanded once more by
    // Buchstab's identity at the cut sqrt(2x/(beta p2 p3)).
    for (const u64 p2 : ps) {
        if (p2 >= ctx.t9_38()) {
            continue;
        }
        for (const u64 p3 : ps) {
            if (p3 >= p2) {
                break;
            }
            // Factorisation of n/(p2 p3) restricted to primes >= p3.
            std::vector<std::pair<u64, unsigned>> pool;
            for (const auto& [p, e] : fac) {
                const unsigned left = e - ((p == p2 || p == p3) ? 1 : 0);
                if (p >= p3 && left > 0) {
                    pool.emplace_back(p, left);
                }
            }
            const u64 q = n / (p2 * p3);
            std::vector<u64> betas{1};
            for (const auto& [p, e] : pool) {
                const std::size_t count = betas.size();
                for (std::size_t i = 0; i < count; ++i) {
                    u64 b = betas[i];
                    for (unsigned k = 0; k < e; ++k) {
                        b *= p;
                        betas.push_back(b);
                    }
                }
            }
            for (const u64 beta : betas) {
                const u64 m = q / beta;
                const bool in_b = m >= z && m < ctx.t8() && p2 < m && below(static_cast<u128>(m) * p2 * p2, big) &&
                                  m * p2 >= ctx.t11();
                if (!in_b || !below(static_cast<u128>(m) * p2 * p3 * p3, big)) {
                    continue;
                }
                r.s_b2 += psi_int(ctx, m, z);
                const u64 rest = beta * p2 * p3;
                for (const auto& [p4, e4] : factor(ctx, m)) {
                    if (p4 < z || !below(static_cast<u128>(rest) * p4 * p4, big)) {
                        continue;
                    }
                    const int w = psi_int(ctx, m / p4, p4);
                    r.s_b3 += w;
                    if (w != 0 && !ctx.type_ii_feasible({m, p2, p3}) && !ctx.type_ii_feasible({beta, p2, p3, p4})) {
                        r.dropped_b3 += 1;
                    }
                }
            }
        }
    }

    r.rho = r.is_prime - r.s_c - r.dropped_a3 - r.dropped_b3;
    return r;
}

namespace {

struct Scan {
    IdentityReport id;
    MinorantReport mi;
};

void accumulate(Scan& s, const SieveContext& ctx, const DecompositionRecord& r)
{
    auto& v = s.id.violations;
    const std::uint64_t before = v.total();
    v.buchstab += r.is_prime != r.s1 - r.s2 - r.s3 + r.s4;
    v.split += r.s4 != r.s_strip + r.s_a + r.s_b + r.s_c;
    v.a_chain += r.s_a != r.s_a1 - r.s_a2 + r.s_a3;
    v.b_chain += r.s_b != r.s_b1 - r.s_b2 + r.s_b3;
    if (v.total() != before && s.id.first_violation == 0) {
        s.id.first_violation = r.n;
    }
    ++s.id.checked;
    auto& t = s.id.totals;
    t.rho += r.rho;
    t.primes += r.is_prime;
    t.s1 += r.s1;
    t.s2 += r.s2;
    t.s3 += r.s3;
    t.s4 += r.s4;
    t.s_strip += r.s_strip;
    t.s_a += r.s_a;
    t.s_b += r.s_b;
    t.s_c += r.s_c;
    t.s_a3 += r.s_a3;
    t.s_b3 += r.s_b3;
    t.dropped_a3 += r.dropped_a3;
    t.dropped_b3 += r.dropped_b3;

    s.mi.minorant_violations += r.rho > r.is_prime;
    s.mi.above_one += r.rho > 1;
    s.mi.support_violations += ctx.spf(r.n) < ctx.z_int() && r.rho != 0;
    s.mi.sum_rho += r.rho;
    s.mi.primes += r.is_prime;
}

void merge(Scan& into, const Scan& from)
{
    auto& a = into.id;
    const auto& b = from.id;
    if (a.first_violation == 0) {
        a.first_violation = b.first_violation;
    }
    a.checked += b.checked;
    a.violations.buchstab += b.violations.buchstab;
    a.violations.split += b.violations.split;
    a.violations.a_chain += b.violations.a_chain;
    a.violations.b_chain += b.violations.b_chain;
    auto& t = a.totals;
    const auto& u = b.totals;
    t.rho += u.rho;
    t.primes += u.primes;
    t.s1 += u.s1;
    t.s2 += u.s2;
    t.s3 += u.s3;
    t.s4 += u.s4;
    t.s_strip += u.s_strip;
    t.s_a += u.s_a;
    t.s_b += u.s_b;
    t.s_c += u.s_c;
    t.s_a3 += u.s_a3;
    t.s_b3 += u.s_b3;
    t.dropped_a3 += u.dropped_a3;
    t.dropped_b3 += u.dropped_b3;
    into.mi.minorant_violations += from.mi.minorant_violations;
    into.mi.support_violations += from.mi.support_violations;
    into.mi.above_one += from.mi.above_one;
    into.mi.sum_rho += from.mi.sum_rho;
    into.mi.primes += from.mi.primes;
}

Scan scan(const SieveContext& ctx, unsigned workers)
{
    workers = std::max(1u, workers);
    const u64 lo = ctx.x() + 1;
    const u64 count = ctx.x();
    std::vector<Scan> parts(workers);
    auto body = [&](unsigned w) {
        const u64 a = lo + count * w / workers;
        const u64 b = lo + count * (w + 1) / workers;
        for (u64 n = a; n < b; ++n) {
            accumulate(parts[w], ctx, decompose(ctx, n));
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(body, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    Scan s;
    for (const auto& p : parts) {
        merge(s, p);
    }
    s.id.x = ctx.x();
    s.mi.x = ctx.x();
    const double xd = static_cast<double>(ctx.x());
    s.mi.ratio = static_cast<double>(s.mi.sum_rho) * std::log(1.5 * xd) / xd;
    return s;
}

double round12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

}  // namespace

IdentityReport verify_identities(const SieveContext& ctx, unsigned workers) { return scan(ctx, workers).id; }

MinorantReport verify_minorant(const SieveContext& ctx, unsigned workers) { return scan(ctx, workers).mi; }

HarnessReport run_harness(const SieveContext& ctx, unsigned workers)
{
    Scan s = scan(ctx, workers);
    HarnessReport h{s.id, s.mi, 0.0};
    const double xd = static_cast<double>(ctx.x());
    h.s_c_density = static_cast<double>(s.id.totals.s_c) * std::log(xd) / xd;
    return h;
}

std::string to_json(const HarnessReport& r)
{
    const auto& v = r.identities.violations;
    const auto& t = r.identities.totals;
    nlohmann::json j;
    j["x"] = r.identities.x;
    j["checked"] = r.identities.checked;
    j["violations"] = {
        {"identity", v.total()},
        {"identity_detail", {{"buchstab", v.buchstab}, {"split", v.split}, {"a_chain", v.a_chain}, {"b_chain", v.b_chain}}},
        {"minorant", r.minorant.minorant_violations},
        {"support", r.minorant.support_violations},
        {"rho_above_one", r.minorant.above_one},
    };
    j["totals"] = {
        {"rho", t.rho},           {"primes", t.primes}, {"S1", t.s1},       {"S2", t.s2},
        {"S3", t.s3},             {"S4", t.s4},         {"S_strip", t.s_strip}, {"S_A", t.s_a},
        {"S_B", t.s_b},           {"S_C", t.s_c},       {"S_A3", t.s_a3},   {"S_B3", t.s_b3},
        {"dropped_A3", t.dropped_a3}, {"dropped_B3", t.dropped_b3},
    };
    j["ratios"] = {
        {"rho_density", round12(r.minorant.ratio)},
        {"S_C_density", round12(r.s_c_density)},
    };
    j["passed"] = r.passed();
    return j.dump(2);
}

}  // namespace minorant::sieve
