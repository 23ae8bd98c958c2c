#include "minorant/interval.hpp"

#include <array>
#include <cstdio>

namespace minorant {

namespace {

constexpr double kLibmRelative = 1e-14;

Interval outward(double lo, double hi)
{
    return {round_down(lo), round_up(hi)};
}

// TwoSum: s + e == a + b exactly, so only an inexact sum needs widening.
double add_down(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return std::isfinite(s) && e >= 0.0 ? s : round_down(s);
}

double add_up(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return std::isfinite(s) && e <= 0.0 ? s : round_up(s);
}

}  // namespace

Interval Interval::rational(std::int64_t num, std::int64_t den)
{
    if (den == 0) {
        throw std::invalid_argument("Interval::rational: zero denominator");
    }
    const double q = static_cast<double>(num) / static_cast<double>(den);
    // Integers up to 2^53 convert exactly; fma gives the residual without rounding.
    if (std::fma(q, static_cast<double>(den), -static_cast<double>(num)) == 0.0 && std::fabs(q) < 0x1p52) {
        return Interval(q);
    }
    return outward(q, q);
}

Interval intersect(const Interval& a, const Interval& b)
{
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi) {
        throw std::domain_error("intersect: disjoint intervals " + to_string(a) + " and " + to_string(b));
    }
    return {lo, hi};
}

Interval operator+(const Interval& a, const Interval& b)
{
    return {add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi())};
}

Interval operator-(const Interval& a, const Interval& b)
{
    return {add_down(a.lo(), -b.hi()), add_up(a.hi(), -b.lo())};
}

Interval operator-(const Interval& a)
{
    return {-a.hi(), -a.lo()};
}

Interval operator*(const Interval& a, const Interval& b)
{
    const std::array<double, 4> p{a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
    const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    return outward(*mn, *mx);
}

Interval recip(const Interval& a)
{
    if (a.lo() <= 0.0 && a.hi() >= 0.0) {
        throw std::domain_error("recip: interval contains zero " + to_string(a));
    }
    return outward(1.0 / a.hi(), 1.0 / a.lo());
}

Interval operator/(const Interval& a, const Interval& b)
{
    if (b.lo() <= 0.0 && b.hi() >= 0.0) {
        throw std::domain_error("division by interval containing zero " + to_string(b));
    }
    const std::array<double, 4> q{a.lo() / b.lo(), a.lo() / b.hi(), a.hi() / b.lo(), a.hi() / b.hi()};
    const auto [mn, mx] = std::minmax_element(q.begin(), q.end());
    return outward(*mn, *mx);
}

Interval sqr(const Interval& a)
{
    const double l = a.lo() * a.lo();
    const double h = a.hi() * a.hi();
    if (a.lo() >= 0.0) {
        return outward(l, h);
    }
    if (a.hi() <= 0.0) {
        return outward(h, l);
    }
    return {0.0, round_up(std::max(l, h))};
}

Interval log(const Interval& a)
{
    if (a.lo() <= 0.0) {
        throw std::domain_error("log: nonpositive argument " + to_string(a));
    }
    auto widen_down = [](double v) {
        v -= std::fabs(v) * kLibmRelative;
        for (int i = 0; i < 4; ++i) {
            v = round_down(v);
        }
        return v;
    };
    auto widen_up = [](double v) {
        v += std::fabs(v) * kLibmRelative;
        for (int i = 0; i < 4; ++i) {
            v = round_up(v);
        }
        return v;
    };
    return {widen_down(std::log(a.lo())), widen_up(std::log(a.hi()))};
}

std::string to_string(const Interval& a)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", a.lo(), a.hi());
    return buf;
}

}  // namespace minorant
