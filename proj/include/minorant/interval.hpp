#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace minorant {

/// Closed real interval [lo, hi] with outward rounding.
///
/// Every arithmetic result is computed in round-to-nearest and then pushed
/// one ulp outward, which bounds the half-ulp error of a correctly rounded
/// operation. Transcendentals get a wider allowance (see log()).
class Interval {
public:
    constexpr Interval() = default;
    constexpr Interval(double v) : lo_(v), hi_(v) {}  // NOLINT: implicit by intent
    Interval(double lo, double hi) : lo_(lo), hi_(hi)
    {
        if (!(lo <= hi)) {
            throw std::invalid_argument("Interval: lo > hi or NaN bound");
        }
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double mid() const { return lo_ + 0.5 * (hi_ - lo_); }
    double width() const { return hi_ - lo_; }
    /// Largest absolute value attained.
    double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

    bool contains(double v) const { return lo_ <= v && v <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool is_finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }

    static Interval hull(const Interval& a, const Interval& b)
    {
        return {std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_)};
    }

    /// Enclosure of num/den.
    static Interval rational(std::int64_t num, std::int64_t den);

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

using Enclosure = Interval;

inline double round_down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
inline double round_up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

/// Intersection; throws if empty.
Interval intersect(const Interval& a, const Interval& b);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }
inline Interval& operator/=(Interval& a, const Interval& b) { return a = a / b; }

/// x*x, tighter than x*x when x straddles zero.
Interval sqr(const Interval& a);
Interval recip(const Interval& a);

/// Natural log, widened by 4 ulp plus a 1e-14 relative allowance for libm.
Interval log(const Interval& a);

std::string to_string(const Interval& a);

}  // namespace minorant
