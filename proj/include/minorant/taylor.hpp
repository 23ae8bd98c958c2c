#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "minorant/interval.hpp"

namespace minorant {

/// Second-order forward-mode jet with interval coefficients.
///
/// Evaluating a function on jets seeded with a whole box gives enclosures of
/// the value, gradient and Hessian over that box. Hessian entries are stored
/// upper-triangular, row-major.
template <std::size_t D>
struct Jet {
    static constexpr std::size_t kHess = D * (D + 1) / 2;

    Interval v;
    std::array<Interval, D> g{};
    std::array<Interval, kHess> h{};

    static constexpr std::size_t idx(std::size_t i, std::size_t j)
    {
        if (i > j) {
            std::swap(i, j);
        }
        return i * D - i * (i - 1) / 2 + (j - i);
    }

    static Jet variable(std::size_t i, const Interval& value)
    {
        Jet r;
        r.v = value;
        r.g[i] = Interval(1.0);
        return r;
    }

    static Jet constant(const Interval& value)
    {
        Jet r;
        r.v = value;
        return r;
    }

    const Interval& hess(std::size_t i, std::size_t j) const { return h[idx(i, j)]; }
};

/// Chain rule for a scalar function with f(v), f'(v), f''(v) enclosures.
template <std::size_t D>
Jet<D> apply_unary(const Jet<D>& a, const Interval& f0, const Interval& f1, const Interval& f2)
{
    Jet<D> r;
    r.v = f0;
    for (std::size_t i = 0; i < D; ++i) {
        r.g[i] = f1 * a.g[i];
    }
    for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t j = i; j < D; ++j) {
            const auto k = Jet<D>::idx(i, j);
            r.h[k] = f1 * a.h[k] + f2 * (a.g[i] * a.g[j]);
        }
    }
    return r;
}

template <std::size_t D>
Jet<D> operator+(const Jet<D>& a, const Jet<D>& b)
{
    Jet<D> r;
    r.v = a.v + b.v;
    for (std::size_t i = 0; i < D; ++i) {
        r.g[i] = a.g[i] + b.g[i];
    }
    for (std::size_t k = 0; k < Jet<D>::kHess; ++k) {
        r.h[k] = a.h[k] + b.h[k];
    }
    return r;
}

template <std::size_t D>
Jet<D> operator-(const Jet<D>& a)
{
    Jet<D> r;
    r.v = -a.v;
    for (std::size_t i = 0; i < D; ++i) {
        r.g[i] = -a.g[i];
    }
    for (std::size_t k = 0; k < Jet<D>::kHess; ++k) {
        r.h[k] = -a.h[k];
    }
    return r;
}

template <std::size_t D>
Jet<D> operator-(const Jet<D>& a, const Jet<D>& b)
{
    return a + (-b);
}

template <std::size_t D>
Jet<D> operator*(const Jet<D>& a, const Jet<D>& b)
{
    Jet<D> r;
    r.v = a.v * b.v;
    for (std::size_t i = 0; i < D; ++i) {
        r.g[i] = a.v * b.g[i] + b.v * a.g[i];
    }
    for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t j = i; j < D; ++j) {
            const auto k = Jet<D>::idx(i, j);
            r.h[k] = a.v * b.h[k] + b.v * a.h[k] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
        }
    }
    return r;
}

template <std::size_t D>
Jet<D> recip(const Jet<D>& a)
{
    const Interval inv = recip(a.v);
    const Interval inv2 = sqr(inv);
    return apply_unary(a, inv, -inv2, Interval(2.0) * inv2 * inv);
}

template <std::size_t D>
Jet<D> operator/(const Jet<D>& a, const Jet<D>& b)
{
    return a * recip(b);
}

template <std::size_t D>
Jet<D> sqr(const Jet<D>& a)
{
    return apply_unary(a, sqr(a.v), Interval(2.0) * a.v, Interval(2.0));
}

template <std::size_t D>
Jet<D> log(const Jet<D>& a)
{
    const Interval inv = recip(a.v);
    return apply_unary(a, log(a.v), inv, -sqr(inv));
}

// Mixed jet/scalar arithmetic.
template <std::size_t D>
Jet<D> operator+(const Jet<D>& a, const Interval& s)
{
    Jet<D> r = a;
    r.v = a.v + s;
    return r;
}
template <std::size_t D>
Jet<D> operator+(const Interval& s, const Jet<D>& a) { return a + s; }
template <std::size_t D>
Jet<D> operator-(const Jet<D>& a, const Interval& s) { return a + (-s); }
template <std::size_t D>
Jet<D> operator-(const Interval& s, const Jet<D>& a) { return (-a) + s; }

template <std::size_t D>
Jet<D> operator*(const Jet<D>& a, const Interval& s)
{
    Jet<D> r;
    r.v = a.v * s;
    for (std::size_t i = 0; i < D; ++i) {
        r.g[i] = a.g[i] * s;
    }
    for (std::size_t k = 0; k < Jet<D>::kHess; ++k) {
        r.h[k] = a.h[k] * s;
    }
    return r;
}
template <std::size_t D>
Jet<D> operator*(const Interval& s, const Jet<D>& a) { return a * s; }
template <std::size_t D>
Jet<D> operator/(const Jet<D>& a, const Interval& s) { return a * recip(s); }
template <std::size_t D>
Jet<D> operator/(const Interval& s, const Jet<D>& a) { return recip(a) * s; }

// Plain doubles share the generic code path with Interval and Jet.
inline double sqr(double x) { return x * x; }
inline double recip(double x) { return 1.0 / x; }

}  // namespace minorant

namespace minorant {

/// Thrown when a jet cannot be formed because the function is not known to
/// be smooth on the argument enclosure (e.g. it straddles a branch point).
struct JetUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace minorant
