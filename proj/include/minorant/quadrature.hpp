#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "minorant/box.hpp"
#include "minorant/interval.hpp"
#include "minorant/regions.hpp"
#include "minorant/taylor.hpp"

namespace minorant::quadrature {

using regions::BoxClass;
using regions::RegionPredicate;

enum class Mode { Rigorous, MonteCarlo };

/// Positive integrand over a box-shaped domain.
class Integrand {
public:
    virtual ~Integrand() = default;
    virtual std::size_t arity() const = 0;
    virtual double value(std::span<const double> t) const = 0;
    /// Contains f(t) for every t in the box.
    virtual Interval range(const Box& b) const = 0;
    /// Contains (1/vol) * integral of f over the box. Defaults to range().
    virtual Interval mean(const Box& b) const { return range(b); }
};

/// Integrand from a functor callable on std::array<T, D> for T in
/// {double, Interval, Jet<D>}. mean() uses a second-order Taylor bound
/// around the box centre, falling back to range() when the jet is
/// unavailable.
template <std::size_t D, class F>
class SmoothIntegrand final : public Integrand {
public:
    explicit SmoothIntegrand(F f, bool taylor = true) : f_(std::move(f)), taylor_(taylor) {}

    std::size_t arity() const override { return D; }

    double value(std::span<const double> t) const override
    {
        std::array<double, D> a{};
        std::copy_n(t.begin(), D, a.begin());
        return f_(a);
    }

    Interval range(const Box& b) const override
    {
        std::array<Interval, D> a;
        for (std::size_t i = 0; i < D; ++i) {
            a[i] = b.side(i);
        }
        return f_(a);
    }

    Interval mean(const Box& b) const override
    {
        const Interval r = range(b);
        if (!taylor_) {
            return r;
        }
        std::array<Jet<D>, D> j;
        std::array<Interval, D> m;
        for (std::size_t i = 0; i < D; ++i) {
            j[i] = Jet<D>::variable(i, b.side(i));
            m[i] = Interval(b.mid(i));
        }
        Jet<D> jet;
        try {
            jet = f_(j);
        } catch (const JetUnavailable&) {
            return r;
        }
        // f(x) = f(m) + g.d + d'H(xi)d/2 with d centred on the box: the linear
        // term integrates to zero, E[d_i^2] = w_i^2/12, E|d_i d_j| <= w_i w_j/16.
        Interval acc = f_(m);
        for (std::size_t i = 0; i < D; ++i) {
            const Interval wi = Interval(b.hi(i)) - Interval(b.lo(i));
            acc += jet.hess(i, i) * sqr(wi) / Interval(24.0);
            for (std::size_t k = i + 1; k < D; ++k) {
                const Interval wk = Interval(b.hi(k)) - Interval(b.lo(k));
                const double bound = (Interval(jet.hess(i, k).mag()) * wi * wk / Interval(16.0)).hi();
                acc += Interval(-bound, bound);
            }
        }
        if (acc.hi() < r.lo() || acc.lo() > r.hi()) {
            return r;
        }
        return intersect(acc, r);
    }

private:
    F f_;
    bool taylor_;
};

template <std::size_t D, class F>
SmoothIntegrand<D, F> make_integrand(F f, bool taylor = true)
{
    return SmoothIntegrand<D, F>(std::move(f), taylor);
}

struct IntegralEstimate {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t boxes_used = 0;
    Mode mode = Mode::Rigorous;
    double std_error = 0.0;  // MonteCarlo only
    bool budget_exhausted = false;
    bool degenerate = false;  // MonteCarlo: no sample hit the region
    std::size_t samples = 0;
    std::size_t hits = 0;
    /// Rigorous only: hull of all boxes not proven Outside.
    std::optional<Box> support;

    double gap() const { return upper - lower; }
};

struct RigorousOptions {
    std::size_t budget = 1'000'000;
    double tol = 1e-5;
    unsigned workers = 1;
};

/// Branch-and-bound integrator whose state survives between run() calls, so
/// a caller can tighten budget/tol and continue where the last run stopped.
/// Results depend only on the sequence of (budget, tol) requests, never on
/// the worker count.
class RigorousIntegrator {
public:
    RigorousIntegrator(const Integrand& f, const RegionPredicate& r, const Box& root, unsigned workers = 1);

    /// Refine until gap <= tol or the total number of evaluated boxes reaches budget.
    IntegralEstimate run(std::size_t budget, double tol);

    std::size_t boxes_used() const { return boxes_used_; }

    struct Cell {
        Box box;
        double lo = 0.0;
        double hi = 0.0;
        BoxClass cls = BoxClass::Mixed;
    };

private:
    Cell evaluate(const Box& b) const;
    std::size_t split_axis(const Box& b) const;
    IntegralEstimate summarise() const;

    const Integrand& f_;
    const RegionPredicate& r_;
    Box root_;
    unsigned workers_;
    std::vector<Cell> heap_;  // max-heap on hi - lo
    // Cells that can no longer be improved, folded into plain sums.
    double settled_lo_ = 0.0;
    double settled_hi_ = 0.0;
    std::size_t settled_count_ = 0;
    std::optional<Box> settled_hull_;
    double running_lo_ = 0.0;
    double running_hi_ = 0.0;
    std::size_t boxes_used_ = 0;
};

/// Parent boxes bisected per parallel round; fixed so results do not depend on workers.
inline constexpr std::size_t kBatch = 512;

IntegralEstimate integrate_rigorous(const Integrand& f, const RegionPredicate& r, const Box& b,
                                    const RigorousOptions& opt = {});

/// Uniform sampling over b. Each worker owns an mt19937_64 stream seeded by
/// (seed, worker index) and a fixed share of the samples.
IntegralEstimate integrate_mc(const Integrand& f, const RegionPredicate& r, const Box& b, std::size_t samples,
                              std::uint64_t seed, unsigned workers = 1);

/// Area of the box cut by half-planes a.t <= c (2-D only).
double clipped_area(const Box& b, std::span<const regions::HalfSpace> cuts);

}  // namespace minorant::quadrature
