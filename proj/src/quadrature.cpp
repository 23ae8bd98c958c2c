#include "minorant/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

namespace minorant::quadrature {

namespace {

constexpr double kTwoUlp = 0x1p-52;
// Clipped polygon areas are trusted to within this multiple of the box
// half-perimeter; the actual rounding error is a few ulp of the coordinates.
constexpr double kAreaSlack = 1e-12;

bool gap_less(const RigorousIntegrator::Cell& a, const RigorousIntegrator::Cell& b)
{
    return (a.hi - a.lo) < (b.hi - b.lo);
}

// Runs body(i) for i in [0, n) on up to `workers` threads, contiguous chunks.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body)
{
    const std::size_t threads = std::min<std::size_t>(workers, n / 16);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t * chunk; i < std::min(n, (t + 1) * chunk); ++i) {
                    body(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void require_finite(const Interval& v, const Box& b)
{
    if (!v.is_finite()) {
        std::string where;
        for (std::size_t i = 0; i < b.dim(); ++i) {
            where += (i ? " x " : "") + to_string(b.side(i));
        }
        throw std::domain_error("integrand enclosure not finite on box " + where);
    }
}

// Neumaier summation.
struct Sum {
    double s = 0.0;
    double c = 0.0;
    void add(double v)
    {
        const double t = s + v;
        c += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

}  // namespace

double clipped_area(const Box& b, std::span<const regions::HalfSpace> cuts)
{
    if (b.dim() != 2) {
        throw std::invalid_argument("clipped_area: 2-D boxes only");
    }
    using Pt = std::array<double, 2>;
    std::vector<Pt> poly{{b.lo(0), b.lo(1)}, {b.hi(0), b.lo(1)}, {b.hi(0), b.hi(1)}, {b.lo(0), b.hi(1)}};
    std::vector<Pt> next;
    for (const auto& h : cuts) {
        if (poly.empty()) {
            break;
        }
        auto side = [&](const Pt& p) { return h.a[0] * p[0] + h.a[1] * p[1] - h.c; };
        next.clear();
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Pt& p = poly[i];
            const Pt& q = poly[(i + 1) % poly.size()];
            const double sp = side(p);
            const double sq = side(q);
            if (sp <= 0.0) {
                next.push_back(p);
            }
            if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) {
                const double s = sp / (sp - sq);
                next.push_back({p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
            }
        }
        poly.swap(next);
    }
    if (poly.size() < 3) {
        return 0.0;
    }
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Pt& p = poly[i];
        const Pt& q = poly[(i + 1) % poly.size()];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    return std::fabs(twice) * 0.5;
}

RigorousIntegrator::RigorousIntegrator(const Integrand& f, const RegionPredicate& r, const Box& root,
                                       unsigned workers)
    : f_(f), r_(r), root_(root), workers_(std::max(1u, workers))
{
    if (f.arity() != r.arity() || root.dim() != r.arity()) {
        throw std::invalid_argument("RigorousIntegrator: arity mismatch between integrand, region and box");
    }
}

RigorousIntegrator::Cell RigorousIntegrator::evaluate(const Box& b) const
{
    Cell c{b, 0.0, 0.0, BoxClass::Mixed};
    std::optional<std::vector<regions::HalfSpace>> cuts;
    if (b.dim() == 2) {
        auto res = r_.residual(b);
        c.cls = res.cls;
        cuts = std::move(res.conjunction);
    } else {
        c.cls = r_.classify(b);
    }
    if (c.cls == BoxClass::Outside) {
        return c;
    }
    const Interval vol = b.volume();
    if (c.cls == BoxClass::Inside) {
        const Interval m = f_.mean(b);
        require_finite(m, b);
        const Interval p = vol * m;
        c.lo = std::max(0.0, p.lo());
        c.hi = p.hi();
        return c;
    }
    const Interval rg = f_.range(b);
    require_finite(rg, b);
    const double top = std::max(0.0, rg.hi());
    if (cuts) {
        const double a = clipped_area(b, *cuts);
        const double slack = kAreaSlack * (b.width(0) + b.width(1));
        const double a_lo = std::max(0.0, a - slack);
        const double a_hi = std::min(vol.hi(), a + slack);
        c.lo = (Interval(a_lo) * Interval(std::max(0.0, rg.lo()))).lo();
        c.hi = (Interval(a_hi) * Interval(top)).hi();
    } else {
        c.hi = (vol * Interval(top)).hi();
    }
    return c;
}

std::size_t RigorousIntegrator::split_axis(const Box& b) const
{
    std::size_t best = 0;
    double best_w = -1.0;
    for (std::size_t i = 0; i < b.dim(); ++i) {
        const double scale = root_.width(i) > 0.0 ? root_.width(i) : 1.0;
        const double w = b.width(i) / scale;
        if (w > best_w) {
            best_w = w;
            best = i;
        }
    }
    return best;
}

IntegralEstimate RigorousIntegrator::run(std::size_t budget, double tol)
{
    if (budget < 1) {
        throw std::invalid_argument("integrate_rigorous: budget must be >= 1");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("integrate_rigorous: tol must be positive");
    }
    auto settle = [&](const Cell& c) {
        if (c.cls == BoxClass::Outside) {
            return;
        }
        settled_lo_ += c.lo;
        settled_hi_ += c.hi;
        ++settled_count_;
        settled_hull_ = settled_hull_ ? settled_hull_->hull(c.box) : c.box;
    };
    auto place = [&](const Cell& c) {
        if (c.cls == BoxClass::Outside) {
            return;
        }
        if (c.hi - c.lo <= 0.0) {
            settle(c);
            return;
        }
        heap_.push_back(c);
        std::push_heap(heap_.begin(), heap_.end(), gap_less);
    };

    if (boxes_used_ == 0) {
        const Cell c = evaluate(root_);
        boxes_used_ = 1;
        running_lo_ = c.lo;
        running_hi_ = c.hi;
        place(c);
    }

    std::vector<Cell> parents;
    std::vector<Box> kids;
    std::vector<Cell> out;
    while (!heap_.empty() && running_hi_ - running_lo_ > tol && boxes_used_ < budget) {
        const std::size_t room = std::max<std::size_t>(1, (budget - boxes_used_) / 2);
        const std::size_t take = std::min({kBatch, heap_.size(), room});
        parents.clear();
        kids.clear();
        for (std::size_t i = 0; i < take; ++i) {
            std::pop_heap(heap_.begin(), heap_.end(), gap_less);
            Cell p = heap_.back();
            heap_.pop_back();
            const std::size_t axis = split_axis(p.box);
            const double m = p.box.mid(axis);
            if (!(m > p.box.lo(axis) && m < p.box.hi(axis))) {
                settle(p);  // too narrow to split further
                continue;
            }
            auto [a, b] = p.box.bisect(axis);
            kids.push_back(a);
            kids.push_back(b);
            parents.push_back(p);
        }
        out.assign(kids.size(), Cell{});
        parallel_for(kids.size(), workers_, [&](std::size_t i) { out[i] = evaluate(kids[i]); });
        boxes_used_ += kids.size();
        for (const auto& p : parents) {
            running_lo_ -= p.lo;
            running_hi_ -= p.hi;
        }
        for (const auto& c : out) {
            running_lo_ += c.lo;
            running_hi_ += c.hi;
            place(c);
        }
        if (kids.empty() && heap_.empty()) {
            break;
        }
    }
    IntegralEstimate e = summarise();
    e.budget_exhausted = e.gap() > tol && boxes_used_ >= budget;
    return e;
}

IntegralEstimate RigorousIntegrator::summarise() const
{
    Sum lo;
    Sum hi;
    lo.add(settled_lo_);
    hi.add(settled_hi_);
    std::optional<Box> hull = settled_hull_;
    for (const auto& c : heap_) {
        lo.add(c.lo);
        hi.add(c.hi);
        hull = hull ? hull->hull(c.box) : c.box;
    }
    // All terms are nonnegative, so n * 2^-52 * sum bounds the rounding error
    // of any summation order.
    const auto n = static_cast<double>(settled_count_ + heap_.size() + 2);
    const double l = lo.value();
    const double h = hi.value();
    IntegralEstimate e;
    e.mode = Mode::Rigorous;
    e.lower = std::max(0.0, round_down(l - n * kTwoUlp * l));
    e.upper = round_up(h + n * kTwoUlp * h);
    e.boxes_used = boxes_used_;
    e.support = hull;
    return e;
}

IntegralEstimate integrate_rigorous(const Integrand& f, const RegionPredicate& r, const Box& b,
                                    const RigorousOptions& opt)
{
    RigorousIntegrator it(f, r, b, opt.workers);
    return it.run(opt.budget, opt.tol);
}

IntegralEstimate integrate_mc(const Integrand& f, const RegionPredicate& r, const Box& b, std::size_t samples,
                              std::uint64_t seed, unsigned workers)
{
    if (samples < 10'000) {
        throw std::invalid_argument("integrate_mc: at least 10^4 samples required");
    }
    if (f.arity() != r.arity() || b.dim() != r.arity()) {
        throw std::invalid_argument("integrate_mc: arity mismatch between integrand, region and box");
    }
    workers = std::max(1u, workers);
    struct Partial {
        double sum = 0.0;
        double sum2 = 0.0;
        std::size_t hits = 0;
    };
    std::vector<Partial> parts(workers);
    auto body = [&](std::size_t w) {
        const std::size_t share = samples / workers + (w < samples % workers ? 1 : 0);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(w)};
        std::mt19937_64 rng(seq);
        std::array<double, Box::kMaxDim> t{};
        const std::span<const double> pt(t.data(), b.dim());
        Sum s;
        Sum s2;
        Partial& p = parts[w];
        for (std::size_t k = 0; k < share; ++k) {
            for (std::size_t i = 0; i < b.dim(); ++i) {
                const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
                t[i] = b.lo(i) + u * b.width(i);
            }
            if (!r.contains(pt)) {
                continue;
            }
            const double v = f.value(pt);
            s.add(v);
            s2.add(v * v);
            ++p.hits;
        }
        p.sum = s.value();
        p.sum2 = s2.value();
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(body, w);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    Sum sum;
    Sum sum2;
    IntegralEstimate e;
    e.mode = Mode::MonteCarlo;
    e.samples = samples;
    for (const auto& p : parts) {
        sum.add(p.sum);
        sum2.add(p.sum2);
        e.hits += p.hits;
    }
    double vol = 1.0;
    for (std::size_t i = 0; i < b.dim(); ++i) {
        vol *= b.width(i);
    }
    const auto n = static_cast<double>(samples);
    const double mean = sum.value() / n;
    const double var = std::max(0.0, sum2.value() / n - mean * mean);
    e.lower = e.upper = vol * mean;
    e.std_error = vol * std::sqrt(var / (n - 1.0));
    e.degenerate = e.hits == 0;
    return e;
}

}  // namespace minorant::quadrature
