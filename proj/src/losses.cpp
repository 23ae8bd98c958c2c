#include "minorant/losses.hpp"

#include <stdexcept>

namespace minorant::losses {

namespace {

using buchstab::BoundKind;

// ω1 through the piecewise upper bound.
struct UpperBound {
    double operator()(double u) const { return buchstab::omega_bound(BoundKind::Upper, u).mid(); }
    Interval operator()(const Interval& u) const { return buchstab::omega_bound_range(BoundKind::Upper, u); }
    template <std::size_t D>
    Jet<D> operator()(const Jet<D>& u) const
    {
        return buchstab::omega_bound_jet(BoundKind::Upper, u);
    }
};

// ω through the solved table.
struct Tabulated {
    const buchstab::BuchstabTable* table;
    double operator()(double u) const { return buchstab::omega_enclosure(*table, u).mid(); }
    Interval operator()(const Interval& u) const { return buchstab::omega_range(*table, u); }
    template <std::size_t D>
    Jet<D> operator()(const Jet<D>& u) const
    {
        return buchstab::omega_jet(*table, u);
    }
};

// Plain 1/u, with the same clipping to u >= 1 as the ω evaluators.
struct Reciprocal {
    double operator()(double u) const { return 1.0 / u; }
    Interval operator()(const Interval& u) const
    {
        if (u.hi() < 1.0) {
            return Interval(0.0);
        }
        return recip(Interval(std::max(1.0, u.lo()), u.hi()));
    }
    template <std::size_t D>
    Jet<D> operator()(const Jet<D>& u) const
    {
        if (u.v.lo() < 1.0) {
            throw JetUnavailable("reciprocal jet: argument below 1");
        }
        return recip(u);
    }
};

// The arguments are written so each coordinate appears once where possible,
// which keeps interval ranges tight:
//   (1 - t1 - t2 - t3 - t4)/t4 = (1 - t1 - t2 - t3)/t4 - 1, etc.

template <class W>
struct A3Integrand {
    W w;
    template <class T>
    T operator()(const std::array<T, 4>& t) const
    {
        const T u = (1.0 - t[0] - t[1] - t[2]) / t[3] - 1.0;
        return w(u) / (t[0] * t[1] * t[2] * sqr(t[3]));
    }
};

template <class W>
struct B3Integrand {
    W w;
    template <class T>
    T operator()(const std::array<T, 4>& t) const
    {
        const T u = t[0] / t[3] - 1.0;
        const T v = (1.0 - t[0] - t[1]) / t[2] - 1.0;
        return w(u) * w(v) / (t[1] * sqr(t[2]) * sqr(t[3]));
    }
};

template <class W>
struct CIntegrand {
    W w;
    template <class T>
    T operator()(const std::array<T, 2>& t) const
    {
        const T u = (1.0 - t[0]) / t[1] - 1.0;
        return w(u) / (t[0] * sqr(t[1]));
    }
};

template <std::size_t D, class F>
std::unique_ptr<quadrature::Integrand> boxed(F f)
{
    return std::make_unique<quadrature::SmoothIntegrand<D, F>>(std::move(f));
}

Box cube(std::size_t dim, regions::Rational lo, regions::Rational hi)
{
    std::array<double, 4> l{};
    std::array<double, 4> h{};
    for (std::size_t i = 0; i < dim; ++i) {
        l[i] = lo.enclosure().lo();
        h[i] = hi.enclosure().hi();
    }
    return {std::span<const double>(l.data(), dim), std::span<const double>(h.data(), dim)};
}

}  // namespace

const char* loss_name(Loss l)
{
    switch (l) {
    case Loss::A3:
        return "loss_a3";
    case Loss::B3:
        return "loss_b3";
    case Loss::C:
        return "loss_c";
    }
    return "?";
}

double loss_target(Loss l)
{
    switch (l) {
    case Loss::A3:
        return kTargetA3;
    case Loss::B3:
        return kTargetB3;
    case Loss::C:
        return kTargetC;
    }
    return 0.0;
}

Box loss_root(Loss l)
{
    using regions::kSieveCut;
    using regions::kTypeIILow;
    if (l == Loss::C) {
        const Interval a = regions::Rational{11, 38}.enclosure();
        const Interval b = regions::kTypeISmall.enclosure();
        const Interval top = kTypeIILow.enclosure();
        return Box{Interval(a.lo(), top.hi()), Interval(b.lo(), top.hi())};
    }
    return cube(4, kSieveCut, kTypeIILow);
}

LossProblem make_loss_a3()
{
    return {Loss::A3, regions::region_ua3(), loss_root(Loss::A3), boxed<4>(A3Integrand<UpperBound>{}), nullptr};
}

LossProblem make_loss_b3()
{
    return {Loss::B3, regions::region_ub3(), loss_root(Loss::B3), boxed<4>(B3Integrand<UpperBound>{}), nullptr};
}

LossProblem make_loss_c(std::shared_ptr<const buchstab::BuchstabTable> table)
{
    if (!table) {
        throw std::invalid_argument("make_loss_c: table required");
    }
    auto f = boxed<2>(CIntegrand<Tabulated>{Tabulated{table.get()}});
    return {Loss::C, regions::region_c(), loss_root(Loss::C), std::move(f), std::move(table)};
}

LossProblem make_loss(Loss l, std::shared_ptr<const buchstab::BuchstabTable> table)
{
    switch (l) {
    case Loss::A3:
        return make_loss_a3();
    case Loss::B3:
        return make_loss_b3();
    case Loss::C:
        return make_loss_c(std::move(table));
    }
    throw std::invalid_argument("make_loss: unknown loss");
}

LossProblem make_reduced(Loss l)
{
    switch (l) {
    case Loss::A3:
        return {l, regions::region_ua3(), loss_root(l), boxed<4>(A3Integrand<Reciprocal>{}), nullptr};
    case Loss::B3:
        return {l, regions::region_ub3(), loss_root(l), boxed<4>(B3Integrand<Reciprocal>{}), nullptr};
    case Loss::C:
        return {l, regions::region_c(), loss_root(l), boxed<2>(CIntegrand<Reciprocal>{}), nullptr};
    }
    throw std::invalid_argument("make_reduced: unknown loss");
}

LossResult evaluate_loss(const LossProblem& p, const LossOptions& opt)
{
    std::size_t budget = opt.budget;
    if (budget == 0) {
        budget = p.root.dim() == 4 ? 10'000'000 : 1'000'000;
    }
    double tol = opt.tol;
    quadrature::RigorousIntegrator it(*p.integrand, p.region, p.root, opt.workers);
    LossResult r;
    r.loss = p.loss;
    r.target = loss_target(p.loss);
    r.estimate = it.run(budget, tol);
    while (r.estimate.upper >= r.target && r.escalations_used < opt.escalations) {
        budget *= 10;
        tol /= 10;
        ++r.escalations_used;
        r.estimate = it.run(budget, tol);
    }
    r.final_budget = budget;
    r.final_tol = tol;
    r.passed = r.estimate.upper < r.target;
    return r;
}

IntegralEstimate loss_a3(std::size_t budget, double tol, unsigned workers)
{
    return evaluate_loss(make_loss_a3(), {budget, tol, workers, 2}).estimate;
}

IntegralEstimate loss_b3(std::size_t budget, double tol, unsigned workers)
{
    return evaluate_loss(make_loss_b3(), {budget, tol, workers, 2}).estimate;
}

IntegralEstimate loss_c(const std::shared_ptr<const buchstab::BuchstabTable>& table, std::size_t budget, double tol,
                        unsigned workers)
{
    return evaluate_loss(make_loss_c(table), {budget, tol, workers, 2}).estimate;
}

IntegralEstimate loss_mc(const LossProblem& p, const IntegralEstimate& rigorous, std::size_t samples,
                         std::uint64_t seed, unsigned workers)
{
    const Box& b = rigorous.support ? *rigorous.support : p.root;
    return quadrature::integrate_mc(*p.integrand, p.region, b, samples, seed, workers);
}

LossLedger assemble_ledger(const IntegralEstimate& a3, const IntegralEstimate& b3, const IntegralEstimate& c)
{
    for (const auto* e : {&a3, &b3, &c}) {
        if (e->mode != quadrature::Mode::Rigorous) {
            throw std::invalid_argument("assemble_ledger: Monte Carlo estimates are not certified");
        }
    }
    LossLedger l;
    l.loss_a3 = a3;
    l.loss_b3 = b3;
    l.loss_c = c;
    l.total_upper = (Interval(a3.upper) + Interval(b3.upper) + Interval(c.upper)).hi();
    l.retained_lower = (Interval(1.0) - Interval(l.total_upper)).lo();
    l.total_pass = l.total_upper < kTargetTotal;
    l.retained_pass = l.retained_lower >= kTargetRetained;
    return l;
}

}  // namespace minorant::losses
