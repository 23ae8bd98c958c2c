#include "minorant/buchstab.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace minorant::buchstab {

namespace {

// Simpson panels for the log integral. With |d^4/dt^4 log(t-1)/t| <= 9 on
// [2, 3] the error is at most (b-2) h^4 * 9 / 180 <= 2e-10.
constexpr int kSimpsonPanels = 128;
constexpr double kLogIntegrandM4 = 9.0;

// Second-derivative bounds for ω on the blocks used by the trapezoid steps:
// ω'' = 2/v^3 <= 2 on [1, 2]; for v >= 2, ω'' = (ω'(v-1) - 2ω'(v))/v with
// |ω'| <= 1 on [1, 2] and <= 1/4 beyond, so |ω''| <= 3/4.
constexpr double kOmegaM2FirstBlock = 2.0;
constexpr double kOmegaM2Later = 1.0;

// |ω'| = 1/u^2 <= 1 on [1, 2]; |ω(u-1) - ω(u)|/u <= 1/4 afterwards.
constexpr double kOmegaLipschitzFirstBlock = 1.0;
constexpr double kOmegaLipschitzLater = 0.25;

Interval log_ratio(const Interval& t)
{
    return log(t - Interval(1.0)) / t;
}

Interval symmetric(double r)
{
    return {-r, r};
}

Interval plateau(BoundKind kind)
{
    return kind == BoundKind::Lower ? Interval::rational(5612, 10000) : Interval::rational(5617, 10000);
}

Interval clamp34(BoundKind kind, const Interval& expr)
{
    if (kind == BoundKind::Lower) {
        const Interval floor = Interval::rational(5607, 10000);
        return intersect(expr, Interval(floor.lo(), std::max(expr.hi(), floor.hi())));
    }
    const Interval cap = Interval::rational(5644, 10000);
    return intersect(expr, Interval(std::min(expr.lo(), cap.lo()), cap.hi()));
}

Interval branch23(double u)
{
    const Interval ui(u);
    return (Interval(1.0) + log(ui - Interval(1.0))) / ui;
}

// Integral over [2, b] of log(t-1)/t, b in [2, 3].
Interval log_integral(double b)
{
    if (b == 2.0) {
        return Interval(0.0);
    }
    const Interval len = Interval(b) - Interval(2.0);
    const Interval h = len / Interval(static_cast<double>(kSimpsonPanels));
    Interval sum = log_ratio(Interval(2.0)) + log_ratio(Interval(b));
    for (int k = 1; k < kSimpsonPanels; ++k) {
        const Interval t = Interval(2.0) + Interval(static_cast<double>(k)) * h;
        sum += Interval(k % 2 == 1 ? 4.0 : 2.0) * log_ratio(t);
    }
    const double hh = h.hi();
    const double err = len.hi() * hh * hh * hh * hh * kLogIntegrandM4 / 180.0;
    return sum * h / Interval(3.0) + symmetric(round_up(err));
}

// Hull of range over [a, b] for a function with Lipschitz constant lip,
// from enclosures of its endpoint values.
Interval lipschitz_range(const Interval& fa, const Interval& fb, double a, double b, double lip)
{
    const double slack = round_up(lip * (b - a) * 0.5);
    const Interval h = Interval::hull(fa, fb);
    return {round_down(h.lo() - slack), round_up(h.hi() + slack)};
}

// Range over [l, r] where [l, r) lies inside a single branch; r may be the
// branch's right endpoint, evaluated as the left limit.
Interval bound_range_piece(BoundKind kind, double l, double r)
{
    if (r <= 2.0) {
        return recip(Interval(l, r));
    }
    if (l >= 4.0) {
        return plateau(kind);
    }
    if (r <= 3.0) {
        return lipschitz_range(branch23(l), branch23(r), l, r, kBranch23Lipschitz);
    }
    return lipschitz_range(clamp34(kind, branch34_expression(l)), clamp34(kind, branch34_expression(r)), l, r,
                           kBranch34Lipschitz);
}

}  // namespace

Enclosure log_integral_term(double u)
{
    if (!(u >= 3.0 && u < 4.0)) {
        throw std::domain_error("log_integral_term: u outside [3, 4)");
    }
    return log_integral(u - 1.0) / Interval(u);
}

Enclosure branch34_expression(double u)
{
    if (!(u >= 3.0 && u <= 4.0)) {
        throw std::domain_error("branch34_expression: u outside [3, 4]");
    }
    const Interval ui(u);
    return (Interval(1.0) + log(ui - Interval(1.0))) / ui + log_integral(u - 1.0) / ui;
}

Enclosure omega_bound(BoundKind kind, double u)
{
    if (!(u >= 1.0)) {
        throw std::domain_error("omega_bound: u < 1");
    }
    if (u < 2.0) {
        return recip(Interval(u));
    }
    if (u < 3.0) {
        return branch23(u);
    }
    if (u < 4.0) {
        return clamp34(kind, branch34_expression(u));
    }
    return plateau(kind);
}

Enclosure omega_bound_range(BoundKind kind, const Interval& u)
{
    if (u.hi() < 1.0) {
        return Interval(0.0);
    }
    double l = std::max(u.lo(), 1.0);
    const double b = u.hi();
    Interval acc = bound_range_piece(kind, l, std::min(b, l < 2.0 ? 2.0 : l < 3.0 ? 3.0 : l < 4.0 ? 4.0 : b));
    for (double cut : {2.0, 3.0, 4.0}) {
        if (cut <= l) {
            continue;
        }
        if (cut > b) {
            break;
        }
        const double next = cut < 4.0 ? std::min(b, cut + 1.0) : b;
        acc = Interval::hull(acc, bound_range_piece(kind, cut, next));
        l = cut;
    }
    if (b >= 4.0) {
        acc = Interval::hull(acc, plateau(kind));
    }
    return acc;
}

BuchstabTable::BuchstabTable(double u_max, std::size_t per_unit, std::vector<Enclosure> values)
    : u_max_(u_max), per_unit_(per_unit), values_(std::move(values))
{
}

Interval BuchstabTable::abscissa(std::size_t k) const
{
    return Interval(1.0) + Interval(static_cast<double>(k)) / Interval(static_cast<double>(per_unit_));
}

double BuchstabTable::max_width() const
{
    double w = 0.0;
    for (const auto& v : values_) {
        w = std::max(w, v.width());
    }
    return w;
}

BuchstabTable build_table(double u_max, double step, double tol)
{
    if (!(u_max >= 4.0)) {
        throw std::invalid_argument("build_table: u_max must be >= 4");
    }
    if (!(step > 0.0 && step <= 1e-3)) {
        throw std::invalid_argument("build_table: step must lie in (0, 1e-3]");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("build_table: tol must be positive");
    }
    const double inv = std::round(1.0 / step);
    if (std::fabs(inv * step - 1.0) > 1e-12) {
        throw std::invalid_argument("build_table: 1/step must be an integer");
    }
    const auto n = static_cast<std::size_t>(inv);
    const auto last = static_cast<std::size_t>(std::floor((u_max - 1.0) * inv + 1e-9));

    std::vector<Enclosure> w(last + 1);
    const Interval h = recip(Interval(inv));
    auto u_at = [&](std::size_t k) {
        return Interval(1.0) + Interval(static_cast<double>(k)) / Interval(inv);
    };
    for (std::size_t k = 0; k <= std::min(n, last); ++k) {
        w[k] = recip(u_at(k));
    }
    // u*ω(u) at u = 2 is exactly 1.
    Interval uw(1.0);
    const double h3 = h.hi() * h.hi() * h.hi();
    for (std::size_t k = n + 1; k <= last; ++k) {
        // panel [u_{k-1}, u_k]; integrand ω(s-1) sampled at grid k-1-n, k-n
        const double m2 = (k <= 2 * n) ? kOmegaM2FirstBlock : kOmegaM2Later;
        const Interval trap = h * (w[k - 1 - n] + w[k - n]) / Interval(2.0);
        uw = uw + trap + symmetric(round_up(h3 * m2 / 12.0));
        w[k] = uw / u_at(k);
    }

    BuchstabTable table(1.0 + static_cast<double>(last) / inv, n, std::move(w));
    if (table.max_width() > tol) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "build_table: widest enclosure %.3g exceeds tol %.3g; refine step",
                      table.max_width(), tol);
        throw std::runtime_error(buf);
    }
    return table;
}

Enclosure omega_enclosure(const BuchstabTable& table, double u)
{
    if (!(u >= 1.0 && u <= table.u_max())) {
        throw std::domain_error("omega_enclosure: u outside [1, u_max]");
    }
    const auto n = static_cast<double>(table.per_unit());
    auto k = static_cast<std::size_t>(std::floor((u - 1.0) * n));
    if (k + 1 >= table.size()) {
        k = table.size() - 2;
    }
    const Interval uk = table.abscissa(k);
    const Interval uk1 = table.abscissa(k + 1);
    // Rounding may place u just outside cell k; absolute distances keep the
    // Lipschitz estimate valid either way.
    const double lip = (uk1.hi() <= 2.0) ? kOmegaLipschitzFirstBlock : kOmegaLipschitzLater;
    const double d0 = (Interval(u) - uk).mag();
    const double d1 = (uk1 - Interval(u)).mag();
    const double r0 = round_up(lip * d0);
    const double r1 = round_up(lip * d1);
    const Enclosure& w0 = table.at(k);
    const Enclosure& w1 = table.at(k + 1);
    const double lo = std::max(round_down(w0.lo() - r0), round_down(w1.lo() - r1));
    const double hi = std::min(round_up(w0.hi() + r0), round_up(w1.hi() + r1));
    if (lo > hi) {
        return Interval::hull(w0, w1);
    }
    return {lo, hi};
}

Enclosure omega_range(const BuchstabTable& table, const Interval& u)
{
    if (u.hi() < 1.0) {
        return Interval(0.0);
    }
    if (u.hi() > table.u_max()) {
        throw std::domain_error("omega_range: argument beyond table u_max");
    }
    const double a = std::max(u.lo(), 1.0);
    const double b = u.hi();
    if (b <= 2.0) {
        return recip(Interval(a, b));
    }
    Interval acc = a < 2.0 ? recip(Interval(a, 2.0)) : omega_enclosure(table, a);
    const double from = std::max(a, 2.0);
    const auto n = static_cast<double>(table.per_unit());
    const auto k0 = static_cast<std::size_t>(std::floor((from - 1.0) * n));
    const auto k1 = std::min(table.size() - 1, static_cast<std::size_t>(std::ceil((b - 1.0) * n)));
    for (std::size_t k = k0; k <= k1; ++k) {
        acc = Interval::hull(acc, table.at(k));
    }
    const double slack = round_up(kOmegaLipschitzLater / (2.0 * n));
    return {round_down(acc.lo() - slack), round_up(acc.hi() + slack)};
}

Enclosure branch34_range(double step)
{
    if (!(step > 0.0 && step <= 0.1)) {
        throw std::invalid_argument("branch34_range: step must lie in (0, 0.1]");
    }
    const auto cells = static_cast<int>(std::ceil(1.0 / step));
    Interval acc = branch34_expression(3.0);
    Interval prev = acc;
    for (int k = 1; k <= cells; ++k) {
        const double l = 3.0 + static_cast<double>(k - 1) / cells;
        const double r = k == cells ? 4.0 : 3.0 + static_cast<double>(k) / cells;
        const Interval cur = branch34_expression(r);
        acc = Interval::hull(acc, lipschitz_range(prev, cur, l, r, kBranch34Lipschitz));
        prev = cur;
    }
    return acc;
}

double max_deviation_23(const BuchstabTable& table)
{
    double worst = 0.0;
    for (std::size_t k = table.per_unit(); k <= 2 * table.per_unit() && k < table.size(); ++k) {
        const Interval u = table.abscissa(k);
        const Interval cf = (Interval(1.0) + log(u - Interval(1.0))) / u;
        const Interval& w = table.at(k);
        worst = std::max({worst, w.hi() - cf.lo(), cf.hi() - w.lo()});
    }
    return worst;
}

Enclosure table_hull(const BuchstabTable& table, double a, double b)
{
    if (!(a >= 1.0 && a <= b && b <= table.u_max())) {
        throw std::domain_error("table_hull: [a, b] outside [1, u_max]");
    }
    const auto n = static_cast<double>(table.per_unit());
    const auto k0 = static_cast<std::size_t>(std::ceil((a - 1.0) * n - 1e-9));
    const auto k1 = std::min(table.size() - 1, static_cast<std::size_t>(std::floor((b - 1.0) * n + 1e-9)));
    Interval acc = table.at(k0);
    for (std::size_t k = k0; k <= k1; ++k) {
        acc = Interval::hull(acc, table.at(k));
    }
    return acc;
}

void write_csv(const BuchstabTable& table, std::ostream& out)
{
    out << "u,lo,hi\n";
    char buf[128];
    for (std::size_t k = 0; k < table.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.10f,%.17g,%.17g\n", table.abscissa(k).mid(), table.at(k).lo(),
                      table.at(k).hi());
        out << buf;
    }
}

}  // namespace minorant::buchstab
