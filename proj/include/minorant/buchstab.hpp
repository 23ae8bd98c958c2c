#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "minorant/interval.hpp"
#include "minorant/taylor.hpp"

namespace minorant::buchstab {

enum class BoundKind { Lower, Upper };

// Clamps and plateaus for the piecewise bounds ω0 (Lower) and ω1 (Upper).
inline constexpr double kLowerFloor34 = 0.5607;
inline constexpr double kLowerPlateau = 0.5612;
inline constexpr double kUpperCap34 = 0.5644;
inline constexpr double kUpperPlateau = 0.5617;

/// (1/u) ∫_2^{u-1} log(t-1)/t dt for u in [3,4), width <= 1e-8.
Enclosure log_integral_term(double u);

/// The full [3,4) branch expression (1 + log(u-1))/u + log_integral_term(u),
/// also accepted at u = 4 as the left limit. No clamp applied.
Enclosure branch34_expression(double u);

/// Pointwise enclosure of ω0(u) or ω1(u), u >= 1.
Enclosure omega_bound(BoundKind kind, double u);

/// Enclosure of the range of ω0/ω1 over an argument interval. Arguments
/// below 1 lie outside the domain and are clipped; an interval entirely
/// below 1 yields [0, 0].
Enclosure omega_bound_range(BoundKind kind, const Interval& u);

/// Lipschitz constant of the piecewise bounds on [2, 4), used for ranges.
inline constexpr double kBranch23Lipschitz = 0.25;
inline constexpr double kBranch34Lipschitz = 0.025;

/// Jet of ω0/ω1 on the 1/u branch. Throws JetUnavailable unless the argument
/// enclosure lies in [1, 2].
template <std::size_t D>
Jet<D> omega_bound_jet(BoundKind /*kind*/, const Jet<D>& u)
{
    if (u.v.lo() < 1.0 || u.v.hi() > 2.0) {
        throw JetUnavailable("omega bound jet: argument leaves [1, 2]");
    }
    return recip(u);
}

/// ω(u) enclosures on the grid u_k = 1 + k*step, 0 <= k <= (u_max-1)/step.
class BuchstabTable {
public:
    BuchstabTable(double u_max, std::size_t per_unit, std::vector<Enclosure> values);

    double u_max() const { return u_max_; }
    double step() const { return 1.0 / static_cast<double>(per_unit_); }
    std::size_t per_unit() const { return per_unit_; }
    std::size_t size() const { return values_.size(); }
    std::span<const Enclosure> values() const { return values_; }
    const Enclosure& at(std::size_t k) const { return values_.at(k); }
    /// Enclosure of the grid abscissa u_k.
    Interval abscissa(std::size_t k) const;
    double max_width() const;

private:
    double u_max_;
    std::size_t per_unit_;
    std::vector<Enclosure> values_;
};

/// Solve (u ω(u))' = ω(u-1) forward from ω = 1/u on [1, 2].
/// step must divide 1 exactly (1/step integral). Throws std::runtime_error
/// when some enclosure is wider than tol.
BuchstabTable build_table(double u_max = 8.0, double step = 1e-4, double tol = 1e-7);

/// ω(u) for 1 <= u <= u_max from the two neighbouring grid values.
Enclosure omega_enclosure(const BuchstabTable& table, double u);

/// Range of ω over an argument interval; same clipping rule as omega_bound_range.
Enclosure omega_range(const BuchstabTable& table, const Interval& u);

template <std::size_t D>
Jet<D> omega_jet(const BuchstabTable& /*table*/, const Jet<D>& u)
{
    // ω = 1/u exactly on the initial segment; no derivative data elsewhere.
    if (u.v.lo() < 1.0 || u.v.hi() > 2.0) {
        throw JetUnavailable("omega jet: argument leaves [1, 2]");
    }
    return recip(u);
}

/// Range of the unclamped [3, 4] branch expression: grid values at spacing
/// `step` widened by the Lipschitz term.
Enclosure branch34_range(double step = 1e-3);

/// Largest distance between a table enclosure and the closed form
/// (1 + log(u-1))/u over the grid points of [2, 3].
double max_deviation_23(const BuchstabTable& table);

/// Hull of all table enclosures on [a, b].
Enclosure table_hull(const BuchstabTable& table, double a, double b);

/// CSV dump: header "u,lo,hi" then one row per grid point.
void write_csv(const BuchstabTable& table, std::ostream& out);

}  // namespace minorant::buchstab
