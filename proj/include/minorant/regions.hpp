#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minorant/box.hpp"
#include "minorant/interval.hpp"

namespace minorant::regions {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    Interval enclosure() const { return Interval::rational(num, den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

Rational operator+(Rational a, Rational b);
Rational operator-(Rational a, Rational b);
Rational operator-(Rational a);
Rational operator*(Rational a, Rational b);

// Boundary constants of the exponent-space decomposition.
inline constexpr Rational kSieveCut{3, 19};
inline constexpr Rational kTypeIILow{8, 19};
inline constexpr Rational kTypeIIHigh{11, 19};
inline constexpr Rational kTypeISmall{9, 38};
inline constexpr Rational kHalf{1, 2};
inline constexpr Rational kTypeISmooth{13, 38};

enum class Relation { Less, LessEqual, Greater, GreaterEqual };

enum class BoxClass { Inside, Outside, Mixed };

/// sum_i coeffs[i] * t_i + constant, with rational coefficients.
struct LinearForm {
    std::vector<Rational> coeffs;
    Rational constant{0, 1};

    static LinearForm coordinate(std::size_t arity, std::size_t i);
    LinearForm operator+(const LinearForm& o) const;
    LinearForm scaled(Rational s) const;
};

/// sum_i a_i t_i (relation) bound.
class LinearConstraint {
public:
    LinearConstraint(std::vector<Rational> coeffs, Relation rel, Rational bound);
    /// form (relation) rhs, normalised so the constant moves to the bound.
    static LinearConstraint from_form(const LinearForm& form, Relation rel, Rational rhs);

    std::size_t arity() const { return coeffs_.size(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Relation relation() const { return rel_; }
    const Rational& bound() const { return bound_; }

    /// Pointwise evaluation in double precision.
    bool holds(std::span<const double> t) const;
    /// Conservative three-valued evaluation; strict and non-strict relations
    /// coincide on boxes (boundaries have measure zero).
    BoxClass classify(const Box& b) const;
    /// Same constraint as a half-plane a.t <= c in doubles.
    void as_upper_halfspace(std::vector<double>& a, double& c) const;

private:
    std::vector<Rational> coeffs_;
    std::vector<double> a_;
    Relation rel_;
    Rational bound_;
    Interval bound_enc_;
};

/// Half-space a.t <= c remaining undecided on a box.
struct HalfSpace {
    std::vector<double> a;
    double c = 0.0;
};

/// What is left of a predicate once restricted to a box.
struct Residual {
    BoxClass cls = BoxClass::Mixed;
    /// Set when the predicate on the box reduces to a conjunction of half-spaces.
    std::optional<std::vector<HalfSpace>> conjunction;
};

/// And/or/not tree over linear constraint leaves.
class RegionPredicate {
public:
    enum class Kind { Leaf, All, Any, Not };

    static RegionPredicate leaf(LinearConstraint c);
    static RegionPredicate all(std::vector<RegionPredicate> parts);
    static RegionPredicate any(std::vector<RegionPredicate> parts);
    static RegionPredicate negate(RegionPredicate p);

    RegionPredicate&& named(std::string name) &&;
    const std::string& name() const { return name_; }
    std::size_t arity() const { return arity_; }
    Kind kind() const { return kind_; }
    std::size_t leaf_count() const;

    /// Exact pointwise membership. Throws std::invalid_argument on arity mismatch.
    bool contains(std::span<const double> t) const;
    /// Never reports Inside/Outside wrongly; may report Mixed when decidable.
    BoxClass classify(const Box& b) const;
    Residual residual(const Box& b) const;

    /// Audit export: constraint tree with rational constants as {num, den}.
    std::string to_json() const;

private:
    RegionPredicate() = default;
    void check_arity(std::size_t n) const;
    bool eval(std::span<const double> t) const;
    BoxClass classify_node(const Box& b) const;
    Residual residual_node(const Box& b) const;

    Kind kind_ = Kind::Leaf;
    std::size_t arity_ = 0;
    std::string name_;
    std::vector<LinearConstraint> leaf_;  // one element for Kind::Leaf
    std::vector<RegionPredicate> parts_;

    friend struct JsonAccess;
};

// Named regions in (t1, t2) space.
RegionPredicate s4_domain();
RegionPredicate region_a();
RegionPredicate region_b();
RegionPredicate region_c();
RegionPredicate type_ii_strip();

// Dropped sets in (t1, t2, t3, t4) space.
RegionPredicate region_ua3();
RegionPredicate region_ub3();

/// Predicate "no nonempty subset of the given forms sums into [8/19, 11/19]".
RegionPredicate type_ii_infeasible(std::span<const LinearForm> forms);

/// Some nonempty subset sum lies in [8/19, 11/19]; exhaustive over 2^n subsets.
bool type_ii_feasible(std::span<const double> ts);
/// {1..n} splits into I, J with sum_I <= 8/19 and sum_J <= 9/38.
bool type_i_feasible(std::span<const double> ts);

inline constexpr std::size_t kMaxGroupingSize = 8;

}  // namespace minorant::regions
