#include "minorant/regions.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace minorant::regions {

namespace {

Rational normalise(std::int64_t num, std::int64_t den)
{
    if (den == 0) {
        throw std::invalid_argument("Rational: zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    return g > 1 ? Rational{num / g, den / g} : Rational{num, den};
}

const char* relation_symbol(Relation r)
{
    switch (r) {
    case Relation::Less:
        return "<";
    case Relation::LessEqual:
        return "<=";
    case Relation::Greater:
        return ">";
    case Relation::GreaterEqual:
        return ">=";
    }
    return "?";
}

}  // namespace

Rational operator+(Rational a, Rational b) { return normalise(a.num * b.den + b.num * a.den, a.den * b.den); }
Rational operator-(Rational a) { return {-a.num, a.den}; }
Rational operator-(Rational a, Rational b) { return a + (-b); }
Rational operator*(Rational a, Rational b) { return normalise(a.num * b.num, a.den * b.den); }

LinearForm LinearForm::coordinate(std::size_t arity, std::size_t i)
{
    LinearForm f;
    f.coeffs.assign(arity, Rational{0, 1});
    f.coeffs.at(i) = Rational{1, 1};
    return f;
}

LinearForm LinearForm::operator+(const LinearForm& o) const
{
    if (coeffs.size() != o.coeffs.size()) {
        throw std::invalid_argument("LinearForm: arity mismatch");
    }
    LinearForm r = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        r.coeffs[i] = coeffs[i] + o.coeffs[i];
    }
    r.constant = constant + o.constant;
    return r;
}

LinearForm LinearForm::scaled(Rational s) const
{
    LinearForm r = *this;
    for (auto& c : r.coeffs) {
        c = c * s;
    }
    r.constant = constant * s;
    return r;
}

LinearConstraint::LinearConstraint(std::vector<Rational> coeffs, Relation rel, Rational bound)
    : coeffs_(std::move(coeffs)), rel_(rel), bound_(bound), bound_enc_(bound.enclosure())
{
    if (coeffs_.empty() || coeffs_.size() > Box::kMaxDim) {
        throw std::invalid_argument("LinearConstraint: arity must be 1..4");
    }
    a_.reserve(coeffs_.size());
    for (const auto& c : coeffs_) {
        if (c.value() * static_cast<double>(c.den) != static_cast<double>(c.num)) {
            throw std::invalid_argument("LinearConstraint: coefficients must be exactly representable");
        }
        a_.push_back(c.value());
    }
}

LinearConstraint LinearConstraint::from_form(const LinearForm& form, Relation rel, Rational rhs)
{
    return {form.coeffs, rel, rhs - form.constant};
}

bool LinearConstraint::holds(std::span<const double> t) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        s += a_[i] * t[i];
    }
    const double c = bound_.value();
    switch (rel_) {
    case Relation::Less:
        return s < c;
    case Relation::LessEqual:
        return s <= c;
    case Relation::Greater:
        return s > c;
    case Relation::GreaterEqual:
        return s >= c;
    }
    return false;
}

BoxClass LinearConstraint::classify(const Box& b) const
{
    Interval s(0.0);
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i] != 0.0) {
            s += Interval(a_[i]) * b.side(i);
        }
    }
    const bool upper = rel_ == Relation::Less || rel_ == Relation::LessEqual;
    if (upper) {
        if (s.hi() <= bound_enc_.lo()) {
            return BoxClass::Inside;
        }
        if (s.lo() >= bound_enc_.hi()) {
            return BoxClass::Outside;
        }
        return BoxClass::Mixed;
    }
    if (s.lo() >= bound_enc_.hi()) {
        return BoxClass::Inside;
    }
    if (s.hi() <= bound_enc_.lo()) {
        return BoxClass::Outside;
    }
    return BoxClass::Mixed;
}

void LinearConstraint::as_upper_halfspace(std::vector<double>& a, double& c) const
{
    const bool upper = rel_ == Relation::Less || rel_ == Relation::LessEqual;
    a = a_;
    c = bound_.value();
    if (!upper) {
        for (auto& v : a) {
            v = -v;
        }
        c = -c;
    }
}

RegionPredicate RegionPredicate::leaf(LinearConstraint c)
{
    RegionPredicate p;
    p.kind_ = Kind::Leaf;
    p.arity_ = c.arity();
    p.leaf_.push_back(std::move(c));
    return p;
}

RegionPredicate RegionPredicate::all(std::vector<RegionPredicate> parts)
{
    if (parts.empty()) {
        throw std::invalid_argument("RegionPredicate::all: no parts");
    }
    RegionPredicate p;
    p.kind_ = Kind::All;
    p.arity_ = parts.front().arity_;
    for (const auto& q : parts) {
        if (q.arity_ != p.arity_) {
            throw std::invalid_argument("RegionPredicate::all: arity mismatch");
        }
    }
    p.parts_ = std::move(parts);
    return p;
}

RegionPredicate RegionPredicate::any(std::vector<RegionPredicate> parts)
{
    RegionPredicate p = all(std::move(parts));
    p.kind_ = Kind::Any;
    return p;
}

RegionPredicate RegionPredicate::negate(RegionPredicate q)
{
    RegionPredicate p;
    p.kind_ = Kind::Not;
    p.arity_ = q.arity_;
    p.parts_.push_back(std::move(q));
    return p;
}

RegionPredicate&& RegionPredicate::named(std::string name) &&
{
    name_ = std::move(name);
    return std::move(*this);
}

std::size_t RegionPredicate::leaf_count() const
{
    if (kind_ == Kind::Leaf) {
        return 1;
    }
    std::size_t n = 0;
    for (const auto& q : parts_) {
        n += q.leaf_count();
    }
    return n;
}

void RegionPredicate::check_arity(std::size_t n) const
{
    if (n != arity_) {
        throw std::invalid_argument("region '" + name_ + "': arity " + std::to_string(arity_) + ", got " +
                                    std::to_string(n));
    }
}

bool RegionPredicate::contains(std::span<const double> t) const
{
    check_arity(t.size());
    return eval(t);
}

bool RegionPredicate::eval(std::span<const double> t) const
{
    switch (kind_) {
    case Kind::Leaf:
        return leaf_.front().holds(t);
    case Kind::All:
        return std::all_of(parts_.begin(), parts_.end(), [&](const auto& q) { return q.eval(t); });
    case Kind::Any:
        return std::any_of(parts_.begin(), parts_.end(), [&](const auto& q) { return q.eval(t); });
    case Kind::Not:
        return !parts_.front().eval(t);
    }
    return false;
}

BoxClass RegionPredicate::classify(const Box& b) const
{
    check_arity(b.dim());
    return classify_node(b);
}

BoxClass RegionPredicate::classify_node(const Box& b) const
{
    switch (kind_) {
    case Kind::Leaf:
        return leaf_.front().classify(b);
    case Kind::All: {
        bool all_inside = true;
        for (const auto& q : parts_) {
            const auto c = q.classify_node(b);
            if (c == BoxClass::Outside) {
                return BoxClass::Outside;
            }
            all_inside = all_inside && c == BoxClass::Inside;
        }
        return all_inside ? BoxClass::Inside : BoxClass::Mixed;
    }
    case Kind::Any: {
        bool all_outside = true;
        for (const auto& q : parts_) {
            const auto c = q.classify_node(b);
            if (c == BoxClass::Inside) {
                return BoxClass::Inside;
            }
            all_outside = all_outside && c == BoxClass::Outside;
        }
        return all_outside ? BoxClass::Outside : BoxClass::Mixed;
    }
    case Kind::Not: {
        const auto c = parts_.front().classify_node(b);
        return c == BoxClass::Inside ? BoxClass::Outside : c == BoxClass::Outside ? BoxClass::Inside : c;
    }
    }
    return BoxClass::Mixed;
}

Residual RegionPredicate::residual(const Box& b) const
{
    check_arity(b.dim());
    return residual_node(b);
}

Residual RegionPredicate::residual_node(const Box& b) const
{
    switch (kind_) {
    case Kind::Leaf: {
        Residual r{leaf_.front().classify(b), std::nullopt};
        if (r.cls == BoxClass::Mixed) {
            HalfSpace h;
            leaf_.front().as_upper_halfspace(h.a, h.c);
            r.conjunction = std::vector<HalfSpace>{std::move(h)};
        }
        return r;
    }
    case Kind::All: {
        Residual r{BoxClass::Inside, std::vector<HalfSpace>{}};
        for (const auto& q : parts_) {
            Residual c = q.residual_node(b);
            if (c.cls == BoxClass::Outside) {
                return {BoxClass::Outside, std::nullopt};
            }
            if (c.cls == BoxClass::Mixed) {
                r.cls = BoxClass::Mixed;
                if (r.conjunction && c.conjunction) {
                    r.conjunction->insert(r.conjunction->end(), c.conjunction->begin(), c.conjunction->end());
                } else {
                    r.conjunction.reset();
                }
            }
        }
        if (r.cls == BoxClass::Inside) {
            r.conjunction.reset();
        }
        return r;
    }
    case Kind::Any: {
        std::size_t mixed = 0;
        Residual last;
        for (const auto& q : parts_) {
            Residual c = q.residual_node(b);
            if (c.cls == BoxClass::Inside) {
                return {BoxClass::Inside, std::nullopt};
            }
            if (c.cls == BoxClass::Mixed) {
                ++mixed;
                last = std::move(c);
            }
        }
        if (mixed == 0) {
            return {BoxClass::Outside, std::nullopt};
        }
        return mixed == 1 ? last : Residual{BoxClass::Mixed, std::nullopt};
    }
    case Kind::Not: {
        const auto& inner = parts_.front();
        Residual c = inner.residual_node(b);
        if (c.cls != BoxClass::Mixed) {
            return {c.cls == BoxClass::Inside ? BoxClass::Outside : BoxClass::Inside, std::nullopt};
        }
        if (inner.kind_ == Kind::Leaf && c.conjunction && c.conjunction->size() == 1) {
            HalfSpace h = c.conjunction->front();
            for (auto& v : h.a) {
                v = -v;
            }
            h.c = -h.c;
            return {BoxClass::Mixed, std::vector<HalfSpace>{std::move(h)}};
        }
        return {BoxClass::Mixed, std::nullopt};
    }
    }
    return {};
}

struct JsonAccess {
    static nlohmann::json rational(const Rational& r) { return {{"num", r.num}, {"den", r.den}}; }

    static nlohmann::json build(const RegionPredicate& p)
    {
        using Kind = RegionPredicate::Kind;
        nlohmann::json j;
        if (p.kind_ == Kind::Leaf) {
            const auto& c = p.leaf_.front();
            j["op"] = "leaf";
            auto coeffs = nlohmann::json::array();
            for (const auto& a : c.coeffs()) {
                coeffs.push_back(rational(a));
            }
            j["coeffs"] = std::move(coeffs);
            j["relation"] = relation_symbol(c.relation());
            j["bound"] = rational(c.bound());
            return j;
        }
        j["op"] = p.kind_ == Kind::All ? "and" : p.kind_ == Kind::Any ? "or" : "not";
        auto children = nlohmann::json::array();
        for (const auto& q : p.parts_) {
            children.push_back(build(q));
        }
        j["children"] = std::move(children);
        return j;
    }
};

std::string RegionPredicate::to_json() const
{
    nlohmann::json j;
    j["name"] = name_;
    j["arity"] = arity_;
    j["tree"] = JsonAccess::build(*this);
    return j.dump(2);
}

namespace {

using P = RegionPredicate;

LinearForm coord(std::size_t arity, std::size_t i) { return LinearForm::coordinate(arity, i); }

LinearForm sum_of(std::size_t arity, std::initializer_list<std::pair<std::size_t, std::int64_t>> terms)
{
    LinearForm f;
    f.coeffs.assign(arity, Rational{0, 1});
    for (const auto& [i, k] : terms) {
        f.coeffs.at(i) = f.coeffs.at(i) + Rational{k, 1};
    }
    return f;
}

P cmp(const LinearForm& f, Relation rel, Rational rhs) { return P::leaf(LinearConstraint::from_form(f, rel, rhs)); }

// 3/19 <= t1 < 8/19, 3/19 <= t2 < min(t1, (1 - t1)/2), embedded in `arity` dims.
std::vector<P> s4_parts(std::size_t n)
{
    std::vector<P> v;
    v.push_back(cmp(coord(n, 0), Relation::GreaterEqual, kSieveCut));
    v.push_back(cmp(coord(n, 0), Relation::Less, kTypeIILow));
    v.push_back(cmp(coord(n, 1), Relation::GreaterEqual, kSieveCut));
    v.push_back(cmp(sum_of(n, {{1, 1}, {0, -1}}), Relation::Less, Rational{0, 1}));
    v.push_back(cmp(sum_of(n, {{0, 1}, {1, 2}}), Relation::Less, Rational{1, 1}));
    return v;
}

std::vector<P> a_parts(std::size_t n)
{
    auto v = s4_parts(n);
    v.push_back(cmp(sum_of(n, {{0, 1}, {1, 1}}), Relation::Less, kTypeIILow));
    return v;
}

std::vector<P> b_parts(std::size_t n)
{
    auto v = s4_parts(n);
    v.push_back(cmp(sum_of(n, {{0, 1}, {1, 1}}), Relation::Greater, kTypeIIHigh));
    v.push_back(cmp(coord(n, 1), Relation::Less, kTypeISmall));
    return v;
}

}  // namespace

RegionPredicate s4_domain() { return P::all(s4_parts(2)).named("S4"); }
RegionPredicate region_a() { return P::all(a_parts(2)).named("A"); }
RegionPredicate region_b() { return P::all(b_parts(2)).named("B"); }

RegionPredicate region_c()
{
    auto v = s4_parts(2);
    v.push_back(cmp(sum_of(2, {{0, 1}, {1, 1}}), Relation::Greater, kTypeIIHigh));
    v.push_back(cmp(coord(2, 1), Relation::Greater, kTypeISmall));
    return P::all(std::move(v)).named("C");
}

RegionPredicate type_ii_strip()
{
    auto v = s4_parts(2);
    v.push_back(cmp(sum_of(2, {{0, 1}, {1, 1}}), Relation::GreaterEqual, kTypeIILow));
    v.push_back(cmp(sum_of(2, {{0, 1}, {1, 1}}), Relation::LessEqual, kTypeIIHigh));
    return P::all(std::move(v)).named("TypeIIStrip");
}

RegionPredicate type_ii_infeasible(std::span<const LinearForm> forms)
{
    if (forms.empty() || forms.size() > kMaxGroupingSize) {
        throw std::invalid_argument("type_ii_infeasible: 1..8 forms");
    }
    std::vector<P> clauses;
    for (std::size_t mask = 1; mask < (std::size_t{1} << forms.size()); ++mask) {
        LinearForm s;
        for (std::size_t i = 0; i < forms.size(); ++i) {
            if (mask >> i & 1U) {
                s = s.coeffs.empty() ? forms[i] : s + forms[i];
            }
        }
        std::vector<P> either;
        either.push_back(cmp(s, Relation::Less, kTypeIILow));
        either.push_back(cmp(s, Relation::Greater, kTypeIIHigh));
        clauses.push_back(P::any(std::move(either)));
    }
    return P::all(std::move(clauses));
}

RegionPredicate region_ua3()
{
    constexpr std::size_t n = 4;
    auto v = a_parts(n);
    // t3 range, then the {1,2,3} clause, then t4 range and the {1,2,3,4} clause.
    v.push_back(cmp(coord(n, 2), Relation::GreaterEqual, kSieveCut));
    v.push_back(cmp(sum_of(n, {{2, 1}, {1, -1}}), Relation::Less, Rational{0, 1}));
    v.push_back(cmp(sum_of(n, {{0, 1}, {1, 1}, {2, 2}}), Relation::Less, Rational{1, 1}));
    v.push_back(cmp(coord(n, 3), Relation::GreaterEqual, kSieveCut));
    v.push_back(cmp(sum_of(n, {{3, 1}, {2, -1}}), Relation::Less, Rational{0, 1}));
    v.push_back(cmp(sum_of(n, {{0, 1}, {1, 1}, {2, 1}, {3, 2}}), Relation::Less, Rational{1, 1}));
    v.push_back(cmp(coord(n, 0), Relation::Less, kHalf));
    const LinearForm three[] = {coord(n, 0), coord(n, 1), coord(n, 2)};
    v.push_back(type_ii_infeasible(three));
    const LinearForm four[] = {coord(n, 0), coord(n, 1), coord(n, 2), coord(n, 3)};
    v.push_back(type_ii_infeasible(four));
    return P::all(std::move(v)).named("U_A3");
}

RegionPredicate region_ub3()
{
    constexpr std::size_t n = 4;
    auto v = b_parts(n);
    v.push_back(cmp(coord(n, 2), Relation::GreaterEqual, kSieveCut));
    v.push_back(cmp(sum_of(n, {{2, 1}, {1, -1}}), Relation::Less, Rational{0, 1}));
    v.push_back(cmp(sum_of(n, {{0, 1}, {1, 1}, {2, 2}}), Relation::Less, Rational{1, 1}));
    v.push_back(cmp(coord(n, 3), Relation::GreaterEqual, kSieveCut));
    v.push_back(cmp(sum_of(n, {{3, 2}, {0, -1}}), Relation::Less, Rational{0, 1}));
    v.push_back(cmp(coord(n, 0), Relation::Less, kHalf));
    const LinearForm three[] = {coord(n, 0), coord(n, 1), coord(n, 2)};
    v.push_back(type_ii_infeasible(three));
    // Slot 0 is the exponent of β, 1 - t1 - t2 - t3.
    LinearForm beta = sum_of(n, {{0, -1}, {1, -1}, {2, -1}});
    beta.constant = Rational{1, 1};
    const LinearForm four[] = {beta, coord(n, 1), coord(n, 2), coord(n, 3)};
    v.push_back(type_ii_infeasible(four));
    return P::all(std::move(v)).named("U_B3");
}

bool type_ii_feasible(std::span<const double> ts)
{
    if (ts.size() > kMaxGroupingSize) {
        throw std::invalid_argument("type_ii_feasible: at most 8 exponents");
    }
    const double low = kTypeIILow.value();
    const double high = kTypeIIHigh.value();
    for (std::size_t mask = 1; mask < (std::size_t{1} << ts.size()); ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (mask >> i & 1U) {
                s += ts[i];
            }
        }
        if (s >= low && s <= high) {
            return true;
        }
    }
    return false;
}

bool type_i_feasible(std::span<const double> ts)
{
    if (ts.size() > kMaxGroupingSize) {
        throw std::invalid_argument("type_i_feasible: at most 8 exponents");
    }
    const double big = kTypeIILow.value();
    const double small = kTypeISmall.value();
    for (std::size_t mask = 0; mask < (std::size_t{1} << ts.size()); ++mask) {
        double in = 0.0;
        double out = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            (mask >> i & 1U ? in : out) += ts[i];
        }
        if (in <= big && out <= small) {
            return true;
        }
    }
    return false;
}

}  // namespace minorant::regions
