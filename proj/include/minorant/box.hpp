#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

#include "minorant/interval.hpp"

namespace minorant {

/// Axis-aligned box in exponent space, up to kMaxDim dimensions.
class Box {
public:
    static constexpr std::size_t kMaxDim = 4;

    Box() = default;
    explicit Box(std::initializer_list<Interval> sides)
    {
        if (sides.size() == 0 || sides.size() > kMaxDim) {
            throw std::invalid_argument("Box: dimension must be 1.." + std::to_string(kMaxDim));
        }
        for (const auto& s : sides) {
            lo_[dim_] = s.lo();
            hi_[dim_] = s.hi();
            ++dim_;
        }
    }
    Box(std::span<const double> lo, std::span<const double> hi)
    {
        if (lo.size() != hi.size() || lo.empty() || lo.size() > kMaxDim) {
            throw std::invalid_argument("Box: bad corner arrays");
        }
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (!(lo[i] <= hi[i])) {
                throw std::invalid_argument("Box: lo > hi");
            }
            lo_[i] = lo[i];
            hi_[i] = hi[i];
        }
        dim_ = lo.size();
    }

    std::size_t dim() const { return dim_; }
    double lo(std::size_t i) const { return lo_[i]; }
    double hi(std::size_t i) const { return hi_[i]; }
    double width(std::size_t i) const { return hi_[i] - lo_[i]; }
    double mid(std::size_t i) const { return lo_[i] + 0.5 * (hi_[i] - lo_[i]); }
    Interval side(std::size_t i) const { return {lo_[i], hi_[i]}; }

    /// Certified enclosure of the volume.
    Interval volume() const
    {
        Interval v(1.0);
        for (std::size_t i = 0; i < dim_; ++i) {
            v *= Interval(hi_[i]) - Interval(lo_[i]);
        }
        return v;
    }

    std::pair<Box, Box> bisect(std::size_t axis) const
    {
        Box a = *this;
        Box b = *this;
        const double m = mid(axis);
        a.hi_[axis] = m;
        b.lo_[axis] = m;
        return {a, b};
    }

    Box hull(const Box& o) const
    {
        Box r = *this;
        for (std::size_t i = 0; i < dim_; ++i) {
            r.lo_[i] = std::min(lo_[i], o.lo_[i]);
            r.hi_[i] = std::max(hi_[i], o.hi_[i]);
        }
        return r;
    }

    friend bool operator==(const Box&, const Box&) = default;

private:
    std::array<double, kMaxDim> lo_{};
    std::array<double, kMaxDim> hi_{};
    std::size_t dim_ = 0;
};

}  // namespace minorant
