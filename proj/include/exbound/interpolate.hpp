#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace exbound {

/// Shape-preserving piecewise-cubic Hermite interpolant with Fritsch-Carlson
/// slopes. Monotone data produce a monotone interpolant; evaluation outside
/// the abscissa range clamps to the nearest cell's cubic.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    /// xs strictly increasing, same length as ys, at least two nodes.
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;
    double derivative(double x) const;

    double x_front() const { return xs_.front(); }
    double x_back() const { return xs_.back(); }

private:
    std::size_t cell(double x) const;

    std::vector<double> xs_, ys_, slopes_;
};

/// Linear interpolation of values sampled on the uniform grid x_i = i*h,
/// clamped to the end values outside [0, n*h].
double lerp_uniform(std::span<const double> values, double h, double x);

}  // namespace exbound
