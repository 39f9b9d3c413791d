#include "exbound/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exbound {

namespace {

// One-sided endpoint slope with the usual shape-preserving clamps.
double edge_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return m;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n)
        throw std::invalid_argument("MonotoneCubic: need >= 2 nodes and matching lengths");
    for (std::size_t i = 1; i < n; ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw std::invalid_argument("MonotoneCubic: abscissae must be strictly increasing");

    slopes_.resize(n);
    if (n == 2) {
        double d = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
        slopes_[0] = slopes_[1] = d;
        return;
    }

    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = xs_[i + 1] - xs_[i];
        d[i] = (ys_[i + 1] - ys_[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            slopes_[i] = 0.0;
        } else {
            // Weighted harmonic mean of the neighbouring secants.
            double w1 = 2.0 * h[i] + h[i - 1];
            double w2 = h[i] + 2.0 * h[i - 1];
            slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    slopes_[0] = edge_slope(h[0], h[1], d[0], d[1]);
    slopes_[n - 1] = edge_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

std::size_t MonotoneCubic::cell(double x) const {
    if (x <= xs_.front()) return 0;
    if (x >= xs_.back()) return xs_.size() - 2;
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    return static_cast<std::size_t>(it - xs_.begin()) - 1;
}

double MonotoneCubic::operator()(double x) const {
    const std::size_t k = cell(x);
    const double hk = xs_[k + 1] - xs_[k];
    const double t = std::clamp((x - xs_[k]) / hk, 0.0, 1.0);
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * ys_[k] + (t3 - 2.0 * t2 + t) * hk * slopes_[k] +
           (-2.0 * t3 + 3.0 * t2) * ys_[k + 1] + (t3 - t2) * hk * slopes_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
    const std::size_t k = cell(x);
    const double hk = xs_[k + 1] - xs_[k];
    const double t = std::clamp((x - xs_[k]) / hk, 0.0, 1.0);
    const double t2 = t * t;
    return ((6.0 * t2 - 6.0 * t) * ys_[k] + (3.0 * t2 - 4.0 * t + 1.0) * hk * slopes_[k] +
            (-6.0 * t2 + 6.0 * t) * ys_[k + 1] + (3.0 * t2 - 2.0 * t) * hk * slopes_[k + 1]) /
           hk;
}

double lerp_uniform(std::span<const double> values, double h, double x) {
    const std::size_t n = values.size() - 1;
    if (x <= 0.0) return values.front();
    double u = x / h;
    auto idx = static_cast<std::size_t>(u);
    if (idx >= n) return values.back();
    double t = u - static_cast<double>(idx);
    return values[idx] * (1.0 - t) + values[idx + 1] * t;
}

}  // namespace exbound
