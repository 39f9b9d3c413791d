#pragma once

#include <vector>

namespace exbound {

/// Gauss-Legendre rule on [-1, 1], nodes found by Newton iteration.
class GaussLegendre {
public:
    explicit GaussLegendre(int n);

    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            acc += weights_[i] * f(mid + half * nodes_[i]);
        return acc * half;
    }

    int size() const { return static_cast<int>(nodes_.size()); }

private:
    std::vector<double> nodes_, weights_;
};

}  // namespace exbound
