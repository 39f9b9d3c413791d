#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace exbound {

struct BoundaryCurve;

/// Volatility model evaluated at a configuration where its denominator vanishes.
class SingularVolatilityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Zero pivot met during the tridiagonal forward elimination.
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(int row, const std::string& what)
        : std::runtime_error(what), row(row) {}
    int row;
};

/// ODE or quadrature evaluation could not be completed.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A fixed-point loop hit its iteration cap before reaching tolerance.
/// For time-stepping failures `level` is the offending time level and
/// `partial` holds the boundary computed so far; both are defaulted for
/// failures that have no level structure.
class NonconvergenceError : public std::runtime_error {
public:
    NonconvergenceError(const std::string& what, double last_residual,
                        int level = -1,
                        std::shared_ptr<const BoundaryCurve> partial = nullptr)
        : std::runtime_error(what),
          last_residual(last_residual),
          level(level),
          partial(std::move(partial)) {}
    double last_residual;
    int level;
    std::shared_ptr<const BoundaryCurve> partial;
};

/// Price queried above the exercise boundary.
class OutOfRegionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace exbound
