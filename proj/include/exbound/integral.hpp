#pragma once

#include <vector>

#include "exbound/interpolate.hpp"
#include "exbound/landau.hpp"
#include "exbound/quadrature.hpp"

namespace exbound {

/// Time nodes and quadrature resolution for the boundary integral equation.
struct IntegralGrid {
    std::vector<double> taus;  // 0 = tau_0 < ... < tau_M = T
    int quad_nodes_per_panel = 12;

    static IntegralGrid uniform(double t_end, int m_nodes, int quad_nodes_per_panel = 12);

    /// Nodes clustered near tau = 0 as t_end*(j/M)^power, matching the
    /// square-root start of the boundary for power = 2.
    static IntegralGrid graded(double t_end, int m_nodes, double power = 2.0,
                               int quad_nodes_per_panel = 12);
};

/// A boundary iterate sampled on tau nodes, evaluable between them by
/// shape-preserving interpolation.
class SampledBoundary {
public:
    SampledBoundary(std::vector<double> taus, std::vector<double> rhos);
    explicit SampledBoundary(const BoundaryCurve& curve);

    double operator()(double tau) const { return interp_(tau); }
    double derivative(double tau) const { return interp_.derivative(tau); }
    double t_end() const { return interp_.x_back(); }

private:
    MonotoneCubic interp_;
};

/// A_{tau,s} = ln rho(tau) - ln rho(s) + (r - q - sigma_hat^2/2)(tau - s).
double a_kernel(const SampledBoundary& rho, double tau, double s, const MarketParams& market,
                double sigma_hat);

/// Right side of the constant-volatility boundary equation at time tau:
/// prefactor rE/q times (1 + boundary term + integral term). The 1/sqrt(tau-s)
/// factor is removed by the substitution s = tau - u^2 and the resulting
/// smooth integrand is integrated by Gauss-Legendre panels aligned with the
/// tau nodes of the sampled curve.
double integral_rhs(const SampledBoundary& rho_curve, double tau, const MarketParams& market,
                    double sigma_hat, const IntegralGrid& grid);

/// Picard iteration from the flat start rho = rE/q, stopping when the sup
/// change over nodes falls below tol. `damping` in (0, 1] blends consecutive
/// iterates; 1 is the plain fixed-point map.
BoundaryCurve solve_integral_equation(const MarketParams& market, double sigma_hat,
                                      const IntegralGrid& grid, double tol = 1e-9,
                                      int max_iter = 400, double damping = 1.0);

}  // namespace exbound
