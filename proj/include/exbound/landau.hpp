#pragma once

#include <string>
#include <vector>

namespace exbound {

/// Linear-model market inputs. Construction enforces 0 < dividend_yield <= rate,
/// the regime in which the boundary starts at rate*strike/dividend_yield.
struct MarketParams {
    MarketParams(double strike, double rate, double dividend_yield, double maturity);

    double strike;
    double rate;
    double dividend_yield;
    double maturity;

    double initial_boundary() const { return rate * strike / dividend_yield; }

    friend bool operator==(const MarketParams&, const MarketParams&) = default;
};

/// Uniform mesh on the fixed strip [0, x_len] x [0, maturity].
struct Grid {
    Grid(double x_len, int n_space, int m_time);

    double x_len;
    int n_space;
    int m_time;

    double h() const { return x_len / n_space; }
    double x(int i) const { return i * h(); }
    double time_step(const MarketParams& market) const { return market.maturity / m_time; }
};

/// Throws if the initial jump ln(rate/dividend_yield) falls outside the strip.
void validate_grid(const Grid& grid, const MarketParams& market);

/// Grid values of the hedged portfolio Pi = V - S V_S at one time level,
/// together with the boundary position at that level.
struct PortfolioState {
    std::vector<double> pi;  // n+1 values, pi[0] = -strike, pi[n] = 0
    double rho = 0.0;
    int level = 0;
    double tau = 0.0;
};

/// Sampled free boundary rho(tau_j), j = 0..m.
struct BoundaryCurve {
    std::vector<double> taus;
    std::vector<double> rhos;
    MarketParams market;
    std::string model;
};

/// State at tau = 0: pi_i = -strike strictly below the jump at ln(r/q), zero
/// elsewhere, with the Dirichlet values pinned at both ends; rho = r*strike/q.
PortfolioState initial_state(const MarketParams& market, const Grid& grid);

/// S = rho * exp(-x).
double to_asset_price(double x, double rho);

/// Option price from the transformed solution,
///
///   V = (S/rho) (rho - E + int_0^{ln(rho/S)} e^x Pi(x) dx),
///
/// with the integral taken by composite trapezoid over grid cells and a
/// linearly interpolated fractional last cell. Requires 0 < s_query <= rho.
double reconstruct_price(const PortfolioState& state, const Grid& grid,
                         const MarketParams& market, double s_query);

struct PriceQuote {
    double value;
    bool exercised;  // true when s_query lies at or above the boundary
};

/// Convenience wrapper: payoff s - strike above the boundary, reconstruction below.
PriceQuote quote_price(const PortfolioState& state, const Grid& grid,
                       const MarketParams& market, double s_query);

}  // namespace exbound
