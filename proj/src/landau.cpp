#include "exbound/landau.hpp"

#include <cmath>
#include <stdexcept>

#include "exbound/errors.hpp"

namespace exbound {

MarketParams::MarketParams(double strike, double rate, double dividend_yield, double maturity)
    : strike(strike), rate(rate), dividend_yield(dividend_yield), maturity(maturity) {
    if (!(strike > 0.0)) throw std::invalid_argument("MarketParams: strike must be positive");
    if (!(maturity > 0.0)) throw std::invalid_argument("MarketParams: maturity must be positive");
    if (!(dividend_yield > 0.0 && dividend_yield <= rate))
        throw std::invalid_argument("MarketParams: need 0 < dividend_yield <= rate");
}

Grid::Grid(double x_len, int n_space, int m_time) : x_len(x_len), n_space(n_space), m_time(m_time) {
    if (!(x_len > 0.0)) throw std::invalid_argument("Grid: x_len must be positive");
    if (n_space < 2) throw std::invalid_argument("Grid: n_space must be >= 2");
    if (m_time < 1) throw std::invalid_argument("Grid: m_time must be >= 1");
}

void validate_grid(const Grid& grid, const MarketParams& market) {
    const double jump = std::log(market.rate / market.dividend_yield);
    if (!(grid.x_len > jump))
        throw std::invalid_argument("Grid: x_len must exceed ln(rate/dividend_yield)");
}

PortfolioState initial_state(const MarketParams& market, const Grid& grid) {
    validate_grid(grid, market);
    const double jump = std::log(market.rate / market.dividend_yield);
    PortfolioState state;
    state.pi.resize(grid.n_space + 1);
    for (int i = 0; i <= grid.n_space; ++i)
        state.pi[i] = (grid.x(i) < jump) ? -market.strike : 0.0;
    state.pi.front() = -market.strike;
    state.pi.back() = 0.0;
    state.rho = market.initial_boundary();
    state.level = 0;
    state.tau = 0.0;
    return state;
}

double to_asset_price(double x, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("to_asset_price: rho must be positive");
    return rho * std::exp(-x);
}

double reconstruct_price(const PortfolioState& state, const Grid& grid,
                         const MarketParams& market, double s_query) {
    if (!(s_query > 0.0)) throw std::domain_error("reconstruct_price: price must be positive");
    if (s_query > state.rho)
        throw OutOfRegionError("reconstruct_price: query above the exercise boundary");

    const double upper = std::log(state.rho / s_query);
    const double h = grid.h();
    const int n = grid.n_space;

    // Trapezoid of e^x Pi(x) over full cells, then the fractional last cell
    // with Pi interpolated linearly; Pi = 0 past the truncated domain.
    double integral = 0.0;
    const double capped = std::min(upper, grid.x_len);
    const int full_cells = std::min(static_cast<int>(capped / h), n);
    auto f = [&](int i) { return std::exp(grid.x(i)) * state.pi[i]; };
    for (int i = 0; i < full_cells; ++i) integral += 0.5 * h * (f(i) + f(i + 1));
    if (full_cells < n) {
        const double x0 = grid.x(full_cells);
        const double frac = capped - x0;
        if (frac > 0.0) {
            const double t = frac / h;
            const double pi_u = state.pi[full_cells] * (1.0 - t) + state.pi[full_cells + 1] * t;
            integral += 0.5 * frac * (f(full_cells) + std::exp(capped) * pi_u);
        }
    }

    return s_query / state.rho * (state.rho - market.strike + integral);
}

PriceQuote quote_price(const PortfolioState& state, const Grid& grid, const MarketParams& market,
                       double s_query) {
    if (s_query >= state.rho) return {s_query - market.strike, true};
    return {reconstruct_price(state, grid, market, s_query), false};
}

}  // namespace exbound
