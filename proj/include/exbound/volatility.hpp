#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "exbound/interpolate.hpp"

namespace exbound {

/// Tabulated solution of the risk-aversion volatility ODE
///
///     psi'(x) = (psi(x) + 1) / (2 sqrt(x psi(x)) - x),   psi(0) = 0,
///
/// sampled on a geometric abscissa grid. The table behaves like c*x^{1/3}
/// below the first positive node and extends linearly beyond the last one,
/// consistent with psi(x) -> x for large x.
class PsiTable {
public:
    /// psi(x). Throws std::domain_error for x < 0.
    double operator()(double x) const;

    /// Coefficient c of the cube-root behaviour at the origin.
    double origin_coefficient() const { return c_; }

    double x_max() const { return x_max_; }

    /// Sampled abscissae including the x = 0 anchor.
    std::span<const double> xs() const { return xs_; }
    std::span<const double> values() const { return psis_; }

private:
    friend PsiTable build_psi_table(double, double, int, double);

    std::vector<double> xs_, psis_;  // xs_[0] = 0, psis_[0] = 0
    MonotoneCubic log_interp_;       // psi over ln x on xs_[1..]
    double c_ = 0.0;
    double eps_ = 0.0;
    double x_max_ = 0.0;
    double end_slope_ = 0.0;  // dpsi/dx at x_max, for linear extension
};

/// Integrates the psi ODE from a seed at `eps` out to `x_max`, sampling
/// `n_nodes` geometric abscissae. The seed psi(eps) = c*eps^{1/3} has c fixed
/// by bisection on the ODE self-consistency residual of the cube-root ansatz.
PsiTable build_psi_table(double eps = 1e-8, double x_max = 1e6, int n_nodes = 800,
                         double tol = 1e-10);

struct ConstantVol {
    double sigma_hat;
};

struct LelandVol {
    double sigma_hat;
    double le;
};

struct BarlesSonerVol {
    double sigma_hat;
    double a;  // risk aversion
    double r;  // rate inside the e^{r tau} factor
    std::shared_ptr<const PsiTable> psi;
};

struct FreyStremmeVol {
    double sigma_hat;
    double rho_f;    // feedback strength
    double lambda0;  // constant liquidity profile, >= 1
};

struct RapmVol {
    double sigma_hat;
    double mu;
};

/// One of five volatility models, evaluable as sigma^2(p, xi, tau) where
/// p is the scaled gamma S^2 V_SS and xi the asset price.
class VolatilitySpec {
public:
    using Model = std::variant<ConstantVol, LelandVol, BarlesSonerVol, FreyStremmeVol, RapmVol>;

    static VolatilitySpec constant(double sigma_hat);
    static VolatilitySpec leland(double sigma_hat, double le);
    static VolatilitySpec barles_soner(double sigma_hat, double a, double r);
    static VolatilitySpec barles_soner(double sigma_hat, double a, double r,
                                       std::shared_ptr<const PsiTable> psi);
    static VolatilitySpec frey_stremme(double sigma_hat, double rho_f, double lambda0);
    static VolatilitySpec rapm(double sigma_hat, double mu);

    double sigma_hat() const;

    /// Config/CSV tag: "constant", "leland", "barles-soner", "frey-stremme", "rapm".
    std::string_view model_name() const;

    const Model& model() const { return model_; }

private:
    explicit VolatilitySpec(Model m) : model_(std::move(m)) {}
    Model model_;
};

/// sigma^2(p, xi, tau) in 1/year. Requires xi > 0 and tau >= 0.
double sigma_squared(const VolatilitySpec& spec, double p, double xi, double tau);

/// mu = 3 (C^2 R / 2 pi)^{1/3} from the transaction cost and risk premium measures.
double rapm_mu(double cost, double risk_premium);

/// Le = sqrt(2/pi) C / (sigma_hat sqrt(dt)).
double leland_constant(double cost, double sigma_hat, double dt);

/// Minimum of sigma^2 + p d(sigma^2)/dp over `samples` points of [p_lo, p_hi],
/// the derivative taken by finite differences (centered inside the range,
/// one-sided at its ends). A positive value certifies parabolicity on the sample.
double parabolicity_margin(const VolatilitySpec& spec, double p_lo, double p_hi, double xi,
                           double tau, int samples = 129);

}  // namespace exbound
