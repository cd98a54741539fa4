#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Stabilization vault: collateral accounting, volatility-damped minting,
// dual-threshold classification, L1-regularized rebalancing, partial
// liquidation, and the solvency game harness.

namespace pegsim::vault {

struct VaultParams {
    double c_min = 1.2;   // liquidation threshold
    double c_warn = 1.3;  // warning threshold
    double alpha = 0.5;   // mint boost responsiveness
    double gamma = 2.0;   // volatility damping weight
    double beta = 1.0;    // payoff volatility cap
    double p_peg = 1.0;
    std::size_t vol_window = 30;
};

enum class VaultStateClass { Healthy, Warning, Liquidation };

const char* state_name(VaultStateClass s);

/// Healthy iff C >= 1.3, Warning iff 1.2 <= C < 1.3, Liquidation iff C < 1.2.
VaultStateClass classify_state(double c_ratio, const VaultParams& p = {});

/// Phi = sgn(P_peg - P_t) * min(alpha*|P_t - P_peg|, beta*sigma_t).
double sfc_payoff(double p_t, double p_peg, double sigma_t, double alpha,
                  double beta);

/// Sample standard deviation of log returns over a trailing window.
class VolatilityEstimator {
  public:
    explicit VolatilityEstimator(std::size_t window = 30) : window_(window) {}
    void observe(double price);
    double sigma() const;

  private:
    std::size_t window_;
    std::vector<double> log_returns_;
    double last_price_ = 0.0;
};

class Vault {
  public:
    explicit Vault(VaultParams params = {}) : params_(params) {}

    const VaultParams& params() const { return params_; }

    void deposit_collateral(const std::string& asset, double quantity);
    void withdraw_collateral(const std::string& asset, double quantity);
    void set_price(const std::string& asset, double price);
    double collateral_quantity(const std::string& asset) const;
    double collateral_value() const;

    double liabilities() const { return liabilities_sfc_; }
    bool insolvent() const { return insolvent_; }

    /// +inf sentinel when there are no liabilities.
    double collateral_ratio() const;
    VaultStateClass state() const { return classify_state(collateral_ratio(), params_); }

    /// Q = (V/P_peg) * (1 + alpha*delta / (1 + gamma*sigma^2)), gated on the
    /// post-mint ratio staying at or above c_min. Returns minted quantity or
    /// throws std::invalid_argument / std::runtime_error on gate failure.
    double mint_sfc(double locked_value, double deviation, double sigma);

    /// Formula value without the solvency gate (oracle surface for tests).
    static double mint_quantity(double locked_value, double deviation,
                                double sigma, const VaultParams& p);

    void burn_liabilities(double quantity);

    /// Partial closure toward the recovery floor: burns liabilities by
    /// selling collateral at `execution_price_ratio` (cost per unit of
    /// liability value retired, >= 1 means slippage). Returns liabilities
    /// closed; flags insolvency when the floor is unreachable.
    double liquidate_partial(double recovery_floor = 1.25,
                             double execution_price_ratio = 1.0);

  private:
    VaultParams params_;
    std::map<std::string, double> collateral_;  // asset -> quantity
    std::map<std::string, double> prices_;
    double liabilities_sfc_ = 0.0;
    bool insolvent_ = false;
};

/// min_delta ||grad_target - J*delta||^2 + lambda*||delta||_1 via ISTA
/// (proximal gradient with fixed step 1/(2*sigma_max(J)^2)).
struct RebalanceResult {
    Eigen::VectorXd delta;
    double objective = 0.0;
    int iterations = 0;
    bool degenerate = false;  // empty/rank-0 jacobian; delta is zero
};

RebalanceResult rebalance(const Eigen::VectorXd& grad_target,
                          const Eigen::MatrixXd& jacobian, double lambda = 0.7,
                          int max_iterations = 500, double tol = 1e-8);

double rebalance_objective(const Eigen::VectorXd& grad_target,
                           const Eigen::MatrixXd& jacobian,
                           const Eigen::VectorXd& delta, double lambda);

// --- solvency game -------------------------------------------------------

enum class SolvencyAdversary { Idle, PriceManipulator, MintSpammer, LiquidationTrigger };

struct SolvencyGameConfig {
    SolvencyAdversary adversary = SolvencyAdversary::PriceManipulator;
    double oracle_error_rate = 0.0;  // probability an oracle reading errs
    double oracle_error_bound = 0.05;
    std::uint64_t horizon_blocks = 60;
    std::uint64_t lookback_window = 5;
    bool rebalancing_enabled = true;
};

struct SolvencyGameResult {
    bool violation = false;          // true C dipped below c_min, unflagged
    bool any_undercollateral = false;
    std::uint64_t flagged_blocks = 0;
    double min_true_ratio = std::numeric_limits<double>::infinity();
};

SolvencyGameResult solvency_game(const SolvencyGameConfig& cfg,
                                 std::uint64_t seed);

}  // namespace pegsim::vault
