#pragma once

#include <cstdint>
#include <optional>
#include <vector>

// Autonomous market-operator logic: mean-variance policy scoring,
// delta-neutral hedge weights on the simplex, PID liquidity allocation,
// the arbitrage execution rule, and the peg-manipulation game harness.

namespace pegsim::market {

struct AgentParams {
    double gamma_discount = 0.95;
    double lambda_risk = 2.5;
    double alpha_arb = 1.0;
    double alpha_stab = 1.0;
    double kappa = 0.3;  // proportional gain on profit gradient
    double mu = 1.1;     // damping gain on risk gradient
    double nu = 0.05;    // integral gain on deviation history
    double lambda1 = 0.7;
    double delta_clamp = 1e-6;
};

/// R_t = alpha_arb*profit + alpha_stab*log(1/|deviation|), |deviation|
/// clamped below by delta_clamp.
double step_reward(double profit, double deviation, const AgentParams& p = {});

/// Mean minus lambda_risk times sample variance (n-1) of the discounted
/// reward sums, one sum per replication. A single replication scores with
/// variance zero.
double policy_score(const std::vector<std::vector<double>>& reward_traces,
                    const AgentParams& p = {});

double discounted_sum(const std::vector<double>& rewards, double gamma);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::vector<double> v);

/// min_w (sum w_i d_i)^2 + lambda1*||w||_1 over the simplex, by projected
/// gradient descent. On the simplex the L1 term is the constant lambda1, so
/// the quadratic exposure term alone picks the minimizer; sparsity shows up
/// through boundary solutions.
std::vector<double> hedge_weights(const std::vector<double>& deltas,
                                  double lambda1 = 0.7);

double hedge_objective(const std::vector<double>& deltas,
                       const std::vector<double>& w, double lambda1);

/// Total price sensitivity of a position list.
double net_delta(const std::vector<double>& position_deltas);

struct LiquidityAllocation {
    std::vector<double> levels;
    double integral = 0.0;  // running sum of deviation * dt
    double capital_limit = 0.0;
};

/// L_i += kappa*profit_grad_i - mu*risk_grad_i + nu*integral, after the
/// integral accumulator advances by deviation*dt. Levels clip to
/// [0, capital_limit]. Returns false (allocation frozen, accumulator still
/// advanced) when any gradient is non-finite.
bool pid_update(LiquidityAllocation& alloc,
                const std::vector<double>& profit_grad,
                const std::vector<double>& risk_grad, double deviation,
                const AgentParams& p = {}, double dt = 1.0);

struct ArbDecision {
    bool execute = false;
    double expected_profit = 0.0;
};

/// Execute iff (|deviation| - slippage)/latency - gas > 0.
ArbDecision arb_decide(double deviation, double slippage, double latency_ticks,
                       double gas);

/// Largest stable-side input whose relative price impact stays at or below
/// half the current deviation, found by bisection on [0, reserve_stable].
double arb_size_bisect(double reserve_asset, double reserve_stable,
                       double deviation, double fee = 0.0);

/// Exponentially weighted volatility of a return feed (decay 0.94).
class EwmaVolatility {
  public:
    explicit EwmaVolatility(double decay = 0.94) : decay_(decay) {}
    void update(double log_return);
    double sigma() const;

  private:
    double decay_;
    double var_ = 0.0;
    bool seeded_ = false;
};

// --- manipulation game ----------------------------------------------------

enum class ManipAdversary { None, FrontRunner, WashTrader, LiquidityWithdrawer };

struct ManipGameConfig {
    ManipAdversary adversary = ManipAdversary::None;
    std::uint64_t horizon_blocks = 200;
    std::uint64_t grace_window = 50;  // blocks |deviation| > 0.5% may persist
    bool agents_enabled = true;
    double agent_capital = 1e5;
    double adversary_capital = 1e4;
    double noise = 0.0005;  // retail trade size as a fraction of reserves
};

struct ManipGameResult {
    bool violation = false;        // threshold breached past the grace window
    bool capital_adequate = true;  // agents at least matched adversary capital
    double max_abs_deviation = 0.0;
    std::uint64_t blocks_above_threshold = 0;
    std::uint64_t longest_excursion = 0;
};

ManipGameResult manipulation_game(const ManipGameConfig& cfg, std::uint64_t seed);

}  // namespace pegsim::market
