#include "pegsim/market_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "pegsim/amm.hpp"

namespace pegsim::market {

double step_reward(double profit, double deviation, const AgentParams& p) {
    double mag = std::max(std::abs(deviation), p.delta_clamp);
    return p.alpha_arb * profit + p.alpha_stab * std::log(1.0 / mag);
}

double discounted_sum(const std::vector<double>& rewards, double gamma) {
    // Horner from the tail keeps this exact for short traces.
    double acc = 0.0;
    for (auto it = rewards.rbegin(); it != rewards.rend(); ++it)
        acc = *it + gamma * acc;
    return acc;
}

double policy_score(const std::vector<std::vector<double>>& reward_traces,
                    const AgentParams& p) {
    if (reward_traces.empty())
        throw std::invalid_argument("policy_score: no replications");
    std::vector<double> sums;
    sums.reserve(reward_traces.size());
    for (const auto& trace : reward_traces)
        sums.push_back(discounted_sum(trace, p.gamma_discount));
    double mean = std::accumulate(sums.begin(), sums.end(), 0.0) /
                  double(sums.size());
    double var = 0.0;
    if (sums.size() > 1) {
        for (double s : sums) var += (s - mean) * (s - mean);
        var /= double(sums.size() - 1);
    }
    return mean - p.lambda_risk * var;
}

std::vector<double> project_to_simplex(std::vector<double> v) {
    // Sort-based projection (Held et al.): find the largest k with
    // u_k + (1 - sum_{i<=k} u_i)/k > 0, then shift and clip.
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0, theta = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cumsum += u[i];
        double t = (cumsum - 1.0) / double(i + 1);
        if (u[i] - t > 0) {
            k = i + 1;
            theta = t;
        }
    }
    (void)k;
    for (double& x : v) x = std::max(0.0, x - theta);
    return v;
}

double hedge_objective(const std::vector<double>& deltas,
                       const std::vector<double>& w, double lambda1) {
    double exposure = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        exposure += w[i] * deltas[i];
        l1 += std::abs(w[i]);
    }
    return exposure * exposure + lambda1 * l1;
}

std::vector<double> hedge_weights(const std::vector<double>& deltas,
                                  double lambda1) {
    (void)lambda1;  // constant on the simplex; kept for the objective report
    std::size_t n = deltas.size();
    if (n == 0) throw std::invalid_argument("hedge_weights: no instruments");
    std::vector<double> w(n, 1.0 / double(n));
    double norm2 = 0.0;
    for (double d : deltas) norm2 += d * d;
    if (norm2 <= 0) return w;  // every point on the simplex is optimal
    double step = 1.0 / (2.0 * norm2);
    for (int it = 0; it < 2000; ++it) {
        double exposure = 0.0;
        for (std::size_t i = 0; i < n; ++i) exposure += w[i] * deltas[i];
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i)
            g[i] = w[i] - step * 2.0 * exposure * deltas[i];
        std::vector<double> next = project_to_simplex(std::move(g));
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            moved += std::abs(next[i] - w[i]);
        w = std::move(next);
        if (moved < 1e-14) break;
    }
    return w;
}

double net_delta(const std::vector<double>& position_deltas) {
    return std::accumulate(position_deltas.begin(), position_deltas.end(), 0.0);
}

bool pid_update(LiquidityAllocation& alloc,
                const std::vector<double>& profit_grad,
                const std::vector<double>& risk_grad, double deviation,
                const AgentParams& p, double dt) {
    if (profit_grad.size() != alloc.levels.size() ||
        risk_grad.size() != alloc.levels.size())
        throw std::invalid_argument("pid_update: gradient dimension mismatch");
    alloc.integral += deviation * dt;
    bool finite = std::isfinite(deviation);
    for (double g : profit_grad) finite = finite && std::isfinite(g);
    for (double g : risk_grad) finite = finite && std::isfinite(g);
    if (!finite) return false;  // frozen for this block
    for (std::size_t i = 0; i < alloc.levels.size(); ++i) {
        double next = alloc.levels[i] + p.kappa * profit_grad[i] -
                      p.mu * risk_grad[i] + p.nu * alloc.integral;
        alloc.levels[i] = std::clamp(next, 0.0, alloc.capital_limit);
    }
    return true;
}

ArbDecision arb_decide(double deviation, double slippage, double latency_ticks,
                       double gas) {
    if (latency_ticks < 1.0)
        throw std::invalid_argument("arb_decide: latency below one tick");
    double margin = (std::abs(deviation) - slippage) / latency_ticks - gas;
    return {margin > 0, margin};
}

double arb_size_bisect(double reserve_asset, double reserve_stable,
                       double deviation, double fee) {
    (void)fee;
    double mag = std::abs(deviation);
    if (mag <= 0) return 0.0;
    // Input side: collateral when the stable asset trades cheap, stable
    // when it trades rich.
    double r_in = deviation < 0 ? reserve_asset : reserve_stable;
    double lo = 0.0, hi = r_in;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        double rel_impact = mid / r_in;
        if (rel_impact <= mag / 2.0)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

void EwmaVolatility::update(double log_return) {
    double sq = log_return * log_return;
    if (!seeded_) {
        var_ = sq;
        seeded_ = true;
    } else {
        var_ = decay_ * var_ + (1.0 - decay_) * sq;
    }
}

double EwmaVolatility::sigma() const { return std::sqrt(var_); }

// --- manipulation game ----------------------------------------------------

namespace {

// Push the pool price up (collateral in) or down (stable in) spending at
// most `budget` input units, capped at a fraction of the input reserve.
void push_price(amm::Pool& pool, bool up, double budget, double reserve_cap) {
    double r_in = up ? pool.reserve_b() : pool.reserve_a();
    double size = std::min(budget, r_in * reserve_cap);
    if (size <= 0) return;
    if (up)
        pool.execute_swap(size);
    else
        pool.execute_swap_stable_in(size);
}

}  // namespace

ManipGameResult manipulation_game(const ManipGameConfig& cfg,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    amm::Pool pool(10000.0, 10000.0, 0, "manip");
    const double peg = 1.0;

    ManipGameResult res;
    res.capital_adequate = cfg.agent_capital >= cfg.adversary_capital;
    std::uint64_t excursion = 0;
    double adv_budget = cfg.adversary_capital * 0.02;
    double agent_budget = cfg.agent_capital * 0.02;

    for (std::uint64_t blk = 0; blk < cfg.horizon_blocks; ++blk) {
        // Retail noise trade, alternating by coin flip.
        double noise_frac = cfg.noise * (0.5 + unit(rng));
        if (unit(rng) < 0.5)
            pool.execute_swap(pool.reserve_b() * noise_frac);
        else
            pool.execute_swap_stable_in(pool.reserve_a() * noise_frac);

        // Adversary acts first in the block (mempool priority).
        double dev = pool.spot_price() / peg - 1.0;
        switch (cfg.adversary) {
            case ManipAdversary::None:
                break;
            case ManipAdversary::FrontRunner:
                // Amplify whatever deviation exists ahead of the correction.
                push_price(pool, dev > 0, adv_budget, 0.2);
                break;
            case ManipAdversary::WashTrader: {
                double s = std::min(adv_budget, pool.reserve_b() * 0.1);
                if (s > 0) {
                    auto leg = pool.execute_swap(s);
                    if (leg.amount_out > 0)
                        pool.execute_swap_stable_in(leg.amount_out);
                }
                push_price(pool, dev > 0, adv_budget * 0.25, 0.2);
                break;
            }
            case ManipAdversary::LiquidityWithdrawer:
                if (pool.reserve_a() > 1000.0) pool.scale_liquidity(0.98);
                push_price(pool, dev > 0, adv_budget, 0.2);
                break;
        }

        // Stabilizing agents trade toward the peg. Several rounds per block:
        // linear sizing undershoots on large dislocations, and in practice
        // more than one arbitrageur fires per block anyway.
        if (cfg.agents_enabled) {
            double budget_left = agent_budget;
            for (int round = 0; round < 4 && budget_left > 0; ++round) {
                dev = pool.spot_price() / peg - 1.0;
                auto decision =
                    arb_decide(dev, std::abs(dev) / 2.0, 1.0, 1e-5);
                if (!decision.execute) break;
                double size = arb_size_bisect(pool.reserve_b(),
                                              pool.reserve_a(), dev);
                size = std::min(size, budget_left);
                if (size <= 0) break;
                if (dev < 0)
                    pool.execute_swap(size);
                else
                    pool.execute_swap_stable_in(size);
                budget_left -= size;
            }
        }

        double end_dev = std::abs(pool.spot_price() / peg - 1.0);
        res.max_abs_deviation = std::max(res.max_abs_deviation, end_dev);
        if (end_dev > 0.005) {
            ++res.blocks_above_threshold;
            ++excursion;
            res.longest_excursion = std::max(res.longest_excursion, excursion);
            if (excursion > cfg.grace_window) res.violation = true;
        } else {
            excursion = 0;
        }
    }
    return res;
}

}  // namespace pegsim::market
