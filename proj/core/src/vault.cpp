#include "pegsim/vault.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace pegsim::vault {

const char* state_name(VaultStateClass s) {
    switch (s) {
        case VaultStateClass::Healthy: return "Healthy";
        case VaultStateClass::Warning: return "Warning";
        case VaultStateClass::Liquidation: return "Liquidation";
    }
    return "?";
}

VaultStateClass classify_state(double c_ratio, const VaultParams& p) {
    if (c_ratio >= p.c_warn) return VaultStateClass::Healthy;
    if (c_ratio >= p.c_min) return VaultStateClass::Warning;
    return VaultStateClass::Liquidation;
}

double sfc_payoff(double p_t, double p_peg, double sigma_t, double alpha,
                  double beta) {
    if (p_peg <= 0) throw std::invalid_argument("sfc_payoff: peg must be > 0");
    double dev = p_peg - p_t;
    double sign = dev > 0 ? 1.0 : (dev < 0 ? -1.0 : 0.0);
    return sign * std::min(alpha * std::abs(dev), beta * sigma_t);
}

void VolatilityEstimator::observe(double price) {
    if (price <= 0) throw std::invalid_argument("volatility: price must be > 0");
    if (last_price_ > 0) {
        log_returns_.push_back(std::log(price / last_price_));
        if (log_returns_.size() > window_)
            log_returns_.erase(log_returns_.begin());
    }
    last_price_ = price;
}

double VolatilityEstimator::sigma() const {
    std::size_t n = log_returns_.size();
    if (n < 2) return 0.0;
    double mean = 0;
    for (double r : log_returns_) mean += r;
    mean /= double(n);
    double ss = 0;
    for (double r : log_returns_) ss += (r - mean) * (r - mean);
    return std::sqrt(ss / double(n - 1));
}

void Vault::deposit_collateral(const std::string& asset, double quantity) {
    if (quantity < 0) throw std::invalid_argument("deposit: negative quantity");
    collateral_[asset] += quantity;
}

void Vault::withdraw_collateral(const std::string& asset, double quantity) {
    auto it = collateral_.find(asset);
    if (it == collateral_.end() || it->second < quantity)
        throw std::invalid_argument("withdraw: insufficient collateral");
    it->second -= quantity;
}

void Vault::set_price(const std::string& asset, double price) {
    if (price <= 0) throw std::invalid_argument("set_price: price must be > 0");
    prices_[asset] = price;
}

double Vault::collateral_quantity(const std::string& asset) const {
    auto it = collateral_.find(asset);
    return it == collateral_.end() ? 0.0 : it->second;
}

double Vault::collateral_value() const {
    double v = 0;
    for (const auto& [asset, qty] : collateral_) {
        auto p = prices_.find(asset);
        if (p == prices_.end())
            throw std::logic_error("collateral_value: missing price for " + asset);
        v += qty * p->second;
    }
    return v;
}

double Vault::collateral_ratio() const {
    double liab_value = liabilities_sfc_ * params_.p_peg;
    if (liab_value <= 0) return std::numeric_limits<double>::infinity();
    return collateral_value() / liab_value;
}

double Vault::mint_quantity(double locked_value, double deviation, double sigma,
                            const VaultParams& p) {
    double boost = p.alpha * deviation / (1.0 + p.gamma * sigma * sigma);
    return locked_value / p.p_peg * (1.0 + boost);
}

double Vault::mint_sfc(double locked_value, double deviation, double sigma) {
    if (locked_value <= 0)
        throw std::invalid_argument("mint: locked value must be > 0");
    if (insolvent_) throw std::runtime_error("mint: vault is insolvent");
    double q = mint_quantity(locked_value, deviation, sigma, params_);
    double post_ratio =
        collateral_value() / ((liabilities_sfc_ + q) * params_.p_peg);
    if (post_ratio < params_.c_min)
        throw std::runtime_error("mint rejected: would breach c_min");
    liabilities_sfc_ += q;
    return q;
}

void Vault::burn_liabilities(double quantity) {
    if (quantity < 0 || quantity > liabilities_sfc_ + 1e-9)
        throw std::invalid_argument("burn: bad quantity");
    liabilities_sfc_ = std::max(0.0, liabilities_sfc_ - quantity);
}

double Vault::liquidate_partial(double recovery_floor,
                                double execution_price_ratio) {
    double c = collateral_ratio();
    if (c >= params_.c_min)
        throw std::invalid_argument("liquidate: ratio at or above c_min");
    double v = collateral_value();
    double w = liabilities_sfc_ * params_.p_peg;  // liability value
    if (execution_price_ratio >= recovery_floor) {
        // Every unit retired costs more than it helps; closure cannot reach
        // the floor.
        insolvent_ = true;
        return 0.0;
    }
    // Solve (v - dw*cost) / (w - dw) = floor for the liability value dw.
    double dw = (recovery_floor * w - v) / (recovery_floor - execution_price_ratio);
    dw = std::min(dw, w);
    double spend = dw * execution_price_ratio;
    if (spend >= v) {
        spend = v;
        dw = spend / execution_price_ratio;
        insolvent_ = true;
    }
    double factor = v > 0 ? (1.0 - spend / v) : 0.0;
    for (auto& [asset, qty] : collateral_) qty *= factor;
    double burned = dw / params_.p_peg;
    liabilities_sfc_ = std::max(0.0, liabilities_sfc_ - burned);
    if (collateral_ratio() < recovery_floor &&
        collateral_value() <= 1e-12)
        insolvent_ = true;
    return burned;
}

// --- rebalancing optimizer ----------------------------------------------

double rebalance_objective(const Eigen::VectorXd& grad_target,
                           const Eigen::MatrixXd& jacobian,
                           const Eigen::VectorXd& delta, double lambda) {
    return (grad_target - jacobian * delta).squaredNorm() +
           lambda * delta.lpNorm<1>();
}

RebalanceResult rebalance(const Eigen::VectorXd& grad_target,
                          const Eigen::MatrixXd& jacobian, double lambda,
                          int max_iterations, double tol) {
    RebalanceResult result;
    const auto n = jacobian.cols();
    result.delta = Eigen::VectorXd::Zero(n);
    if (n == 0 || jacobian.rows() == 0) {
        result.degenerate = true;
        return result;
    }
    double smax2 = jacobian.squaredNorm() > 0
                       ? Eigen::JacobiSVD<Eigen::MatrixXd>(jacobian)
                             .singularValues()[0]
                       : 0.0;
    smax2 *= smax2;
    if (smax2 <= 0) {
        result.degenerate = true;
        result.objective = rebalance_objective(grad_target, jacobian,
                                               result.delta, lambda);
        return result;
    }
    double step = 1.0 / (2.0 * smax2);
    double prev = rebalance_objective(grad_target, jacobian, result.delta, lambda);
    for (int it = 0; it < max_iterations; ++it) {
        Eigen::VectorXd grad =
            2.0 * jacobian.transpose() * (jacobian * result.delta - grad_target);
        Eigen::VectorXd v = result.delta - step * grad;
        double thresh = step * lambda;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            double x = v[i];
            v[i] = (x > thresh) ? x - thresh : (x < -thresh ? x + thresh : 0.0);
        }
        result.delta = v;
        double obj = rebalance_objective(grad_target, jacobian, result.delta, lambda);
        result.iterations = it + 1;
        if (std::abs(prev - obj) < tol) {
            prev = obj;
            break;
        }
        prev = obj;
    }
    result.objective = prev;
    return result;
}

// --- solvency game -------------------------------------------------------

SolvencyGameResult solvency_game(const SolvencyGameConfig& cfg,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Vault vault;  // default thresholds 1.2 / 1.3
    const std::string col = "COL";
    double true_price = 1.0;
    vault.set_price(col, true_price);
    vault.deposit_collateral(col, 130.0);
    vault.mint_sfc(100.0, 0.0, 0.0);  // opening ratio C_0 = 1.3

    SolvencyGameResult res;
    std::vector<bool> flags(cfg.horizon_blocks, false);
    VolatilityEstimator vol(30);
    vol.observe(true_price);

    for (std::uint64_t blk = 0; blk < cfg.horizon_blocks; ++blk) {
        // True price moves within +/-2% per block.
        true_price *= 1.0 + (unit(rng) * 2.0 - 1.0) * 0.02;
        vol.observe(true_price);

        // Oracle reading, possibly erroneous (flagged when it is).
        double oracle_price = true_price;
        bool flagged = false;
        if (cfg.oracle_error_rate > 0 && unit(rng) < cfg.oracle_error_rate) {
            double err = (unit(rng) * 2.0 - 1.0) * cfg.oracle_error_bound;
            if (cfg.adversary == SolvencyAdversary::PriceManipulator)
                err = cfg.oracle_error_bound;  // worst case: overstate value
            oracle_price = true_price * (1.0 + err);
            flagged = true;
        }
        flags[blk] = flagged;
        if (flagged) ++res.flagged_blocks;
        vault.set_price(col, oracle_price);

        // Adversary turn.
        switch (cfg.adversary) {
            case SolvencyAdversary::Idle:
                break;
            case SolvencyAdversary::PriceManipulator:
            case SolvencyAdversary::MintSpammer: {
                int attempts = cfg.adversary == SolvencyAdversary::MintSpammer ? 8 : 2;
                for (int i = 0; i < attempts; ++i) {
                    double v_t = unit(rng) * 50.0 + 1.0;
                    double dev = (oracle_price - 1.0);
                    // Depositor locks value v_t (valued at oracle price),
                    // then mints against it.
                    vault.deposit_collateral(col, v_t / oracle_price);
                    try {
                        vault.mint_sfc(v_t, dev, vol.sigma());
                    } catch (const std::runtime_error&) {
                        vault.withdraw_collateral(col, v_t / oracle_price);
                    }
                }
                break;
            }
            case SolvencyAdversary::LiquidationTrigger: {
                try {
                    vault.liquidate_partial();
                } catch (const std::invalid_argument&) {
                    // precondition unmet; rejected
                }
                break;
            }
        }

        // Diagnostic checkpoint before the challenger responds: did the
        // adversary manage to push the true ratio under the threshold?
        auto true_ratio_now = [&] {
            double liab_value = vault.liabilities() * vault.params().p_peg;
            return liab_value > 0
                       ? vault.collateral_quantity(col) * true_price / liab_value
                       : std::numeric_limits<double>::infinity();
        };
        {
            double pre = true_ratio_now();
            res.min_true_ratio = std::min(res.min_true_ratio, pre);
            if (pre < vault.params().c_min) res.any_undercollateral = true;
        }

        // Challenger: rebalance inside the warning band, liquidate below it.
        if (cfg.rebalancing_enabled) {
            double c = vault.collateral_ratio();
            if (c < vault.params().c_min) {
                vault.liquidate_partial(1.25, 1.005);
                c = vault.collateral_ratio();
            }
            if (c < vault.params().c_warn &&
                std::isfinite(c) && !vault.insolvent()) {
                // Burn liabilities at a 0.5% execution cost back to c_warn.
                double v = vault.collateral_value();
                double w = vault.liabilities() * vault.params().p_peg;
                double cost = 1.005;
                double target = vault.params().c_warn;
                double dw = (target * w - v) / (target - cost);
                dw = std::clamp(dw, 0.0, w);
                double spend = dw * cost;
                if (spend < v) {
                    double factor = 1.0 - spend / v;
                    double qty = vault.collateral_quantity(col);
                    vault.withdraw_collateral(col, qty * (1.0 - factor));
                    vault.burn_liabilities(dw / vault.params().p_peg);
                }
            }
        }

        // Violation is judged after the challenger had its turn.
        double true_ratio = true_ratio_now();
        res.min_true_ratio = std::min(res.min_true_ratio, true_ratio);
        if (true_ratio < vault.params().c_min) {
            res.any_undercollateral = true;
            bool recent_flag = false;
            std::uint64_t lo = blk >= cfg.lookback_window
                                   ? blk - cfg.lookback_window
                                   : 0;
            for (std::uint64_t k = lo; k <= blk; ++k)
                if (flags[k]) recent_flag = true;
            if (!recent_flag && cfg.rebalancing_enabled) res.violation = true;
        }
    }
    return res;
}

}  // namespace pegsim::vault
