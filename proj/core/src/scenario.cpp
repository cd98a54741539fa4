#include "pegsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "pegsim/amm.hpp"
#include "pegsim/chain_sim.hpp"

namespace pegsim::scenario {

using nlohmann::json;

namespace {

void require_keys(const json& j, const char* where,
                  std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok)
            throw ConfigError(std::string(where) + ": unknown key '" +
                              it.key() + "'");
    }
}

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw ConfigError(std::string(key) + ": expected a number");
    return j[key].get<double>();
}

}  // namespace

ScenarioConfig baseline_config() {
    ScenarioConfig cfg;
    cfg.shocks.push_back({100, 0.95});
    return cfg;
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    require_keys(j, "config",
                 {"seed", "blocks", "chains", "shocks", "vault", "agents",
                  "agents_enabled", "agent_capital", "noise",
                  "hedge_tolerance", "grace_window"});

    ScenarioConfig cfg;
    cfg.chains.clear();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("blocks")) cfg.blocks = j["blocks"].get<std::uint64_t>();
    if (cfg.blocks == 0) throw ConfigError("blocks: must be positive");

    if (j.contains("chains")) {
        if (!j["chains"].is_array() || j["chains"].empty())
            throw ConfigError("chains: expected a non-empty array");
        for (const auto& c : j["chains"]) {
            require_keys(c, "chain",
                         {"id", "reserve_stable", "reserve_collateral",
                          "fee_bps"});
            ChainSpec spec;
            if (!c.contains("id")) throw ConfigError("chain: missing id");
            spec.id = c["id"].get<std::string>();
            spec.reserve_stable = get_num(c, "reserve_stable", spec.reserve_stable);
            spec.reserve_collateral =
                get_num(c, "reserve_collateral", spec.reserve_collateral);
            spec.fee_bps = int(get_num(c, "fee_bps", 0));
            if (spec.reserve_stable <= 0 || spec.reserve_collateral <= 0)
                throw ConfigError("chain " + spec.id +
                                  ": reserves must be positive");
            if (spec.fee_bps < 0 || spec.fee_bps >= 10000)
                throw ConfigError("chain " + spec.id + ": fee out of range");
            cfg.chains.push_back(spec);
        }
    } else {
        cfg.chains = {{"alpha"}, {"beta"}};
    }

    if (j.contains("shocks")) {
        for (const auto& s : j["shocks"]) {
            require_keys(s, "shock", {"block", "multiplier"});
            ShockSpec spec;
            spec.block = s.at("block").get<std::uint64_t>();
            spec.multiplier = s.at("multiplier").get<double>();
            if (spec.multiplier <= 0.5 || spec.multiplier >= 2.0)
                throw ConfigError("shock: multiplier out of range (0.5, 2.0)");
            cfg.shocks.push_back(spec);
        }
    }

    if (j.contains("vault")) {
        const auto& v = j["vault"];
        require_keys(v, "vault",
                     {"c_min", "c_warn", "alpha", "gamma", "beta", "p_peg"});
        auto& p = cfg.vault_params;
        p.c_min = get_num(v, "c_min", p.c_min);
        p.c_warn = get_num(v, "c_warn", p.c_warn);
        p.alpha = get_num(v, "alpha", p.alpha);
        p.gamma = get_num(v, "gamma", p.gamma);
        p.beta = get_num(v, "beta", p.beta);
        p.p_peg = get_num(v, "p_peg", p.p_peg);
        if (p.c_min < 1.2)
            throw ConfigError("vault.c_min: below the 1.2 mandate");
        if (p.c_warn < p.c_min)
            throw ConfigError("vault.c_warn: must be at least c_min");
        if (p.gamma < 0) throw ConfigError("vault.gamma: must be nonnegative");
        if (p.p_peg <= 0) throw ConfigError("vault.p_peg: must be positive");
    }

    if (j.contains("agents")) {
        const auto& a = j["agents"];
        require_keys(a, "agents",
                     {"gamma_discount", "lambda_risk", "alpha_arb",
                      "alpha_stab", "kappa", "mu", "nu", "lambda1",
                      "delta_clamp"});
        auto& p = cfg.agent_params;
        p.gamma_discount = get_num(a, "gamma_discount", p.gamma_discount);
        p.lambda_risk = get_num(a, "lambda_risk", p.lambda_risk);
        p.alpha_arb = get_num(a, "alpha_arb", p.alpha_arb);
        p.alpha_stab = get_num(a, "alpha_stab", p.alpha_stab);
        p.kappa = get_num(a, "kappa", p.kappa);
        p.mu = get_num(a, "mu", p.mu);
        p.nu = get_num(a, "nu", p.nu);
        p.lambda1 = get_num(a, "lambda1", p.lambda1);
        p.delta_clamp = get_num(a, "delta_clamp", p.delta_clamp);
        if (p.gamma_discount <= 0 || p.gamma_discount >= 1)
            throw ConfigError("agents.gamma_discount: must lie in (0, 1)");
        if (p.delta_clamp <= 0)
            throw ConfigError("agents.delta_clamp: must be positive");
    }

    if (j.contains("agents_enabled"))
        cfg.agents_enabled = j["agents_enabled"].get<bool>();
    cfg.agent_capital = get_num(j, "agent_capital", cfg.agent_capital);
    cfg.noise = get_num(j, "noise", cfg.noise);
    cfg.hedge_tolerance = get_num(j, "hedge_tolerance", cfg.hedge_tolerance);
    if (j.contains("grace_window"))
        cfg.grace_window = j["grace_window"].get<std::uint64_t>();
    if (cfg.agent_capital <= 0)
        throw ConfigError("agent_capital: must be positive");
    if (cfg.noise < 0 || cfg.noise > 0.05)
        throw ConfigError("noise: out of range [0, 0.05]");
    return cfg;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ScenarioResult res;
    chain::EventLog events;

    std::vector<amm::Pool> pools;
    for (const auto& c : cfg.chains)
        pools.emplace_back(c.reserve_stable, c.reserve_collateral, c.fee_bps,
                           c.id);

    vault::Vault vlt(cfg.vault_params);
    vlt.set_price("COL", 1.0);
    vlt.deposit_collateral("COL", 130000.0);
    vlt.mint_sfc(100000.0 * cfg.vault_params.p_peg, 0.0, 0.0);
    vault::VolatilityEstimator vol(cfg.vault_params.vol_window);
    vol.observe(1.0);

    const double peg = 1.0;
    double agent_budget = cfg.agent_capital * 0.02;

    try {
        for (std::uint64_t blk = 0; blk < cfg.blocks; ++blk) {
            // Exogenous shocks hit the stable asset's price directly.
            for (const auto& s : cfg.shocks) {
                if (s.block != blk) continue;
                for (auto& p : pools)
                    p = amm::Pool(p.reserve_a(), p.reserve_b() * s.multiplier,
                                  p.fee_bps(), p.chain_id());
                if (std::find(res.trace.shock_blocks.begin(),
                              res.trace.shock_blocks.end(),
                              blk) == res.trace.shock_blocks.end())
                    res.trace.shock_blocks.push_back(blk);
                events.record(json{{"event", "shock"},
                                   {"block", blk},
                                   {"multiplier", s.multiplier}}
                                  .dump());
            }

            for (std::size_t ci = 0; ci < pools.size(); ++ci) {
                auto& pool = pools[ci];

                // Retail noise flow.
                if (cfg.noise > 0) {
                    double frac = cfg.noise * (0.5 + unit(rng));
                    if (unit(rng) < 0.5)
                        pool.execute_swap(pool.reserve_b() * frac);
                    else
                        pool.execute_swap_stable_in(pool.reserve_a() * frac);
                }

                double arb_volume = 0.0, profit = 0.0;
                if (cfg.agents_enabled) {
                    double dev = pool.spot_price() / peg - 1.0;
                    auto decision =
                        market::arb_decide(dev, std::abs(dev) / 2.0, 1.0, 1e-5);
                    if (decision.execute) {
                        // Half the full-correction size: the deviation decays
                        // geometrically instead of snapping to the peg, so
                        // the agent never overshoots against latency risk.
                        double size = 0.5 * market::arb_size_bisect(
                                                pool.reserve_b(),
                                                pool.reserve_a(), dev);
                        size = std::min(size, agent_budget);
                        if (size > 0) {
                            metrics::TradeRecord tr;
                            tr.block = blk;
                            tr.chain = pool.chain_id();
                            tr.amount_in = size;
                            if (dev < 0) {
                                tr.reserve_in = pool.reserve_b();
                                tr.reserve_out = pool.reserve_a();
                                pool.execute_swap(size);
                            } else {
                                tr.reserve_in = pool.reserve_a();
                                tr.reserve_out = pool.reserve_b();
                                pool.execute_swap_stable_in(size);
                            }
                            res.trace.trades.push_back(tr);
                            arb_volume = size;
                            profit = std::abs(dev) / 2.0 * size;
                            events.record(json{{"event", "arb"},
                                               {"block", blk},
                                               {"chain", pool.chain_id()},
                                               {"size", size}}
                                              .dump());
                        }
                    }
                }

                double price = pool.spot_price();
                double deviation = price / peg - 1.0;

                if (ci == 0) {
                    // Vault marks collateral in stable units off chain 0.
                    double col_price = 1.0 / price;
                    vlt.set_price("COL", col_price);
                    vol.observe(col_price);
                }

                metrics::BlockRecord row;
                row.block = blk;
                row.chain = pool.chain_id();
                row.price = price;
                row.deviation = deviation;
                row.c_ratio = vlt.collateral_ratio();
                row.reserve_a = pool.reserve_a();
                row.reserve_b = pool.reserve_b();
                row.arb_volume = arb_volume;
                row.reward = market::step_reward(profit, deviation,
                                                 cfg.agent_params);
                res.trace.rows.push_back(row);
            }

            // Cross-chain arbitrage narrows any price gap between pools.
            for (std::size_t i = 0; i + 1 < pools.size(); ++i) {
                for (std::size_t k = i + 1; k < pools.size(); ++k) {
                    double pi = pools[i].spot_price();
                    double pk = pools[k].spot_price();
                    if (std::abs(pi - pk) < 1e-3 || !cfg.agents_enabled)
                        continue;
                    auto& rich = pi > pk ? pools[i] : pools[k];
                    auto& cheap = pi > pk ? pools[k] : pools[i];
                    double gap = std::abs(pi - pk) / std::max(pi, pk);
                    double sell = std::min(rich.reserve_a() * gap / 4.0,
                                           agent_budget);
                    double buy = std::min(cheap.reserve_b() * gap / 4.0,
                                          agent_budget);
                    if (sell > 0) rich.execute_swap_stable_in(sell);
                    if (buy > 0) cheap.execute_swap(buy);
                    events.record(json{{"event", "cross_chain_swap"},
                                       {"block", blk},
                                       {"sell_on", rich.chain_id()},
                                       {"buy_on", cheap.chain_id()},
                                       {"size", sell}}
                                      .dump());
                }
            }

            // Delta-neutral hedge check: one unit of collateral plus one
            // stabilization contract, futures leg sized to cancel both.
            double p0 = 1.0 / pools[0].spot_price();
            double h = 1e-5;
            double d_sfc =
                (vault::sfc_payoff(p0 + h, cfg.vault_params.p_peg, vol.sigma(),
                                   cfg.vault_params.alpha, cfg.vault_params.beta) -
                 vault::sfc_payoff(p0 - h, cfg.vault_params.p_peg, vol.sigma(),
                                   cfg.vault_params.alpha, cfg.vault_params.beta)) /
                (2 * h);
            double futures = -(1.0 + d_sfc);
            double exposure = market::net_delta({1.0, d_sfc, futures});
            double gross = 1.0 + std::abs(d_sfc) + std::abs(futures);
            if (std::abs(exposure) > cfg.hedge_tolerance * gross)
                throw InvariantBreach("hedge exposure above tolerance at block " +
                                      std::to_string(blk));
        }
    } catch (const InvariantBreach& e) {
        res.invariant_breach = true;
        res.breach_detail = e.what();
        events.record(json{{"event", "invariant_breach"},
                           {"detail", e.what()}}
                          .dump());
    }

    res.trace_csv = metrics::trace_to_csv(res.trace);
    res.summary_json = metrics::summarize(res.trace);
    res.event_log = events.joined();
    return res;
}

}  // namespace pegsim::scenario
