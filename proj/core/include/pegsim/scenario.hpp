#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pegsim/market_ops.hpp"
#include "pegsim/metrics.hpp"
#include "pegsim/vault.hpp"

// End-to-end seeded simulation: per-chain constant-product pools, a price
// shock schedule, stabilizing agents, vault tracking, and delta-neutral
// hedge verification, emitting a fixed-schema trace plus a summary document.

namespace pegsim::scenario {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantBreach : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChainSpec {
    std::string id;
    double reserve_stable = 10000.0;
    double reserve_collateral = 10000.0;
    int fee_bps = 0;
};

struct ShockSpec {
    std::uint64_t block = 0;
    double multiplier = 1.0;  // applied to the stable asset's price
};

struct ScenarioConfig {
    std::uint64_t seed = 42;
    std::uint64_t blocks = 200;
    std::vector<ChainSpec> chains = {{"alpha"}, {"beta"}};
    std::vector<ShockSpec> shocks;
    vault::VaultParams vault_params;
    market::AgentParams agent_params;
    bool agents_enabled = true;
    double agent_capital = 1e5;
    double noise = 0.0005;  // retail trade fraction of reserves per block
    double hedge_tolerance = 1e-3;
    std::uint64_t grace_window = 50;
};

/// Strict parse: unknown keys are errors, and parameters outside their
/// documented ranges (e.g. a liquidation threshold below 1.2) are rejected.
ScenarioConfig parse_config(const std::string& json_text);

ScenarioConfig baseline_config();

struct ScenarioResult {
    metrics::ScenarioTrace trace;
    std::string trace_csv;
    std::string summary_json;
    std::string event_log;  // JSON lines
    bool invariant_breach = false;
    std::string breach_detail;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace pegsim::scenario
