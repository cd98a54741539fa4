#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Post-hoc analytics over simulation traces: liquidity concentration (HHI),
// peg-deviation statistics, first-order correction-model fitting, and the
// per-trade market-impact audit.

namespace pegsim::metrics {

/// Sum of squared shares times 10,000; input must be a normalized
/// nonnegative share vector (sum within 1e-9 of 1).
double hhi(const std::vector<double>& shares);

/// The literal formula on an arbitrary vector, no normalization check.
/// Exists because well-known worked examples square partial share vectors.
double raw_hhi(const std::vector<double>& shares);

enum class ConcentrationBand { Competitive, Moderate, High };
ConcentrationBand hhi_band(double index);  // <1500 / 1500-2500 / >2500
const char* band_name(ConcentrationBand b);

struct BlockRecord {
    std::uint64_t block = 0;
    std::string chain;
    double price = 0.0;
    double deviation = 0.0;
    double c_ratio = 0.0;
    double reserve_a = 0.0;
    double reserve_b = 0.0;
    double arb_volume = 0.0;
    double reward = 0.0;
};

struct TradeRecord {
    std::uint64_t block = 0;
    std::string chain;
    double amount_in = 0.0;
    double reserve_in = 0.0;   // input-side pool depth at execution
    double reserve_out = 0.0;  // opposite reserve at execution
};

struct ScenarioTrace {
    std::vector<BlockRecord> rows;    // one per block per chain, block-ordered
    std::vector<TradeRecord> trades;
    std::vector<std::uint64_t> shock_blocks;
};

struct PegStats {
    double max_abs_deviation = 0.0;
    std::uint64_t blocks_above_half_percent = 0;
    std::optional<double> half_life_blocks;  // absent when no shock is tagged
};

/// Half-life comes from a log-envelope regression of |deviation| on the
/// blocks following the first tagged shock.
PegStats peg_stats(const ScenarioTrace& trace,
                   const std::string& chain = {});

struct CorrectionFit {
    double alpha = 0.0;  // mean-reversion rate (positive = stabilizing)
    double beta = 0.0;   // arbitrage-volume coupling
    double r_squared = 0.0;
};

/// Least squares on the discrete model
///   deviation_{t+1} - deviation_t = -alpha*deviation_t + beta*arb_volume_t.
/// Requires at least 20 blocks with nonzero arbitrage volume.
CorrectionFit fit_correction_model(const ScenarioTrace& trace,
                                   const std::string& chain = {});

/// Bound per trade: (d/L)(1 + sqrt(log(1/eps)/(2L))) with L the input-side
/// reserve; measured impact is amount_in / reserve_out. Returns indices of
/// violating trades.
std::vector<std::size_t> audit_impact_bound(const ScenarioTrace& trace,
                                            double eps = 0.01);

double impact_bound(double amount_in, double reserve_in, double eps);

/// Fixed-schema per-block table; column order is part of the format.
std::string trace_to_csv(const ScenarioTrace& trace);

/// Structured run summary (JSON text).
std::string summarize(const ScenarioTrace& trace);

}  // namespace pegsim::metrics
