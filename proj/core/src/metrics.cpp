#include "pegsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace pegsim::metrics {

using nlohmann::json;

double raw_hhi(const std::vector<double>& shares) {
    double s = 0.0;
    // Scale each share before squaring: (x*10000)*x lands on the exact
    // index value for decimal shares, (x*x)*10000 rounds one ulp short.
    for (double x : shares) s += (x * 10000.0) * x;
    return s;
}

double hhi(const std::vector<double>& shares) {
    if (shares.empty()) throw std::invalid_argument("hhi: empty shares");
    double sum = 0.0;
    for (double x : shares) {
        if (x < 0) throw std::invalid_argument("hhi: negative share");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("hhi: shares not normalized");
    return raw_hhi(shares);
}

ConcentrationBand hhi_band(double index) {
    if (index < 1500.0) return ConcentrationBand::Competitive;
    if (index <= 2500.0) return ConcentrationBand::Moderate;
    return ConcentrationBand::High;
}

const char* band_name(ConcentrationBand b) {
    switch (b) {
        case ConcentrationBand::Competitive: return "competitive";
        case ConcentrationBand::Moderate: return "moderate";
        case ConcentrationBand::High: return "high";
    }
    return "?";
}

namespace {

// Rows for one chain in block order; empty chain id means "first chain seen".
std::vector<const BlockRecord*> chain_rows(const ScenarioTrace& trace,
                                           std::string chain) {
    if (chain.empty() && !trace.rows.empty()) chain = trace.rows.front().chain;
    std::vector<const BlockRecord*> out;
    for (const auto& r : trace.rows)
        if (r.chain == chain) out.push_back(&r);
    return out;
}

}  // namespace

PegStats peg_stats(const ScenarioTrace& trace, const std::string& chain) {
    auto rows = chain_rows(trace, chain);
    if (rows.empty()) throw std::invalid_argument("peg_stats: empty trace");
    PegStats st;
    for (const auto* r : rows) {
        double d = std::abs(r->deviation);
        st.max_abs_deviation = std::max(st.max_abs_deviation, d);
        if (d > 0.005) ++st.blocks_above_half_percent;
    }
    if (trace.shock_blocks.empty()) return st;

    std::uint64_t shock = trace.shock_blocks.front();
    // Regress log|deviation| against blocks-since-shock over the decay tail.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto* r : rows) {
        if (r->block < shock) continue;
        double d = std::abs(r->deviation);
        if (d < 1e-9) break;  // decayed into the noise floor
        double x = double(r->block - shock);
        double y = std::log(d);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n >= 2) {
        double denom = double(n) * sxx - sx * sx;
        if (std::abs(denom) > 1e-12) {
            double slope = (double(n) * sxy - sx * sy) / denom;
            if (slope < 0) st.half_life_blocks = std::log(2.0) / (-slope);
        }
    }
    return st;
}

CorrectionFit fit_correction_model(const ScenarioTrace& trace,
                                   const std::string& chain) {
    auto rows = chain_rows(trace, chain);
    if (rows.size() < 2)
        throw std::invalid_argument("correction fit: trace too short");
    std::size_t nonzero = 0;
    for (const auto* r : rows)
        if (r->arb_volume != 0.0) ++nonzero;
    if (nonzero < 20)
        throw std::invalid_argument(
            "correction fit: fewer than 20 blocks with arbitrage volume");

    // y_t = -alpha*x1_t + beta*x2_t with x1 = deviation, x2 = arb volume.
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    std::vector<double> ys;
    std::vector<std::pair<double, double>> xs;
    for (std::size_t t = 0; t + 1 < rows.size(); ++t) {
        double x1 = rows[t]->deviation;
        double x2 = rows[t]->arb_volume;
        double y = rows[t + 1]->deviation - rows[t]->deviation;
        a11 += x1 * x1; a12 += x1 * x2; a22 += x2 * x2;
        b1 += x1 * y; b2 += x2 * y;
        ys.push_back(y);
        xs.emplace_back(x1, x2);
    }
    double det = a11 * a22 - a12 * a12;
    if (std::abs(det) < 1e-18)
        throw std::invalid_argument("correction fit: degenerate regressors");
    double c1 = (a22 * b1 - a12 * b2) / det;  // coefficient on deviation
    double c2 = (a11 * b2 - a12 * b1) / det;

    CorrectionFit fit;
    fit.alpha = -c1;
    fit.beta = c2;
    double ybar = 0;
    for (double y : ys) ybar += y;
    ybar /= double(ys.size());
    double ss_tot = 0, ss_res = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        double pred = c1 * xs[i].first + c2 * xs[i].second;
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
    return fit;
}

double impact_bound(double amount_in, double reserve_in, double eps) {
    if (reserve_in <= 0 || eps <= 0 || eps >= 1)
        throw std::invalid_argument("impact_bound: bad inputs");
    return amount_in / reserve_in *
           (1.0 + std::sqrt(std::log(1.0 / eps) / (2.0 * reserve_in)));
}

std::vector<std::size_t> audit_impact_bound(const ScenarioTrace& trace,
                                            double eps) {
    std::vector<std::size_t> violations;
    for (std::size_t i = 0; i < trace.trades.size(); ++i) {
        const auto& t = trace.trades[i];
        if (t.reserve_out <= 0) continue;
        double measured = t.amount_in / t.reserve_out;
        if (measured > impact_bound(t.amount_in, t.reserve_in, eps))
            violations.push_back(i);
    }
    return violations;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string trace_to_csv(const ScenarioTrace& trace) {
    std::string out =
        "block,chain,price,deviation,c_ratio,reserve_a,reserve_b,arb_volume,"
        "reward\n";
    for (const auto& r : trace.rows) {
        out += std::to_string(r.block);
        out += ',';
        out += r.chain;
        out += ',';
        out += fmt(r.price); out += ',';
        out += fmt(r.deviation); out += ',';
        out += fmt(r.c_ratio); out += ',';
        out += fmt(r.reserve_a); out += ',';
        out += fmt(r.reserve_b); out += ',';
        out += fmt(r.arb_volume); out += ',';
        out += fmt(r.reward);
        out += '\n';
    }
    return out;
}

std::string summarize(const ScenarioTrace& trace) {
    json j;
    j["blocks"] = trace.rows.empty() ? 0 : trace.rows.back().block + 1;
    j["trades"] = trace.trades.size();
    j["shocks"] = trace.shock_blocks;

    // Per-chain peg statistics plus end-state liquidity shares.
    std::vector<std::string> chains;
    for (const auto& r : trace.rows)
        if (std::find(chains.begin(), chains.end(), r.chain) == chains.end())
            chains.push_back(r.chain);
    json per_chain = json::object();
    std::vector<double> stable_reserves;
    for (const auto& c : chains) {
        auto st = peg_stats(trace, c);
        json cj;
        cj["max_abs_deviation"] = st.max_abs_deviation;
        cj["blocks_above_half_percent"] = st.blocks_above_half_percent;
        if (st.half_life_blocks) cj["half_life_blocks"] = *st.half_life_blocks;
        double last_a = 0;
        for (auto it = trace.rows.rbegin(); it != trace.rows.rend(); ++it)
            if (it->chain == c) { last_a = it->reserve_a; break; }
        stable_reserves.push_back(last_a);
        per_chain[c] = cj;
    }
    j["chains"] = per_chain;

    double total = 0;
    for (double v : stable_reserves) total += v;
    if (total > 0) {
        std::vector<double> shares;
        for (double v : stable_reserves) shares.push_back(v / total);
        double idx = raw_hhi(shares);
        j["liquidity_hhi"] = idx;
        j["liquidity_hhi_band"] = band_name(hhi_band(idx));
    }

    auto violations = audit_impact_bound(trace);
    j["impact_bound_violations"] = violations.size();
    j["impact_bound_violation_fraction"] =
        trace.trades.empty()
            ? 0.0
            : double(violations.size()) / double(trace.trades.size());

    try {
        auto fit = fit_correction_model(trace);
        j["correction_alpha"] = fit.alpha;
        j["correction_beta"] = fit.beta;
        j["correction_r_squared"] = fit.r_squared;
    } catch (const std::invalid_argument&) {
        // too little arbitrage activity for a fit; omit
    }
    return j.dump(2) + "\n";
}

}  // namespace pegsim::metrics
