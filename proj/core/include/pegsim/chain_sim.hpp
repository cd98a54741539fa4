#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pegsim/group.hpp"

// Deterministic discrete-event ledgers: balances, a six-kind transaction
// set, per-chain block intervals and cross-chain message latency, all in
// abstract ticks. Everything that happens is a pure function of
// (configuration, submission order).

namespace pegsim::chain {

using Amount = std::int64_t;

struct Tx {
    enum class Kind { Transfer, Lock, Claim, Refund, Mint, Burn };
    Kind kind = Kind::Transfer;
    std::string sender;
    std::string recipient;
    std::string asset;
    Amount amount = 0;
    std::uint64_t lock_id = 0;       // Lock / Claim / Refund
    std::uint64_t refund_height = 0; // Lock: first height at which refund wins
    Bytes predicate;                 // Lock: claim-verification payload
    Bytes proof;                     // Claim: settlement proof payload
};

const char* tx_kind_name(Tx::Kind k);

/// Flat per-kind fees; the "GasCosts" knob of the arbitrage bound.
struct FeeSchedule {
    Amount transfer = 1;
    Amount lock = 1;
    Amount claim = 1;
    Amount refund = 1;
    Amount mint = 0;
    Amount burn = 0;
    Amount of(Tx::Kind k) const;
};

struct LockEntry {
    enum class Status { Open, Claimed, Refunded };
    std::string owner;
    std::string recipient;
    std::string asset;
    Amount amount = 0;
    std::uint64_t refund_height = 0;
    Bytes predicate;
    Bytes claim_proof;  // populated once claimed; on-chain public data
    Status status = Status::Open;
};

/// Decides whether a claim proof satisfies a lock predicate; installed by
/// the swap engine (chain_sim itself knows nothing about signatures).
using ClaimVerifier = std::function<bool(const Bytes& predicate, const Bytes& proof)>;

struct SubmitResult {
    bool accepted = false;
    std::uint64_t tx_id = 0;
    std::string reason;
};

struct AppliedTx {
    std::uint64_t tx_id = 0;
    Tx tx;
    bool ok = false;
    std::string reason;
};

struct BlockSummary {
    std::uint64_t height = 0;
    std::vector<AppliedTx> txs;
};

/// Line-delimited structured records for replay and debugging.
class EventLog {
  public:
    void record(std::string line) { lines_.push_back(std::move(line)); }
    const std::vector<std::string>& lines() const { return lines_; }
    std::string joined() const;

  private:
    std::vector<std::string> lines_;
};

class Ledger {
  public:
    Ledger(std::string chain_id, FeeSchedule fees = {});

    const std::string& chain_id() const { return id_; }
    std::uint64_t height() const { return height_; }
    const FeeSchedule& fees() const { return fees_; }

    void set_claim_verifier(ClaimVerifier v) { verifier_ = std::move(v); }

    void credit(const std::string& account, const std::string& asset, Amount amount);
    Amount balance(const std::string& account, const std::string& asset) const;
    const LockEntry* lock(std::uint64_t lock_id) const;

    /// Sum over all accounts, open locks, and collected fees.
    Amount total_supply(const std::string& asset) const;
    /// Net minted-minus-burned since genesis, per asset.
    Amount net_issuance(const std::string& asset) const;

    SubmitResult submit_tx(const Tx& tx);
    BlockSummary mine_block(std::uint64_t tick, EventLog* log = nullptr);

    std::size_t mempool_size() const { return mempool_.size(); }
    const std::vector<std::pair<std::uint64_t, Tx>>& mempool() const { return mempool_; }

  private:
    bool apply_tx(const Tx& tx, std::string& reason);
    bool debit(const std::string& account, const std::string& asset, Amount amount);

    std::string id_;
    FeeSchedule fees_;
    std::uint64_t height_ = 0;
    std::uint64_t next_tx_id_ = 1;
    std::map<std::string, std::map<std::string, Amount>> balances_;
    std::map<std::uint64_t, LockEntry> locks_;
    std::vector<std::pair<std::uint64_t, Tx>> mempool_;
    std::map<std::string, Amount> issuance_;
    std::map<std::string, Amount> fee_pool_;
    ClaimVerifier verifier_;
};

struct ChainConfig {
    std::string chain_id;
    std::uint64_t block_interval_ticks = 1;
    FeeSchedule fees = {};
};

/// Several ledgers plus a latency-delayed cross-chain message queue, driven
/// by one global tick counter.
class World {
  public:
    World(std::vector<ChainConfig> configs, std::uint64_t latency_ticks);

    std::size_t chain_count() const { return chains_.size(); }
    Ledger& chain(std::size_t i) { return chains_[i]; }
    const Ledger& chain(std::size_t i) const { return chains_[i]; }
    Ledger* chain_by_id(const std::string& id);

    std::uint64_t tick() const { return tick_; }
    std::uint64_t latency() const { return latency_; }

    /// Submit from off-chain with network latency; delivered to the target
    /// chain's mempool after `latency` ticks.
    void send_tx(std::size_t chain_idx, const Tx& tx);
    /// Submit directly (zero latency), e.g. by a local actor.
    SubmitResult submit_local(std::size_t chain_idx, const Tx& tx);

    /// Advance n ticks: deliver due messages in (tick, chain, seq) order,
    /// then mine every chain whose interval divides the tick.
    void advance(std::uint64_t n_ticks, EventLog* log = nullptr);

  private:
    struct PendingMsg {
        std::uint64_t deliver_tick;
        std::uint64_t seq;
        std::size_t chain_idx;
        Tx tx;
    };

    std::vector<Ledger> chains_;
    std::vector<std::uint64_t> intervals_;
    std::uint64_t latency_;
    std::uint64_t tick_ = 0;
    std::uint64_t next_seq_ = 0;
    std::vector<PendingMsg> pending_;
};

}  // namespace pegsim::chain
