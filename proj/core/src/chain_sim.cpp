#include "pegsim/chain_sim.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace pegsim::chain {

using nlohmann::json;

const char* tx_kind_name(Tx::Kind k) {
    switch (k) {
        case Tx::Kind::Transfer: return "transfer";
        case Tx::Kind::Lock: return "lock";
        case Tx::Kind::Claim: return "claim";
        case Tx::Kind::Refund: return "refund";
        case Tx::Kind::Mint: return "mint";
        case Tx::Kind::Burn: return "burn";
    }
    return "?";
}

Amount FeeSchedule::of(Tx::Kind k) const {
    switch (k) {
        case Tx::Kind::Transfer: return transfer;
        case Tx::Kind::Lock: return lock;
        case Tx::Kind::Claim: return claim;
        case Tx::Kind::Refund: return refund;
        case Tx::Kind::Mint: return mint;
        case Tx::Kind::Burn: return burn;
    }
    return 0;
}

std::string EventLog::joined() const {
    std::string out;
    for (const auto& l : lines_) {
        out += l;
        out += '\n';
    }
    return out;
}

Ledger::Ledger(std::string chain_id, FeeSchedule fees)
    : id_(std::move(chain_id)), fees_(fees) {}

void Ledger::credit(const std::string& account, const std::string& asset,
                    Amount amount) {
    if (amount < 0) throw std::invalid_argument("credit: negative amount");
    balances_[account][asset] += amount;
}

Amount Ledger::balance(const std::string& account, const std::string& asset) const {
    auto a = balances_.find(account);
    if (a == balances_.end()) return 0;
    auto b = a->second.find(asset);
    return b == a->second.end() ? 0 : b->second;
}

const LockEntry* Ledger::lock(std::uint64_t lock_id) const {
    auto it = locks_.find(lock_id);
    return it == locks_.end() ? nullptr : &it->second;
}

Amount Ledger::total_supply(const std::string& asset) const {
    Amount total = 0;
    for (const auto& [acct, per_asset] : balances_) {
        auto it = per_asset.find(asset);
        if (it != per_asset.end()) total += it->second;
    }
    for (const auto& [id, l] : locks_)
        if (l.status == LockEntry::Status::Open && l.asset == asset)
            total += l.amount;
    auto f = fee_pool_.find(asset);
    if (f != fee_pool_.end()) total += f->second;
    return total;
}

Amount Ledger::net_issuance(const std::string& asset) const {
    auto it = issuance_.find(asset);
    return it == issuance_.end() ? 0 : it->second;
}

bool Ledger::debit(const std::string& account, const std::string& asset,
                   Amount amount) {
    Amount& bal = balances_[account][asset];
    if (bal < amount) return false;
    bal -= amount;
    return true;
}

SubmitResult Ledger::submit_tx(const Tx& tx) {
    if (tx.amount < 0) return {false, 0, "negative amount"};
    // Debit-funded kinds must look payable now; the mempool re-check at
    // mining time is authoritative. Claim/refund fees come out of the
    // released amount, so those need no sender balance up front.
    if (tx.kind == Tx::Kind::Transfer || tx.kind == Tx::Kind::Lock ||
        tx.kind == Tx::Kind::Burn) {
        Amount need = tx.amount + fees_.of(tx.kind);
        if (balance(tx.sender, tx.asset) < need)
            return {false, 0, "insufficient balance"};
    }
    std::uint64_t id = next_tx_id_++;
    mempool_.emplace_back(id, tx);
    return {true, id, ""};
}

bool Ledger::apply_tx(const Tx& tx, std::string& reason) {
    Amount fee = fees_.of(tx.kind);
    switch (tx.kind) {
        case Tx::Kind::Transfer: {
            if (!debit(tx.sender, tx.asset, tx.amount + fee)) {
                reason = "insufficient balance";
                return false;
            }
            balances_[tx.recipient][tx.asset] += tx.amount;
            fee_pool_[tx.asset] += fee;
            return true;
        }
        case Tx::Kind::Lock: {
            if (locks_.count(tx.lock_id)) {
                reason = "duplicate lock id";
                return false;
            }
            if (tx.refund_height <= height_) {
                reason = "refund height in the past";
                return false;
            }
            if (!debit(tx.sender, tx.asset, tx.amount + fee)) {
                reason = "insufficient balance";
                return false;
            }
            fee_pool_[tx.asset] += fee;
            locks_[tx.lock_id] = {tx.sender, tx.recipient, tx.asset, tx.amount,
                                  tx.refund_height, tx.predicate, {},
                                  LockEntry::Status::Open};
            return true;
        }
        case Tx::Kind::Claim: {
            auto it = locks_.find(tx.lock_id);
            if (it == locks_.end() || it->second.status != LockEntry::Status::Open) {
                reason = "no open lock";
                return false;
            }
            LockEntry& l = it->second;
            // Claim window closes exactly where the refund window opens.
            if (height_ >= l.refund_height) {
                reason = "claim after timeout";
                return false;
            }
            if (!verifier_ || !verifier_(l.predicate, tx.proof)) {
                reason = "claim proof rejected";
                return false;
            }
            l.status = LockEntry::Status::Claimed;
            l.claim_proof = tx.proof;
            Amount paid = std::min(fee, l.amount);
            balances_[l.recipient][l.asset] += l.amount - paid;
            fee_pool_[l.asset] += paid;
            return true;
        }
        case Tx::Kind::Refund: {
            auto it = locks_.find(tx.lock_id);
            if (it == locks_.end() || it->second.status != LockEntry::Status::Open) {
                reason = "no open lock";
                return false;
            }
            LockEntry& l = it->second;
            if (height_ < l.refund_height) {
                reason = "refund before timeout";
                return false;
            }
            l.status = LockEntry::Status::Refunded;
            Amount paid = std::min(fee, l.amount);
            balances_[l.owner][l.asset] += l.amount - paid;
            fee_pool_[l.asset] += paid;
            return true;
        }
        case Tx::Kind::Mint: {
            balances_[tx.recipient][tx.asset] += tx.amount;
            issuance_[tx.asset] += tx.amount;
            return true;
        }
        case Tx::Kind::Burn: {
            if (!debit(tx.sender, tx.asset, tx.amount)) {
                reason = "insufficient balance";
                return false;
            }
            issuance_[tx.asset] -= tx.amount;
            return true;
        }
    }
    reason = "unknown kind";
    return false;
}

BlockSummary Ledger::mine_block(std::uint64_t tick, EventLog* log) {
    // Height increments first; claim/refund windows are evaluated against
    // the height the txs land in.
    ++height_;
    BlockSummary summary;
    summary.height = height_;
    for (auto& [id, tx] : mempool_) {
        AppliedTx applied;
        applied.tx_id = id;
        applied.tx = tx;
        std::string reason;
        applied.ok = apply_tx(tx, reason);
        applied.reason = reason;
        if (log) {
            json j{{"event", "tx"},
                   {"tick", tick},
                   {"chain", id_},
                   {"height", height_},
                   {"tx_id", id},
                   {"kind", tx_kind_name(tx.kind)},
                   {"asset", tx.asset},
                   {"amount", tx.amount},
                   {"ok", applied.ok}};
            if (!applied.ok) j["reason"] = reason;
            if (tx.kind == Tx::Kind::Lock || tx.kind == Tx::Kind::Claim ||
                tx.kind == Tx::Kind::Refund)
                j["lock_id"] = tx.lock_id;
            log->record(j.dump());
        }
        summary.txs.push_back(std::move(applied));
    }
    mempool_.clear();
    if (log)
        log->record(json{{"event", "block"},
                         {"tick", tick},
                         {"chain", id_},
                         {"height", height_},
                         {"txs", summary.txs.size()}}
                        .dump());
    return summary;
}

World::World(std::vector<ChainConfig> configs, std::uint64_t latency_ticks)
    : latency_(latency_ticks) {
    for (auto& c : configs) {
        if (c.block_interval_ticks == 0)
            throw std::invalid_argument("world: zero block interval");
        chains_.emplace_back(c.chain_id, c.fees);
        intervals_.push_back(c.block_interval_ticks);
    }
}

Ledger* World::chain_by_id(const std::string& id) {
    for (auto& c : chains_)
        if (c.chain_id() == id) return &c;
    return nullptr;
}

void World::send_tx(std::size_t chain_idx, const Tx& tx) {
    pending_.push_back({tick_ + latency_, next_seq_++, chain_idx, tx});
}

SubmitResult World::submit_local(std::size_t chain_idx, const Tx& tx) {
    return chains_.at(chain_idx).submit_tx(tx);
}

void World::advance(std::uint64_t n_ticks, EventLog* log) {
    for (std::uint64_t step = 0; step < n_ticks; ++step) {
        // Deliver everything due this tick, in (tick, chain, seq) order.
        std::vector<PendingMsg> due;
        std::erase_if(pending_, [&](const PendingMsg& m) {
            if (m.deliver_tick <= tick_) {
                due.push_back(m);
                return true;
            }
            return false;
        });
        std::sort(due.begin(), due.end(), [](const auto& x, const auto& y) {
            return std::tie(x.deliver_tick, x.chain_idx, x.seq) <
                   std::tie(y.deliver_tick, y.chain_idx, y.seq);
        });
        for (const auto& m : due) chains_[m.chain_idx].submit_tx(m.tx);

        for (std::size_t i = 0; i < chains_.size(); ++i)
            if (tick_ % intervals_[i] == 0) chains_[i].mine_block(tick_, log);
        ++tick_;
    }
}

}  // namespace pegsim::chain
