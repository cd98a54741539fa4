#include "pegsim/swap_engine.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

#include <json.hpp>

namespace pegsim::swap {

using chain::Tx;
using nlohmann::json;

namespace {

void append_u32(Bytes& buf, std::uint32_t v) {
    for (int i = 3; i >= 0; --i) buf.push_back(std::uint8_t(v >> (8 * i)));
}

void append_lv(Bytes& buf, const Bytes& data) {
    append_u32(buf, std::uint32_t(data.size()));
    buf.insert(buf.end(), data.begin(), data.end());
}

bool read_lv(const Bytes& buf, std::size_t& pos, Bytes& out) {
    if (pos + 4 > buf.size()) return false;
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n = (n << 8) | buf[pos++];
    if (pos + n > buf.size()) return false;
    out.assign(buf.begin() + pos, buf.begin() + pos + n);
    pos += n;
    return true;
}

Bytes bytes_of(const Scalar& s) { return Bytes(s.bytes.begin(), s.bytes.end()); }
Bytes bytes_of(const Point& p) { return Bytes(p.bytes.begin(), p.bytes.end()); }

Scalar scalar_from(const Bytes& b) {
    Scalar s;
    std::copy_n(b.begin(), 32, s.bytes.begin());
    return s;
}
Point point_from(const Bytes& b) {
    Point p;
    std::copy_n(b.begin(), 32, p.bytes.begin());
    return p;
}

std::string hex8(const Bytes& data) {
    auto digest = tagged_hash256("transcript", std::span<const Bytes>(&data, 1));
    static const char* kHex = "0123456789abcdef";
    std::string out;
    for (int i = 0; i < 8; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 15];
    }
    return out;
}

// Predicate layout: mode byte, then length-prefixed fields:
// pk_a [, pk_b], session_id, asset_x, asset_y, joint_R. The verifier
// recomputes the session challenge, so tampering with any bound field
// invalidates every proof.
Bytes build_predicate(std::uint8_t mode, const Point& pk_a,
                      const Point* pk_b, const Bytes& session_id,
                      const Bytes& asset_x, const Bytes& asset_y,
                      const Point& joint_r) {
    Bytes buf;
    buf.push_back(mode);
    append_lv(buf, bytes_of(pk_a));
    if (pk_b) append_lv(buf, bytes_of(*pk_b));
    append_lv(buf, session_id);
    append_lv(buf, asset_x);
    append_lv(buf, asset_y);
    append_lv(buf, bytes_of(joint_r));
    return buf;
}

struct ParsedPredicate {
    std::uint8_t mode;
    Point pk_a, pk_b;
    SessionBinding binding;
};

bool parse_predicate(const Bytes& buf, ParsedPredicate& out) {
    if (buf.empty()) return false;
    out.mode = buf[0];
    if (out.mode != 1 && out.mode != 2) return false;
    std::size_t pos = 1;
    Bytes field;
    if (!read_lv(buf, pos, field) || field.size() != 32) return false;
    out.pk_a = point_from(field);
    if (out.mode == 2) {
        if (!read_lv(buf, pos, field) || field.size() != 32) return false;
        out.pk_b = point_from(field);
    }
    if (!read_lv(buf, pos, out.binding.session_id)) return false;
    if (!read_lv(buf, pos, out.binding.asset_x)) return false;
    if (!read_lv(buf, pos, out.binding.asset_y)) return false;
    if (!read_lv(buf, pos, field) || field.size() != 32) return false;
    out.binding.joint_R = point_from(field);
    return pos == buf.size();
}

}  // namespace

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Init: return "Init";
        case Phase::Committed: return "Committed";
        case Phase::PartialsExchanged: return "PartialsExchanged";
        case Phase::Revealed: return "Revealed";
        case Phase::Settled: return "Settled";
        case Phase::Refunded: return "Refunded";
        case Phase::Aborted: return "Aborted";
    }
    return "?";
}

const char* outcome_name(GameOutcome o) {
    switch (o) {
        case GameOutcome::BothSettled: return "BothSettled";
        case GameOutcome::BothRefunded: return "BothRefunded";
        case GameOutcome::Violation: return "Violation";
    }
    return "?";
}

Bytes SwapSession::single_proof_predicate(const Scalar&, const Point& pk,
                                          const Bytes& session_id,
                                          const Bytes& asset_x,
                                          const Bytes& asset_y,
                                          const Point& joint_r) {
    return build_predicate(1, pk, nullptr, session_id, asset_x, asset_y, joint_r);
}

Bytes SwapSession::dual_proof_predicate(const Scalar&, const Point& pk_a,
                                        const Point& pk_b,
                                        const Bytes& session_id,
                                        const Bytes& asset_x,
                                        const Bytes& asset_y,
                                        const Point& joint_r) {
    return build_predicate(2, pk_a, &pk_b, session_id, asset_x, asset_y, joint_r);
}

void SwapSession::install_claim_verifier(const Group& g, chain::Ledger& ledger) {
    ledger.set_claim_verifier([&g](const Bytes& predicate, const Bytes& proof) {
        ParsedPredicate p;
        if (!parse_predicate(predicate, p)) return false;
        Scalar e = session_challenge(g, p.binding);
        auto check = [&](const Scalar& s_settle, const Point& pk) {
            return g.mul_base(s_settle) == g.point_mul(e, pk);
        };
        if (p.mode == 1) {
            if (proof.size() != 32) return false;
            return check(scalar_from(proof), p.pk_a);
        }
        if (proof.size() != 64) return false;
        Bytes first(proof.begin(), proof.begin() + 32);
        Bytes second(proof.begin() + 32, proof.end());
        return check(scalar_from(first), p.pk_a) &&
               check(scalar_from(second), p.pk_b);
    });
}

SwapSession::SwapSession(const Group& g, chain::World& world, SwapConfig cfg,
                         PartyKeys party_a, PartyKeys party_b,
                         Adversary* adversary, chain::EventLog* log)
    : g_(g), world_(world), cfg_(std::move(cfg)), a_(std::move(party_a)),
      b_(std::move(party_b)), adversary_(adversary), chain_log_(log) {
    const Bytes parts[] = {bytes_of(a_.kp.pk), bytes_of(b_.kp.pk),
                           Bytes(cfg_.asset_x.begin(), cfg_.asset_x.end()),
                           Bytes(cfg_.asset_y.begin(), cfg_.asset_y.end())};
    auto sid = tagged_hash256("session-id", parts);
    binding_.session_id.assign(sid.begin(), sid.end());
    binding_.asset_x.assign(cfg_.asset_x.begin(), cfg_.asset_x.end());
    binding_.asset_y.assign(cfg_.asset_y.begin(), cfg_.asset_y.end());

    r_a_ = derive_nonce(g_, a_.kp.sk, binding_.session_id, 0);
    R_a_ = g_.mul_base(r_a_);
    r_b_ = derive_nonce(g_, b_.kp.sk, binding_.session_id, 0);
    R_b_ = g_.mul_base(r_b_);
    lock_id_x_ = 0x10;
    lock_id_y_ = 0x20;
}

void SwapSession::log_event(const std::string& kind, const std::string& detail) {
    json j{{"event", kind},
           {"tick", world_.tick()},
           {"session", hex8(binding_.session_id)},
           {"phase", phase_name(phase_)}};
    if (!detail.empty()) j["detail"] = detail;
    transcript_.push_back(j.dump());
    if (chain_log_) chain_log_->record(transcript_.back());
}

Phase SwapSession::open_swap() {
    opened_ = true;
    const auto& ledger_i = world_.chain(cfg_.chain_i);
    const auto& ledger_j = world_.chain(cfg_.chain_j);
    chain::Amount fee_slack_i =
        ledger_i.fees().lock + ledger_i.fees().refund + ledger_i.fees().claim;
    chain::Amount fee_slack_j =
        ledger_j.fees().lock + ledger_j.fees().refund + ledger_j.fees().claim;
    if (ledger_i.balance(a_.account, cfg_.asset_x) < cfg_.amount_x + fee_slack_i ||
        ledger_j.balance(b_.account, cfg_.asset_y) < cfg_.amount_y + fee_slack_j) {
        phase_ = Phase::Aborted;
        log_event("abort", "insolvent party");
        return phase_;
    }
    open_tick_ = world_.tick();
    refund_height_x_ = ledger_i.height() + cfg_.timeout_long;
    refund_height_y_ = ledger_j.height() + cfg_.timeout_short;
    log_event("open", "");
    return phase_;
}

void SwapSession::send(Message m) {
    json j{{"event", "msg-send"},
           {"tick", world_.tick()},
           {"type", int(m.type)},
           {"from", m.from},
           {"payload", hex8(m.payload)}};
    transcript_.push_back(j.dump());
    auto delivered = adversary_ ? adversary_->intercept(m)
                                : std::vector<std::pair<std::uint64_t, Message>>{
                                      {0, m}};
    for (auto& [extra_delay, msg] : delivered)
        in_flight_.emplace_back(world_.tick() + world_.latency() + extra_delay,
                                msg);
}

void SwapSession::deliver_due() {
    std::vector<Message> due;
    std::erase_if(in_flight_, [&](const auto& entry) {
        if (entry.first <= world_.tick()) {
            due.push_back(entry.second);
            return true;
        }
        return false;
    });
    for (const Message& m : due) {
        switch (m.type) {
            case Message::Type::NonceCommit:
                if (m.from == 0) commit_from_a_ = m.payload;
                else commit_from_b_ = m.payload;
                break;
            case Message::Type::NonceReveal: {
                if (m.payload.size() != 32) break;
                Point R = point_from(m.payload);
                const Bytes parts[] = {m.payload};
                auto digest = tagged_hash256("nonce-commit", parts);
                Bytes dvec(digest.begin(), digest.end());
                // Reveal must open the earlier commitment.
                if (m.from == 0) {
                    if (commit_from_a_ && *commit_from_a_ == dvec)
                        reveal_from_a_ = R;
                    else b_aborted_ = true;
                } else {
                    if (commit_from_b_ && *commit_from_b_ == dvec)
                        reveal_from_b_ = R;
                    else a_aborted_ = true;
                }
                break;
            }
            case Message::Type::Partial: {
                if (m.payload.size() < 64) break;
                SwapPartial p;
                p.s = scalar_from(Bytes(m.payload.begin(), m.payload.begin() + 32));
                p.R = point_from(Bytes(m.payload.begin() + 32, m.payload.begin() + 64));
                p.session_id.assign(m.payload.begin() + 64, m.payload.end());
                if (m.from == 0) partial_a_seen_by_b_ = p;
                else partial_b_seen_by_a_ = p;
                break;
            }
        }
    }
}

void SwapSession::party_a_step() {
    if (a_aborted_) return;
    if (!a_commit_sent_) {
        const Bytes parts[] = {bytes_of(R_a_)};
        auto digest = tagged_hash256("nonce-commit", parts);
        send({Message::Type::NonceCommit, 0, Bytes(digest.begin(), digest.end())});
        a_commit_sent_ = true;
    }
    if (commit_from_b_ && !a_reveal_sent_) {
        send({Message::Type::NonceReveal, 0, bytes_of(R_a_)});
        a_reveal_sent_ = true;
    }
    if (reveal_from_b_ && binding_.joint_R == Point{}) {
        binding_.joint_R = g_.point_add(R_a_, *reveal_from_b_);
        e_ = session_challenge(g_, binding_);
    }
    // A locks first (long timeout).
    if (binding_.joint_R != Point{} && !a_lock_submitted_) {
        Tx lock;
        lock.kind = Tx::Kind::Lock;
        lock.sender = a_.account;
        lock.recipient = b_.account;
        lock.asset = cfg_.asset_x;
        lock.amount = cfg_.amount_x;
        lock.lock_id = lock_id_x_;
        lock.refund_height = refund_height_x_;
        lock.predicate = dual_proof_predicate(e_, a_.kp.pk, b_.kp.pk,
                                              binding_.session_id,
                                              binding_.asset_x, binding_.asset_y,
                                              binding_.joint_R);
        world_.send_tx(cfg_.chain_i, lock);
        a_lock_submitted_ = true;
        log_event("lock-x-submitted", "");
    }
    const auto* lx = world_.chain(cfg_.chain_i).lock(lock_id_x_);
    const auto* ly = world_.chain(cfg_.chain_j).lock(lock_id_y_);
    if (lx && ly && phase_ == Phase::Init) {
        phase_ = Phase::Committed;
        log_event("committed", "");
    }
    if (phase_ == Phase::Committed && !a_partial_sent_) {
        partial_a_ = swap_partial_sign(g_, a_.kp, binding_, r_a_);
        Bytes payload = bytes_of(partial_a_->s);
        Bytes rb = bytes_of(partial_a_->R);
        payload.insert(payload.end(), rb.begin(), rb.end());
        payload.insert(payload.end(), partial_a_->session_id.begin(),
                       partial_a_->session_id.end());
        send({Message::Type::Partial, 0, payload});
        a_partial_sent_ = true;
    }
    if (partial_a_ && partial_b_seen_by_a_ &&
        phase_ == Phase::Committed) {
        if (joint_verify(g_, *partial_a_, *partial_b_seen_by_a_, a_.kp.pk,
                         b_.kp.pk, binding_)) {
            phase_ = Phase::PartialsExchanged;
            log_event("partials-exchanged", "");
        } else {
            a_aborted_ = true;
            log_event("abort", "joint verification failed (A)");
        }
    }
    // Reveal: claim Y on chain j, publishing s'_A. Only if the claim will
    // land comfortably before the short timeout.
    if (phase_ == Phase::PartialsExchanged && !a_claim_sent_) {
        std::uint64_t h = world_.chain(cfg_.chain_j).height();
        if (h + world_.latency() + 2 <= refund_height_y_) {
            SettlementProof sp = settle_reveal(g_, *partial_a_, r_a_);
            Tx claim;
            claim.kind = Tx::Kind::Claim;
            claim.sender = a_.account;
            claim.asset = cfg_.asset_y;
            claim.lock_id = lock_id_y_;
            claim.proof = bytes_of(sp.s_settle);
            world_.send_tx(cfg_.chain_j, claim);
            a_claim_sent_ = true;
            log_event("reveal-claim-submitted", "");
        }
    }
    if (ly && ly->status == chain::LockEntry::Status::Claimed &&
        phase_ == Phase::PartialsExchanged) {
        phase_ = Phase::Revealed;
        log_event("revealed", "");
    }
}

void SwapSession::party_b_step() {
    // Claiming its own leg is always safe for B, even after an abort flag.
    party_b_completion();
    if (b_aborted_) return;
    if (!b_commit_sent_) {
        const Bytes parts[] = {bytes_of(R_b_)};
        auto digest = tagged_hash256("nonce-commit", parts);
        send({Message::Type::NonceCommit, 1, Bytes(digest.begin(), digest.end())});
        b_commit_sent_ = true;
    }
    if (commit_from_a_ && !b_reveal_sent_) {
        send({Message::Type::NonceReveal, 1, bytes_of(R_b_)});
        b_reveal_sent_ = true;
    }
    Point joint_r_b{};
    if (reveal_from_a_) joint_r_b = g_.point_add(*reveal_from_a_, R_b_);

    // B locks only after A's lock is mined.
    const auto* lx = world_.chain(cfg_.chain_i).lock(lock_id_x_);
    if (joint_r_b != Point{} && lx &&
        lx->status == chain::LockEntry::Status::Open && !b_locked_) {
        SessionBinding binding = binding_;
        binding.joint_R = joint_r_b;
        Scalar e = session_challenge(g_, binding);
        Tx lock;
        lock.kind = Tx::Kind::Lock;
        lock.sender = b_.account;
        lock.recipient = a_.account;
        lock.asset = cfg_.asset_y;
        lock.amount = cfg_.amount_y;
        lock.lock_id = lock_id_y_;
        lock.refund_height = refund_height_y_;
        lock.predicate = single_proof_predicate(e, a_.kp.pk, binding.session_id,
                                                binding.asset_x, binding.asset_y,
                                                binding.joint_R);
        world_.send_tx(cfg_.chain_j, lock);
        b_locked_ = true;
        log_event("lock-y-submitted", "");
    }
    const auto* ly = world_.chain(cfg_.chain_j).lock(lock_id_y_);
    if (joint_r_b != Point{} && lx && ly && !b_partial_sent_) {
        SessionBinding binding = binding_;
        binding.joint_R = joint_r_b;
        partial_b_ = swap_partial_sign(g_, b_.kp, binding, r_b_);
        Bytes payload = bytes_of(partial_b_->s);
        Bytes rb = bytes_of(partial_b_->R);
        payload.insert(payload.end(), rb.begin(), rb.end());
        payload.insert(payload.end(), partial_b_->session_id.begin(),
                       partial_b_->session_id.end());
        send({Message::Type::Partial, 1, payload});
        b_partial_sent_ = true;
    }
    if (partial_b_ && partial_a_seen_by_b_ && joint_r_b != Point{}) {
        SessionBinding binding = binding_;
        binding.joint_R = joint_r_b;
        if (!joint_verify(g_, *partial_a_seen_by_b_, *partial_b_, a_.kp.pk,
                          b_.kp.pk, binding)) {
            b_aborted_ = true;
            log_event("abort", "joint verification failed (B)");
            return;
        }
    }
}

// Once A's settlement value is public on chain j, derive s'_B from B's own
// secrets and claim X on chain i.
void SwapSession::party_b_completion() {
    const auto* ly = world_.chain(cfg_.chain_j).lock(lock_id_y_);
    if (!ly || ly->status != chain::LockEntry::Status::Claimed || !partial_b_ ||
        b_claim_sent_)
        return;
    if (ly->claim_proof.size() != 32) return;
    Scalar s_a = scalar_from(ly->claim_proof);
    SettlementProof own = settle_reveal(g_, *partial_b_, r_b_);
    std::uint64_t h = world_.chain(cfg_.chain_i).height();
    if (h + world_.latency() + 2 <= refund_height_x_) {
        Tx claim;
        claim.kind = Tx::Kind::Claim;
        claim.sender = b_.account;
        claim.asset = cfg_.asset_x;
        claim.lock_id = lock_id_x_;
        claim.proof = bytes_of(s_a);
        Bytes own_bytes = bytes_of(own.s_settle);
        claim.proof.insert(claim.proof.end(), own_bytes.begin(),
                           own_bytes.end());
        world_.send_tx(cfg_.chain_i, claim);
        b_claim_sent_ = true;
        log_event("complete-claim-submitted", "");
    }
}

void SwapSession::try_refunds() {
    const auto* lx = world_.chain(cfg_.chain_i).lock(lock_id_x_);
    if (lx && lx->status == chain::LockEntry::Status::Open &&
        world_.chain(cfg_.chain_i).height() >= refund_height_x_ &&
        !a_refund_sent_) {
        Tx refund;
        refund.kind = Tx::Kind::Refund;
        refund.sender = a_.account;
        refund.asset = cfg_.asset_x;
        refund.lock_id = lock_id_x_;
        world_.send_tx(cfg_.chain_i, refund);
        a_refund_sent_ = true;
        log_event("refund-x-submitted", "");
    }
    const auto* ly = world_.chain(cfg_.chain_j).lock(lock_id_y_);
    if (ly && ly->status == chain::LockEntry::Status::Open &&
        world_.chain(cfg_.chain_j).height() >= refund_height_y_ &&
        !b_refund_sent_) {
        Tx refund;
        refund.kind = Tx::Kind::Refund;
        refund.sender = b_.account;
        refund.asset = cfg_.asset_y;
        refund.lock_id = lock_id_y_;
        world_.send_tx(cfg_.chain_j, refund);
        b_refund_sent_ = true;
        log_event("refund-y-submitted", "");
    }
}

void SwapSession::tick() {
    deliver_due();
    party_a_step();
    party_b_step();
    try_refunds();
    if (adversary_) adversary_->on_tick(*this, world_);
    world_.advance(1, chain_log_);
    ++ticks_run_;

    const auto* lx = world_.chain(cfg_.chain_i).lock(lock_id_x_);
    const auto* ly = world_.chain(cfg_.chain_j).lock(lock_id_y_);
    if (lx && ly && lx->status == chain::LockEntry::Status::Claimed &&
        ly->status == chain::LockEntry::Status::Claimed &&
        phase_ != Phase::Settled) {
        phase_ = Phase::Settled;
        settle_tick_ = world_.tick();
        log_event("settled", "");
    }
}

GameOutcome SwapSession::classify() const {
    const auto* lx = world_.chain(cfg_.chain_i).lock(lock_id_x_);
    const auto* ly = world_.chain(cfg_.chain_j).lock(lock_id_y_);
    bool x_claimed = lx && lx->status == chain::LockEntry::Status::Claimed;
    bool y_claimed = ly && ly->status == chain::LockEntry::Status::Claimed;
    if (x_claimed && y_claimed) return GameOutcome::BothSettled;
    if (!x_claimed && !y_claimed) return GameOutcome::BothRefunded;
    return GameOutcome::Violation;
}

GameOutcome SwapSession::run() {
    if (!opened_) open_swap();
    if (phase_ == Phase::Aborted) return GameOutcome::BothRefunded;
    while (ticks_run_ < cfg_.max_ticks) {
        tick();
        if (phase_ == Phase::Settled) break;
        const auto* lx = world_.chain(cfg_.chain_i).lock(lock_id_x_);
        const auto* ly = world_.chain(cfg_.chain_j).lock(lock_id_y_);
        bool x_done = !lx || lx->status != chain::LockEntry::Status::Open;
        bool y_done = !ly || ly->status != chain::LockEntry::Status::Open;
        // Past the long timeout nothing new can happen once both legs are
        // resolved.
        if (world_.chain(cfg_.chain_i).height() > refund_height_x_ + 2 &&
            x_done && y_done)
            break;
    }
    GameOutcome outcome = classify();
    if (outcome == GameOutcome::BothSettled) phase_ = Phase::Settled;
    else if (outcome == GameOutcome::BothRefunded && phase_ != Phase::Aborted)
        phase_ = Phase::Refunded;
    return outcome;
}

// --- adversary library --------------------------------------------------

namespace {

class HonestAdversary : public Adversary {
  public:
    const char* name() const override { return "honest"; }
    std::vector<std::pair<std::uint64_t, Message>> intercept(
        const Message& m) override {
        return {{0, m}};
    }
};

class Dropper : public Adversary {
  public:
    Dropper(double p, std::uint64_t seed) : p_(p), rng_(seed) {}
    const char* name() const override { return p_ >= 1.0 ? "blackout" : "dropper"; }
    std::vector<std::pair<std::uint64_t, Message>> intercept(
        const Message& m) override {
        if (std::uniform_real_distribution<double>(0, 1)(rng_) < p_) return {};
        return {{0, m}};
    }

  private:
    double p_;
    std::mt19937_64 rng_;
};

class Delayer : public Adversary {
  public:
    explicit Delayer(std::uint64_t seed) : rng_(seed) {}
    const char* name() const override { return "delayer"; }
    std::vector<std::pair<std::uint64_t, Message>> intercept(
        const Message& m) override {
        std::uint64_t d = std::uniform_int_distribution<std::uint64_t>(0, 9)(rng_);
        return {{d, m}};
    }

  private:
    std::mt19937_64 rng_;
};

class Reorderer : public Adversary {
  public:
    explicit Reorderer(std::uint64_t seed) : rng_(seed) {}
    const char* name() const override { return "reorderer"; }
    std::vector<std::pair<std::uint64_t, Message>> intercept(
        const Message& m) override {
        // Random small jitter permutes arrival order between messages.
        std::uint64_t d = std::uniform_int_distribution<std::uint64_t>(0, 3)(rng_);
        return {{d, m}};
    }

  private:
    std::mt19937_64 rng_;
};

class PartialForger : public Adversary {
  public:
    explicit PartialForger(std::uint64_t seed) : rng_(seed) {}
    const char* name() const override { return "partial-forger"; }
    std::vector<std::pair<std::uint64_t, Message>> intercept(
        const Message& m) override {
        Message out = m;
        if (m.type == Message::Type::Partial && !out.payload.empty()) {
            std::size_t idx = std::uniform_int_distribution<std::size_t>(
                0, 31)(rng_);
            out.payload[idx] ^= 0x5a;
        }
        return {{0, out}};
    }

  private:
    std::mt19937_64 rng_;
};

/// Watches both mempools and tries to claim every open lock early: with
/// garbage proofs, and by replaying any proof it sees in flight.
class EarlyClaimer : public Adversary {
  public:
    explicit EarlyClaimer(std::uint64_t seed) : rng_(seed) {}
    const char* name() const override { return "early-claimer"; }
    std::vector<std::pair<std::uint64_t, Message>> intercept(
        const Message& m) override {
        return {{0, m}};
    }
    void on_tick(SwapSession& session, chain::World& world) override {
        std::vector<Bytes> seen_proofs;
        for (std::size_t c = 0; c < world.chain_count(); ++c)
            for (const auto& [id, tx] : world.chain(c).mempool())
                if (tx.kind == Tx::Kind::Claim) seen_proofs.push_back(tx.proof);
        for (std::size_t c = 0; c < world.chain_count(); ++c) {
            for (std::uint64_t lock_id :
                 {session.lock_id_x(), session.lock_id_y()}) {
                const auto* l = world.chain(c).lock(lock_id);
                if (!l || l->status != chain::LockEntry::Status::Open) continue;
                Tx claim;
                claim.kind = Tx::Kind::Claim;
                claim.sender = "adversary";
                claim.asset = l->asset;
                claim.lock_id = lock_id;
                claim.proof.resize(
                    std::uniform_int_distribution<int>(0, 1)(rng_) ? 32 : 64);
                for (auto& byte : claim.proof)
                    byte = std::uint8_t(rng_());
                world.chain(c).submit_tx(claim);
                for (const Bytes& p : seen_proofs) {
                    Tx replay = claim;
                    replay.proof = p;
                    world.chain(c).submit_tx(replay);
                }
            }
        }
    }

  private:
    std::mt19937_64 rng_;
};

}  // namespace

std::unique_ptr<Adversary> make_honest_adversary() {
    return std::make_unique<HonestAdversary>();
}

std::unique_ptr<Adversary> make_adversary(std::size_t strategy_index,
                                          std::uint64_t seed) {
    switch (strategy_index % kAdversaryCount) {
        case 0: return std::make_unique<Dropper>(0.5, seed);
        case 1: return std::make_unique<Dropper>(1.0, seed);
        case 2: return std::make_unique<Delayer>(seed);
        case 3: return std::make_unique<Reorderer>(seed);
        case 4: return std::make_unique<PartialForger>(seed);
        default: return std::make_unique<EarlyClaimer>(seed);
    }
}

GameOutcome adversarial_atomicity_game(const Group& g,
                                       std::size_t strategy_index,
                                       std::uint64_t seed) {
    chain::World world({{"chain-i"}, {"chain-j"}}, 1);
    SwapSession::install_claim_verifier(g, world.chain(0));
    SwapSession::install_claim_verifier(g, world.chain(1));

    SwapConfig cfg;
    world.chain(0).credit("alice", cfg.asset_x, cfg.amount_x + 10);
    world.chain(1).credit("bob", cfg.asset_y, cfg.amount_y + 10);

    Bytes seed_a{std::uint8_t(seed), std::uint8_t(seed >> 8),
                 std::uint8_t(seed >> 16), std::uint8_t(seed >> 24), 0xaa};
    Bytes seed_b = seed_a;
    seed_b.back() = 0xbb;
    PartyKeys alice{"alice", keygen(g, seed_a)};
    PartyKeys bob{"bob", keygen(g, seed_b)};

    auto adversary = make_adversary(strategy_index, seed);
    SwapSession session(g, world, cfg, alice, bob, adversary.get());
    return session.run();
}

GameTally run_atomicity_games(const Group& g, std::uint64_t runs,
                              std::uint64_t base_seed) {
    GameTally tally;
    for (std::uint64_t i = 0; i < runs; ++i) {
        GameOutcome o =
            adversarial_atomicity_game(g, std::size_t(i), base_seed + i);
        switch (o) {
            case GameOutcome::BothSettled: ++tally.settled; break;
            case GameOutcome::BothRefunded: ++tally.refunded; break;
            case GameOutcome::Violation: ++tally.violations; break;
        }
    }
    return tally;
}

}  // namespace pegsim::swap
