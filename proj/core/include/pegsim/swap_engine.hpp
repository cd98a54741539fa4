#pragma once

#include <memory>
#include <optional>
#include <random>

#include "pegsim/adaptor_sig.hpp"
#include "pegsim/chain_sim.hpp"

// Two-party cross-chain atomic swap: commit-then-reveal nonce exchange,
// joint-verified partial signatures, settlement by secret revelation.
//
// Claim predicates are asymmetric by construction. The short-timeout lock
// (B's, holding Y for A) is claimable with A's settlement value alone; the
// long-timeout lock (A's, holding X for B) needs both settlement values.
// A's claim therefore publishes s'_A on-chain, and only then can B complete,
// which is what makes the settlement atomic. Timeouts are 2:1 so B always
// has room to complete after A reveals.

namespace pegsim::swap {

enum class Phase {
    Init,
    Committed,
    PartialsExchanged,
    Revealed,
    Settled,
    Refunded,
    Aborted,
};

const char* phase_name(Phase p);

enum class GameOutcome { BothSettled, BothRefunded, Violation };

const char* outcome_name(GameOutcome o);

struct SwapConfig {
    std::string asset_x = "X";
    std::string asset_y = "Y";
    chain::Amount amount_x = 100;
    chain::Amount amount_y = 100;
    std::size_t chain_i = 0;  // A's asset X lives here (long timeout)
    std::size_t chain_j = 1;  // B's asset Y lives here (short timeout)
    // Refund windows relative to the heights at session start; long = 2x short.
    std::uint64_t timeout_short = 12;
    std::uint64_t timeout_long = 24;
    std::uint64_t max_ticks = 64;
};

struct PartyKeys {
    std::string account;
    KeyPair kp;
};

/// Off-chain protocol message between the two parties.
struct Message {
    enum class Type { NonceCommit, NonceReveal, Partial };
    Type type;
    int from;  // 0 = A, 1 = B
    Bytes payload;
};

/// Adversary controlling the off-chain channel plus any on-chain actions it
/// wants to take with public data only.
class Adversary {
  public:
    virtual ~Adversary() = default;
    virtual const char* name() const = 0;
    /// Returns (extra delay in ticks, message) pairs; empty drops the message.
    virtual std::vector<std::pair<std::uint64_t, Message>> intercept(
        const Message& m) = 0;
    virtual void on_tick(class SwapSession& session, chain::World& world) {}
};

std::unique_ptr<Adversary> make_honest_adversary();
/// strategy_index cycles over: dropper, blackout, delayer, reorderer,
/// partial forger, early claimer.
std::unique_ptr<Adversary> make_adversary(std::size_t strategy_index,
                                          std::uint64_t seed);
constexpr std::size_t kAdversaryCount = 6;

class SwapSession {
  public:
    SwapSession(const Group& g, chain::World& world, SwapConfig cfg,
                PartyKeys party_a, PartyKeys party_b, Adversary* adversary,
                chain::EventLog* log = nullptr);

    /// Solvency-gated start: locks nothing if either party cannot fund its
    /// leg; otherwise begins the commitment exchange.
    Phase open_swap();

    /// Drives the session one tick (protocol actions, then chain tick).
    void tick();

    /// Runs until a terminal phase or cfg.max_ticks; then classifies.
    GameOutcome run();

    Phase phase() const { return phase_; }
    const SessionBinding& binding() const { return binding_; }
    const std::vector<std::string>& transcript() const { return transcript_; }
    std::uint64_t open_tick() const { return open_tick_; }
    std::uint64_t settle_tick() const { return settle_tick_; }
    std::uint64_t lock_id_x() const { return lock_id_x_; }
    std::uint64_t lock_id_y() const { return lock_id_y_; }

    /// Installs the settlement-proof verifier on a ledger; shared with the
    /// scenario runner.
    static void install_claim_verifier(const Group& g, chain::Ledger& ledger);

    /// Predicate payloads for the two lock kinds.
    static Bytes single_proof_predicate(const Scalar& challenge, const Point& pk,
                                        const Bytes& session_id,
                                        const Bytes& asset_x, const Bytes& asset_y,
                                        const Point& joint_r);
    static Bytes dual_proof_predicate(const Scalar& challenge, const Point& pk_a,
                                      const Point& pk_b, const Bytes& session_id,
                                      const Bytes& asset_x, const Bytes& asset_y,
                                      const Point& joint_r);

  private:
    void log_event(const std::string& kind, const std::string& detail);
    void send(Message m);
    void deliver_due();
    void party_a_step();
    void party_b_step();
    void party_b_completion();
    void try_refunds();
    GameOutcome classify() const;

    const Group& g_;
    chain::World& world_;
    SwapConfig cfg_;
    PartyKeys a_, b_;
    Adversary* adversary_;
    chain::EventLog* chain_log_;

    Phase phase_ = Phase::Init;
    SessionBinding binding_;
    Scalar e_{};

    // Party A private state
    Scalar r_a_{};
    Point R_a_{};
    bool a_commit_sent_ = false;
    bool a_reveal_sent_ = false;
    bool a_partial_sent_ = false;
    std::optional<SwapPartial> partial_a_;
    std::optional<SwapPartial> partial_b_seen_by_a_;
    bool a_aborted_ = false;
    bool a_claim_sent_ = false;

    // Party B private state
    Scalar r_b_{};
    Point R_b_{};
    bool b_commit_sent_ = false;
    bool b_reveal_sent_ = false;
    bool b_partial_sent_ = false;
    std::optional<SwapPartial> partial_b_;
    std::optional<SwapPartial> partial_a_seen_by_b_;
    bool b_aborted_ = false;
    bool b_claim_sent_ = false;
    bool b_locked_ = false;

    // Received-message buffers (commit digests, reveals)
    std::optional<Bytes> commit_from_a_, commit_from_b_;
    std::optional<Point> reveal_from_a_, reveal_from_b_;

    bool a_refund_sent_ = false;
    bool b_refund_sent_ = false;

    std::uint64_t lock_id_x_ = 0, lock_id_y_ = 0;
    std::uint64_t refund_height_x_ = 0, refund_height_y_ = 0;
    bool a_lock_submitted_ = false;
    bool opened_ = false;

    std::uint64_t open_tick_ = 0;
    std::uint64_t settle_tick_ = 0;
    std::uint64_t ticks_run_ = 0;

    std::vector<std::pair<std::uint64_t, Message>> in_flight_;
    std::vector<std::string> transcript_;
};

/// One adversarial game: fresh two-chain world, seeded keys and strategy.
GameOutcome adversarial_atomicity_game(const Group& g, std::size_t strategy_index,
                                       std::uint64_t seed);

struct GameTally {
    std::uint64_t settled = 0;
    std::uint64_t refunded = 0;
    std::uint64_t violations = 0;
};

GameTally run_atomicity_games(const Group& g, std::uint64_t runs,
                              std::uint64_t base_seed);

}  // namespace pegsim::swap
