#pragma once

#include "pegsim/group.hpp"

namespace pegsim {

struct KeyPair {
    Scalar sk;
    Point pk;
};

/// Plain/adapted Schnorr signature (s, R).
struct Signature {
    Scalar s;
    Point R;
};

/// Pre-signature bound to adaptor point T: s'G = R + e*pk with
/// e = H(R + T || pk || m).
struct PreSignature {
    Scalar s_prime;
    Point R;
    Point T;
};

/// What both swap partials are bound to. joint_R must be fixed (via
/// commit-then-reveal nonce exchange) before either side signs.
struct SessionBinding {
    Bytes session_id;
    Bytes asset_x;
    Bytes asset_y;
    Point joint_R;
};

/// Party partial s_p = r_p + e*sk_p under the shared session challenge
/// e = H(joint_R || X || Y).
struct SwapPartial {
    Scalar s;
    Point R;
    Bytes session_id;
};

/// Settlement value s'_p = s_p - r_p = e*sk_p; publicly checkable as
/// s'_p G = e*pk_p.
struct SettlementProof {
    Scalar s_settle;
    Point R;
    Bytes session_id;
};

KeyPair keygen(const Group& g, const Bytes& seed);

/// Deterministic nonce from secret material and context, for reproducible
/// transcripts.
Scalar derive_nonce(const Group& g, const Scalar& sk, const Bytes& context,
                    std::uint64_t counter);

/// Throws std::invalid_argument if T is the identity (degenerate adaptor).
PreSignature pre_sign(const Group& g, const KeyPair& kp, const Bytes& m,
                      const Point& T, const Bytes& nonce_seed);

bool pre_verify(const Group& g, const Point& pk, const Bytes& m,
                const Point& T, const PreSignature& pre);

/// Throws if t*G != pre.T.
Signature adapt(const Group& g, const PreSignature& pre, const Scalar& t);

/// Full verification sG = R + T + e*pk.
bool verify_adapted(const Group& g, const Point& pk, const Bytes& m,
                    const Point& T, const Signature& sig);

/// t = s - s'. Throws if sig.R != pre.R.
Scalar extract_secret(const Group& g, const Signature& sig,
                      const PreSignature& pre);

/// Shared challenge e = H(joint_R || X || Y), also bound to session id.
Scalar session_challenge(const Group& g, const SessionBinding& session);

SwapPartial swap_partial_sign(const Group& g, const KeyPair& kp,
                              const SessionBinding& session,
                              const Scalar& nonce_r);

/// (s_A + s_B)G == joint_R + e*(pk_A + pk_B), with both partials bound to
/// the same session.
bool joint_verify(const Group& g, const SwapPartial& a, const SwapPartial& b,
                  const Point& pk_a, const Point& pk_b,
                  const SessionBinding& session);

/// Throws if r_p*G != partial.R.
SettlementProof settle_reveal(const Group& g, const SwapPartial& partial,
                              const Scalar& nonce_r);

bool settle_verify(const Group& g, const SettlementProof& proof,
                   const Point& pk, const SessionBinding& session);

}  // namespace pegsim
