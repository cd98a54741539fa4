#include "pegsim/adaptor_sig.hpp"

#include <stdexcept>

namespace pegsim {

namespace {

Bytes point_bytes(const Point& p) { return Bytes(p.bytes.begin(), p.bytes.end()); }
Bytes scalar_bytes(const Scalar& s) { return Bytes(s.bytes.begin(), s.bytes.end()); }

/// e = H(R + T || pk || m) for the pre-signature flow.
Scalar presig_challenge(const Group& g, const Point& R, const Point& T,
                        const Point& pk, const Bytes& m) {
    Point rt = g.point_add(R, T);
    const Bytes parts[] = {point_bytes(rt), point_bytes(pk), m};
    return g.scalar_from_hash("presig-challenge", parts);
}

}  // namespace

KeyPair keygen(const Group& g, const Bytes& seed) {
    if (seed.empty()) throw std::invalid_argument("keygen: empty seed");
    const Bytes parts[] = {seed};
    Scalar sk = g.scalar_from_hash("keygen", parts);
    return {sk, g.mul_base(sk)};
}

Scalar derive_nonce(const Group& g, const Scalar& sk, const Bytes& context,
                    std::uint64_t counter) {
    Bytes ctr(8);
    for (int i = 0; i < 8; ++i) ctr[7 - i] = std::uint8_t(counter >> (8 * i));
    const Bytes parts[] = {scalar_bytes(sk), context, ctr};
    return g.scalar_from_hash("nonce", parts);
}

PreSignature pre_sign(const Group& g, const KeyPair& kp, const Bytes& m,
                      const Point& T, const Bytes& nonce_seed) {
    if (g.is_identity(T))
        throw std::invalid_argument("pre_sign: identity adaptor point");
    Scalar r = derive_nonce(g, kp.sk, nonce_seed, 0);
    Point R = g.mul_base(r);
    Scalar e = presig_challenge(g, R, T, kp.pk, m);
    // s' = r + x*e
    Scalar s_prime = g.scalar_add(r, g.scalar_mul(kp.sk, e));
    return {s_prime, R, T};
}

bool pre_verify(const Group& g, const Point& pk, const Bytes& m,
                const Point& T, const PreSignature& pre) {
    if (!g.point_valid(pre.R) || !g.point_valid(T) || !g.point_valid(pk))
        return false;
    Scalar e = presig_challenge(g, pre.R, T, pk, m);
    Point lhs = g.mul_base(pre.s_prime);
    Point rhs = g.point_add(pre.R, g.point_mul(e, pk));
    return lhs == rhs;
}

Signature adapt(const Group& g, const PreSignature& pre, const Scalar& t) {
    if (g.mul_base(t) != pre.T)
        throw std::invalid_argument("adapt: secret does not match adaptor point");
    return {g.scalar_add(pre.s_prime, t), pre.R};
}

bool verify_adapted(const Group& g, const Point& pk, const Bytes& m,
                    const Point& T, const Signature& sig) {
    Scalar e = presig_challenge(g, sig.R, T, pk, m);
    Point lhs = g.mul_base(sig.s);
    Point rhs = g.point_add(g.point_add(sig.R, T), g.point_mul(e, pk));
    return lhs == rhs;
}

Scalar extract_secret(const Group& g, const Signature& sig,
                      const PreSignature& pre) {
    if (sig.R != pre.R)
        throw std::invalid_argument("extract_secret: nonce point mismatch");
    return g.scalar_sub(sig.s, pre.s_prime);
}

Scalar session_challenge(const Group& g, const SessionBinding& session) {
    const Bytes parts[] = {point_bytes(session.joint_R), session.asset_x,
                           session.asset_y, session.session_id};
    return g.scalar_from_hash("session-challenge", parts);
}

SwapPartial swap_partial_sign(const Group& g, const KeyPair& kp,
                              const SessionBinding& session,
                              const Scalar& nonce_r) {
    Scalar e = session_challenge(g, session);
    Scalar s = g.scalar_add(nonce_r, g.scalar_mul(e, kp.sk));
    return {s, g.mul_base(nonce_r), session.session_id};
}

bool joint_verify(const Group& g, const SwapPartial& a, const SwapPartial& b,
                  const Point& pk_a, const Point& pk_b,
                  const SessionBinding& session) {
    if (a.session_id != session.session_id || b.session_id != session.session_id)
        return false;
    if (g.point_add(a.R, b.R) != session.joint_R) return false;
    Scalar e = session_challenge(g, session);
    Point lhs = g.mul_base(g.scalar_add(a.s, b.s));
    Point rhs = g.point_add(session.joint_R,
                            g.point_mul(e, g.point_add(pk_a, pk_b)));
    return lhs == rhs;
}

SettlementProof settle_reveal(const Group& g, const SwapPartial& partial,
                              const Scalar& nonce_r) {
    if (g.mul_base(nonce_r) != partial.R)
        throw std::invalid_argument("settle_reveal: nonce does not open R_p");
    return {g.scalar_sub(partial.s, nonce_r), partial.R, partial.session_id};
}

bool settle_verify(const Group& g, const SettlementProof& proof,
                   const Point& pk, const SessionBinding& session) {
    if (proof.session_id != session.session_id) return false;
    Scalar e = session_challenge(g, session);
    return g.mul_base(proof.s_settle) == g.point_mul(e, pk);
}

}  // namespace pegsim
