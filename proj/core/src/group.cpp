#include "pegsim/group.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace pegsim {

namespace {

void ensure_sodium() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
    });
}

Bytes frame(std::string_view domain_tag, std::span<const Bytes> parts) {
    Bytes buf;
    buf.reserve(64);
    const char* prefix = "pegsim/v1/";
    buf.insert(buf.end(), prefix, prefix + std::strlen(prefix));
    buf.insert(buf.end(), domain_tag.begin(), domain_tag.end());
    buf.push_back(0x00);
    for (const Bytes& p : parts) {
        std::uint64_t n = p.size();
        for (int i = 7; i >= 0; --i) buf.push_back(std::uint8_t(n >> (8 * i)));
        buf.insert(buf.end(), p.begin(), p.end());
    }
    return buf;
}

std::array<std::uint8_t, 32> reversed(const std::array<std::uint8_t, 32>& in) {
    std::array<std::uint8_t, 32> out;
    for (int i = 0; i < 32; ++i) out[i] = in[31 - i];
    return out;
}

// --- ristretto255 -------------------------------------------------------
//
// libsodium works with little-endian scalars; the wire format is big-endian,
// so every call converts at the boundary.

class RistrettoGroup final : public Group {
  public:
    RistrettoGroup() { ensure_sodium(); }

    const char* name() const override { return "ristretto255"; }
    std::uint64_t small_order() const override { return 0; }

    Scalar scalar_from_u64(std::uint64_t v) const override {
        Scalar s;
        for (int i = 0; i < 8; ++i) s.bytes[31 - i] = std::uint8_t(v >> (8 * i));
        return s;
    }

    Scalar scalar_add(const Scalar& a, const Scalar& b) const override {
        auto la = reversed(a.bytes), lb = reversed(b.bytes);
        std::array<std::uint8_t, 32> lr;
        crypto_core_ristretto255_scalar_add(lr.data(), la.data(), lb.data());
        return Scalar{reversed(lr)};
    }
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const override {
        auto la = reversed(a.bytes), lb = reversed(b.bytes);
        std::array<std::uint8_t, 32> lr;
        crypto_core_ristretto255_scalar_sub(lr.data(), la.data(), lb.data());
        return Scalar{reversed(lr)};
    }
    Scalar scalar_mul(const Scalar& a, const Scalar& b) const override {
        auto la = reversed(a.bytes), lb = reversed(b.bytes);
        std::array<std::uint8_t, 32> lr;
        crypto_core_ristretto255_scalar_mul(lr.data(), la.data(), lb.data());
        return Scalar{reversed(lr)};
    }
    Scalar scalar_neg(const Scalar& a) const override {
        auto la = reversed(a.bytes);
        std::array<std::uint8_t, 32> lr;
        crypto_core_ristretto255_scalar_negate(lr.data(), la.data());
        return Scalar{reversed(lr)};
    }

    Scalar scalar_from_hash(std::string_view domain_tag,
                            std::span<const Bytes> parts) const override {
        auto digest = tagged_hash512(domain_tag, parts);
        std::array<std::uint8_t, 32> lr;
        crypto_core_ristretto255_scalar_reduce(lr.data(), digest.data());
        return Scalar{reversed(lr)};
    }

    Point generator() const override {
        Point p;
        auto one = reversed(scalar_from_u64(1).bytes);
        crypto_scalarmult_ristretto255_base(p.bytes.data(), one.data());
        return p;
    }
    Point identity() const override { return Point{}; }

    Point point_add(const Point& p, const Point& q) const override {
        if (is_identity(p)) return q;
        if (is_identity(q)) return p;
        Point r;
        if (crypto_core_ristretto255_add(r.bytes.data(), p.bytes.data(),
                                         q.bytes.data()) != 0)
            throw std::invalid_argument("ristretto: invalid point in add");
        return r;
    }
    Point point_sub(const Point& p, const Point& q) const override {
        if (is_identity(q)) return p;
        if (p == q) return identity();
        Point r;
        if (crypto_core_ristretto255_sub(r.bytes.data(), p.bytes.data(),
                                         q.bytes.data()) != 0)
            throw std::invalid_argument("ristretto: invalid point in sub");
        return r;
    }
    Point point_mul(const Scalar& k, const Point& p) const override {
        if (scalar_is_zero(k) || is_identity(p)) return identity();
        auto lk = reversed(k.bytes);
        Point r;
        if (crypto_scalarmult_ristretto255(r.bytes.data(), lk.data(),
                                           p.bytes.data()) != 0)
            return identity();  // libsodium signals an all-zero result
        return r;
    }
    bool point_valid(const Point& p) const override {
        if (is_identity(p)) return true;
        return crypto_core_ristretto255_is_valid_point(p.bytes.data()) == 1;
    }
};

// --- toy group ----------------------------------------------------------
//
// Multiplicative subgroup of Z_p^* with p = 10091, prime order q = 1009,
// generator g = 1024 = h^k for h = 2 (p = k*q + 1, k = 10). Elements and
// scalars are encoded as 32-byte big-endian residues.

constexpr std::uint64_t TOY_P = 10091;
constexpr std::uint64_t TOY_Q = 1009;
constexpr std::uint64_t TOY_G = 1024;

std::uint64_t decode_u64(const std::array<std::uint8_t, 32>& b) {
    std::uint64_t v = 0;
    for (int i = 24; i < 32; ++i) v = (v << 8) | b[i];
    return v;
}

template <typename T>
T encode_u64(std::uint64_t v) {
    T out{};
    for (int i = 0; i < 8; ++i) out.bytes[31 - i] = std::uint8_t(v >> (8 * i));
    return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return (a * b) % m;  // operands < 2^14, no overflow
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

class ToyGroup final : public Group {
  public:
    ToyGroup() { ensure_sodium(); }

    const char* name() const override { return "toy-z10091"; }
    std::uint64_t small_order() const override { return TOY_Q; }

    Scalar scalar_from_u64(std::uint64_t v) const override {
        return encode_u64<Scalar>(v % TOY_Q);
    }
    Scalar scalar_add(const Scalar& a, const Scalar& b) const override {
        return scalar_from_u64(decode_u64(a.bytes) + decode_u64(b.bytes));
    }
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const override {
        return scalar_from_u64(decode_u64(a.bytes) + TOY_Q -
                               decode_u64(b.bytes) % TOY_Q);
    }
    Scalar scalar_mul(const Scalar& a, const Scalar& b) const override {
        return scalar_from_u64(decode_u64(a.bytes) * decode_u64(b.bytes));
    }
    Scalar scalar_neg(const Scalar& a) const override {
        return scalar_from_u64(TOY_Q - decode_u64(a.bytes) % TOY_Q);
    }

    Scalar scalar_from_hash(std::string_view domain_tag,
                            std::span<const Bytes> parts) const override {
        auto digest = tagged_hash512(domain_tag, parts);
        std::uint64_t acc = 0;
        for (auto byte : digest) acc = (acc * 256 + byte) % TOY_Q;
        return scalar_from_u64(acc);
    }

    Point generator() const override { return encode_u64<Point>(TOY_G); }
    Point identity() const override { return encode_u64<Point>(1); }

    Point point_add(const Point& p, const Point& q) const override {
        return encode_u64<Point>(
            mulmod(decode_u64(p.bytes), decode_u64(q.bytes), TOY_P));
    }
    Point point_sub(const Point& p, const Point& q) const override {
        std::uint64_t inv = powmod(decode_u64(q.bytes), TOY_P - 2, TOY_P);
        return encode_u64<Point>(mulmod(decode_u64(p.bytes), inv, TOY_P));
    }
    Point point_mul(const Scalar& k, const Point& p) const override {
        return encode_u64<Point>(
            powmod(decode_u64(p.bytes), decode_u64(k.bytes) % TOY_Q, TOY_P));
    }
    bool point_valid(const Point& p) const override {
        std::uint64_t v = decode_u64(p.bytes);
        if (v == 0 || v >= TOY_P) return false;
        return powmod(v, TOY_Q, TOY_P) == 1;
    }
};

}  // namespace

std::array<std::uint8_t, 64> tagged_hash512(std::string_view domain_tag,
                                            std::span<const Bytes> parts) {
    ensure_sodium();
    Bytes buf = frame(domain_tag, parts);
    std::array<std::uint8_t, 64> digest;
    crypto_hash_sha512(digest.data(), buf.data(), buf.size());
    return digest;
}

std::array<std::uint8_t, 32> tagged_hash256(std::string_view domain_tag,
                                            std::span<const Bytes> parts) {
    auto d = tagged_hash512(domain_tag, parts);
    std::array<std::uint8_t, 32> out;
    std::memcpy(out.data(), d.data(), 32);
    return out;
}

const Group& ristretto_group() {
    static RistrettoGroup g;
    return g;
}

const Group& toy_group() {
    static ToyGroup g;
    return g;
}

}  // namespace pegsim
