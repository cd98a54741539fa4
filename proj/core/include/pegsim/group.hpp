#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pegsim {

using Bytes = std::vector<std::uint8_t>;

/// Canonical 32-byte big-endian encoding of an integer mod the group order.
struct Scalar {
    std::array<std::uint8_t, 32> bytes{};
    bool operator==(const Scalar&) const = default;
    auto operator<=>(const Scalar&) const = default;
};

/// Canonical compressed encoding of a group element. Equality of encodings
/// is equality of elements (both instantiations encode canonically).
struct Point {
    std::array<std::uint8_t, 32> bytes{};
    bool operator==(const Point&) const = default;
    auto operator<=>(const Point&) const = default;
};

/// Prime-order group interface. Two instantiations: ristretto255 for
/// realistic runs, and a small Schnorr subgroup (q = 1009) whose discrete
/// logs can be brute-forced in tests.
class Group {
  public:
    virtual ~Group() = default;

    virtual const char* name() const = 0;
    /// Group order when it fits in 64 bits, 0 otherwise.
    virtual std::uint64_t small_order() const = 0;

    virtual Scalar scalar_from_u64(std::uint64_t v) const = 0;
    virtual Scalar scalar_add(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar scalar_sub(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar scalar_mul(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar scalar_neg(const Scalar& a) const = 0;
    bool scalar_is_zero(const Scalar& a) const { return a == Scalar{}; }

    /// Domain-separated hash to scalar over length-prefixed parts.
    virtual Scalar scalar_from_hash(std::string_view domain_tag,
                                    std::span<const Bytes> parts) const = 0;

    virtual Point generator() const = 0;
    virtual Point identity() const = 0;
    virtual Point point_add(const Point& p, const Point& q) const = 0;
    virtual Point point_sub(const Point& p, const Point& q) const = 0;
    virtual Point point_mul(const Scalar& k, const Point& p) const = 0;
    virtual bool point_valid(const Point& p) const = 0;

    Point mul_base(const Scalar& k) const { return point_mul(k, generator()); }
    bool is_identity(const Point& p) const { return p == identity(); }
};

/// ristretto255 (order ~2^252), backed by libsodium.
const Group& ristretto_group();

/// Order-1009 subgroup of Z_10091^*; exhaustive search is trivial.
const Group& toy_group();

/// SHA-512 over the same length-prefixed framing scalar_from_hash uses.
/// Shared by the compliance module so all digests are domain separated
/// the same way.
std::array<std::uint8_t, 64> tagged_hash512(std::string_view domain_tag,
                                            std::span<const Bytes> parts);

/// First 32 bytes of tagged_hash512; commitment/Merkle digests.
std::array<std::uint8_t, 32> tagged_hash256(std::string_view domain_tag,
                                            std::span<const Bytes> parts);

}  // namespace pegsim
