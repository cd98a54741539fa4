#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "pegsim/group.hpp"

// Commitment-based stand-in for a zero-knowledge compliance layer. It gives
// binding commitments and Merkle membership soundness only; nothing here is
// zero-knowledge. The call surface is shaped so a real proof system could
// replace it without touching callers.

namespace pegsim::compliance {

using Digest = std::array<std::uint8_t, 32>;

/// Binding commitment to an identity record under a blinding value.
Digest commit_identity(const Bytes& identity, const Bytes& blinding);

struct MerkleStep {
    Digest sibling;
    bool sibling_on_right;
};
using MerklePath = std::vector<MerkleStep>;

/// Merkle tree over deduplicated, sorted asset ids. Odd levels duplicate
/// the last node; leaf and node hashes are domain separated.
class AssetMerkleTree {
  public:
    explicit AssetMerkleTree(std::vector<std::string> asset_ids);

    const Digest& root() const { return root_; }
    std::size_t leaf_count() const { return leaves_.size(); }
    bool contains(const std::string& asset_id) const;

    /// Throws std::invalid_argument for a non-member.
    MerklePath prove_membership(const std::string& asset_id) const;

  private:
    std::vector<std::string> leaves_;  // sorted, unique
    std::vector<std::vector<Digest>> levels_;
    Digest root_{};
};

bool verify_membership(const Digest& root, const std::string& asset_id,
                       const MerklePath& path);

enum class ComplianceFailure {
    None,
    AssetNotPermitted,
    SenderNotRegistered,
    ReceiverNotRegistered,
};

struct ComplianceResult {
    bool ok;
    ComplianceFailure reason;
};

/// Registry of known identity commitments plus the permitted-asset root.
class ComplianceRegistry {
  public:
    explicit ComplianceRegistry(AssetMerkleTree tree) : tree_(std::move(tree)) {}

    void register_commitment(const Digest& c) { registered_.insert(c); }
    bool is_registered(const Digest& c) const { return registered_.count(c) > 0; }
    const AssetMerkleTree& tree() const { return tree_; }

    ComplianceResult check_tx(const std::vector<std::string>& asset_ids,
                              const Digest& sender_commitment,
                              const Digest& receiver_commitment) const;

  private:
    AssetMerkleTree tree_;
    std::set<Digest> registered_;
};

}  // namespace pegsim::compliance
