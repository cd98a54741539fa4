#include "pegsim/compliance.hpp"

#include <algorithm>
#include <stdexcept>

namespace pegsim::compliance {

namespace {

Digest leaf_hash(const std::string& id) {
    const Bytes parts[] = {Bytes(id.begin(), id.end())};
    return tagged_hash256("merkle-leaf", parts);
}

Digest node_hash(const Digest& left, const Digest& right) {
    const Bytes parts[] = {Bytes(left.begin(), left.end()),
                           Bytes(right.begin(), right.end())};
    return tagged_hash256("merkle-node", parts);
}

}  // namespace

Digest commit_identity(const Bytes& identity, const Bytes& blinding) {
    const Bytes parts[] = {identity, blinding};
    return tagged_hash256("identity-commitment", parts);
}

AssetMerkleTree::AssetMerkleTree(std::vector<std::string> asset_ids) {
    std::sort(asset_ids.begin(), asset_ids.end());
    asset_ids.erase(std::unique(asset_ids.begin(), asset_ids.end()),
                    asset_ids.end());
    if (asset_ids.empty())
        throw std::invalid_argument("AssetMerkleTree: no assets");
    leaves_ = std::move(asset_ids);

    std::vector<Digest> level;
    level.reserve(leaves_.size());
    for (const auto& id : leaves_) level.push_back(leaf_hash(id));
    levels_.push_back(level);
    while (level.size() > 1) {
        std::vector<Digest> next;
        for (std::size_t i = 0; i < level.size(); i += 2) {
            const Digest& l = level[i];
            const Digest& r = (i + 1 < level.size()) ? level[i + 1] : level[i];
            next.push_back(node_hash(l, r));
        }
        level = std::move(next);
        levels_.push_back(level);
    }
    root_ = levels_.back().front();
}

bool AssetMerkleTree::contains(const std::string& asset_id) const {
    return std::binary_search(leaves_.begin(), leaves_.end(), asset_id);
}

MerklePath AssetMerkleTree::prove_membership(const std::string& asset_id) const {
    auto it = std::lower_bound(leaves_.begin(), leaves_.end(), asset_id);
    if (it == leaves_.end() || *it != asset_id)
        throw std::invalid_argument("prove_membership: not a member");
    std::size_t idx = std::size_t(it - leaves_.begin());
    MerklePath path;
    for (std::size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
        const auto& nodes = levels_[lvl];
        std::size_t sib = (idx % 2 == 0) ? idx + 1 : idx - 1;
        if (sib >= nodes.size()) sib = idx;  // duplicated odd node
        path.push_back({nodes[sib], idx % 2 == 0});
        idx /= 2;
    }
    return path;
}

bool verify_membership(const Digest& root, const std::string& asset_id,
                       const MerklePath& path) {
    Digest h = leaf_hash(asset_id);
    for (const auto& step : path)
        h = step.sibling_on_right ? node_hash(h, step.sibling)
                                  : node_hash(step.sibling, h);
    return h == root;
}

ComplianceResult ComplianceRegistry::check_tx(
    const std::vector<std::string>& asset_ids, const Digest& sender_commitment,
    const Digest& receiver_commitment) const {
    if (!is_registered(sender_commitment))
        return {false, ComplianceFailure::SenderNotRegistered};
    if (!is_registered(receiver_commitment))
        return {false, ComplianceFailure::ReceiverNotRegistered};
    for (const auto& id : asset_ids) {
        if (!tree_.contains(id))
            return {false, ComplianceFailure::AssetNotPermitted};
        // Soundness gate: the stored proof path must verify against the root.
        if (!verify_membership(tree_.root(), id, tree_.prove_membership(id)))
            return {false, ComplianceFailure::AssetNotPermitted};
    }
    return {true, ComplianceFailure::None};
}

}  // namespace pegsim::compliance
