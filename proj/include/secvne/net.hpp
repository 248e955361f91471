#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "secvne/fixed.hpp"

namespace secvne {

using NodeId = std::string;
using CloudId = std::string;

struct Cloud {
    CloudId id;
    Fixed trust;  // > 0
};

struct SubstrateNode {
    NodeId id;
    Fixed cpu_total;  // >= 0
    Fixed sec;        // > 0
    CloudId cloud_id;
};

struct SubstrateLink {
    NodeId a, b;  // canonical: a < b
    Fixed bw_total;  // >= 0
    Fixed sec;       // > 0
    Fixed alpha = Fixed::from_int(1);  // relative link cost weight
};

struct SubstrateNetwork {
    std::vector<Cloud> clouds;
    std::vector<SubstrateNode> nodes;
    std::vector<SubstrateLink> links;

    std::optional<std::size_t> node_index(const NodeId& id) const;
    std::optional<std::size_t> cloud_index(const CloudId& id) const;
    std::optional<std::size_t> link_index(const NodeId& a, const NodeId& b) const;

    // Trust of the cloud hosting substrate node p.
    Fixed node_trust(std::size_t p) const;
    std::size_t node_cloud(std::size_t p) const;
};

// avail: 0 = no backup, 1 = backup in the same cloud, 2 = backup in a different cloud
enum class Avail : std::uint8_t { None = 0, SameCloud = 1, DifferentCloud = 2 };

struct VirtualNode {
    NodeId id;
    Fixed cpu;           // >= 0
    Fixed sec_demand;    // > 0
    Fixed cloud_demand;  // > 0
    Avail avail = Avail::None;
};

struct VirtualLink {
    NodeId a, b;  // canonical: a < b
    Fixed bw;          // >= 0
    Fixed sec_demand;  // > 0
};

struct VirtualNetworkRequest {
    std::vector<VirtualNode> nodes;
    std::vector<VirtualLink> links;

    std::optional<std::size_t> node_index(const NodeId& id) const;
};

// Partition of a VNR into backup / no-backup parts plus the links touching a
// backup node; drives whether a backup network is modeled at all.
struct AuxSets {
    std::vector<std::size_t> nodes_no_backup;  // indices into vnr.nodes
    std::vector<std::size_t> nodes_backup;
    std::vector<std::size_t> links_no_backup;  // indices into vnr.links
    std::vector<std::size_t> links_backup;
    bool backup_network = false;
};

AuxSets derive_aux_sets(const VirtualNetworkRequest& vnr);

// Returns a human-readable description per violated invariant; empty = valid.
std::vector<std::string> validate_substrate(const SubstrateNetwork& net);
std::vector<std::string> validate_vnr(const VirtualNetworkRequest& vnr);

// The declared finite set of levels present in the substrate. Policy
// expansion resolves >= and negation against these.
struct LevelDomain {
    std::vector<Fixed> sec_levels;    // sorted ascending, unique
    std::vector<Fixed> cloud_levels;  // sorted ascending, unique
};

LevelDomain level_domain_of(const SubstrateNetwork& net);

// JSON interchange (schema "secvne-substrate-1" / "secvne-vnr-1").
std::string to_json(const SubstrateNetwork& net);
std::string to_json(const VirtualNetworkRequest& vnr);
SubstrateNetwork substrate_from_json(const std::string& text);
VirtualNetworkRequest vnr_from_json(const std::string& text);

// Canonical unordered-pair ordering used by all external formats.
inline void canonicalize(NodeId& a, NodeId& b) {
    if (b < a) std::swap(a, b);
}

}  // namespace secvne
