#pragma once

#include <algorithm>
#include <vector>

#include "secvne/net.hpp"

namespace secvne {

// Security / cloud-trust requirement of one virtual resource. Either a plain
// minimum level ("at least v") or an explicit allowed set produced by policy
// expansion (which can be non-contiguous once negation is involved).
class LevelReq {
public:
    static LevelReq at_least(Fixed v) {
        LevelReq r;
        r.min_ = v;
        return r;
    }

    static LevelReq one_of(std::vector<Fixed> levels) {
        LevelReq r;
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        r.set_ = std::move(levels);
        r.is_set_ = true;
        return r;
    }

    bool admits(Fixed level) const {
        if (!is_set_) return level >= min_;
        return std::binary_search(set_.begin(), set_.end(), level);
    }

    bool empty() const { return is_set_ && set_.empty(); }

    // The demanded level: what the tenant is charged for (revenue formula).
    Fixed demanded() const { return is_set_ ? set_.front() : min_; }

    bool is_set() const { return is_set_; }
    const std::vector<Fixed>& levels() const { return set_; }
    Fixed min_level() const { return min_; }

    friend bool operator==(const LevelReq& a, const LevelReq& b) {
        if (a.is_set_ != b.is_set_) return false;
        return a.is_set_ ? a.set_ == b.set_ : a.min_ == b.min_;
    }

private:
    Fixed min_ = Fixed::from_int(1);
    std::vector<Fixed> set_;
    bool is_set_ = false;
};

struct VariantNode {
    NodeId id;
    Fixed cpu;
    LevelReq sec;
    LevelReq cloud;
    Avail avail = Avail::None;

    friend bool operator==(const VariantNode&, const VariantNode&) = default;
};

struct VariantLink {
    NodeId a, b;  // canonical order
    Fixed bw;
    LevelReq sec;

    friend bool operator==(const VariantLink&, const VariantLink&) = default;
};

// One fully concrete embedding candidate: a VNR whose sec/cloud demands are
// allowed-sets over the level domain and whose cpu/bw/avail are exact.
struct RequestVariant {
    std::vector<VariantNode> nodes;
    std::vector<VariantLink> links;

    std::optional<std::size_t> node_index(const NodeId& id) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].id == id) return i;
        return std::nullopt;
    }

    AuxSets aux_sets() const;

    friend bool operator==(const RequestVariant&, const RequestVariant&) = default;
};

inline AuxSets RequestVariant::aux_sets() const {
    AuxSets s;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].avail == Avail::None)
            s.nodes_no_backup.push_back(i);
        else
            s.nodes_backup.push_back(i);
    }
    for (std::size_t l = 0; l < links.size(); ++l) {
        auto ia = node_index(links[l].a);
        auto ib = node_index(links[l].b);
        bool touches = (ia && nodes[*ia].avail != Avail::None) || (ib && nodes[*ib].avail != Avail::None);
        (touches ? s.links_backup : s.links_no_backup).push_back(l);
    }
    s.backup_network = !s.nodes_backup.empty();
    return s;
}

inline RequestVariant variant_from_vnr(const VirtualNetworkRequest& vnr) {
    RequestVariant v;
    for (const auto& n : vnr.nodes)
        v.nodes.push_back({n.id, n.cpu, LevelReq::at_least(n.sec_demand),
                           LevelReq::at_least(n.cloud_demand), n.avail});
    for (const auto& l : vnr.links)
        v.links.push_back({l.a, l.b, l.bw, LevelReq::at_least(l.sec_demand)});
    return v;
}

}  // namespace secvne
