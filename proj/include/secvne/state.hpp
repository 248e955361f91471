#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "secvne/net.hpp"

namespace secvne {

// Exact resource footprint of one committed embedding: cpu per substrate node
// and bandwidth per substrate link, in Fixed units.
struct Allocation {
    std::vector<std::pair<std::size_t, Fixed>> node_cpu;  // (node index, cpu)
    std::vector<std::pair<std::size_t, Fixed>> link_bw;   // (link index, bw)
};

// Substrate plus live allocations. Mutated only through commit/release;
// owned by one logical writer at a time.
class SubstrateState {
public:
    explicit SubstrateState(SubstrateNetwork net);

    const SubstrateNetwork& network() const { return net_; }

    Fixed residual_node(std::size_t p) const;
    Fixed residual_link(std::size_t link_idx) const;
    Fixed residual_node(const NodeId& id) const;
    Fixed residual_link(const NodeId& a, const NodeId& b) const;

    // Optimistic-concurrency revision: embed() records it, commit() checks it.
    std::uint64_t revision() const { return revision_; }

    bool has_allocation(const std::string& request_id) const {
        return allocations_.count(request_id) != 0;
    }

    // Fails (returns false, state untouched) if any residual would go
    // negative or the request id is already present.
    bool commit(const std::string& request_id, const Allocation& alloc);
    // Throws on unknown request id.
    void release(const std::string& request_id);

    std::size_t allocation_count() const { return allocations_.size(); }

private:
    SubstrateNetwork net_;
    std::vector<Fixed> node_residual_;
    std::vector<Fixed> link_residual_;
    std::map<std::string, Allocation> allocations_;
    std::uint64_t revision_ = 0;
};

inline SubstrateState::SubstrateState(SubstrateNetwork net) : net_(std::move(net)) {
    node_residual_.reserve(net_.nodes.size());
    for (const auto& n : net_.nodes) node_residual_.push_back(n.cpu_total);
    link_residual_.reserve(net_.links.size());
    for (const auto& l : net_.links) link_residual_.push_back(l.bw_total);
}

inline Fixed SubstrateState::residual_node(std::size_t p) const {
    if (p >= node_residual_.size()) throw std::out_of_range("residual_node: unknown node index");
    return node_residual_[p];
}

inline Fixed SubstrateState::residual_link(std::size_t link_idx) const {
    if (link_idx >= link_residual_.size()) throw std::out_of_range("residual_link: unknown link index");
    return link_residual_[link_idx];
}

inline Fixed SubstrateState::residual_node(const NodeId& id) const {
    auto p = net_.node_index(id);
    if (!p) throw std::out_of_range("residual_node: unknown node '" + id + "'");
    return node_residual_[*p];
}

inline Fixed SubstrateState::residual_link(const NodeId& a, const NodeId& b) const {
    auto l = net_.link_index(a, b);
    if (!l) throw std::out_of_range("residual_link: unknown link (" + a + "," + b + ")");
    return link_residual_[*l];
}

inline bool SubstrateState::commit(const std::string& request_id, const Allocation& alloc) {
    if (allocations_.count(request_id)) return false;
    for (const auto& [p, cpu] : alloc.node_cpu)
        if (cpu > node_residual_.at(p)) return false;
    // Per-link demand may arrive in several entries; check on a scratch copy.
    std::vector<Fixed> link_scratch = link_residual_;
    for (const auto& [l, bw] : alloc.link_bw) {
        link_scratch.at(l) -= bw;
        if (link_scratch[l].is_negative()) return false;
    }
    std::vector<Fixed> node_scratch = node_residual_;
    for (const auto& [p, cpu] : alloc.node_cpu) {
        node_scratch[p] -= cpu;
        if (node_scratch[p].is_negative()) return false;
    }
    node_residual_ = std::move(node_scratch);
    link_residual_ = std::move(link_scratch);
    allocations_[request_id] = alloc;
    ++revision_;
    return true;
}

inline void SubstrateState::release(const std::string& request_id) {
    auto it = allocations_.find(request_id);
    if (it == allocations_.end())
        throw std::out_of_range("release: unknown request id '" + request_id + "'");
    for (const auto& [p, cpu] : it->second.node_cpu) node_residual_[p] += cpu;
    for (const auto& [l, bw] : it->second.link_bw) link_residual_[l] += bw;
    allocations_.erase(it);
    ++revision_;
}

}  // namespace secvne
