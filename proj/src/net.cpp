#include "secvne/net.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace secvne {

using nlohmann::json;

std::optional<std::size_t> SubstrateNetwork::node_index(const NodeId& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> SubstrateNetwork::cloud_index(const CloudId& id) const {
    for (std::size_t i = 0; i < clouds.size(); ++i)
        if (clouds[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> SubstrateNetwork::link_index(const NodeId& a, const NodeId& b) const {
    NodeId x = a, y = b;
    canonicalize(x, y);
    for (std::size_t i = 0; i < links.size(); ++i)
        if (links[i].a == x && links[i].b == y) return i;
    return std::nullopt;
}

Fixed SubstrateNetwork::node_trust(std::size_t p) const {
    return clouds[node_cloud(p)].trust;
}

std::size_t SubstrateNetwork::node_cloud(std::size_t p) const {
    auto c = cloud_index(nodes[p].cloud_id);
    if (!c) throw std::runtime_error("substrate node " + nodes[p].id + " references unknown cloud");
    return *c;
}

std::optional<std::size_t> VirtualNetworkRequest::node_index(const NodeId& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return i;
    return std::nullopt;
}

AuxSets derive_aux_sets(const VirtualNetworkRequest& vnr) {
    AuxSets s;
    for (std::size_t i = 0; i < vnr.nodes.size(); ++i) {
        if (vnr.nodes[i].avail == Avail::None)
            s.nodes_no_backup.push_back(i);
        else
            s.nodes_backup.push_back(i);
    }
    for (std::size_t l = 0; l < vnr.links.size(); ++l) {
        const auto& vl = vnr.links[l];
        auto ia = vnr.node_index(vl.a);
        auto ib = vnr.node_index(vl.b);
        bool touches_backup =
            (ia && vnr.nodes[*ia].avail != Avail::None) || (ib && vnr.nodes[*ib].avail != Avail::None);
        if (touches_backup)
            s.links_backup.push_back(l);
        else
            s.links_no_backup.push_back(l);
    }
    s.backup_network = !s.nodes_backup.empty();
    return s;
}

std::vector<std::string> validate_substrate(const SubstrateNetwork& net) {
    std::vector<std::string> out;
    std::set<CloudId> cloud_ids;
    for (const auto& c : net.clouds) {
        if (!cloud_ids.insert(c.id).second) out.push_back("duplicate cloud id '" + c.id + "'");
        if (c.trust <= Fixed()) out.push_back("cloud '" + c.id + "' has non-positive trust");
    }
    std::set<NodeId> node_ids;
    for (const auto& n : net.nodes) {
        if (!node_ids.insert(n.id).second) out.push_back("duplicate node id '" + n.id + "'");
        if (n.cpu_total.is_negative()) out.push_back("node '" + n.id + "' has negative cpu");
        if (n.sec <= Fixed()) out.push_back("node '" + n.id + "' has non-positive sec");
        if (!cloud_ids.count(n.cloud_id))
            out.push_back("node '" + n.id + "' references undeclared cloud '" + n.cloud_id + "'");
    }
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (const auto& l : net.links) {
        std::string name = "(" + l.a + "," + l.b + ")";
        if (l.a == l.b) out.push_back("link " + name + " is a self-loop");
        if (l.b < l.a) out.push_back("link " + name + " endpoints not in canonical order");
        if (!node_ids.count(l.a) || !node_ids.count(l.b))
            out.push_back("link " + name + " references missing node");
        NodeId x = l.a, y = l.b;
        canonicalize(x, y);
        if (!pairs.insert({x, y}).second) out.push_back("duplicate link " + name);
        if (l.bw_total.is_negative()) out.push_back("link " + name + " has negative bandwidth");
        if (l.sec <= Fixed()) out.push_back("link " + name + " has non-positive sec");
        if (l.alpha <= Fixed()) out.push_back("link " + name + " has non-positive alpha");
    }
    return out;
}

std::vector<std::string> validate_vnr(const VirtualNetworkRequest& vnr) {
    std::vector<std::string> out;
    std::set<NodeId> ids;
    for (const auto& n : vnr.nodes) {
        if (!ids.insert(n.id).second) out.push_back("duplicate virtual node id '" + n.id + "'");
        if (n.cpu.is_negative()) out.push_back("virtual node '" + n.id + "' has negative cpu");
        if (n.sec_demand <= Fixed()) out.push_back("virtual node '" + n.id + "' has non-positive sec demand");
        if (n.cloud_demand <= Fixed())
            out.push_back("virtual node '" + n.id + "' has non-positive cloud demand");
    }
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (const auto& l : vnr.links) {
        std::string name = "(" + l.a + "," + l.b + ")";
        if (l.a == l.b) out.push_back("virtual link " + name + " is a self-loop");
        if (!ids.count(l.a) || !ids.count(l.b))
            out.push_back("virtual link " + name + " references missing node");
        NodeId x = l.a, y = l.b;
        canonicalize(x, y);
        if (!pairs.insert({x, y}).second) out.push_back("duplicate virtual link " + name);
        if (l.bw.is_negative()) out.push_back("virtual link " + name + " has negative bandwidth");
        if (l.sec_demand <= Fixed()) out.push_back("virtual link " + name + " has non-positive sec demand");
    }
    return out;
}

LevelDomain level_domain_of(const SubstrateNetwork& net) {
    std::set<Fixed> sec, cloud;
    for (const auto& n : net.nodes) sec.insert(n.sec);
    for (const auto& l : net.links) sec.insert(l.sec);
    for (const auto& c : net.clouds) cloud.insert(c.trust);
    LevelDomain d;
    d.sec_levels.assign(sec.begin(), sec.end());
    d.cloud_levels.assign(cloud.begin(), cloud.end());
    return d;
}

namespace {

json fixed_to_json(Fixed f) {
    if (f.milli() % Fixed::kScale == 0) return json(f.milli() / Fixed::kScale);
    return json(f.to_double());
}

Fixed fixed_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) return Fixed::from_int(j.get<std::int64_t>());
    if (j.is_number_float()) return Fixed::from_double(j.get<double>());
    if (j.is_string()) return Fixed::parse(j.get<std::string>());
    throw std::runtime_error(std::string("expected number for ") + what);
}

}  // namespace

std::string to_json(const SubstrateNetwork& net) {
    json j;
    j["schema"] = "secvne-substrate-1";
    j["clouds"] = json::array();
    for (const auto& c : net.clouds)
        j["clouds"].push_back({{"id", c.id}, {"trust", fixed_to_json(c.trust)}});
    j["nodes"] = json::array();
    for (const auto& n : net.nodes)
        j["nodes"].push_back({{"id", n.id},
                              {"cpu", fixed_to_json(n.cpu_total)},
                              {"sec", fixed_to_json(n.sec)},
                              {"cloud", n.cloud_id}});
    j["links"] = json::array();
    for (const auto& l : net.links)
        j["links"].push_back({{"a", l.a},
                              {"b", l.b},
                              {"bw", fixed_to_json(l.bw_total)},
                              {"sec", fixed_to_json(l.sec)},
                              {"alpha", fixed_to_json(l.alpha)}});
    return j.dump(2);
}

std::string to_json(const VirtualNetworkRequest& vnr) {
    json j;
    j["schema"] = "secvne-vnr-1";
    j["nodes"] = json::array();
    for (const auto& n : vnr.nodes)
        j["nodes"].push_back({{"id", n.id},
                              {"cpu", fixed_to_json(n.cpu)},
                              {"sec", fixed_to_json(n.sec_demand)},
                              {"cloud", fixed_to_json(n.cloud_demand)},
                              {"avail", static_cast<int>(n.avail)}});
    j["links"] = json::array();
    for (const auto& l : vnr.links)
        j["links"].push_back({{"a", l.a},
                              {"b", l.b},
                              {"bw", fixed_to_json(l.bw)},
                              {"sec", fixed_to_json(l.sec_demand)}});
    return j.dump(2);
}

SubstrateNetwork substrate_from_json(const std::string& text) {
    json j = json::parse(text);
    SubstrateNetwork net;
    for (const auto& c : j.at("clouds"))
        net.clouds.push_back({c.at("id").get<std::string>(), fixed_from_json(c.at("trust"), "cloud.trust")});
    for (const auto& n : j.at("nodes"))
        net.nodes.push_back({n.at("id").get<std::string>(), fixed_from_json(n.at("cpu"), "node.cpu"),
                             fixed_from_json(n.at("sec"), "node.sec"), n.at("cloud").get<std::string>()});
    for (const auto& l : j.value("links", json::array())) {
        SubstrateLink sl;
        sl.a = l.at("a").get<std::string>();
        sl.b = l.at("b").get<std::string>();
        canonicalize(sl.a, sl.b);
        sl.bw_total = fixed_from_json(l.at("bw"), "link.bw");
        sl.sec = fixed_from_json(l.at("sec"), "link.sec");
        if (l.contains("alpha")) sl.alpha = fixed_from_json(l.at("alpha"), "link.alpha");
        net.links.push_back(sl);
    }
    return net;
}

VirtualNetworkRequest vnr_from_json(const std::string& text) {
    json j = json::parse(text);
    VirtualNetworkRequest vnr;
    for (const auto& n : j.at("nodes")) {
        VirtualNode vn;
        vn.id = n.at("id").get<std::string>();
        vn.cpu = fixed_from_json(n.at("cpu"), "node.cpu");
        vn.sec_demand = fixed_from_json(n.at("sec"), "node.sec");
        vn.cloud_demand = fixed_from_json(n.at("cloud"), "node.cloud");
        int avail = n.value("avail", 0);
        if (avail < 0 || avail > 2) throw std::runtime_error("avail must be 0, 1 or 2");
        vn.avail = static_cast<Avail>(avail);
        vnr.nodes.push_back(vn);
    }
    for (const auto& l : j.value("links", json::array())) {
        VirtualLink vl;
        vl.a = l.at("a").get<std::string>();
        vl.b = l.at("b").get<std::string>();
        canonicalize(vl.a, vl.b);
        vl.bw = fixed_from_json(l.at("bw"), "link.bw");
        vl.sec_demand = fixed_from_json(l.at("sec"), "link.sec");
        vnr.links.push_back(vl);
    }
    return vnr;
}

}  // namespace secvne
