#include "secvne/embed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace secvne::embedder {

const char* reject_reason_name(RejectReason r) {
    switch (r) {
        case RejectReason::NoEligibleNode: return "no-eligible-node";
        case RejectReason::NoFeasiblePath: return "no-feasible-path";
        case RejectReason::Capacity: return "capacity";
        case RejectReason::SolverLimit: return "solver-limit";
    }
    return "?";
}

namespace {

// Cheap per-variant screen mirroring the model's eligibility fixing; a
// variant that fails here cannot have a feasible model, so we skip the solve.
enum class Screen { Ok, NodeFail, LinkFail };

Screen screen_variant(const SubstrateState& state, const RequestVariant& variant) {
    const auto& net = state.network();
    for (const auto& vn : variant.nodes) {
        std::size_t eligible = 0;
        std::set<std::size_t> clouds;
        for (std::size_t p = 0; p < net.nodes.size(); ++p) {
            if (!vn.sec.admits(net.nodes[p].sec)) continue;
            if (!vn.cloud.admits(net.node_trust(p))) continue;
            if (state.residual_node(p) < vn.cpu) continue;
            ++eligible;
            clouds.insert(net.node_cloud(p));
        }
        std::size_t need = vn.avail == Avail::None ? 1 : 2;  // backup needs its own host
        if (eligible < need) return Screen::NodeFail;
        if (vn.avail == Avail::DifferentCloud && clouds.size() < 2) return Screen::NodeFail;
    }
    for (const auto& vl : variant.links) {
        bool any = false;
        for (std::size_t e = 0; e < net.links.size(); ++e)
            if (vl.sec.admits(net.links[e].sec) && state.residual_link(e) >= vl.bw) {
                any = true;
                break;
            }
        if (!any && !vl.bw.is_zero()) return Screen::LinkFail;
        if (!any && vl.bw.is_zero()) continue;  // zero-bandwidth link needs no path capacity
    }
    return Screen::Ok;
}

}  // namespace

double revenue(const RequestVariant& variant, const PricingWeights& pricing) {
    double node_term = 0.0;
    for (const auto& vn : variant.nodes) {
        double phi = vn.avail != Avail::None ? 1.0 : 0.0;
        node_term += (1.0 + phi) * vn.cpu.to_double() * vn.sec.demanded().to_double() *
                     vn.cloud.demanded().to_double();
    }
    double link_term = 0.0;
    for (const auto& vl : variant.links) {
        auto ia = variant.node_index(vl.a);
        auto ib = variant.node_index(vl.b);
        bool touches = (ia && variant.nodes[*ia].avail != Avail::None) ||
                       (ib && variant.nodes[*ib].avail != Avail::None);
        double phi = touches ? 1.0 : 0.0;
        link_term += (1.0 + phi) * vl.bw.to_double() * vl.sec.demanded().to_double();
    }
    return pricing.lambda1 * node_term + pricing.lambda2 * link_term;
}

double cost(const milp::EmbeddingDecision& decision, const RequestVariant& variant,
            const SubstrateNetwork& net, const PricingWeights& pricing) {
    double node_term = 0.0;
    for (std::size_t i = 0; i < variant.nodes.size(); ++i) {
        double cpu = variant.nodes[i].cpu.to_double();
        int wp = decision.working_node[i];
        node_term += cpu * net.nodes[wp].sec.to_double() * net.node_trust(wp).to_double();
        // availability-flagged backups hold real resources; the implicit
        // co-located backup of an avail-0 node consumes nothing
        if (variant.nodes[i].avail != Avail::None && decision.backup_node[i] >= 0) {
            int bp = decision.backup_node[i];
            node_term += cpu * net.nodes[bp].sec.to_double() * net.node_trust(bp).to_double();
        }
    }
    double link_term = 0.0;
    auto add_flows = [&](const std::vector<milp::EmbeddingDecision::Flow>& flows) {
        for (const auto& f : flows) link_term += f.amount * net.links[f.slink].sec.to_double();
    };
    for (const auto& flows : decision.working_flow) add_flows(flows);
    for (const auto& flows : decision.backup_flow) add_flows(flows);
    return pricing.lambda1 * node_term + pricing.lambda2 * link_term;
}

Allocation build_allocation(const milp::EmbeddingDecision& decision, const RequestVariant& variant,
                            const SubstrateState& state) {
    Allocation alloc;
    std::map<std::size_t, Fixed> node_cpu;
    for (std::size_t i = 0; i < variant.nodes.size(); ++i) {
        node_cpu[static_cast<std::size_t>(decision.working_node[i])] += variant.nodes[i].cpu;
        if (variant.nodes[i].avail != Avail::None && decision.backup_node[i] >= 0)
            node_cpu[static_cast<std::size_t>(decision.backup_node[i])] += variant.nodes[i].cpu;
    }
    std::map<std::size_t, double> link_bw;
    for (const auto& flows : decision.working_flow)
        for (const auto& f : flows) link_bw[f.slink] += f.amount;
    for (const auto& flows : decision.backup_flow)
        for (const auto& f : flows) link_bw[f.slink] += f.amount;

    for (const auto& [p, cpu] : node_cpu) alloc.node_cpu.push_back({p, cpu});
    for (const auto& [e, bw] : link_bw) {
        Fixed q = Fixed::from_double(bw);
        // rounding to exact decimals may overshoot the residual by a hair;
        // clamp tiny overshoots, leave real violations for commit to refuse
        Fixed res = state.residual_link(e);
        if (q > res && (q - res).to_double() <= 1e-2) q = res;
        if (!q.is_zero()) alloc.link_bw.push_back({e, q});
    }
    return alloc;
}

EmbedResult embed(const SubstrateState& state, const std::vector<RequestVariant>& variants,
                  const std::string& request_id, const milp::Weights& weights,
                  const PricingWeights& pricing, const solver::SolveLimits& limits) {
    if (variants.empty()) return Rejection{RejectReason::NoFeasiblePath, "no variants"};

    bool any_node_fail = false, any_link_fail = false, any_limit = false, any_solved = false;
    bool have_best = false;
    EmbeddingRecord best;

    for (std::size_t v = 0; v < variants.size(); ++v) {
        const auto& variant = variants[v];
        Screen s = screen_variant(state, variant);
        if (s == Screen::NodeFail) {
            any_node_fail = true;
            continue;
        }
        if (s == Screen::LinkFail) {
            any_link_fail = true;
            continue;
        }
        auto built = milp::build_model(state, variant, weights);
        auto outcome = solver::solve_milp(built.model, limits);
        if (outcome.status == solver::Status::LimitReached) {
            any_limit = true;
            continue;
        }
        if (outcome.status == solver::Status::Infeasible) continue;
        any_solved = true;
        auto decision = milp::decode(outcome.assignment, built.index, variant, state.network(),
                                     weights, outcome.objective, 1e-6);
        double c = cost(decision, variant, state.network(), pricing);
        if (!have_best || c < best.cost - 1e-12) {
            have_best = true;
            best.request_id = request_id;
            best.variant_index = v;
            best.variant = variant;
            best.decision = std::move(decision);
            best.cost = c;
        }
    }

    if (have_best) {
        best.allocation = build_allocation(best.decision, best.variant, state);
        best.revenue = revenue(best.variant, pricing);
        best.state_revision = state.revision();
        return best;
    }

    if (any_limit) return Rejection{RejectReason::SolverLimit, "solver budget exhausted"};
    if (any_solved || any_link_fail || !any_node_fail) {
        // a loaded substrate points at capacity; a fresh one at routing
        bool loaded = state.allocation_count() > 0;
        if (any_link_fail && !loaded)
            return Rejection{RejectReason::NoFeasiblePath, "no admissible substrate link"};
        return loaded ? Rejection{RejectReason::Capacity, "infeasible against current residuals"}
                      : Rejection{RejectReason::NoFeasiblePath, "no feasible placement"};
    }
    return Rejection{RejectReason::NoEligibleNode, "a virtual node has no admissible host"};
}

bool commit(SubstrateState& state, const EmbeddingRecord& record) {
    if (state.revision() != record.state_revision) return false;  // stale
    return state.commit(record.request_id, record.allocation);
}

void release(SubstrateState& state, const std::string& request_id) {
    state.release(request_id);
}

std::vector<std::string> check_embedding(const SubstrateState& state, const RequestVariant& variant,
                                         const milp::EmbeddingDecision& decision,
                                         const Allocation& allocation) {
    std::vector<std::string> out;
    const auto& net = state.network();
    const std::size_t V = variant.nodes.size();
    if (decision.working_node.size() != V) {
        out.push_back("working map size mismatch");
        return out;
    }

    // 1. node eligibility: security, cloud trust
    for (std::size_t i = 0; i < V; ++i) {
        int wp = decision.working_node[i];
        if (wp < 0 || wp >= static_cast<int>(net.nodes.size())) {
            out.push_back("node '" + variant.nodes[i].id + "' unmapped");
            continue;
        }
        if (!variant.nodes[i].sec.admits(net.nodes[wp].sec))
            out.push_back("node '" + variant.nodes[i].id + "' host security too low");
        if (!variant.nodes[i].cloud.admits(net.node_trust(wp)))
            out.push_back("node '" + variant.nodes[i].id + "' host cloud trust too low");
        int bp = decision.backup_node.empty() ? -1 : decision.backup_node[i];
        if (variant.nodes[i].avail != Avail::None) {
            if (bp < 0) {
                out.push_back("node '" + variant.nodes[i].id + "' missing backup");
            } else {
                if (!variant.nodes[i].sec.admits(net.nodes[bp].sec))
                    out.push_back("node '" + variant.nodes[i].id + "' backup security too low");
                if (!variant.nodes[i].cloud.admits(net.node_trust(bp)))
                    out.push_back("node '" + variant.nodes[i].id + "' backup cloud trust too low");
            }
        }
    }

    // 2. link security on every carrying substrate link
    auto check_flows = [&](std::size_t l, const std::vector<milp::EmbeddingDecision::Flow>& flows,
                           const char* which) {
        for (const auto& f : flows) {
            if (f.slink >= net.links.size()) {
                out.push_back("flow on unknown substrate link");
                continue;
            }
            if (!variant.links[l].sec.admits(net.links[f.slink].sec))
                out.push_back("link (" + variant.links[l].a + "," + variant.links[l].b + ") " +
                              which + " flow on low-security substrate link");
        }
    };
    for (std::size_t l = 0; l < variant.links.size(); ++l) {
        if (l < decision.working_flow.size()) check_flows(l, decision.working_flow[l], "working");
        if (l < decision.backup_flow.size()) check_flows(l, decision.backup_flow[l], "backup");
    }

    // 3. host exclusivity: one working node per substrate node; backups of
    // availability-flagged nodes on hosts free of any working copy
    std::set<int> working_hosts;
    for (std::size_t i = 0; i < V; ++i)
        if (!working_hosts.insert(decision.working_node[i]).second)
            out.push_back("two working nodes share a substrate host");
    std::set<int> backup_hosts;
    for (std::size_t i = 0; i < V; ++i) {
        if (decision.backup_node.empty()) break;
        int bp = decision.backup_node[i];
        if (bp < 0) continue;
        if (variant.nodes[i].avail == Avail::None) {
            if (bp != decision.working_node[i])
                out.push_back("implicit backup of '" + variant.nodes[i].id + "' not co-located");
        } else {
            if (working_hosts.count(bp))
                out.push_back("backup of '" + variant.nodes[i].id + "' shares a working host");
            if (!backup_hosts.insert(bp).second)
                out.push_back("two backups share a substrate host");
        }
    }

    // 4. flow conservation per virtual link, working and backup networks
    auto conservation = [&](std::size_t l, const std::vector<milp::EmbeddingDecision::Flow>& flows,
                            const std::vector<int>& host_of, const char* which) {
        auto ia = variant.node_index(variant.links[l].a);
        auto ib = variant.node_index(variant.links[l].b);
        if (!ia || !ib) return;
        double bw = variant.links[l].bw.to_double();
        std::vector<double> net_out(net.nodes.size(), 0.0);
        for (const auto& f : flows) {
            auto pa = *net.node_index(net.links[f.slink].a);
            auto pb = *net.node_index(net.links[f.slink].b);
            if (f.dir == 0) {
                net_out[pa] += f.amount;
                net_out[pb] -= f.amount;
            } else {
                net_out[pb] += f.amount;
                net_out[pa] -= f.amount;
            }
        }
        int src = host_of[*ia], dst = host_of[*ib];
        for (std::size_t p = 0; p < net.nodes.size(); ++p) {
            double want = 0.0;
            if (static_cast<int>(p) == src) want += bw;
            if (static_cast<int>(p) == dst) want -= bw;
            if (std::abs(net_out[p] - want) > 1e-6)
                out.push_back("link (" + variant.links[l].a + "," + variant.links[l].b +
                              ") violates " + which + " flow conservation");
        }
    };
    // the backup network routes between backup locations (falling back to the
    // working host for avail-0 endpoints, which are co-located)
    std::vector<int> backup_host(V, -1);
    for (std::size_t i = 0; i < V; ++i) {
        int bp = decision.backup_node.empty() ? -1 : decision.backup_node[i];
        backup_host[i] = bp >= 0 ? bp : (decision.working_node.empty() ? -1 : decision.working_node[i]);
    }
    for (std::size_t l = 0; l < variant.links.size(); ++l) {
        if (l < decision.working_flow.size())
            conservation(l, decision.working_flow[l], decision.working_node, "working");
        if (l < decision.backup_flow.size() && !decision.backup_flow[l].empty())
            conservation(l, decision.backup_flow[l], backup_host, "backup");
    }

    // 5. working/backup disjointness over substrate links
    std::set<std::size_t> wlinks, blinks;
    for (const auto& flows : decision.working_flow)
        for (const auto& f : flows)
            if (f.amount > 1e-9) wlinks.insert(f.slink);
    for (const auto& flows : decision.backup_flow)
        for (const auto& f : flows)
            if (f.amount > 1e-9) blinks.insert(f.slink);
    for (std::size_t e : blinks)
        if (wlinks.count(e))
            out.push_back("substrate link " + net.links[e].a + "-" + net.links[e].b +
                          " carries both working and backup traffic");

    // 6. availability placement: same / different cloud as requested
    for (std::size_t i = 0; i < V; ++i) {
        if (variant.nodes[i].avail == Avail::None || decision.backup_node.empty()) continue;
        int wp = decision.working_node[i], bp = decision.backup_node[i];
        if (wp < 0 || bp < 0) continue;
        bool same = net.node_cloud(wp) == net.node_cloud(bp);
        if (variant.nodes[i].avail == Avail::SameCloud && !same)
            out.push_back("node '" + variant.nodes[i].id + "' backup in a different cloud");
        if (variant.nodes[i].avail == Avail::DifferentCloud && same)
            out.push_back("node '" + variant.nodes[i].id + "' backup in the same cloud");
    }

    // 7. the allocation fits in the current residuals
    for (const auto& [p, cpu] : allocation.node_cpu)
        if (cpu > state.residual_node(p))
            out.push_back("allocation exceeds cpu residual of " + net.nodes[p].id);
    std::map<std::size_t, Fixed> per_link;
    for (const auto& [e, bw] : allocation.link_bw) per_link[e] += bw;
    for (const auto& [e, bw] : per_link)
        if (bw > state.residual_link(e))
            out.push_back("allocation exceeds bandwidth residual of " + net.links[e].a + "-" +
                          net.links[e].b);

    return out;
}

}  // namespace secvne::embedder
