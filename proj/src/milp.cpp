#include "secvne/milp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace secvne::milp {

namespace {

std::string clean(const std::string& id) {
    std::string out;
    for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

}  // namespace

BuildResult build_model(const SubstrateState& state, const RequestVariant& variant,
                        const Weights& weights) {
    const SubstrateNetwork& net = state.network();
    if (net.nodes.empty()) throw std::invalid_argument("build_model: empty substrate");

    const std::size_t P = net.nodes.size();
    const std::size_t C = net.clouds.size();
    const std::size_t E = net.links.size();
    const std::size_t V = variant.nodes.size();
    const std::size_t L = variant.links.size();

    // Virtual link endpoints as node indices.
    std::vector<std::pair<std::size_t, std::size_t>> vl_ends(L);
    for (std::size_t l = 0; l < L; ++l) {
        auto ia = variant.node_index(variant.links[l].a);
        auto ib = variant.node_index(variant.links[l].b);
        if (!ia || !ib)
            throw std::invalid_argument("build_model: virtual link references unknown node '" +
                                        variant.links[l].a + "'/'" + variant.links[l].b + "'");
        vl_ends[l] = {*ia, *ib};
    }

    AuxSets aux = variant.aux_sets();
    const bool bk = aux.backup_network;
    std::vector<char> is_backup_node(V, 0);
    for (auto i : aux.nodes_backup) is_backup_node[i] = 1;
    std::vector<char> link_bk(L, 0);
    for (auto l : aux.links_backup) link_bk[l] = 1;

    // Node eligibility: security level and cloud trust in the allowed sets,
    // and enough residual cpu to host the node at all.
    std::vector<char> elig_n(V * P, 0);
    for (std::size_t i = 0; i < V; ++i) {
        const auto& vn = variant.nodes[i];
        for (std::size_t p = 0; p < P; ++p) {
            bool ok = vn.sec.admits(net.nodes[p].sec) && vn.cloud.admits(net.node_trust(p)) &&
                      vn.cpu <= state.residual_node(p);
            elig_n[i * P + p] = ok;
        }
    }
    std::vector<char> elig_l(L * E, 0);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t e = 0; e < E; ++e)
            elig_l[l * E + e] = variant.links[l].sec.admits(net.links[e].sec);

    MilpModel m;
    VarIndex ix;
    ix.n_vnodes = V;
    ix.n_snodes = P;
    ix.n_clouds = C;
    ix.n_vlinks = L;
    ix.n_slinks = E;
    ix.backup_network = bk;
    ix.link_has_backup = link_bk;

    auto node_cost = [&](std::size_t p) {
        return net.nodes[p].sec.to_double() * net.node_trust(p).to_double();
    };

    // --- columns ---
    ix.wn.assign(V * P, -1);
    for (std::size_t i = 0; i < V; ++i)
        for (std::size_t p = 0; p < P; ++p) {
            double ub = elig_n[i * P + p] ? 1.0 : 0.0;
            double obj = weights.beta1 * variant.nodes[i].cpu.to_double() * node_cost(p);
            ix.wn[i * P + p] = m.add_var("wn_" + clean(variant.nodes[i].id) + "_" + clean(net.nodes[p].id),
                                         VarKind::Binary, 0.0, ub, obj);
        }
    if (bk) {
        ix.bn.assign(V * P, -1);
        for (std::size_t i = 0; i < V; ++i)
            for (std::size_t p = 0; p < P; ++p) {
                double ub = elig_n[i * P + p] ? 1.0 : 0.0;
                // only requested backups consume resources / cost
                double obj = is_backup_node[i]
                                 ? weights.beta1 * variant.nodes[i].cpu.to_double() * node_cost(p)
                                 : 0.0;
                ix.bn[i * P + p] =
                    m.add_var("bn_" + clean(variant.nodes[i].id) + "_" + clean(net.nodes[p].id),
                              VarKind::Binary, 0.0, ub, obj);
            }
    }
    ix.wc.assign(V * C, -1);
    for (std::size_t i = 0; i < V; ++i)
        for (std::size_t c = 0; c < C; ++c)
            ix.wc[i * C + c] = m.add_var(
                "wc_" + clean(variant.nodes[i].id) + "_" + clean(net.clouds[c].id), VarKind::Binary,
                0.0, 1.0, 0.0, 1);
    if (bk) {
        ix.bc.assign(V * C, -1);
        for (std::size_t i = 0; i < V; ++i)
            for (std::size_t c = 0; c < C; ++c)
                ix.bc[i * C + c] = m.add_var(
                    "bc_" + clean(variant.nodes[i].id) + "_" + clean(net.clouds[c].id),
                    VarKind::Binary, 0.0, 1.0, 0.0, 1);
    }

    auto link_tag = [&](std::size_t l, std::size_t e, int dir) {
        const auto& sl = net.links[e];
        std::string s = clean(variant.links[l].a) + "_" + clean(variant.links[l].b) + "__";
        if (dir == 0)
            s += clean(sl.a) + "_" + clean(sl.b);
        else
            s += clean(sl.b) + "_" + clean(sl.a);
        return s;
    };

    ix.wl.assign(L * E, -1);
    ix.wf.assign(L * E * 2, -1);
    if (bk) {
        ix.bl.assign(L * E, -1);
        ix.bf.assign(L * E * 2, -1);
    }
    for (std::size_t l = 0; l < L; ++l) {
        double bw = variant.links[l].bw.to_double();
        for (std::size_t e = 0; e < E; ++e) {
            if (!elig_l[l * E + e]) continue;
            double fcost = weights.beta2 * net.links[e].alpha.to_double() * net.links[e].sec.to_double();
            ix.wl[l * E + e] = m.add_var("wl_" + link_tag(l, e, 0), VarKind::Binary, 0.0, 1.0,
                                         weights.beta3, 3);
            ix.wf[(l * E + e) * 2 + 0] =
                m.add_var("wf_" + link_tag(l, e, 0), VarKind::Continuous, 0.0, bw, fcost);
            ix.wf[(l * E + e) * 2 + 1] =
                m.add_var("wf_" + link_tag(l, e, 1), VarKind::Continuous, 0.0, bw, fcost);
            if (bk && link_bk[l]) {
                ix.bl[l * E + e] = m.add_var("bl_" + link_tag(l, e, 0), VarKind::Binary, 0.0, 1.0,
                                             weights.beta3, 3);
                ix.bf[(l * E + e) * 2 + 0] =
                    m.add_var("bf_" + link_tag(l, e, 0), VarKind::Continuous, 0.0, bw, fcost);
                ix.bf[(l * E + e) * 2 + 1] =
                    m.add_var("bf_" + link_tag(l, e, 1), VarKind::Continuous, 0.0, bw, fcost);
            }
        }
    }

    ix.working.assign(E, -1);
    for (std::size_t e = 0; e < E; ++e)
        ix.working[e] = m.add_var("working_" + clean(net.links[e].a) + "_" + clean(net.links[e].b),
                                  VarKind::Binary, 0.0, 1.0, 0.0, 2);
    if (bk) {
        ix.backup.assign(E, -1);
        for (std::size_t e = 0; e < E; ++e)
            ix.backup[e] = m.add_var("backup_" + clean(net.links[e].a) + "_" + clean(net.links[e].b),
                                     VarKind::Binary, 0.0, 1.0, 0.0, 2);
    }

    // --- rows ---
    // one working (and, with a backup network, one backup) host per virtual node
    for (std::size_t i = 0; i < V; ++i) {
        std::vector<std::pair<int, double>> c;
        for (std::size_t p = 0; p < P; ++p) c.push_back({ix.wn[i * P + p], 1.0});
        m.add_row("map_w_" + clean(variant.nodes[i].id), std::move(c), Sense::Eq, 1.0);
    }
    if (bk)
        for (auto i : aux.nodes_backup) {
            std::vector<std::pair<int, double>> c;
            for (std::size_t p = 0; p < P; ++p) c.push_back({ix.bn[i * P + p], 1.0});
            m.add_row("map_b_" + clean(variant.nodes[i].id), std::move(c), Sense::Eq, 1.0);
        }

    // no substrate sharing within one request
    for (std::size_t p = 0; p < P; ++p) {
        std::vector<std::pair<int, double>> c;
        for (std::size_t i = 0; i < V; ++i) c.push_back({ix.wn[i * P + p], 1.0});
        m.add_row("one_w_" + clean(net.nodes[p].id), std::move(c), Sense::Le, 1.0);
    }
    if (bk) {
        for (std::size_t p = 0; p < P; ++p) {
            std::vector<std::pair<int, double>> c;
            for (std::size_t i = 0; i < V; ++i) c.push_back({ix.bn[i * P + p], 1.0});
            m.add_row("one_b_" + clean(net.nodes[p].id), std::move(c), Sense::Le, 1.0);
        }
        for (auto j : aux.nodes_backup)
            for (std::size_t p = 0; p < P; ++p) {
                std::vector<std::pair<int, double>> c;
                for (std::size_t i = 0; i < V; ++i) c.push_back({ix.wn[i * P + p], 1.0});
                c.push_back({ix.bn[j * P + p], 1.0});
                m.add_row("sep_" + clean(variant.nodes[j].id) + "_" + clean(net.nodes[p].id),
                          std::move(c), Sense::Le, 1.0);
            }
        // non-requested ("virtual") backups ride on their working node
        for (auto i : aux.nodes_no_backup)
            for (std::size_t p = 0; p < P; ++p)
                m.add_row("colo_" + clean(variant.nodes[i].id) + "_" + clean(net.nodes[p].id),
                          {{ix.bn[i * P + p], 1.0}, {ix.wn[i * P + p], -1.0}}, Sense::Le, 0.0);
        for (auto j : aux.nodes_no_backup)
            for (std::size_t p = 0; p < P; ++p) {
                std::vector<std::pair<int, double>> c;
                for (std::size_t i = 0; i < V; ++i) c.push_back({ix.wn[i * P + p], 1.0});
                c.push_back({ix.bn[j * P + p], 1.0});
                m.add_row("colo2_" + clean(variant.nodes[j].id) + "_" + clean(net.nodes[p].id),
                          std::move(c), Sense::Le, 2.0);
            }
    }

    // flow-indicator coupling (multipath allowed)
    for (std::size_t l = 0; l < L; ++l) {
        double bw = variant.links[l].bw.to_double();
        for (std::size_t e = 0; e < E; ++e) {
            int wlv = ix.wl[l * E + e];
            if (wlv < 0) continue;
            // both directions share one coupling row: flow costs are positive,
            // so an optimal routing never uses a link in both directions and
            // the combined form is valid while tightening the relaxation
            m.add_row("cplw_" + link_tag(l, e, 0),
                      {{ix.wf[(l * E + e) * 2], 1.0},
                       {ix.wf[(l * E + e) * 2 + 1], 1.0},
                       {wlv, -bw}},
                      Sense::Le, 0.0);
            if (bk && link_bk[l])
                m.add_row("cplb_" + link_tag(l, e, 0),
                          {{ix.bf[(l * E + e) * 2], 1.0},
                           {ix.bf[(l * E + e) * 2 + 1], 1.0},
                           {ix.bl[l * E + e], -bw}},
                          Sense::Le, 0.0);
        }
    }

    // flow conservation with meta-link flows substituted: the working flow of
    // (a,b) is injected at a's host and drained at b's host
    std::vector<std::vector<std::pair<std::size_t, int>>> incident(P);  // (slink, dir leaving p)
    for (std::size_t e = 0; e < E; ++e) {
        auto pa = net.node_index(net.links[e].a);
        auto pb = net.node_index(net.links[e].b);
        if (!pa || !pb) throw std::invalid_argument("build_model: substrate link references unknown node");
        incident[*pa].push_back({e, 0});
        incident[*pb].push_back({e, 1});
    }
    for (std::size_t l = 0; l < L; ++l) {
        auto [a, b] = vl_ends[l];
        double bw = variant.links[l].bw.to_double();
        for (std::size_t p = 0; p < P; ++p) {
            std::vector<std::pair<int, double>> c;
            for (auto [e, out_dir] : incident[p]) {
                int out_col = ix.wf_at(l, e, out_dir);
                if (out_col >= 0) {
                    c.push_back({out_col, 1.0});
                    c.push_back({ix.wf_at(l, e, 1 - out_dir), -1.0});
                }
            }
            c.push_back({ix.wn[a * P + p], -bw});
            c.push_back({ix.wn[b * P + p], bw});
            m.add_row("consw_" + clean(variant.links[l].a) + "_" + clean(variant.links[l].b) + "__" +
                          clean(net.nodes[p].id),
                      std::move(c), Sense::Eq, 0.0);
        }
        if (bk && link_bk[l])
            for (std::size_t p = 0; p < P; ++p) {
                std::vector<std::pair<int, double>> c;
                for (auto [e, out_dir] : incident[p]) {
                    int out_col = ix.bf_at(l, e, out_dir);
                    if (out_col >= 0) {
                        c.push_back({out_col, 1.0});
                        c.push_back({ix.bf_at(l, e, 1 - out_dir), -1.0});
                    }
                }
                c.push_back({ix.bn[a * P + p], -bw});
                c.push_back({ix.bn[b * P + p], bw});
                m.add_row("consb_" + clean(variant.links[l].a) + "_" + clean(variant.links[l].b) +
                              "__" + clean(net.nodes[p].id),
                          std::move(c), Sense::Eq, 0.0);
            }
    }

    // cloud linkage
    for (std::size_t i = 0; i < V; ++i) {
        for (std::size_t c = 0; c < C; ++c) {
            std::vector<std::pair<int, double>> row{{ix.wc[i * C + c], 1.0}};
            for (std::size_t p = 0; p < P; ++p)
                if (net.node_cloud(p) == c) row.push_back({ix.wn[i * P + p], -1.0});
            m.add_row("cldw_" + clean(variant.nodes[i].id) + "_" + clean(net.clouds[c].id),
                      std::move(row), Sense::Le, 0.0);
        }
        std::vector<std::pair<int, double>> sum;
        for (std::size_t c = 0; c < C; ++c) sum.push_back({ix.wc[i * C + c], 1.0});
        m.add_row("cld1w_" + clean(variant.nodes[i].id), std::move(sum), Sense::Eq, 1.0);
    }
    if (bk)
        for (std::size_t i = 0; i < V; ++i) {
            for (std::size_t c = 0; c < C; ++c) {
                std::vector<std::pair<int, double>> row{{ix.bc[i * C + c], 1.0}};
                for (std::size_t p = 0; p < P; ++p)
                    if (net.node_cloud(p) == c) row.push_back({ix.bn[i * P + p], -1.0});
                m.add_row("cldb_" + clean(variant.nodes[i].id) + "_" + clean(net.clouds[c].id),
                          std::move(row), Sense::Le, 0.0);
            }
            std::vector<std::pair<int, double>> sum;
            for (std::size_t c = 0; c < C; ++c) sum.push_back({ix.bc[i * C + c], 1.0});
            m.add_row("cld1b_" + clean(variant.nodes[i].id), std::move(sum), Sense::Eq, 1.0);
        }

    // availability placement (linearized per avail case)
    if (bk)
        for (std::size_t i = 0; i < V; ++i) {
            if (variant.nodes[i].avail == Avail::SameCloud) {
                for (std::size_t c = 0; c < C; ++c)
                    m.add_row("avs_" + clean(variant.nodes[i].id) + "_" + clean(net.clouds[c].id),
                              {{ix.bc[i * C + c], 1.0}, {ix.wc[i * C + c], -1.0}}, Sense::Eq, 0.0);
            } else if (variant.nodes[i].avail == Avail::DifferentCloud) {
                for (std::size_t c = 0; c < C; ++c)
                    m.add_row("avd_" + clean(variant.nodes[i].id) + "_" + clean(net.clouds[c].id),
                              {{ix.wc[i * C + c], 1.0}, {ix.bc[i * C + c], 1.0}}, Sense::Le, 1.0);
            }
        }

    // working/backup disjointness
    if (bk)
        for (std::size_t e = 0; e < E; ++e)
            m.add_row("disj_" + clean(net.links[e].a) + "_" + clean(net.links[e].b),
                      {{ix.working[e], 1.0}, {ix.backup[e], 1.0}}, Sense::Le, 1.0);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t e = 0; e < E; ++e) {
            if (ix.wl[l * E + e] < 0) continue;
            m.add_row("wsel_" + link_tag(l, e, 0),
                      {{ix.wl[l * E + e], 1.0}, {ix.working[e], -1.0}}, Sense::Le, 0.0);
            if (bk && link_bk[l])
                m.add_row("bsel_" + link_tag(l, e, 0),
                          {{ix.bl[l * E + e], 1.0}, {ix.backup[e], -1.0}}, Sense::Le, 0.0);
        }

    // residual capacities
    for (std::size_t p = 0; p < P; ++p) {
        std::vector<std::pair<int, double>> c;
        for (std::size_t i = 0; i < V; ++i)
            c.push_back({ix.wn[i * P + p], variant.nodes[i].cpu.to_double()});
        if (bk)
            for (auto j : aux.nodes_backup)
                c.push_back({ix.bn[j * P + p], variant.nodes[j].cpu.to_double()});
        m.add_row("capn_" + clean(net.nodes[p].id), std::move(c), Sense::Le,
                  state.residual_node(p).to_double());
    }
    for (std::size_t e = 0; e < E; ++e) {
        std::vector<std::pair<int, double>> c;
        for (std::size_t l = 0; l < L; ++l) {
            if (ix.wl[l * E + e] < 0) continue;
            c.push_back({ix.wf_at(l, e, 0), 1.0});
            c.push_back({ix.wf_at(l, e, 1), 1.0});
            if (bk && link_bk[l]) {
                c.push_back({ix.bf_at(l, e, 0), 1.0});
                c.push_back({ix.bf_at(l, e, 1), 1.0});
            }
        }
        m.add_row("cape_" + clean(net.links[e].a) + "_" + clean(net.links[e].b), std::move(c),
                  Sense::Le, state.residual_link(e).to_double());
    }

    return {std::move(m), std::move(ix)};
}

EmbeddingDecision decode(const std::vector<double>& solution, const VarIndex& ix,
                         const RequestVariant& variant, const SubstrateNetwork& net,
                         const Weights& weights, double solver_objective, double tol) {
    const std::size_t P = ix.n_snodes, V = ix.n_vnodes, E = ix.n_slinks, L = ix.n_vlinks;

    auto val = [&](int col) { return col < 0 ? 0.0 : solution.at(col); };
    auto as_binary = [&](int col) {
        double v = val(col);
        if (std::abs(v) <= tol) return 0;
        if (std::abs(v - 1.0) <= tol) return 1;
        throw std::runtime_error("decode: non-integral binary value " + std::to_string(v));
    };

    EmbeddingDecision d;
    d.working_node.assign(V, -1);
    d.backup_node.assign(V, -1);

    for (std::size_t i = 0; i < V; ++i) {
        for (std::size_t p = 0; p < P; ++p)
            if (as_binary(ix.wn_at(i, p)) == 1) {
                if (d.working_node[i] >= 0)
                    throw std::runtime_error("decode: virtual node '" + variant.nodes[i].id +
                                             "' mapped to multiple working hosts");
                d.working_node[i] = static_cast<int>(p);
            }
        if (d.working_node[i] < 0)
            throw std::runtime_error("decode: virtual node '" + variant.nodes[i].id + "' unmapped");
        if (ix.backup_network) {
            for (std::size_t p = 0; p < P; ++p)
                if (as_binary(ix.bn_at(i, p)) == 1) {
                    if (d.backup_node[i] >= 0)
                        throw std::runtime_error("decode: multiple backup hosts for '" +
                                                 variant.nodes[i].id + "'");
                    d.backup_node[i] = static_cast<int>(p);
                }
            if (d.backup_node[i] < 0)
                throw std::runtime_error("decode: missing backup host for '" + variant.nodes[i].id +
                                         "'");
            if (variant.nodes[i].avail == Avail::None && d.backup_node[i] != d.working_node[i])
                throw std::runtime_error("decode: non-requested backup not co-located");
        }
        // cloud indicators must agree with the host's cloud
        for (std::size_t c = 0; c < ix.n_clouds; ++c) {
            bool expect = net.node_cloud(d.working_node[i]) == c;
            if (as_binary(ix.wc[i * ix.n_clouds + c]) != (expect ? 1 : 0))
                throw std::runtime_error("decode: wc inconsistent with working map");
        }
    }

    d.working_flow.resize(L);
    d.backup_flow.resize(L);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t e = 0; e < E; ++e)
            for (int dir = 0; dir < 2; ++dir) {
                double wv = val(ix.wf_at(l, e, dir));
                if (wv > tol) d.working_flow[l].push_back({e, dir, wv});
                double bv = val(ix.bf_at(l, e, dir));
                if (bv > tol) d.backup_flow[l].push_back({e, dir, bv});
            }

    // objective recomputation, independent of the solver's accumulation
    double obj = 0.0;
    AuxSets aux = variant.aux_sets();
    std::vector<char> is_backup_node(V, 0);
    for (auto i : aux.nodes_backup) is_backup_node[i] = 1;
    for (std::size_t i = 0; i < V; ++i) {
        std::size_t p = d.working_node[i];
        obj += weights.beta1 * variant.nodes[i].cpu.to_double() * net.nodes[p].sec.to_double() *
               net.node_trust(p).to_double();
        if (ix.backup_network && is_backup_node[i]) {
            std::size_t q = d.backup_node[i];
            obj += weights.beta1 * variant.nodes[i].cpu.to_double() * net.nodes[q].sec.to_double() *
                   net.node_trust(q).to_double();
        }
    }
    for (std::size_t l = 0; l < L; ++l) {
        for (const auto& f : d.working_flow[l])
            obj += weights.beta2 * net.links[f.slink].alpha.to_double() *
                   net.links[f.slink].sec.to_double() * f.amount;
        for (const auto& f : d.backup_flow[l])
            obj += weights.beta2 * net.links[f.slink].alpha.to_double() *
                   net.links[f.slink].sec.to_double() * f.amount;
        for (std::size_t e = 0; e < E; ++e) {
            if (ix.wl[l * E + e] >= 0) obj += weights.beta3 * as_binary(ix.wl[l * E + e]);
            if (!ix.bl.empty() && ix.bl[l * E + e] >= 0)
                obj += weights.beta3 * as_binary(ix.bl[l * E + e]);
        }
    }
    d.objective = obj;
    if (std::abs(obj - solver_objective) > tol * std::max(1.0, std::abs(solver_objective)))
        throw std::runtime_error("decode: recomputed objective " + std::to_string(obj) +
                                 " disagrees with solver objective " +
                                 std::to_string(solver_objective));
    return d;
}

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string export_lp(const MilpModel& m) {
    std::ostringstream os;
    os << "\\ secvne model\nMinimize\n obj:";
    bool any = false;
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        if (m.vars[j].obj == 0.0) continue;
        os << (m.vars[j].obj >= 0 ? " + " : " - ") << num(std::abs(m.vars[j].obj)) << " "
           << m.vars[j].name;
        any = true;
    }
    if (!any) os << " 0 " << (m.vars.empty() ? "" : m.vars[0].name);
    os << "\nSubject To\n";
    for (const auto& r : m.rows) {
        os << " " << r.name << ":";
        if (r.coeffs.empty()) os << " 0 " << (m.vars.empty() ? "x0" : m.vars[0].name);
        for (const auto& [col, coef] : r.coeffs)
            os << (coef >= 0 ? " + " : " - ") << num(std::abs(coef)) << " " << m.vars[col].name;
        os << (r.sense == Sense::Le ? " <= " : r.sense == Sense::Eq ? " = " : " >= ") << num(r.rhs)
           << "\n";
    }
    os << "Bounds\n";
    for (const auto& v : m.vars) os << " " << num(v.lb) << " <= " << v.name << " <= " << num(v.ub) << "\n";
    bool any_bin = false;
    for (const auto& v : m.vars)
        if (v.kind == VarKind::Binary) {
            if (!any_bin) os << "Binaries\n";
            any_bin = true;
            os << " " << v.name << "\n";
        }
    os << "End\n";
    return os.str();
}

std::string pad(const std::string& s, std::size_t w) {
    return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}

std::string export_mps(const MilpModel& m) {
    std::ostringstream os;
    os << "NAME          SECVNE\nROWS\n N  OBJ\n";
    for (const auto& r : m.rows) {
        char s = r.sense == Sense::Le ? 'L' : r.sense == Sense::Eq ? 'E' : 'G';
        os << " " << s << "  " << r.name << "\n";
    }
    // column-major coefficient lists
    std::vector<std::vector<std::pair<std::string, double>>> cols(m.vars.size());
    for (const auto& r : m.rows)
        for (const auto& [col, coef] : r.coeffs) cols[col].push_back({r.name, coef});
    os << "COLUMNS\n";
    bool in_int = false;
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        bool is_int = m.vars[j].kind == VarKind::Binary;
        if (is_int && !in_int) {
            os << "    MARKER                 'MARKER'                 'INTORG'\n";
            in_int = true;
        }
        if (!is_int && in_int) {
            os << "    MARKER                 'MARKER'                 'INTEND'\n";
            in_int = false;
        }
        if (m.vars[j].obj != 0.0)
            os << "    " << pad(m.vars[j].name, 9) << pad("OBJ", 9) << num(m.vars[j].obj) << "\n";
        for (const auto& [row, coef] : cols[j])
            os << "    " << pad(m.vars[j].name, 9) << pad(row, 9) << num(coef) << "\n";
        if (m.vars[j].obj == 0.0 && cols[j].empty())
            os << "    " << pad(m.vars[j].name, 9) << pad("OBJ", 9) << "0\n";
    }
    if (in_int) os << "    MARKER                 'MARKER'                 'INTEND'\n";
    os << "RHS\n";
    for (const auto& r : m.rows)
        if (r.rhs != 0.0) os << "    " << pad("RHS", 9) << pad(r.name, 9) << num(r.rhs) << "\n";
    os << "BOUNDS\n";
    for (const auto& v : m.vars) {
        os << " LO " << pad("BND", 9) << pad(v.name, 9) << num(v.lb) << "\n";
        os << " UP " << pad("BND", 9) << pad(v.name, 9) << num(v.ub) << "\n";
    }
    os << "ENDATA\n";
    return os.str();
}

}  // namespace

std::string export_model(const MilpModel& m, ExportFormat format) {
    // VarIndex naming keeps these unique; guard anyway since formats key on names.
    {
        std::vector<std::string> names;
        names.reserve(m.vars.size());
        for (const auto& v : m.vars) names.push_back(v.name);
        std::sort(names.begin(), names.end());
        if (std::adjacent_find(names.begin(), names.end()) != names.end())
            throw std::runtime_error("export: duplicate variable name");
    }
    return format == ExportFormat::LpText ? export_lp(m) : export_mps(m);
}

}  // namespace secvne::milp
