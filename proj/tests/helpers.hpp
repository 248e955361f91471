#pragma once

// Shared fixtures and independent oracles for the unit and acceptance suites:
// the six-node reference instance, a random MILP generator with a 2^k
// enumeration oracle, and a brute-force embedding oracle over explicit node
// maps and simple paths.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "secvne/embed.hpp"
#include "secvne/milp.hpp"
#include "secvne/net.hpp"
#include "secvne/solver.hpp"
#include "secvne/state.hpp"
#include "secvne/variant.hpp"

namespace testutil {

using namespace secvne;

// Three clouds of increasing trust, two nodes each; the only sec>=2 paths
// between B and the high-security hosts C and E are B-D-C and B-A-E.
inline SubstrateNetwork reference_substrate() {
    SubstrateNetwork net;
    net.clouds = {{"c1", Fixed::from_int(1)}, {"c2", Fixed::from_int(2)},
                  {"c3", Fixed::from_int(3)}};
    auto node = [](const char* id, int sec, const char* cloud) {
        return SubstrateNode{id, Fixed::from_int(80), Fixed::from_int(sec), cloud};
    };
    net.nodes = {node("A", 1, "c1"), node("B", 3, "c1"), node("C", 4, "c2"),
                 node("D", 1, "c2"), node("E", 5, "c3"), node("F", 1, "c3")};
    auto link = [](const char* a, const char* b, int sec) {
        return SubstrateLink{a, b, Fixed::from_int(100), Fixed::from_int(sec)};
    };
    net.links = {link("A", "B", 2), link("B", "D", 2), link("C", "D", 2),
                 link("A", "E", 2), link("C", "E", 1), link("D", "F", 1),
                 link("E", "F", 1)};
    return net;
}

// Two-node request: a plain, b replicated into a different cloud.
inline VirtualNetworkRequest reference_vnr() {
    VirtualNetworkRequest vnr;
    vnr.nodes = {{"a", Fixed::from_int(10), Fixed::from_int(3), Fixed::from_int(1), Avail::None},
                 {"b", Fixed::from_int(20), Fixed::from_int(4), Fixed::from_int(2),
                  Avail::DifferentCloud}};
    vnr.links = {{"a", "b", Fixed::from_int(20), Fixed::from_int(2)}};
    return vnr;
}

// ---------------------------------------------------------------------------
// random MILPs + exhaustive enumeration oracle

inline milp::MilpModel random_milp(std::mt19937_64& rng, int max_binaries = 8) {
    std::uniform_int_distribution<int> nb(0, max_binaries), nc(0, 4), nr(1, 8);
    std::uniform_real_distribution<double> co(-5, 5), rh(-4, 8);
    milp::MilpModel m;
    int B = nb(rng), C = nc(rng), R = nr(rng);
    if (B + C == 0) B = 1;
    for (int j = 0; j < B; ++j)
        m.add_var("b" + std::to_string(j), milp::VarKind::Binary, 0, 1, co(rng));
    for (int j = 0; j < C; ++j)
        m.add_var("c" + std::to_string(j), milp::VarKind::Continuous, 0, 3.0, co(rng));
    int N = B + C;
    for (int r = 0; r < R; ++r) {
        std::vector<std::pair<int, double>> cs;
        for (int j = 0; j < N; ++j) {
            double v = co(rng);
            if (std::abs(v) > 2.5) cs.push_back({j, v});
        }
        if (cs.empty()) cs.push_back({0, 1.0});
        int s = static_cast<int>(rng() % 3);
        m.add_row("r" + std::to_string(r), cs,
                  s == 0 ? milp::Sense::Le : (s == 1 ? milp::Sense::Ge : milp::Sense::Eq),
                  rh(rng) * 0.5);
    }
    return m;
}

// Enumerates every 0/1 pattern of the binaries and solves the continuous
// remainder; the minimum over feasible patterns is the exact MILP optimum.
inline bool enumerate_milp(const milp::MilpModel& m, double& best) {
    std::vector<int> bins;
    for (std::size_t j = 0; j < m.vars.size(); ++j)
        if (m.vars[j].kind == milp::VarKind::Binary) bins.push_back(static_cast<int>(j));
    bool found = false;
    best = 0;
    for (std::uint64_t mask = 0; mask < (1ull << bins.size()); ++mask) {
        milp::MilpModel c = m;
        bool ok = true;
        for (std::size_t k = 0; k < bins.size(); ++k) {
            double v = (mask >> k) & 1 ? 1.0 : 0.0;
            auto& var = c.vars[bins[k]];
            if (v < var.lb - 1e-12 || v > var.ub + 1e-12) {
                ok = false;
                break;
            }
            var.lb = var.ub = v;
            var.kind = milp::VarKind::Continuous;
        }
        if (!ok) continue;
        auto r = solver::solve_lp(c);
        if (r.status == solver::Status::Optimal && (!found || r.objective < best)) {
            best = r.objective;
            found = true;
        }
    }
    return found;
}

// ---------------------------------------------------------------------------
// brute-force embedding oracle

// All simple paths between two substrate nodes whose links admit `sec` and
// have residual >= bw. Paths are lists of link indices.
inline void simple_paths(const SubstrateState& state, std::size_t from, std::size_t to,
                         Fixed sec_demand, Fixed bw, std::vector<std::vector<std::size_t>>& out) {
    const auto& net = state.network();
    std::vector<char> visited(net.nodes.size(), 0);
    std::vector<std::size_t> stack;
    auto dfs = [&](auto&& self, std::size_t at) -> void {
        if (at == to) {
            out.push_back(stack);
            return;
        }
        visited[at] = 1;
        for (std::size_t e = 0; e < net.links.size(); ++e) {
            const auto& l = net.links[e];
            if (!sec_demand.is_zero() && l.sec < sec_demand) continue;
            if (state.residual_link(e) < bw) continue;
            std::size_t a = *net.node_index(l.a), b = *net.node_index(l.b);
            std::size_t next;
            if (a == at)
                next = b;
            else if (b == at)
                next = a;
            else
                continue;
            if (visited[next]) continue;
            stack.push_back(e);
            self(self, next);
            stack.pop_back();
        }
        visited[at] = 0;
    };
    dfs(dfs, from);
}

struct OracleResult {
    bool feasible = false;
    double cost = 0.0;  // objective with the same weights as the model
};

// Exhaustive oracle for no-backup variants: every injective node map times
// every joint choice of one simple path per virtual link, with joint residual
// capacity checking. Objective terms mirror the model: beta1 cpu*sec*trust,
// beta2 flow*sec per traversed link, beta3 per hop.
inline OracleResult brute_force_embed(const SubstrateState& state, const RequestVariant& variant,
                                      const milp::Weights& w) {
    const auto& net = state.network();
    const std::size_t V = variant.nodes.size(), S = net.nodes.size();
    OracleResult best;

    std::vector<int> map(V, -1);
    std::vector<char> used(S, 0);

    auto eligible = [&](std::size_t i, std::size_t p) {
        const auto& vn = variant.nodes[i];
        const auto& sn = net.nodes[p];
        return vn.sec.admits(sn.sec) && vn.cloud.admits(net.node_trust(p)) &&
               state.residual_node(p) >= vn.cpu;
    };

    auto route_links = [&]() {
        // joint enumeration over per-link simple paths with shared capacity
        std::vector<std::vector<std::vector<std::size_t>>> options(variant.links.size());
        for (std::size_t l = 0; l < variant.links.size(); ++l) {
            const auto& vl = variant.links[l];
            std::size_t from = static_cast<std::size_t>(map[*variant.node_index(vl.a)]);
            std::size_t to = static_cast<std::size_t>(map[*variant.node_index(vl.b)]);
            Fixed min_sec = vl.sec.is_set() ? vl.sec.levels().front() : vl.sec.min_level();
            // allowed-set link demands: a path link must be admitted, which for
            // contiguous >= sets equals sec >= min; oracle instances use >=
            simple_paths(state, from, to, min_sec, Fixed(), options[l]);
            if (vl.bw.is_zero() && from == to) options[l].push_back({});
        }
        std::vector<std::size_t> pick(variant.links.size(), 0);
        auto rec = [&](auto&& self, std::size_t l, std::vector<Fixed>& load, double cost) -> void {
            if (l == variant.links.size()) {
                if (!best.feasible || cost < best.cost) {
                    best.feasible = true;
                    best.cost = cost;
                }
                return;
            }
            const auto& vl = variant.links[l];
            for (const auto& path : options[l]) {
                bool ok = true;
                for (std::size_t e : path)
                    if (load[e] + vl.bw > state.residual_link(e)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                double add = 0;
                for (std::size_t e : path) {
                    load[e] += vl.bw;
                    add += w.beta2 * net.links[e].sec.to_double() * vl.bw.to_double() +
                           w.beta3;
                }
                self(self, l + 1, load, cost + add);
                for (std::size_t e : path) load[e] -= vl.bw;
            }
        };
        double node_cost = 0;
        for (std::size_t i = 0; i < V; ++i) {
            std::size_t p = static_cast<std::size_t>(map[i]);
            node_cost += w.beta1 * variant.nodes[i].cpu.to_double() *
                         net.nodes[p].sec.to_double() * net.node_trust(p).to_double();
        }
        std::vector<Fixed> load(net.links.size());
        rec(rec, 0, load, node_cost);
    };

    auto place = [&](auto&& self, std::size_t i) -> void {
        if (i == V) {
            route_links();
            return;
        }
        for (std::size_t p = 0; p < S; ++p) {
            if (used[p] || !eligible(i, p)) continue;
            used[p] = 1;
            map[i] = static_cast<int>(p);
            self(self, i + 1);
            used[p] = 0;
            map[i] = -1;
        }
    };
    place(place, 0);
    return best;
}

// Random tiny no-backup instance for the oracle-bound check.
inline void random_tiny_instance(std::mt19937_64& rng, SubstrateNetwork& net,
                                 RequestVariant& variant) {
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    auto pick_level = [&]() {
        static const double levels[3] = {1.0, 1.2, 5.0};
        return Fixed::from_double(levels[rng() % 3]);
    };
    int S = 3 + static_cast<int>(rng() % 4);  // 3..6 substrate nodes
    net = SubstrateNetwork{};
    net.clouds = {{"c1", Fixed::from_int(1)},
                  {"c2", Fixed::parse("1.2")},
                  {"c3", Fixed::from_int(5)}};
    for (int p = 0; p < S; ++p)
        net.nodes.push_back({"s" + std::to_string(p + 1), Fixed::from_double(uni(20, 60)),
                             pick_level(), net.clouds[rng() % 3].id});
    for (int p = 0; p < S; ++p)
        for (int q = p + 1; q < S; ++q) {
            bool ring_edge = q == p + 1 || (p == 0 && q == S - 1);
            if (ring_edge || rng() % 3 == 0)
                net.links.push_back({net.nodes[p].id, net.nodes[q].id,
                                     Fixed::from_double(uni(20, 60)), pick_level()});
        }
    std::sort(net.links.begin(), net.links.end(),
              [](const auto& x, const auto& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });

    int V = 2 + static_cast<int>(rng() % 2);  // 2..3 virtual nodes
    VirtualNetworkRequest vnr;
    for (int i = 0; i < V; ++i) {
        VirtualNode vn;
        vn.id = "v" + std::to_string(i + 1);
        vn.cpu = Fixed::from_double(uni(5, 15));
        vn.sec_demand = rng() % 4 == 0 ? pick_level() : Fixed::from_int(1);
        vn.cloud_demand = Fixed::from_int(1);
        vnr.nodes.push_back(vn);
    }
    for (int i = 0; i < V; ++i)
        for (int j = i + 1; j < V; ++j)
            if (j == i + 1 || rng() % 2 == 0)
                vnr.links.push_back({vnr.nodes[i].id, vnr.nodes[j].id,
                                     Fixed::from_double(uni(5, 15)),
                                     rng() % 4 == 0 ? pick_level() : Fixed::from_int(1)});
    variant = variant_from_vnr(vnr);
}

}  // namespace testutil
