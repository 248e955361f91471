#include "secvne/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <random>
#include <stdexcept>

namespace secvne::sim {

namespace {

// Explicit draw helpers on top of the engine keep outputs identical across
// standard-library implementations (std distributions are not portable).
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double exponential(std::mt19937_64& rng, double mean) {
    double u = uniform01(rng);
    if (u >= 1.0) u = std::nextafter(1.0, 0.0);
    return -std::log(1.0 - u) * mean;
}

std::size_t pick_level(std::mt19937_64& rng, const std::vector<LevelDist>& dist) {
    double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        acc += dist[i].prob;
        if (u < acc) return i;
    }
    return dist.size() - 1;
}

// Pairwise connection probabilities: the classic Waxman kernel
// beta * exp(-d / (alpha * L)) on random unit-square coordinates, with beta
// calibrated so the mean pair probability hits the target (capped at 1).
std::vector<double> waxman_probs(std::mt19937_64& rng, int n, double target_p) {
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = uniform01(rng);
        ys[i] = uniform01(rng);
    }
    const double alpha = 0.5;
    std::vector<double> kernel;
    double maxd = 1e-12;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            maxd = std::max(maxd, std::hypot(xs[i] - xs[j], ys[i] - ys[j]));
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double k = std::exp(-std::hypot(xs[i] - xs[j], ys[i] - ys[j]) / (alpha * maxd));
            kernel.push_back(k);
            sum += k;
        }
    double beta = kernel.empty() ? 0.0 : target_p * static_cast<double>(kernel.size()) / sum;
    for (double& k : kernel) k = std::min(1.0, beta * k);
    return kernel;
}

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n <= 1) return true;
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int comps = n;
    for (auto [a, b] : edges) {
        int ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --comps;
        }
    }
    return comps == 1;
}

}  // namespace

SubstrateNetwork gen_substrate(const SubstrateGenParams& params) {
    if (params.node_count <= 0) throw std::invalid_argument("gen_substrate: node_count must be > 0");
    auto sec_levels = params.sec_levels;
    auto trust_levels = params.trust_levels;
    if (sec_levels.empty())
        sec_levels = {{Fixed::parse("1"), 1.0 / 3}, {Fixed::parse("1.2"), 1.0 / 3},
                      {Fixed::parse("5"), 1.0 / 3}};
    if (trust_levels.empty())
        trust_levels = {{Fixed::parse("1"), 1.0 / 3}, {Fixed::parse("1.2"), 1.0 / 3},
                        {Fixed::parse("5"), 1.0 / 3}};
    double psum = 0;
    for (const auto& l : sec_levels) psum += l.prob;
    if (std::abs(psum - 1.0) > 1e-9)
        throw std::invalid_argument("gen_substrate: sec level probabilities must sum to 1");
    psum = 0;
    for (const auto& l : trust_levels) psum += l.prob;
    if (std::abs(psum - 1.0) > 1e-9)
        throw std::invalid_argument("gen_substrate: trust probabilities must sum to 1");

    std::mt19937_64 rng(params.seed);
    const int n = params.node_count;

    for (int attempt = 0; attempt < params.max_retries; ++attempt) {
        SubstrateNetwork net;
        for (std::size_t c = 0; c < trust_levels.size(); ++c)
            net.clouds.push_back({"cloud" + std::to_string(c + 1), trust_levels[c].level});

        for (int i = 0; i < n; ++i) {
            SubstrateNode node;
            node.id = "s" + std::to_string(i + 1);
            node.cpu_total = Fixed::from_double(uniform(rng, params.cpu_min, params.cpu_max));
            node.sec = sec_levels[pick_level(rng, sec_levels)].level;
            node.cloud_id = net.clouds[pick_level(rng, trust_levels)].id;
            net.nodes.push_back(std::move(node));
        }

        std::vector<std::pair<int, int>> edges;
        if (params.topology == SubstrateGenParams::Topology::Waxman) {
            auto probs = waxman_probs(rng, n, params.waxman_p);
            std::size_t k = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (uniform01(rng) < probs[k++]) edges.push_back({i, j});
        } else {
            double p = uniform(rng, params.random_p_min, params.random_p_max);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (uniform01(rng) < p) edges.push_back({i, j});
        }
        if (!connected(n, edges)) continue;

        for (auto [i, j] : edges) {
            SubstrateLink l;
            l.a = net.nodes[i].id;
            l.b = net.nodes[j].id;
            canonicalize(l.a, l.b);
            l.bw_total = Fixed::from_double(uniform(rng, params.bw_min, params.bw_max));
            l.sec = sec_levels[pick_level(rng, sec_levels)].level;
            net.links.push_back(std::move(l));
        }
        std::sort(net.links.begin(), net.links.end(), [](const auto& x, const auto& y) {
            return std::pair(x.a, x.b) < std::pair(y.a, y.b);
        });
        return net;
    }
    throw std::runtime_error("gen_substrate: could not draw a connected topology");
}

const char* config_name(Config c) {
    switch (c) {
        case Config::NS_NA: return "NS+NA";
        case Config::S10_NA: return "10S+NA";
        case Config::S20_NA: return "20S+NA";
        case Config::NS_A10: return "NS+10A";
        case Config::NS_A20: return "NS+20A";
        case Config::S20_A20: return "20S+20A";
    }
    return "?";
}

Config config_from_name(const std::string& name) {
    for (Config c : {Config::NS_NA, Config::S10_NA, Config::S20_NA, Config::NS_A10,
                     Config::NS_A20, Config::S20_A20})
        if (name == config_name(c)) return c;
    throw std::invalid_argument("unknown configuration '" + name + "'");
}

double config_sec_rate(Config c) {
    switch (c) {
        case Config::S10_NA: return 0.10;
        case Config::S20_NA:
        case Config::S20_A20: return 0.20;
        default: return 0.0;
    }
}

double config_avail_rate(Config c) {
    switch (c) {
        case Config::NS_A10: return 0.10;
        case Config::NS_A20: return 0.20;
        case Config::S20_A20: return 0.20;
        default: return 0.0;
    }
}

std::vector<VnrEvent> gen_workload(const WorkloadParams& params) {
    if (params.arrival_rate <= 0 || params.mean_lifetime <= 0 || params.vnr_nodes_min < 2 ||
        params.vnr_nodes_max < params.vnr_nodes_min)
        throw std::invalid_argument("gen_workload: bad parameters");
    auto elevated = params.elevated_sec_levels;
    if (elevated.empty()) elevated = {Fixed::parse("1.2"), Fixed::parse("5")};

    std::mt19937_64 base(params.seed);
    std::mt19937_64 deco(params.seed ^ 0x9e3779b97f4a7c15ULL);
    double sec_rate = config_sec_rate(params.config);
    double avail_rate = config_avail_rate(params.config);

    std::vector<VnrEvent> events;
    double t = 0.0;
    int counter = 0;
    for (;;) {
        t += exponential(base, 1.0 / params.arrival_rate);
        if (t > params.horizon) break;
        ++counter;

        VnrEvent ev;
        ev.arrival = t;
        ev.lifetime = exponential(base, params.mean_lifetime);

        int n = uniform_int(base, params.vnr_nodes_min, params.vnr_nodes_max);
        VirtualNetworkRequest vnr;
        for (int i = 0; i < n; ++i) {
            VirtualNode vn;
            vn.id = "v" + std::to_string(i + 1);
            vn.cpu = Fixed::from_double(uniform(base, params.cpu_min, params.cpu_max));
            vn.sec_demand = params.base_sec;
            vn.cloud_demand = params.base_cloud;
            vnr.nodes.push_back(std::move(vn));
        }
        auto probs = waxman_probs(base, n, params.vnr_connectivity);
        std::vector<std::pair<int, int>> edges;
        std::size_t k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (uniform01(base) < probs[k++]) edges.push_back({i, j});
        // connectivity repair: join remaining components with extra edges
        while (!connected(n, edges)) {
            std::vector<int> parent(n);
            for (int i = 0; i < n; ++i) parent[i] = i;
            auto find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            for (auto [a, b] : edges) parent[find(a)] = find(b);
            int a = uniform_int(base, 0, n - 1);
            int b = uniform_int(base, 0, n - 1);
            if (find(a) != find(b)) edges.push_back({a < b ? a : b, a < b ? b : a});
        }
        std::sort(edges.begin(), edges.end());
        for (auto [i, j] : edges) {
            VirtualLink vl;
            vl.a = vnr.nodes[i].id;
            vl.b = vnr.nodes[j].id;
            canonicalize(vl.a, vl.b);
            vl.bw = Fixed::from_double(uniform(base, params.bw_min, params.bw_max));
            vl.sec_demand = params.base_sec;
            vnr.links.push_back(std::move(vl));
        }

        // decoration draws are consumed for every resource independent of the
        // configuration so that all configs share the same base stream
        for (auto& vn : vnr.nodes) {
            double u_sec = uniform01(deco);
            Fixed level = elevated[static_cast<std::size_t>(
                uniform_int(deco, 0, static_cast<int>(elevated.size()) - 1))];
            double u_avail = uniform01(deco);
            int avail_kind = uniform_int(deco, 1, 2);
            if (u_sec < sec_rate) vn.sec_demand = level;
            if (u_avail < avail_rate)
                vn.avail = avail_kind == 1 ? Avail::SameCloud : Avail::DifferentCloud;
        }
        for (auto& vl : vnr.links) {
            double u_sec = uniform01(deco);
            Fixed level = elevated[static_cast<std::size_t>(
                uniform_int(deco, 0, static_cast<int>(elevated.size()) - 1))];
            if (u_sec < sec_rate) vl.sec_demand = level;
        }

        ev.vnr = std::move(vnr);
        events.push_back(std::move(ev));
    }
    (void)counter;
    return events;
}

namespace {

double stress_of(const SubstrateState& state, bool nodes) {
    const auto& net = state.network();
    double sum = 0.0;
    std::size_t count = 0;
    if (nodes) {
        for (std::size_t p = 0; p < net.nodes.size(); ++p) {
            double total = net.nodes[p].cpu_total.to_double();
            if (total <= 0) continue;
            sum += 1.0 - state.residual_node(p).to_double() / total;
            ++count;
        }
    } else {
        for (std::size_t e = 0; e < net.links.size(); ++e) {
            double total = net.links[e].bw_total.to_double();
            if (total <= 0) continue;
            sum += 1.0 - state.residual_link(e).to_double() / total;
            ++count;
        }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

}  // namespace

MetricsRecord run(const SubstrateNetwork& substrate, const std::vector<VnrEvent>& events,
                  const RunParams& params) {
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].arrival < events[i - 1].arrival)
            throw std::invalid_argument("run: events must be time-ordered");
    if (params.bucket_width <= 0) throw std::invalid_argument("run: bucket_width must be > 0");

    SubstrateState state(substrate);
    MetricsRecord m;

    double horizon = events.empty() ? 0.0 : events.back().arrival;

    using Departure = std::pair<double, std::string>;  // (time, request id)
    std::priority_queue<Departure, std::vector<Departure>, std::greater<>> departures;

    double t_last = 0.0;
    double node_stress_int = 0.0, link_stress_int = 0.0;  // running integrals
    double bucket_node_int = 0.0, bucket_link_int = 0.0;
    double bucket_end = params.bucket_width;
    double revenue_sum = 0.0, cost_sum = 0.0;

    auto advance_to = [&](double t) {
        double ns = stress_of(state, true);
        double ls = stress_of(state, false);
        double from = t_last;
        while (from < t) {
            double upto = std::min(t, bucket_end);
            node_stress_int += ns * (upto - from);
            link_stress_int += ls * (upto - from);
            bucket_node_int += ns * (upto - from);
            bucket_link_int += ls * (upto - from);
            from = upto;
            if (from >= bucket_end && bucket_end <= horizon) {
                BucketRow row;
                row.t_end = bucket_end;
                row.arrived = m.arrived;
                row.accepted = m.accepted;
                row.rejected = m.arrived - m.accepted;
                row.acceptance_ratio =
                    m.arrived ? static_cast<double>(m.accepted) / static_cast<double>(m.arrived)
                              : 1.0;
                row.node_stress = bucket_node_int / params.bucket_width;
                row.link_stress = bucket_link_int / params.bucket_width;
                row.avg_revenue = m.accepted ? revenue_sum / static_cast<double>(m.accepted) : 0.0;
                row.avg_cost = m.accepted ? cost_sum / static_cast<double>(m.accepted) : 0.0;
                m.buckets.push_back(row);
                bucket_node_int = bucket_link_int = 0.0;
                bucket_end += params.bucket_width;
            }
        }
        t_last = t;
    };

    auto drain_departures = [&](double upto, bool inclusive) {
        while (!departures.empty() &&
               (departures.top().first < upto || (inclusive && departures.top().first <= upto))) {
            auto [dt, id] = departures.top();
            departures.pop();
            advance_to(dt);
            state.release(id);
        }
    };

    int seq = 0;
    for (const auto& ev : events) {
        drain_departures(ev.arrival, true);  // departures first at equal timestamps
        advance_to(ev.arrival);
        ++m.arrived;
        std::string id = "vnr" + std::to_string(++seq);
        std::vector<RequestVariant> variants = {variant_from_vnr(ev.vnr)};
        auto result =
            embedder::embed(state, variants, id, params.weights, params.pricing, params.limits);
        if (auto* rec = std::get_if<embedder::EmbeddingRecord>(&result)) {
            if (params.check_soundness) {
                auto bad = embedder::check_embedding(state, rec->variant, rec->decision,
                                                     rec->allocation);
                m.soundness_violations += static_cast<std::int64_t>(bad.size());
            }
            if (!embedder::commit(state, *rec)) {
                ++m.soundness_violations;  // accepted embedding must always commit
                ++m.rejected_by_reason["capacity"];
            } else {
                ++m.accepted;
                revenue_sum += rec->revenue;
                cost_sum += rec->cost;
                departures.push({ev.arrival + ev.lifetime, id});
            }
        } else {
            ++m.rejected_by_reason[embedder::reject_reason_name(
                std::get<embedder::Rejection>(result).reason)];
        }
    }
    advance_to(horizon);

    m.acceptance_ratio =
        m.arrived ? static_cast<double>(m.accepted) / static_cast<double>(m.arrived) : 1.0;
    m.node_stress = horizon > 0 ? node_stress_int / horizon : 0.0;
    m.link_stress = horizon > 0 ? link_stress_int / horizon : 0.0;
    m.avg_revenue = m.accepted ? revenue_sum / static_cast<double>(m.accepted) : 0.0;
    m.avg_cost = m.accepted ? cost_sum / static_cast<double>(m.accepted) : 0.0;

    // drain the remaining lifetimes and confirm the substrate returned to
    // its original capacities
    while (!departures.empty()) {
        auto [dt, id] = departures.top();
        departures.pop();
        state.release(id);
    }
    m.residuals_restored = true;
    for (std::size_t p = 0; p < substrate.nodes.size(); ++p)
        if (state.residual_node(p) != substrate.nodes[p].cpu_total) m.residuals_restored = false;
    for (std::size_t e = 0; e < substrate.links.size(); ++e)
        if (state.residual_link(e) != substrate.links[e].bw_total) m.residuals_restored = false;

    return m;
}

std::string to_csv(const MetricsRecord& m) {
    std::string out =
        "t_end,arrived,accepted,rejected,acceptance_ratio,node_stress,link_stress,avg_revenue,avg_"
        "cost\n";
    char buf[256];
    auto row = [&](const char* tag, double t_end, std::int64_t arrived, std::int64_t accepted,
                   std::int64_t rejected, double ratio, double ns, double ls, double rev,
                   double cost) {
        if (tag)
            std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%lld,%.6f,%.6f,%.6f,%.6f,%.6f\n", tag,
                          static_cast<long long>(arrived), static_cast<long long>(accepted),
                          static_cast<long long>(rejected), ratio, ns, ls, rev, cost);
        else
            std::snprintf(buf, sizeof buf, "%.6f,%lld,%lld,%lld,%.6f,%.6f,%.6f,%.6f,%.6f\n", t_end,
                          static_cast<long long>(arrived), static_cast<long long>(accepted),
                          static_cast<long long>(rejected), ratio, ns, ls, rev, cost);
        out += buf;
    };
    for (const auto& b : m.buckets)
        row(nullptr, b.t_end, b.arrived, b.accepted, b.rejected, b.acceptance_ratio, b.node_stress,
            b.link_stress, b.avg_revenue, b.avg_cost);
    row("summary", 0, m.arrived, m.accepted, m.arrived - m.accepted, m.acceptance_ratio,
        m.node_stress, m.link_stress, m.avg_revenue, m.avg_cost);
    return out;
}

SubstrateGenParams default_substrate_params() { return {}; }
WorkloadParams default_workload_params() { return {}; }

}  // namespace secvne::sim
