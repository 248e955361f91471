#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "secvne/embed.hpp"
#include "secvne/net.hpp"
#include "secvne/solver.hpp"

namespace secvne::sim {

struct LevelDist {
    Fixed level;
    double prob;
};

struct SubstrateGenParams {
    int node_count = 25;
    enum class Topology { Waxman, Random };
    Topology topology = Topology::Waxman;
    double waxman_p = 0.5;  // target expected pair-connection probability
    double random_p_min = 0.25, random_p_max = 0.30;  // drawn once per experiment
    double cpu_min = 50, cpu_max = 100;
    double bw_min = 50, bw_max = 100;
    std::vector<LevelDist> sec_levels;    // node and link security levels
    std::vector<LevelDist> trust_levels;  // one entry per cloud, in cloud order
    std::uint64_t seed = 1;
    int max_retries = 1000;  // connectivity resampling budget
};

SubstrateNetwork gen_substrate(const SubstrateGenParams& params);

// Request-decoration configurations: xS = fraction of nodes and links with
// elevated security demands, yA = fraction of nodes requesting a backup.
enum class Config { NS_NA, S10_NA, S20_NA, NS_A10, NS_A20, S20_A20 };

const char* config_name(Config c);
Config config_from_name(const std::string& name);
double config_sec_rate(Config c);
double config_avail_rate(Config c);

struct WorkloadParams {
    double arrival_rate = 0.04;  // VNRs per time unit (Poisson)
    double mean_lifetime = 1000;
    int vnr_nodes_min = 2, vnr_nodes_max = 4;
    double vnr_connectivity = 0.5;
    double cpu_min = 10, cpu_max = 20;
    double bw_min = 10, bw_max = 20;
    Config config = Config::NS_NA;
    double horizon = 50000;
    std::uint64_t seed = 1;
    // demanded levels for decorated resources; undecorated demand base levels
    std::vector<Fixed> elevated_sec_levels;  // default {1.2, 5}
    Fixed base_sec = Fixed::from_int(1);
    Fixed base_cloud = Fixed::from_int(1);
};

struct VnrEvent {
    double arrival = 0;
    double lifetime = 0;
    VirtualNetworkRequest vnr;
};

// Deterministic workload. Base draws (arrival times, topology, capacities,
// lifetimes) come from one stream keyed on `seed`, decoration draws from a
// second; every decoration draw is consumed regardless of config, so two
// configs with the same seed share identical base VNRs and aligned flags.
std::vector<VnrEvent> gen_workload(const WorkloadParams& params);

struct RunParams {
    milp::Weights weights;
    embedder::PricingWeights pricing;
    solver::SolveLimits limits;
    double bucket_width = 1000;  // CSV time bucket
    bool check_soundness = true;
};

struct BucketRow {
    double t_end = 0;
    std::int64_t arrived = 0, accepted = 0, rejected = 0;  // cumulative
    double acceptance_ratio = 1.0;                         // cumulative
    double node_stress = 0, link_stress = 0;               // time-averaged in bucket
    double avg_revenue = 0, avg_cost = 0;                  // cumulative over accepted
};

struct MetricsRecord {
    std::vector<BucketRow> buckets;
    std::int64_t arrived = 0, accepted = 0;
    std::map<std::string, std::int64_t> rejected_by_reason;
    double acceptance_ratio = 1.0;  // 1.0 with count 0 when nothing arrived
    double node_stress = 0, link_stress = 0;  // time-averaged over the horizon
    double avg_revenue = 0, avg_cost = 0;
    std::int64_t soundness_violations = 0;
    bool residuals_restored = false;  // after draining departures past horizon
};

// Processes arrivals (embed + commit or reject) and departures (release) in
// timestamp order, departures first at equal timestamps.
MetricsRecord run(const SubstrateNetwork& substrate, const std::vector<VnrEvent>& events,
                  const RunParams& params);

// One row per bucket plus a trailing summary row; stable column order.
std::string to_csv(const MetricsRecord& metrics);

SubstrateGenParams default_substrate_params();
WorkloadParams default_workload_params();

}  // namespace secvne::sim
