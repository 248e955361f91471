// secvne command-line front end: policy checking, topology generation,
// single-request embedding, MILP export and discrete-event simulation.
// Stdout carries machine-parseable JSON/CSV; diagnostics go to stderr.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "secvne/embed.hpp"
#include "secvne/milp.hpp"
#include "secvne/net.hpp"
#include "secvne/policy.hpp"
#include "secvne/sim.hpp"
#include "secvne/solver.hpp"

using nlohmann::json;
using namespace secvne;

namespace {

// exit-code taxonomy: 0 ok / accepted, 1 operational error, 2 policy syntax
// error, 3 unsatisfiable policy, 4 embedding rejected
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitSyntax = 2;
constexpr int kExitUnsat = 3;
constexpr int kExitRejected = 4;

bool verbose() {
    const char* v = std::getenv("SECVNE_LOG");
    return v && *v;
}

void log_line(const std::string& msg) {
    if (verbose()) std::cerr << "[secvne] " << msg << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << text;
}

json level_req_json(const LevelReq& r) {
    if (!r.is_set()) return json{{"at_least", r.min_level().str()}};
    json levels = json::array();
    for (Fixed v : r.levels()) levels.push_back(v.str());
    return json{{"one_of", levels}};
}

json variant_json(const RequestVariant& v) {
    json nodes = json::array();
    for (const auto& n : v.nodes)
        nodes.push_back({{"id", n.id},
                         {"cpu", n.cpu.str()},
                         {"sec", level_req_json(n.sec)},
                         {"cloud", level_req_json(n.cloud)},
                         {"avail", static_cast<int>(n.avail)}});
    json links = json::array();
    for (const auto& l : v.links)
        links.push_back({{"a", l.a}, {"b", l.b}, {"bw", l.bw.str()}, {"sec", level_req_json(l.sec)}});
    return json{{"nodes", nodes}, {"links", links}};
}

json record_json(const embedder::EmbeddingRecord& rec, const SubstrateNetwork& net) {
    json working = json::object(), backup = json::object();
    for (std::size_t i = 0; i < rec.variant.nodes.size(); ++i) {
        working[rec.variant.nodes[i].id] = net.nodes[rec.decision.working_node[i]].id;
        int b = rec.decision.backup_node.empty() ? -1 : rec.decision.backup_node[i];
        if (b >= 0) backup[rec.variant.nodes[i].id] = net.nodes[b].id;
    }
    auto flows_json = [&](const std::vector<std::vector<milp::EmbeddingDecision::Flow>>& flows) {
        json out = json::array();
        for (std::size_t l = 0; l < flows.size(); ++l) {
            json arcs = json::array();
            for (const auto& f : flows[l]) {
                const auto& sl = net.links[f.slink];
                arcs.push_back({{"from", f.dir == 0 ? sl.a : sl.b},
                                {"to", f.dir == 0 ? sl.b : sl.a},
                                {"amount", f.amount}});
            }
            out.push_back({{"a", rec.variant.links[l].a}, {"b", rec.variant.links[l].b},
                           {"arcs", arcs}});
        }
        return out;
    };
    return json{{"schema", "secvne-embedding-1"},
                {"request_id", rec.request_id},
                {"variant_index", rec.variant_index},
                {"working_nodes", working},
                {"backup_nodes", backup},
                {"working_flows", flows_json(rec.decision.working_flow)},
                {"backup_flows", flows_json(rec.decision.backup_flow)},
                {"objective", rec.decision.objective},
                {"revenue", rec.revenue},
                {"cost", rec.cost}};
}

std::vector<double> parse_csv_doubles(const std::string& s, std::size_t expect,
                                      const char* flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.size() != expect)
        throw std::runtime_error(std::string(flag) + " expects " + std::to_string(expect) +
                                 " comma-separated numbers");
    return out;
}

sim::SubstrateGenParams substrate_params_from_json(const json& j) {
    sim::SubstrateGenParams p;
    p.node_count = j.value("node_count", p.node_count);
    std::string topo = j.value("topology", std::string("waxman"));
    if (topo == "waxman")
        p.topology = sim::SubstrateGenParams::Topology::Waxman;
    else if (topo == "random")
        p.topology = sim::SubstrateGenParams::Topology::Random;
    else
        throw std::runtime_error("topology must be 'waxman' or 'random'");
    p.waxman_p = j.value("waxman_p", p.waxman_p);
    p.random_p_min = j.value("random_p_min", p.random_p_min);
    p.random_p_max = j.value("random_p_max", p.random_p_max);
    p.cpu_min = j.value("cpu_min", p.cpu_min);
    p.cpu_max = j.value("cpu_max", p.cpu_max);
    p.bw_min = j.value("bw_min", p.bw_min);
    p.bw_max = j.value("bw_max", p.bw_max);
    p.seed = j.value("seed", p.seed);
    if (j.contains("sec_levels")) {
        p.sec_levels.clear();
        for (const auto& e : j.at("sec_levels"))
            p.sec_levels.push_back({Fixed::parse(e.at("level").get<std::string>()),
                                    e.at("prob").get<double>()});
    }
    if (j.contains("trust_levels")) {
        p.trust_levels.clear();
        for (const auto& e : j.at("trust_levels"))
            p.trust_levels.push_back({Fixed::parse(e.at("level").get<std::string>()),
                                      e.at("prob").get<double>()});
    }
    return p;
}

sim::WorkloadParams workload_params_from_json(const json& j) {
    sim::WorkloadParams p;
    p.arrival_rate = j.value("arrival_rate", p.arrival_rate);
    p.mean_lifetime = j.value("mean_lifetime", p.mean_lifetime);
    p.vnr_nodes_min = j.value("vnr_nodes_min", p.vnr_nodes_min);
    p.vnr_nodes_max = j.value("vnr_nodes_max", p.vnr_nodes_max);
    p.vnr_connectivity = j.value("vnr_connectivity", p.vnr_connectivity);
    p.cpu_min = j.value("cpu_min", p.cpu_min);
    p.cpu_max = j.value("cpu_max", p.cpu_max);
    p.bw_min = j.value("bw_min", p.bw_min);
    p.bw_max = j.value("bw_max", p.bw_max);
    p.horizon = j.value("horizon", p.horizon);
    p.seed = j.value("seed", p.seed);
    if (j.contains("config")) p.config = sim::config_from_name(j.at("config").get<std::string>());
    return p;
}

int cmd_policy_check(const std::string& policy_path, const std::string& domain_path) {
    std::string text = read_file(policy_path);
    policy::PolicyExpr expr;
    try {
        expr = policy::parse(text);
    } catch (const policy::PolicyError& e) {
        std::cerr << "policy syntax error: " << e.what() << "\n";
        return kExitSyntax;
    }
    LevelDomain domain;
    if (!domain_path.empty())
        domain = level_domain_of(substrate_from_json(read_file(domain_path)));
    else
        domain = policy::domain_from_policy(expr);
    std::vector<RequestVariant> variants;
    try {
        variants = policy::expand(expr, domain);
    } catch (const policy::UnsatisfiableError& e) {
        std::cerr << "unsatisfiable policy: " << e.what() << "\n";
        return kExitUnsat;
    }
    json out{{"schema", "secvne-variants-1"}, {"policy", policy::print(expr)},
             {"variants", json::array()}};
    for (const auto& v : variants) out["variants"].push_back(variant_json(v));
    std::cout << out.dump(2) << "\n";
    log_line("expanded " + std::to_string(variants.size()) + " variant(s)");
    return kExitOk;
}

int cmd_gen_topology(const std::string& params_path, const std::string& out_path,
                     std::uint64_t seed, bool seed_given) {
    sim::SubstrateGenParams p = sim::default_substrate_params();
    if (!params_path.empty()) p = substrate_params_from_json(json::parse(read_file(params_path)));
    if (seed_given) p.seed = seed;
    auto net = sim::gen_substrate(p);
    write_output(out_path, to_json(net));
    log_line("generated " + std::to_string(net.nodes.size()) + " nodes, " +
             std::to_string(net.links.size()) + " links");
    return kExitOk;
}

int cmd_embed(const std::string& substrate_path, const std::string& vnr_path,
              const std::string& policy_path, const std::string& weights_csv,
              const std::string& pricing_csv, const std::string& out_path) {
    auto net = substrate_from_json(read_file(substrate_path));
    if (auto bad = validate_substrate(net); !bad.empty())
        throw std::runtime_error("invalid substrate: " + bad.front());
    SubstrateState state(net);

    std::vector<RequestVariant> variants;
    if (!vnr_path.empty()) {
        auto vnr = vnr_from_json(read_file(vnr_path));
        if (auto bad = validate_vnr(vnr); !bad.empty())
            throw std::runtime_error("invalid request: " + bad.front());
        variants.push_back(variant_from_vnr(vnr));
    } else {
        policy::PolicyExpr expr;
        try {
            expr = policy::parse(read_file(policy_path));
        } catch (const policy::PolicyError& e) {
            std::cerr << "policy syntax error: " << e.what() << "\n";
            return kExitSyntax;
        }
        try {
            variants = policy::expand(expr, level_domain_of(net));
        } catch (const policy::UnsatisfiableError& e) {
            std::cerr << "unsatisfiable policy: " << e.what() << "\n";
            return kExitUnsat;
        }
    }

    milp::Weights weights;
    if (!weights_csv.empty()) {
        auto w = parse_csv_doubles(weights_csv, 3, "--weights");
        weights = {w[0], w[1], w[2]};
    }
    embedder::PricingWeights pricing;
    if (!pricing_csv.empty()) {
        auto l = parse_csv_doubles(pricing_csv, 2, "--pricing");
        pricing = {l[0], l[1]};
    }

    auto result = embedder::embed(state, variants, "request", weights, pricing,
                                  solver::SolveLimits{});
    if (auto* rec = std::get_if<embedder::EmbeddingRecord>(&result)) {
        write_output(out_path, record_json(*rec, net).dump(2));
        return kExitOk;
    }
    const auto& rej = std::get<embedder::Rejection>(result);
    json out{{"schema", "secvne-rejection-1"},
             {"reason", embedder::reject_reason_name(rej.reason)},
             {"detail", rej.detail}};
    write_output(out_path, out.dump(2));
    return kExitRejected;
}

int cmd_export_milp(const std::string& substrate_path, const std::string& vnr_path,
                    const std::string& format, const std::string& weights_csv,
                    const std::string& out_path) {
    auto net = substrate_from_json(read_file(substrate_path));
    auto vnr = vnr_from_json(read_file(vnr_path));
    milp::Weights weights;
    if (!weights_csv.empty()) {
        auto w = parse_csv_doubles(weights_csv, 3, "--weights");
        weights = {w[0], w[1], w[2]};
    }
    SubstrateState state(net);
    auto built = milp::build_model(state, variant_from_vnr(vnr), weights);
    milp::ExportFormat fmt;
    if (format == "lp")
        fmt = milp::ExportFormat::LpText;
    else if (format == "mps")
        fmt = milp::ExportFormat::MpsFixed;
    else
        throw std::runtime_error("--format must be lp or mps");
    write_output(out_path, milp::export_model(built.model, fmt));
    log_line("exported " + std::to_string(built.model.vars.size()) + " columns, " +
             std::to_string(built.model.rows.size()) + " rows");
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::uint64_t seed, bool seed_given) {
    json cfg = json::parse(read_file(config_path));
    sim::SubstrateGenParams sp = cfg.contains("substrate")
                                     ? substrate_params_from_json(cfg.at("substrate"))
                                     : sim::default_substrate_params();
    sim::WorkloadParams wp = cfg.contains("workload")
                                 ? workload_params_from_json(cfg.at("workload"))
                                 : sim::default_workload_params();
    sim::RunParams rp;
    rp.bucket_width = cfg.value("bucket_width", rp.bucket_width);
    rp.check_soundness = cfg.value("check_soundness", rp.check_soundness);
    if (cfg.contains("weights")) {
        const auto& w = cfg.at("weights");
        rp.weights = {w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>()};
    }
    if (cfg.contains("pricing")) {
        const auto& l = cfg.at("pricing");
        rp.pricing = {l.at(0).get<double>(), l.at(1).get<double>()};
    }

    std::vector<std::uint64_t> seeds;
    if (seed_given)
        seeds = {seed};
    else if (cfg.contains("seeds"))
        for (const auto& s : cfg.at("seeds")) seeds.push_back(s.get<std::uint64_t>());
    else
        seeds = {wp.seed};

    std::filesystem::create_directories(out_dir);
    json summary{{"schema", "secvne-simulation-1"},
                 {"config", sim::config_name(wp.config)},
                 {"runs", json::array()}};
    double acc_sum = 0;
    for (std::uint64_t s : seeds) {
        sim::SubstrateGenParams sps = sp;
        sim::WorkloadParams wps = wp;
        sps.seed = s;
        wps.seed = s;
        auto net = sim::gen_substrate(sps);
        auto events = sim::gen_workload(wps);
        log_line("seed " + std::to_string(s) + ": " + std::to_string(events.size()) +
                 " arrivals");
        auto metrics = sim::run(net, events, rp);
        std::string csv_name = "metrics_" + std::string(sim::config_name(wp.config)) + "_seed" +
                               std::to_string(s) + ".csv";
        for (auto& ch : csv_name)
            if (ch == '+') ch = '_';
        std::ofstream csv(std::filesystem::path(out_dir) / csv_name, std::ios::binary);
        csv << sim::to_csv(metrics);
        json rej = json::object();
        for (const auto& [k, v] : metrics.rejected_by_reason) rej[k] = v;
        summary["runs"].push_back({{"seed", s},
                                   {"csv", csv_name},
                                   {"arrived", metrics.arrived},
                                   {"accepted", metrics.accepted},
                                   {"rejected_by_reason", rej},
                                   {"acceptance_ratio", metrics.acceptance_ratio},
                                   {"node_stress", metrics.node_stress},
                                   {"link_stress", metrics.link_stress},
                                   {"avg_revenue", metrics.avg_revenue},
                                   {"avg_cost", metrics.avg_cost},
                                   {"soundness_violations", metrics.soundness_violations},
                                   {"residuals_restored", metrics.residuals_restored}});
        acc_sum += metrics.acceptance_ratio;
    }
    summary["mean_acceptance_ratio"] = seeds.empty() ? 1.0 : acc_sum / seeds.size();
    std::ofstream sj(std::filesystem::path(out_dir) / "summary.json", std::ios::binary);
    sj << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secvne: secure multi-cloud virtual network embedding toolkit"};
    app.require_subcommand(1);

    std::string policy_path, domain_path, params_path, out_path, substrate_path, vnr_path;
    std::string format = "lp", weights_csv, pricing_csv, config_path, out_dir = ".";
    std::uint64_t seed = 1;

    auto* pc = app.add_subcommand("policy-check", "Parse a policy and list its request variants");
    pc->add_option("--policy", policy_path, "Policy text file")->required();
    pc->add_option("--domain", domain_path, "Substrate JSON supplying the level domain");

    auto* gt = app.add_subcommand("gen-topology", "Generate a random substrate network");
    gt->add_option("--params", params_path, "Generator parameter JSON");
    gt->add_option("--out", out_path, "Output file (default stdout)");
    auto* gt_seed = gt->add_option("--seed", seed, "Seed override");

    auto* em = app.add_subcommand("embed", "Embed one request onto a substrate");
    em->add_option("--substrate", substrate_path, "Substrate JSON")->required();
    auto* em_vnr = em->add_option("--vnr", vnr_path, "Request JSON");
    auto* em_pol = em->add_option("--policy", policy_path, "Policy file (expanded to variants)");
    em->add_option("--weights", weights_csv, "Objective weights beta1,beta2,beta3");
    em->add_option("--pricing", pricing_csv, "Pricing weights lambda1,lambda2");
    em->add_option("--out", out_path, "Output file (default stdout)");

    auto* ex = app.add_subcommand("export-milp", "Write the embedding MILP as LP or MPS text");
    ex->add_option("--substrate", substrate_path, "Substrate JSON")->required();
    ex->add_option("--vnr", vnr_path, "Request JSON")->required();
    ex->add_option("--format", format, "lp|mps")->required();
    ex->add_option("--weights", weights_csv, "Objective weights beta1,beta2,beta3");
    ex->add_option("--out", out_path, "Output file (default stdout)");

    auto* si = app.add_subcommand("simulate", "Run the discrete-event simulation");
    si->add_option("--config", config_path, "Simulation config JSON")->required();
    si->add_option("--out", out_dir, "Output directory for CSV + summary JSON");
    auto* si_seed = si->add_option("--seed", seed, "Single-seed override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pc->parsed()) return cmd_policy_check(policy_path, domain_path);
        if (gt->parsed()) return cmd_gen_topology(params_path, out_path, seed, gt_seed->count() > 0);
        if (em->parsed()) {
            if ((em_vnr->count() > 0) == (em_pol->count() > 0))
                throw std::runtime_error("embed needs exactly one of --vnr or --policy");
            return cmd_embed(substrate_path, vnr_path, policy_path, weights_csv, pricing_csv,
                             out_path);
        }
        if (ex->parsed())
            return cmd_export_milp(substrate_path, vnr_path, format, weights_csv, out_path);
        if (si->parsed()) return cmd_simulate(config_path, out_dir, seed, si_seed->count() > 0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
