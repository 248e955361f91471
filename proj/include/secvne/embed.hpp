#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "secvne/milp.hpp"
#include "secvne/solver.hpp"
#include "secvne/state.hpp"
#include "secvne/variant.hpp"

namespace secvne::embedder {

// Relative proportion of the node vs link component in the revenue and cost
// pricing formulas.
struct PricingWeights {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
};

enum class RejectReason {
    NoEligibleNode,  // some virtual node has no admissible substrate host
    NoFeasiblePath,  // routing/placement infeasible on an unloaded substrate
    Capacity,        // infeasible against current residuals but substrate is loaded
    SolverLimit,     // every variant ran out of solver budget unresolved
};

const char* reject_reason_name(RejectReason r);

struct Rejection {
    RejectReason reason;
    std::string detail;
};

struct EmbeddingRecord {
    std::string request_id;
    std::size_t variant_index = 0;  // into the expansion order
    RequestVariant variant;
    milp::EmbeddingDecision decision;
    Allocation allocation;  // exact-decimal footprint derived from the decision
    double revenue = 0.0;
    double cost = 0.0;
    std::uint64_t state_revision = 0;  // revision embed() ran against
    double arrival = 0.0;
    double departure = 0.0;
};

using EmbedResult = std::variant<EmbeddingRecord, Rejection>;

// Compiles and solves one MILP per variant against the current residuals and
// keeps the cheapest optimal embedding (ties: first variant in expansion
// order). Read-only on state; commit() applies the result separately.
EmbedResult embed(const SubstrateState& state, const std::vector<RequestVariant>& variants,
                  const std::string& request_id, const milp::Weights& weights,
                  const PricingWeights& pricing, const solver::SolveLimits& limits);

// Applies the record's allocation. Fails when the state has changed since
// embed() (stale revision) or any residual would go negative.
bool commit(SubstrateState& state, const EmbeddingRecord& record);

// Returns the request's resources. Throws on unknown id.
void release(SubstrateState& state, const std::string& request_id);

// Tenant-side pricing: demands weighted by their security levels, doubled for
// resources that carry an availability requirement.
double revenue(const RequestVariant& variant, const PricingWeights& pricing);

// Provider-side pricing of the decoded embedding: allocated cpu weighted by
// host security and cloud trust, plus flows weighted by link security.
// Includes backup allocations of availability-flagged resources.
double cost(const milp::EmbeddingDecision& decision, const RequestVariant& variant,
            const SubstrateNetwork& net, const PricingWeights& pricing);

// Re-checks an accepted embedding independently of the solver: eligibility,
// link security, host exclusivity, flow conservation, working/backup
// disjointness, availability placement, and residual non-negativity of the
// allocation. Returns human-readable violations; empty means sound.
std::vector<std::string> check_embedding(const SubstrateState& state, const RequestVariant& variant,
                                         const milp::EmbeddingDecision& decision,
                                         const Allocation& allocation);

// The exact-decimal footprint of a decoded embedding (cpu of working nodes,
// cpu of availability-flagged backups, and per-link flow totals).
Allocation build_allocation(const milp::EmbeddingDecision& decision, const RequestVariant& variant,
                            const SubstrateState& state);

}  // namespace secvne::embedder
