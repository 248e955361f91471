#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secvne/state.hpp"
#include "secvne/variant.hpp"

namespace secvne::milp {

enum class VarKind { Continuous, Binary };
enum class Sense { Le, Eq, Ge };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lb = 0.0;
    double ub = 0.0;
    double obj = 0.0;
    // Branch-and-bound picks fractional binaries from the lowest priority
    // class first (placement decisions before path decisions).
    int branch_priority = 0;
};

struct Row {
    std::string name;
    std::vector<std::pair<int, double>> coeffs;  // (column, coefficient), columns unique
    Sense sense = Sense::Le;
    double rhs = 0.0;
};

// Solver-agnostic sparse MILP, always minimization.
struct MilpModel {
    std::vector<Variable> vars;
    std::vector<Row> rows;

    int add_var(std::string name, VarKind kind, double lb, double ub, double obj,
                int branch_priority = 0) {
        vars.push_back({std::move(name), kind, lb, ub, obj, branch_priority});
        return static_cast<int>(vars.size()) - 1;
    }

    void add_row(std::string name, std::vector<std::pair<int, double>> coeffs, Sense sense,
                 double rhs) {
        rows.push_back({std::move(name), std::move(coeffs), sense, rhs});
    }

    std::size_t binary_count() const {
        std::size_t k = 0;
        for (const auto& v : vars)
            if (v.kind == VarKind::Binary) ++k;
        return k;
    }
};

struct Weights {
    double beta1 = 1.0;
    double beta2 = 1.0;
    double beta3 = 1.0;
};

// Column map for the embedding formulation. Working/backup flows are kept on
// directed substrate arcs in the canonical virtual-link orientation (a -> b);
// the mirrored orientation is implied by flow symmetry. Meta-link flows are
// substituted out: the meta-link equalities pin them to bw * wn / bw * bn, so
// they appear in the flow-conservation right-hand sides instead of as columns.
// -1 marks an absent column (ineligible pairing, or backup vars without a
// backup network).
struct VarIndex {
    std::size_t n_vnodes = 0, n_snodes = 0, n_clouds = 0, n_vlinks = 0, n_slinks = 0;
    bool backup_network = false;
    std::vector<char> link_has_backup;  // per virtual link: in the backup-links set

    std::vector<int> wn, bn;            // [i * n_snodes + p]
    std::vector<int> wc, bc;            // [i * n_clouds + c]
    std::vector<int> wf, bf;            // [(l * n_slinks + e) * 2 + dir], dir 0: a->b of the slink
    std::vector<int> wl, bl;            // [l * n_slinks + e], per undirected substrate link
    std::vector<int> working, backup;   // [e]

    int wn_at(std::size_t i, std::size_t p) const { return wn[i * n_snodes + p]; }
    int bn_at(std::size_t i, std::size_t p) const { return bn.empty() ? -1 : bn[i * n_snodes + p]; }
    int wf_at(std::size_t l, std::size_t e, int dir) const { return wf[(l * n_slinks + e) * 2 + dir]; }
    int bf_at(std::size_t l, std::size_t e, int dir) const {
        return bf.empty() ? -1 : bf[(l * n_slinks + e) * 2 + dir];
    }
};

struct BuildResult {
    MilpModel model;
    VarIndex index;
};

// Compiles (substrate residual state, request variant, objective weights)
// into the embedding MILP. Residual capacities stand in for raw capacities.
BuildResult build_model(const SubstrateState& state, const RequestVariant& variant,
                        const Weights& weights);

// Decoded optimal solution: node maps plus per-virtual-link flow maps.
struct EmbeddingDecision {
    struct Flow {
        std::size_t slink;  // substrate link index
        int dir;            // 0 = canonical a->b direction of that link
        double amount;
    };
    std::vector<int> working_node;               // virtual node index -> substrate node index
    std::vector<int> backup_node;                // -1 when no backup network
    std::vector<std::vector<Flow>> working_flow; // per virtual link
    std::vector<std::vector<Flow>> backup_flow;  // empty for links outside the backup set
    double objective = 0.0;
};

// Reads a (near-)integral solver assignment back into an embedding and
// recomputes the objective from it, cross-checking against `solver_objective`
// within `tol` (relative). Throws on fractional binaries or inconsistent maps.
EmbeddingDecision decode(const std::vector<double>& solution, const VarIndex& index,
                         const RequestVariant& variant, const SubstrateNetwork& net,
                         const Weights& weights, double solver_objective, double tol);

enum class ExportFormat { LpText, MpsFixed };

std::string export_model(const MilpModel& model, ExportFormat format);

}  // namespace secvne::milp
