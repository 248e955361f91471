#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "secvne/net.hpp"
#include "secvne/variant.hpp"

namespace secvne::policy {

enum class Func { Cpu, Sec, Cloud, Avail, Bw };
enum class Scope { Substrate, Virtual };
enum class CmpOp { Eq, Geq };

const char* func_name(Func f);

struct PolicyError : std::runtime_error {
    PolicyError(std::string msg, int line, int col)
        : std::runtime_error(std::move(msg) + " at " + std::to_string(line) + ":" + std::to_string(col)),
          line(line),
          col(col) {}
    int line, col;
};

struct UnsatisfiableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expression tree over attribute comparisons. Substrate policies are pure
// And-conjunctions of '=' leaves; virtual policies may use !, &, | and >=.
struct PolicyExpr {
    enum class Kind { Leaf, Not, And, Or };
    Kind kind = Kind::Leaf;

    // leaf payload
    Func func = Func::Cpu;
    Scope scope = Scope::Virtual;
    std::vector<std::string> params;  // 1 (node) or 2 (link)
    CmpOp op = CmpOp::Eq;
    Fixed value;

    std::vector<PolicyExpr> children;  // Not: 1, And/Or: 2

    friend bool operator==(const PolicyExpr&, const PolicyExpr&) = default;
};

// Grammar (precedence Not > And > Or, parentheses allowed):
//   expr := term ('|' term)*
//   term := factor ('&' factor)*
//   factor := '!' factor | '(' expr ')' | leaf
//   leaf := name '^' ('S'|'V') '(' param (',' param)? ')' ('=' | '>=') number
PolicyExpr parse(const std::string& text);

std::string print(const PolicyExpr& expr);

// Builds a substrate from a pure And-conjunction of substrate leaves.
// Each distinct cloud trust value becomes one cloud (id = its decimal form).
SubstrateNetwork to_substrate(const PolicyExpr& expr);

// Normalizes to DNF against the finite level domain and emits one concrete
// variant per satisfiable conjunct (deduplicated, in deterministic order).
// Throws UnsatisfiableError when no conjunct survives.
std::vector<RequestVariant> expand(const PolicyExpr& expr, const LevelDomain& domain);

// Fallback level domain for policy checking without a substrate: all sec and
// cloud values mentioned in the policy itself.
LevelDomain domain_from_policy(const PolicyExpr& expr);

}  // namespace secvne::policy
