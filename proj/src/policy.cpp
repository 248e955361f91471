#include "secvne/policy.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace secvne::policy {

const char* func_name(Func f) {
    switch (f) {
        case Func::Cpu: return "cpu";
        case Func::Sec: return "sec";
        case Func::Cloud: return "cloud";
        case Func::Avail: return "avail";
        case Func::Bw: return "bw";
    }
    return "?";
}

namespace {

enum class Tok { Ident, Number, Caret, LParen, RParen, Comma, Eq, Geq, And, Or, Not, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (pos_ >= s_.size()) return {Tok::End, "", line, col};
        char c = s_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string t;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                t += advance();
            return {Tok::Ident, t, line, col};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string t;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
                t += advance();
            return {Tok::Number, t, line, col};
        }
        advance();
        switch (c) {
            case '^': return {Tok::Caret, "^", line, col};
            case '(': return {Tok::LParen, "(", line, col};
            case ')': return {Tok::RParen, ")", line, col};
            case ',': return {Tok::Comma, ",", line, col};
            case '&': return {Tok::And, "&", line, col};
            case '|': return {Tok::Or, "|", line, col};
            case '!': return {Tok::Not, "!", line, col};
            case '=': return {Tok::Eq, "=", line, col};
            case '>':
                if (pos_ < s_.size() && s_[pos_] == '=') {
                    advance();
                    return {Tok::Geq, ">=", line, col};
                }
                throw PolicyError("expected '>=' after '>'", line, col);
        }
        throw PolicyError(std::string("unexpected character '") + c + "'", line, col);
    }

private:
    char advance() {
        char c = s_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { cur_ = lex_.next(); }

    PolicyExpr parse_all() {
        PolicyExpr e = parse_or();
        if (cur_.kind != Tok::End) fail("trailing input");
        return e;
    }

private:
    PolicyExpr parse_or() {
        PolicyExpr left = parse_and();
        while (cur_.kind == Tok::Or) {
            eat();
            PolicyExpr right = parse_and();
            PolicyExpr node;
            node.kind = PolicyExpr::Kind::Or;
            node.children = {std::move(left), std::move(right)};
            left = std::move(node);
        }
        return left;
    }

    PolicyExpr parse_and() {
        PolicyExpr left = parse_factor();
        while (cur_.kind == Tok::And) {
            eat();
            PolicyExpr right = parse_factor();
            PolicyExpr node;
            node.kind = PolicyExpr::Kind::And;
            node.children = {std::move(left), std::move(right)};
            left = std::move(node);
        }
        return left;
    }

    PolicyExpr parse_factor() {
        if (cur_.kind == Tok::Not) {
            eat();
            PolicyExpr node;
            node.kind = PolicyExpr::Kind::Not;
            node.children.push_back(parse_factor());
            return node;
        }
        if (cur_.kind == Tok::LParen) {
            eat();
            PolicyExpr e = parse_or();
            expect(Tok::RParen, "')'");
            return e;
        }
        return parse_leaf();
    }

    PolicyExpr parse_leaf() {
        if (cur_.kind != Tok::Ident) fail("expected attribute function");
        Token name = cur_;
        eat();
        PolicyExpr leaf;
        leaf.kind = PolicyExpr::Kind::Leaf;
        std::string lowered = name.text;
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (lowered == "cpu") leaf.func = Func::Cpu;
        else if (lowered == "sec") leaf.func = Func::Sec;
        else if (lowered == "cloud") leaf.func = Func::Cloud;
        else if (lowered == "avail") leaf.func = Func::Avail;
        else if (lowered == "bw") leaf.func = Func::Bw;
        else throw PolicyError("unknown function '" + name.text + "'", name.line, name.col);

        expect(Tok::Caret, "'^'");
        if (cur_.kind != Tok::Ident || (cur_.text != "S" && cur_.text != "V"))
            fail("expected scope 'S' or 'V'");
        leaf.scope = cur_.text == "S" ? Scope::Substrate : Scope::Virtual;
        eat();

        expect(Tok::LParen, "'('");
        leaf.params.push_back(parse_param());
        if (cur_.kind == Tok::Comma) {
            eat();
            leaf.params.push_back(parse_param());
        }
        expect(Tok::RParen, "')'");

        bool link_func = leaf.func == Func::Bw;
        bool link_arity_ok = leaf.func == Func::Bw || leaf.func == Func::Sec;
        if (leaf.params.size() == 2 && !link_arity_ok)
            throw PolicyError(std::string(func_name(leaf.func)) + " takes one parameter", name.line,
                              name.col);
        if (leaf.params.size() == 1 && link_func)
            throw PolicyError("bw takes two parameters", name.line, name.col);

        if (cur_.kind == Tok::Eq) {
            leaf.op = CmpOp::Eq;
        } else if (cur_.kind == Tok::Geq) {
            if (leaf.scope == Scope::Substrate) fail("substrate attributes use '=' only");
            leaf.op = CmpOp::Geq;
        } else {
            fail("expected '=' or '>='");
        }
        eat();

        if (cur_.kind != Tok::Number) fail("expected numeric value");
        try {
            leaf.value = Fixed::parse(cur_.text);
        } catch (const std::exception&) {
            fail("bad numeric literal");
        }
        eat();
        return leaf;
    }

    std::string parse_param() {
        if (cur_.kind != Tok::Ident && cur_.kind != Tok::Number) fail("expected identifier");
        std::string p = cur_.text;
        eat();
        return p;
    }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k) fail(std::string("expected ") + what);
        eat();
    }

    void eat() { cur_ = lex_.next(); }

    [[noreturn]] void fail(const std::string& msg) { throw PolicyError(msg, cur_.line, cur_.col); }

    Lexer lex_;
    Token cur_;
};

std::string leaf_str(const PolicyExpr& e) {
    std::string s = func_name(e.func);
    s += e.scope == Scope::Substrate ? "^S(" : "^V(";
    s += e.params[0];
    if (e.params.size() == 2) s += "," + e.params[1];
    s += ")";
    s += e.op == CmpOp::Eq ? "=" : ">=";
    s += e.value.str();
    return s;
}

void print_rec(const PolicyExpr& e, std::string& out) {
    switch (e.kind) {
        case PolicyExpr::Kind::Leaf:
            out += leaf_str(e);
            break;
        case PolicyExpr::Kind::Not:
            out += "!(";
            print_rec(e.children[0], out);
            out += ")";
            break;
        case PolicyExpr::Kind::And:
        case PolicyExpr::Kind::Or:
            out += "(";
            print_rec(e.children[0], out);
            out += e.kind == PolicyExpr::Kind::And ? " & " : " | ";
            print_rec(e.children[1], out);
            out += ")";
            break;
    }
}

}  // namespace

PolicyExpr parse(const std::string& text) { return Parser(text).parse_all(); }

std::string print(const PolicyExpr& expr) {
    std::string out;
    print_rec(expr, out);
    return out;
}

namespace {

void collect_substrate_leaves(const PolicyExpr& e, std::vector<const PolicyExpr*>& out) {
    switch (e.kind) {
        case PolicyExpr::Kind::Leaf:
            if (e.scope != Scope::Substrate)
                throw std::runtime_error("virtual-scope leaf in substrate specification: " + leaf_str(e));
            out.push_back(&e);
            break;
        case PolicyExpr::Kind::And:
            collect_substrate_leaves(e.children[0], out);
            collect_substrate_leaves(e.children[1], out);
            break;
        default:
            throw std::runtime_error("substrate specification admits only '&' of '=' leaves");
    }
}

}  // namespace

SubstrateNetwork to_substrate(const PolicyExpr& expr) {
    std::vector<const PolicyExpr*> leaves;
    collect_substrate_leaves(expr, leaves);

    struct NodeAttrs {
        std::optional<Fixed> cpu, sec, cloud;
    };
    struct LinkAttrs {
        std::optional<Fixed> bw, sec;
    };
    std::map<std::string, NodeAttrs> nodes;
    std::map<std::pair<std::string, std::string>, LinkAttrs> links;

    auto set_attr = [](std::optional<Fixed>& slot, Fixed v, const std::string& what) {
        if (slot && *slot != v)
            throw std::runtime_error("conflicting values for " + what + ": " + slot->str() + " vs " +
                                     v.str());
        slot = v;
    };

    for (const auto* l : leaves) {
        if (l->params.size() == 1) {
            auto& n = nodes[l->params[0]];
            switch (l->func) {
                case Func::Cpu: set_attr(n.cpu, l->value, "cpu^S(" + l->params[0] + ")"); break;
                case Func::Sec: set_attr(n.sec, l->value, "sec^S(" + l->params[0] + ")"); break;
                case Func::Cloud: set_attr(n.cloud, l->value, "cloud^S(" + l->params[0] + ")"); break;
                default:
                    throw std::runtime_error(std::string(func_name(l->func)) +
                                             " is not a substrate node attribute");
            }
        } else {
            NodeId a = l->params[0], b = l->params[1];
            canonicalize(a, b);
            auto& lk = links[{a, b}];
            std::string name = "(" + a + "," + b + ")";
            switch (l->func) {
                case Func::Bw: set_attr(lk.bw, l->value, "bw^S" + name); break;
                case Func::Sec: set_attr(lk.sec, l->value, "sec^S" + name); break;
                default:
                    throw std::runtime_error(std::string(func_name(l->func)) +
                                             " is not a substrate link attribute");
            }
        }
    }

    SubstrateNetwork net;
    std::set<Fixed> trusts;
    for (const auto& [id, a] : nodes) {
        if (!a.cpu) throw std::runtime_error("node '" + id + "' missing cpu");
        if (!a.sec) throw std::runtime_error("node '" + id + "' missing sec");
        if (!a.cloud) throw std::runtime_error("node '" + id + "' missing cloud");
        trusts.insert(*a.cloud);
    }
    for (Fixed t : trusts) net.clouds.push_back({t.str(), t});
    for (const auto& [id, a] : nodes) net.nodes.push_back({id, *a.cpu, *a.sec, a.cloud->str()});
    for (const auto& [key, a] : links) {
        if (!a.bw) throw std::runtime_error("link (" + key.first + "," + key.second + ") missing bw");
        if (!a.sec) throw std::runtime_error("link (" + key.first + "," + key.second + ") missing sec");
        if (!nodes.count(key.first) || !nodes.count(key.second))
            throw std::runtime_error("link (" + key.first + "," + key.second +
                                     ") references an unattributed node");
        net.links.push_back({key.first, key.second, *a.bw, *a.sec, Fixed::from_int(1)});
    }
    return net;
}

namespace {

struct Literal {
    const PolicyExpr* leaf;
    bool negated;
};

using Conjunct = std::vector<Literal>;

constexpr std::size_t kMaxConjuncts = 1 << 16;

// Negation-normal-form DNF. Children of Not are recursed with flipped sign.
void dnf(const PolicyExpr& e, bool neg, std::vector<Conjunct>& out) {
    switch (e.kind) {
        case PolicyExpr::Kind::Leaf:
            out.push_back({Literal{&e, neg}});
            return;
        case PolicyExpr::Kind::Not:
            dnf(e.children[0], !neg, out);
            return;
        case PolicyExpr::Kind::And:
        case PolicyExpr::Kind::Or: {
            bool is_and = (e.kind == PolicyExpr::Kind::And) != neg;  // De Morgan
            std::vector<Conjunct> left, right;
            dnf(e.children[0], neg, left);
            dnf(e.children[1], neg, right);
            if (is_and) {
                if (left.size() * right.size() > kMaxConjuncts)
                    throw std::runtime_error("policy expansion too large");
                for (const auto& l : left)
                    for (const auto& r : right) {
                        Conjunct c = l;
                        c.insert(c.end(), r.begin(), r.end());
                        out.push_back(std::move(c));
                    }
            } else {
                out = std::move(left);
                out.insert(out.end(), right.begin(), right.end());
                if (out.size() > kMaxConjuncts) throw std::runtime_error("policy expansion too large");
            }
            return;
        }
    }
}

std::vector<Fixed> filter_levels(const std::vector<Fixed>& domain, CmpOp op, Fixed v, bool negated) {
    std::vector<Fixed> out;
    for (Fixed lvl : domain) {
        bool sat = op == CmpOp::Eq ? lvl == v : lvl >= v;
        if (sat != negated) out.push_back(lvl);
    }
    return out;
}

std::vector<Fixed> intersect(const std::vector<Fixed>& a, const std::vector<Fixed>& b) {
    std::vector<Fixed> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

std::vector<RequestVariant> expand(const PolicyExpr& expr, const LevelDomain& domain) {
    std::vector<Conjunct> conjuncts;
    dnf(expr, false, conjuncts);

    // Mentioned nodes/links, in first-mention order, shared by all variants.
    std::vector<std::string> node_order;
    std::vector<std::pair<std::string, std::string>> link_order;
    auto note_node = [&](const std::string& id) {
        if (std::find(node_order.begin(), node_order.end(), id) == node_order.end())
            node_order.push_back(id);
    };
    std::vector<const PolicyExpr*> all_leaves;
    {
        std::vector<const PolicyExpr*> stack = {&expr};
        while (!stack.empty()) {
            const PolicyExpr* e = stack.back();
            stack.pop_back();
            if (e->kind == PolicyExpr::Kind::Leaf) {
                if (e->scope != Scope::Virtual)
                    throw std::runtime_error("substrate-scope leaf in virtual specification: " +
                                             leaf_str(*e));
                all_leaves.push_back(e);
            } else {
                for (auto it = e->children.rbegin(); it != e->children.rend(); ++it)
                    stack.push_back(&*it);
            }
        }
        for (const auto* l : all_leaves) {
            if (l->params.size() == 1) {
                note_node(l->params[0]);
            } else {
                std::string a = l->params[0], b = l->params[1];
                canonicalize(a, b);
                note_node(l->params[0]);
                note_node(l->params[1]);
                if (std::find(link_order.begin(), link_order.end(), std::make_pair(a, b)) ==
                    link_order.end())
                    link_order.push_back({a, b});
            }
        }
    }

    struct NodeDraft {
        std::optional<Fixed> cpu;
        std::optional<int> avail;
        std::vector<Fixed> sec, cloud;
    };
    struct LinkDraft {
        std::optional<Fixed> bw;
        std::vector<Fixed> sec;
    };

    std::vector<RequestVariant> variants;
    std::string missing_what;

    for (const auto& conj : conjuncts) {
        std::map<std::string, NodeDraft> nodes;
        std::map<std::pair<std::string, std::string>, LinkDraft> links;
        for (const auto& id : node_order) {
            nodes[id].sec = domain.sec_levels;
            nodes[id].cloud = domain.cloud_levels;
        }
        for (const auto& key : link_order) links[key].sec = domain.sec_levels;

        bool contradicted = false;
        for (const auto& lit : conj) {
            const PolicyExpr& l = *lit.leaf;
            bool exact_func = l.func == Func::Cpu || l.func == Func::Bw || l.func == Func::Avail;
            if (exact_func) {
                if (lit.negated)
                    throw std::runtime_error("negation of " + std::string(func_name(l.func)) +
                                             " is not supported");
                if (l.op != CmpOp::Eq)
                    throw std::runtime_error(std::string(func_name(l.func)) +
                                             " demands must use '='");
            }
            if (l.params.size() == 1) {
                auto& n = nodes.at(l.params[0]);
                switch (l.func) {
                    case Func::Cpu:
                        if (n.cpu && *n.cpu != l.value) contradicted = true;
                        n.cpu = l.value;
                        break;
                    case Func::Avail: {
                        int v = static_cast<int>(l.value.milli() / Fixed::kScale);
                        if (Fixed::from_int(v) != l.value || v < 0 || v > 2)
                            throw std::runtime_error("avail must be 0, 1 or 2");
                        if (n.avail && *n.avail != v) contradicted = true;
                        n.avail = v;
                        break;
                    }
                    case Func::Sec:
                        n.sec = intersect(n.sec, filter_levels(domain.sec_levels, l.op, l.value,
                                                               lit.negated));
                        if (n.sec.empty()) contradicted = true;
                        break;
                    case Func::Cloud:
                        n.cloud = intersect(n.cloud, filter_levels(domain.cloud_levels, l.op, l.value,
                                                                   lit.negated));
                        if (n.cloud.empty()) contradicted = true;
                        break;
                    default:
                        throw std::runtime_error("bw is a link attribute");
                }
            } else {
                std::string a = l.params[0], b = l.params[1];
                canonicalize(a, b);
                auto& lk = links.at({a, b});
                if (l.func == Func::Bw) {
                    if (lk.bw && *lk.bw != l.value) contradicted = true;
                    lk.bw = l.value;
                } else {
                    lk.sec =
                        intersect(lk.sec, filter_levels(domain.sec_levels, l.op, l.value, lit.negated));
                    if (lk.sec.empty()) contradicted = true;
                }
            }
            if (contradicted) break;
        }
        if (contradicted) continue;

        RequestVariant v;
        bool incomplete = false;
        for (const auto& id : node_order) {
            const auto& n = nodes.at(id);
            if (!n.cpu) {
                incomplete = true;
                missing_what = "node '" + id + "' missing cpu";
                break;
            }
            VariantNode vn;
            vn.id = id;
            vn.cpu = *n.cpu;
            vn.sec = LevelReq::one_of(n.sec);
            vn.cloud = LevelReq::one_of(n.cloud);
            vn.avail = static_cast<Avail>(n.avail.value_or(0));
            v.nodes.push_back(std::move(vn));
        }
        if (!incomplete) {
            for (const auto& key : link_order) {
                const auto& lk = links.at(key);
                if (!lk.bw) {
                    incomplete = true;
                    missing_what = "link (" + key.first + "," + key.second + ") missing bw";
                    break;
                }
                v.links.push_back({key.first, key.second, *lk.bw, LevelReq::one_of(lk.sec)});
            }
        }
        if (incomplete) throw std::runtime_error(missing_what);
        if (std::find(variants.begin(), variants.end(), v) == variants.end())
            variants.push_back(std::move(v));
    }

    if (variants.empty())
        throw UnsatisfiableError("policy is unsatisfiable against the level domain");
    return variants;
}

LevelDomain domain_from_policy(const PolicyExpr& expr) {
    std::set<Fixed> sec, cloud;
    std::vector<const PolicyExpr*> stack = {&expr};
    while (!stack.empty()) {
        const PolicyExpr* e = stack.back();
        stack.pop_back();
        if (e->kind == PolicyExpr::Kind::Leaf) {
            if (e->func == Func::Sec) sec.insert(e->value);
            if (e->func == Func::Cloud) cloud.insert(e->value);
        } else {
            for (const auto& c : e->children) stack.push_back(&c);
        }
    }
    LevelDomain d;
    d.sec_levels.assign(sec.begin(), sec.end());
    d.cloud_levels.assign(cloud.begin(), cloud.end());
    return d;
}

}  // namespace secvne::policy
