#include "dockslim/query.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <unordered_map>

namespace dockslim {

std::string normalize_path(std::string_view path) {
    std::string p(path);
    if (p.size() >= 2 && (p.front() == '"' || p.front() == '\'') && p.back() == p.front()) {
        p = p.substr(1, p.size() - 2);
    }
    for (std::string_view home : {"${HOME}", "$HOME", "~"}) {
        if (p.compare(0, home.size(), home) == 0 &&
            (p.size() == home.size() || p[home.size()] == '/')) {
            p = "/root" + p.substr(home.size());
            break;
        }
    }
    // ${NAME} -> $NAME so both spellings of a variable compare equal
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == '$' && i + 1 < p.size() && p[i + 1] == '{') {
            const std::size_t close = p.find('}', i + 2);
            const std::string_view inner = std::string_view(p).substr(i + 2, close - i - 2);
            const bool simple = close != std::string::npos && !inner.empty() &&
                                std::all_of(inner.begin(), inner.end(), [](char c) {
                                    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
                                });
            if (simple) {
                out += '$';
                out += inner;
                i = close;
                continue;
            }
        }
        out += p[i];
    }
    p = std::move(out);
    while (p.size() >= 2 && p.compare(0, 2, "./") == 0) {
        p.erase(0, 2);
    }
    std::string collapsed;
    for (char c : p) {
        if (c == '/' && !collapsed.empty() && collapsed.back() == '/') {
            continue;
        }
        collapsed += c;
    }
    while (collapsed.size() > 1 && collapsed.back() == '/') {
        collapsed.pop_back();
    }
    return collapsed;
}

bool path_covers(std::string_view operand, std::string_view target) {
    const std::string o = normalize_path(operand);
    const std::string t = normalize_path(target);
    if (o.empty() || t.empty()) {
        return false;
    }
    if (o == t || o == t + "/*") {
        return true;
    }
    std::string candidate = t;
    while (!candidate.empty() && candidate != "/") {
        if (fnmatch(o.c_str(), candidate.c_str(), FNM_PATHNAME | FNM_PERIOD) == 0) {
            return true;
        }
        const std::size_t slash = candidate.rfind('/');
        if (slash == std::string::npos || slash == 0) {
            break;
        }
        candidate.resize(slash);
    }
    return false;
}

bool ValuePredicate::test(const Tree& tree, std::string_view value, const Match* anchor) const {
    std::string op = operand;
    if (!operand_binding.empty()) {
        if (anchor == nullptr) {
            return false;
        }
        const auto bound = anchor->binding(operand_binding);
        if (!bound) {
            return false;
        }
        op = tree[*bound].value;
    }
    switch (kind) {
        case Kind::Exact: return value == op;
        case Kind::Prefix: return value.substr(0, op.size()) == op;
        case Kind::Suffix:
            return value.size() >= op.size() && value.substr(value.size() - op.size()) == op;
        case Kind::Glob: return fnmatch(op.c_str(), std::string(value).c_str(), 0) == 0;
        case Kind::Contains: return value.find(op) != std::string_view::npos;
        case Kind::Covers: return path_covers(value, op);
        case Kind::Custom: return custom && custom(value, anchor);
    }
    return false;
}

namespace {

bool target_matches(const Tree& tree, NodeId id, const NodePattern& pattern, const Match* anchor) {
    const Node& n = tree[id];
    const bool hit = std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, NodeKind>) {
                return n.kind == t;
            } else {
                return tree.has_label(id, t);
            }
        },
        pattern.target);
    if (!hit) {
        return false;
    }
    return !pattern.value || pattern.value->test(tree, n.value, anchor);
}

NodeId scope_for(const Tree& tree, NodeId node, NodeKind kind, NodeId root) {
    const NodeId s = tree.enclosing(node, kind);
    return s ? s : root;
}

bool eval_consequents(const Tree& tree, const NodePattern& pattern, Match& m);

// Nodes whose nearest enclosing simple command is `stmt`.
void owned_nodes(const Tree& tree, NodeId stmt, std::vector<NodeId>& out) {
    tree.walk(stmt, [&](NodeId id) {
        const NodeKind k = tree[id].kind;
        if (k == NodeKind::ShUnparsed) {
            return false;
        }
        if (id != stmt && k == NodeKind::ShSimpleCommand) {
            return false;
        }
        out.push_back(id);
        return true;
    });
}

std::vector<NodeId> candidates(const Tree& tree, Relation relation, const Match& anchor, NodeId scope) {
    std::vector<NodeId> out;
    if (relation == Relation::InNode) {
        if (anchor.statement) {
            owned_nodes(tree, anchor.statement, out);
        } else {
            tree.walk(anchor.node, [&](NodeId id) {
                if (tree[id].kind == NodeKind::ShUnparsed) {
                    return false;
                }
                out.push_back(id);
                return true;
            });
        }
        return out;
    }
    const auto stmts = statements_in(tree, scope);
    const NodeId ref = anchor.statement ? anchor.statement : anchor.node;
    // Order by pre-order position; statements nested in the reference or
    // enclosing it are neither before nor after it.
    std::unordered_map<std::uint32_t, std::size_t> order;
    std::size_t k = 0;
    tree.walk(scope, [&](NodeId id) {
        order[id.value] = k++;
        return true;
    });
    const auto ref_it = order.find(ref.value);
    if (ref_it == order.end()) {
        return out;
    }
    const std::size_t ref_pos = ref_it->second;
    for (NodeId s : stmts) {
        if (s == ref || tree.is_ancestor(ref, s) || tree.is_ancestor(s, ref)) {
            continue;
        }
        const std::size_t pos = order[s.value];
        if ((relation == Relation::Before && pos < ref_pos) ||
            (relation == Relation::After && pos > ref_pos)) {
            owned_nodes(tree, s, out);
        }
    }
    return out;
}

bool eval_consequents(const Tree& tree, const NodePattern& pattern, Match& m) {
    for (const auto& c : pattern.consequents) {
        NodeId found;
        const bool ok = holds(tree, c.relation, *c.pattern, m, m.scope, &found);
        if (c.polarity == Polarity::MustExist) {
            if (!ok) {
                return false;
            }
            if (!c.pattern->bind.empty()) {
                m.bindings[c.pattern->bind] = found;
            }
        } else if (ok) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::vector<NodeId> statements_in(const Tree& tree, NodeId scope) {
    std::vector<NodeId> out;
    tree.walk(scope, [&](NodeId id) {
        const NodeKind k = tree[id].kind;
        if (k == NodeKind::ShUnparsed) {
            return false;
        }
        if (k == NodeKind::ShSimpleCommand) {
            out.push_back(id);
        }
        return true;
    });
    return out;
}

bool holds(const Tree& tree, Relation relation, const NodePattern& pattern, const Match& anchor,
           NodeId scope, NodeId* found) {
    for (NodeId c : candidates(tree, relation, anchor, scope)) {
        if (!target_matches(tree, c, pattern, &anchor)) {
            continue;
        }
        Match sub{c, scope, tree.enclosing(c, NodeKind::ShSimpleCommand), anchor.bindings};
        if (!pattern.bind.empty()) {
            sub.bindings[pattern.bind] = c;
        }
        if (eval_consequents(tree, pattern, sub)) {
            if (found != nullptr) {
                *found = c;
            }
            return true;
        }
    }
    return false;
}

std::vector<Match> find_all(const Tree& tree, NodeId root, const NodePattern& pattern) {
    std::vector<Match> out;
    tree.walk(root, [&](NodeId id) {
        if (tree[id].kind == NodeKind::ShUnparsed) {
            return false;
        }
        if (!target_matches(tree, id, pattern, nullptr)) {
            return true;
        }
        Match m{id, scope_for(tree, id, pattern.scope_kind, root),
                tree.enclosing(id, NodeKind::ShSimpleCommand), {}};
        if (!pattern.bind.empty()) {
            m.bindings[pattern.bind] = id;
        }
        if (eval_consequents(tree, pattern, m)) {
            out.push_back(std::move(m));
        }
        return true;
    });
    return out;
}

}  // namespace dockslim
