#pragma once

// Declarative matching over the unified tree: a target (kind or label), an
// optional value predicate and structural post-conditions relative to the
// matched node's statement.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dockslim/source_model.hpp"

namespace dockslim {

/// Lexical path normalisation used by path predicates: strips surrounding
/// quotes, `./`, trailing slashes, and maps `~`, `$HOME`, `${HOME}` to /root.
std::string normalize_path(std::string_view path);

/// Does removing `operand` (an rm argument, possibly a glob) remove `target`?
/// True when they are equal, when the glob matches the target or one of its
/// ancestors, or when the operand is `<target>/*`-style content removal of a
/// directory that equals the target.
bool path_covers(std::string_view operand, std::string_view target);

struct Match;

struct ValuePredicate {
    enum class Kind { Exact, Prefix, Suffix, Glob, Contains, Covers, Custom };
    Kind kind = Kind::Exact;
    std::string operand;
    /// When set, the operand is taken from this binding of the anchor match.
    std::string operand_binding;
    std::function<bool(std::string_view value, const Match* anchor)> custom;

    [[nodiscard]] bool test(const Tree& tree, std::string_view value, const Match* anchor) const;

    static ValuePredicate exact(std::string s) { return {Kind::Exact, std::move(s), {}, {}}; }
    static ValuePredicate prefix(std::string s) { return {Kind::Prefix, std::move(s), {}, {}}; }
    static ValuePredicate suffix(std::string s) { return {Kind::Suffix, std::move(s), {}, {}}; }
    static ValuePredicate glob(std::string s) { return {Kind::Glob, std::move(s), {}, {}}; }
    static ValuePredicate contains(std::string s) { return {Kind::Contains, std::move(s), {}, {}}; }
    /// The candidate, read as an rm operand, covers the operand path.
    static ValuePredicate covers(std::string path) { return {Kind::Covers, std::move(path), {}, {}}; }
    static ValuePredicate covers_binding(std::string binding) {
        return {Kind::Covers, {}, std::move(binding), {}};
    }
    static ValuePredicate custom_fn(std::function<bool(std::string_view, const Match*)> fn) {
        return {Kind::Custom, {}, {}, std::move(fn)};
    }
};

enum class Relation { InNode, Before, After };
enum class Polarity { MustExist, MustNotExist };

struct NodePattern;

struct Consequent {
    Relation relation;
    std::shared_ptr<const NodePattern> pattern;
    Polarity polarity;
};

struct NodePattern {
    std::variant<NodeKind, Label> target;
    std::optional<ValuePredicate> value;
    std::vector<Consequent> consequents;
    std::string bind;  // record the matched node under this name
    /// Relations are evaluated inside the nearest ancestor of this kind
    /// (falling back to the search root).
    NodeKind scope_kind = NodeKind::DockerRun;

    static NodePattern of_kind(NodeKind kind) { return NodePattern{kind, {}, {}, {}, NodeKind::DockerRun}; }
    /// Throws ConfigError for labels outside the vocabulary.
    static NodePattern of_label(std::string_view label) {
        return NodePattern{Label::of(label), {}, {}, {}, NodeKind::DockerRun};
    }

    NodePattern& where(ValuePredicate p) {
        value = std::move(p);
        return *this;
    }
    NodePattern& as(std::string name) {
        bind = std::move(name);
        return *this;
    }
    NodePattern& scoped_to(NodeKind kind) {
        scope_kind = kind;
        return *this;
    }
    NodePattern& with(Relation r, NodePattern p, Polarity pol) {
        consequents.push_back({r, std::make_shared<const NodePattern>(std::move(p)), pol});
        return *this;
    }
    NodePattern& has(NodePattern p) { return with(Relation::InNode, std::move(p), Polarity::MustExist); }
    NodePattern& lacks(NodePattern p) {
        return with(Relation::InNode, std::move(p), Polarity::MustNotExist);
    }
    NodePattern& none_after(NodePattern p) {
        return with(Relation::After, std::move(p), Polarity::MustNotExist);
    }
    NodePattern& none_before(NodePattern p) {
        return with(Relation::Before, std::move(p), Polarity::MustNotExist);
    }
};

struct Match {
    NodeId node;
    NodeId scope;
    NodeId statement;  // nearest enclosing SC-SIMPLE-COMMAND, if any
    std::map<std::string, NodeId> bindings;

    [[nodiscard]] std::optional<NodeId> binding(const std::string& name) const {
        auto it = bindings.find(name);
        if (it == bindings.end()) {
            return std::nullopt;
        }
        return it->second;
    }
};

/// All matches under `root` in document order. Nothing inside SC-UNPARSED
/// is ever matched.
std::vector<Match> find_all(const Tree& tree, NodeId root, const NodePattern& pattern);

/// Whether `pattern` has a match related to `anchor` by `relation` inside
/// `scope`. A matching node is reported through `found` when given.
bool holds(const Tree& tree, Relation relation, const NodePattern& pattern, const Match& anchor,
           NodeId scope, NodeId* found = nullptr);

/// Simple commands under `scope` in pre-order (the statement order used by
/// before/after).
std::vector<NodeId> statements_in(const Tree& tree, NodeId scope);

}  // namespace dockslim
