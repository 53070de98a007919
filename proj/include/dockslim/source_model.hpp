#pragma once

// Shared AST model: spans, node kinds, annotation labels and the node arena.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dockslim {

/// Raised when an invariant that only a parser or rule bug can break is
/// violated (out-of-range span, unrenderable node, ...).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised for configuration mistakes detected before any file is analysed,
/// e.g. a pattern that references an unregistered label.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SourceSpan {
    std::size_t start_offset = 0;
    std::size_t end_offset = 0;
    std::uint32_t start_line = 1;
    std::uint32_t start_col = 1;
    std::uint32_t end_line = 1;
    std::uint32_t end_col = 1;

    [[nodiscard]] std::size_t size() const { return end_offset - start_offset; }
    [[nodiscard]] bool contains(const SourceSpan& other) const {
        return start_offset <= other.start_offset && other.end_offset <= end_offset;
    }
    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Maps byte offsets of one text to 1-based line/column pairs.
class LineIndex {
public:
    explicit LineIndex(std::string_view text);

    [[nodiscard]] SourceSpan span(std::size_t begin, std::size_t end) const;
    [[nodiscard]] std::size_t line_of(std::size_t offset) const;
    [[nodiscard]] std::size_t text_size() const { return size_; }

private:
    std::vector<std::size_t> line_starts_;
    std::size_t size_ = 0;
};

/// Exact byte slice of `source` covered by `span`; throws InternalError when
/// the span does not fit.
std::string span_text(std::string_view source, const SourceSpan& span);

// Docker kinds first, shell kinds after; one flat enum so queries walk both
// grammars without caring where one ends.
enum class NodeKind : std::uint8_t {
    DockerFile,
    DockerFrom,
    DockerRun,
    DockerCopy,
    DockerAdd,
    DockerEnv,
    DockerArg,
    DockerWorkdir,
    DockerExpose,
    DockerEntrypoint,
    DockerCmd,
    DockerLabel,
    DockerUser,
    DockerVolume,
    DockerShell,
    DockerHealthcheck,
    DockerOnbuild,
    DockerStopsignal,
    DockerMaintainer,
    DockerComment,
    DockerUnknown,
    DockerKeyword,
    DockerFlag,
    DockerArgs,
    DockerExecArray,
    DockerString,
    DockerHeredoc,

    ShScript,
    ShSimpleCommand,
    ShPipeline,
    ShAnd,
    ShOr,
    ShSeq,
    ShSubshell,
    ShCommandSubstitution,
    ShCompound,
    ShWord,
    ShVariable,
    ShAssignment,
    ShRedirection,
    ShUnparsed,
};

/// "DOCKER-RUN", "SC-SIMPLE-COMMAND", ...
std::string_view kind_name(NodeKind kind);
std::optional<NodeKind> kind_from_name(std::string_view name);
bool is_docker_kind(NodeKind kind);
bool is_instruction_kind(NodeKind kind);

/// Index into the label registry. Only obtainable through the registry, so a
/// Label value is always a known label.
class Label {
public:
    /// Throws ConfigError for names outside the vocabulary.
    static Label of(std::string_view name);
    static std::optional<Label> find(std::string_view name);

    [[nodiscard]] std::string_view name() const;
    [[nodiscard]] std::uint16_t index() const { return index_; }

    friend bool operator==(Label, Label) = default;
    friend auto operator<=>(Label, Label) = default;

private:
    explicit Label(std::uint16_t index) : index_(index) {}
    std::uint16_t index_;
};

/// Every label the annotator may attach.
const std::vector<std::string_view>& label_vocabulary();

enum class QuoteStyle : std::uint8_t { Bare, Single, Double, Mixed };
std::string_view quote_style_name(QuoteStyle style);

enum class NodeFlag : std::uint8_t {
    ExecForm = 1U << 0,   // DOCKER-RUN written as a JSON array
    ExecArray = 1U << 1,  // SC-SIMPLE-COMMAND built from JSON array elements
    Backtick = 1U << 2,   // `...` command substitution
    Heredoc = 1U << 3,    // DOCKER-RUN whose payload is a heredoc body
    Directive = 1U << 4,  // DOCKER-COMMENT that is a parser directive
};

struct NodeId {
    std::uint32_t value = UINT32_MAX;

    static constexpr NodeId none() { return NodeId{}; }
    [[nodiscard]] bool valid() const { return value != UINT32_MAX; }
    explicit operator bool() const { return valid(); }
    friend bool operator==(NodeId, NodeId) = default;
    friend auto operator<=>(NodeId, NodeId) = default;
};

struct Node {
    NodeKind kind = NodeKind::ShUnparsed;
    std::optional<SourceSpan> span;  // absent for nodes synthesized by a repair
    std::vector<NodeId> children;
    NodeId parent;
    std::vector<Label> annotations;  // sorted, unique
    std::string text;   // verbatim source text (or canonical text when synthesized)
    std::string value;  // semantic value: unquoted word, variable name, operator, keyword
    QuoteStyle quote = QuoteStyle::Bare;
    std::uint8_t flags = 0;
    bool modified = false;
    bool dirty = false;  // this node or a descendant is modified

    [[nodiscard]] bool has(NodeFlag f) const { return (flags & static_cast<std::uint8_t>(f)) != 0; }
    void set(NodeFlag f) { flags |= static_cast<std::uint8_t>(f); }
    [[nodiscard]] bool synthesized() const { return !span.has_value(); }
};

/// Arena of nodes. Ids are stable for the life of the tree; detached nodes
/// stay allocated but are unreachable. Copying a Tree yields an independent
/// snapshot, which is how repairs roll back.
class Tree {
public:
    NodeId create(NodeKind kind, std::optional<SourceSpan> span = std::nullopt);

    [[nodiscard]] const Node& operator[](NodeId id) const { return nodes_.at(id.value); }
    [[nodiscard]] Node& at(NodeId id) { return nodes_.at(id.value); }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }

    /// Construction-time attach: moves `child` under `parent` without marking
    /// anything modified.
    void append_child(NodeId parent, NodeId child);
    /// Edit-time insert: detaches `child` from any previous parent and marks
    /// `parent` modified.
    void insert_child(NodeId parent, std::size_t index, NodeId child);
    /// Swap `old_child` for `replacement` at the same position (construction time).
    void replace_child(NodeId parent, NodeId old_child, NodeId replacement);
    void detach(NodeId child);

    [[nodiscard]] NodeId parent(NodeId id) const { return (*this)[id].parent; }
    [[nodiscard]] std::size_t index_in_parent(NodeId id) const;

    void annotate(NodeId id, Label label);
    void annotate(NodeId id, std::string_view label) { annotate(id, Label::of(label)); }
    [[nodiscard]] bool has_label(NodeId id, Label label) const;

    /// Sets `modified` on the node and the dirty bit on it and every ancestor.
    void mark_modified(NodeId id);
    [[nodiscard]] bool subtree_dirty(NodeId id) const { return (*this)[id].dirty; }

    /// Nearest ancestor-or-self of the given kind.
    [[nodiscard]] NodeId enclosing(NodeId id, NodeKind kind) const;
    [[nodiscard]] bool is_ancestor(NodeId ancestor, NodeId node) const;

    /// Pre-order walk. The visitor returns false to skip a node's children.
    void walk(NodeId root, const std::function<bool(NodeId)>& visit) const;
    [[nodiscard]] std::vector<NodeId> preorder(NodeId root) const;

    /// Children of `id` with the given kind.
    [[nodiscard]] std::vector<NodeId> children_of_kind(NodeId id, NodeKind kind) const;

private:
    std::vector<Node> nodes_;
};

/// Structural equality that ignores spans, raw text and modification state:
/// kinds, values, quoting and children must agree.
bool structurally_equal(const Tree& a, NodeId na, const Tree& b, NodeId nb);

/// Checks span ordering and containment for every spanned node under `root`.
/// Returns a description of the first violation, if any.
std::optional<std::string> check_span_invariants(const Tree& tree, NodeId root);

/// Human-readable indented dump, for tests and `--dump-ast`.
std::string dump_tree(const Tree& tree, NodeId root);

}  // namespace dockslim
