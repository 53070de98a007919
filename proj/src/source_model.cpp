#include "dockslim/source_model.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace dockslim {

LineIndex::LineIndex(std::string_view text) : size_(text.size()) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            line_starts_.push_back(i + 1);
        }
    }
}

std::size_t LineIndex::line_of(std::size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    return static_cast<std::size_t>(it - line_starts_.begin());  // 1-based
}

SourceSpan LineIndex::span(std::size_t begin, std::size_t end) const {
    if (begin > end || end > size_) {
        throw InternalError("span [" + std::to_string(begin) + ", " + std::to_string(end) +
                            ") outside text of size " + std::to_string(size_));
    }
    SourceSpan s;
    s.start_offset = begin;
    s.end_offset = end;
    const auto sl = line_of(begin);
    const auto el = line_of(end);
    s.start_line = static_cast<std::uint32_t>(sl);
    s.start_col = static_cast<std::uint32_t>(begin - line_starts_[sl - 1] + 1);
    s.end_line = static_cast<std::uint32_t>(el);
    s.end_col = static_cast<std::uint32_t>(end - line_starts_[el - 1] + 1);
    return s;
}

std::string span_text(std::string_view source, const SourceSpan& span) {
    if (span.start_offset > span.end_offset || span.end_offset > source.size()) {
        throw InternalError("span [" + std::to_string(span.start_offset) + ", " +
                            std::to_string(span.end_offset) + ") outside source of size " +
                            std::to_string(source.size()));
    }
    return std::string(source.substr(span.start_offset, span.size()));
}

namespace {

constexpr std::array<std::pair<NodeKind, std::string_view>, 41> kKindNames{{
    {NodeKind::DockerFile, "DOCKER-FILE"},
    {NodeKind::DockerFrom, "DOCKER-FROM"},
    {NodeKind::DockerRun, "DOCKER-RUN"},
    {NodeKind::DockerCopy, "DOCKER-COPY"},
    {NodeKind::DockerAdd, "DOCKER-ADD"},
    {NodeKind::DockerEnv, "DOCKER-ENV"},
    {NodeKind::DockerArg, "DOCKER-ARG"},
    {NodeKind::DockerWorkdir, "DOCKER-WORKDIR"},
    {NodeKind::DockerExpose, "DOCKER-EXPOSE"},
    {NodeKind::DockerEntrypoint, "DOCKER-ENTRYPOINT"},
    {NodeKind::DockerCmd, "DOCKER-CMD"},
    {NodeKind::DockerLabel, "DOCKER-LABEL"},
    {NodeKind::DockerUser, "DOCKER-USER"},
    {NodeKind::DockerVolume, "DOCKER-VOLUME"},
    {NodeKind::DockerShell, "DOCKER-SHELL"},
    {NodeKind::DockerHealthcheck, "DOCKER-HEALTHCHECK"},
    {NodeKind::DockerOnbuild, "DOCKER-ONBUILD"},
    {NodeKind::DockerStopsignal, "DOCKER-STOPSIGNAL"},
    {NodeKind::DockerMaintainer, "DOCKER-MAINTAINER"},
    {NodeKind::DockerComment, "DOCKER-COMMENT"},
    {NodeKind::DockerUnknown, "DOCKER-UNKNOWN"},
    {NodeKind::DockerKeyword, "DOCKER-KEYWORD"},
    {NodeKind::DockerFlag, "DOCKER-FLAG"},
    {NodeKind::DockerArgs, "DOCKER-ARGS"},
    {NodeKind::DockerExecArray, "DOCKER-EXEC-ARRAY"},
    {NodeKind::DockerString, "DOCKER-STRING"},
    {NodeKind::DockerHeredoc, "DOCKER-HEREDOC"},
    {NodeKind::ShScript, "SC-SCRIPT"},
    {NodeKind::ShSimpleCommand, "SC-SIMPLE-COMMAND"},
    {NodeKind::ShPipeline, "SC-PIPELINE"},
    {NodeKind::ShAnd, "SC-AND"},
    {NodeKind::ShOr, "SC-OR"},
    {NodeKind::ShSeq, "SC-SEQ"},
    {NodeKind::ShSubshell, "SC-SUBSHELL"},
    {NodeKind::ShCommandSubstitution, "SC-COMMAND-SUBSTITUTION"},
    {NodeKind::ShCompound, "SC-COMPOUND"},
    {NodeKind::ShWord, "SC-WORD"},
    {NodeKind::ShVariable, "SC-VARIABLE"},
    {NodeKind::ShAssignment, "SC-ASSIGNMENT"},
    {NodeKind::ShRedirection, "SC-REDIRECTION"},
    {NodeKind::ShUnparsed, "SC-UNPARSED"},
}};

}  // namespace

std::string_view kind_name(NodeKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

std::optional<NodeKind> kind_from_name(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

bool is_docker_kind(NodeKind kind) { return kind < NodeKind::ShScript; }

bool is_instruction_kind(NodeKind kind) {
    return kind >= NodeKind::DockerFrom && kind <= NodeKind::DockerUnknown &&
           kind != NodeKind::DockerComment;
}

std::string_view quote_style_name(QuoteStyle style) {
    switch (style) {
        case QuoteStyle::Bare: return "bare";
        case QuoteStyle::Single: return "single";
        case QuoteStyle::Double: return "double";
        case QuoteStyle::Mixed: return "mixed";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Labels

namespace {

struct LabelRegistry {
    std::vector<std::string_view> names;
    std::unordered_map<std::string_view, std::uint16_t> index;

    LabelRegistry() {
        names = label_vocabulary();
        for (std::size_t i = 0; i < names.size(); ++i) {
            index.emplace(names[i], static_cast<std::uint16_t>(i));
        }
    }

    static const LabelRegistry& get() {
        static const LabelRegistry registry;
        return registry;
    }
};

}  // namespace

std::optional<Label> Label::find(std::string_view name) {
    const auto& reg = LabelRegistry::get();
    auto it = reg.index.find(name);
    if (it == reg.index.end()) {
        return std::nullopt;
    }
    return Label(it->second);
}

Label Label::of(std::string_view name) {
    if (auto l = find(name)) {
        return *l;
    }
    throw ConfigError("unknown annotation label '" + std::string(name) + "'");
}

std::string_view Label::name() const { return LabelRegistry::get().names.at(index_); }

// ---------------------------------------------------------------------------
// Tree

NodeId Tree::create(NodeKind kind, std::optional<SourceSpan> span) {
    Node n;
    n.kind = kind;
    n.span = span;
    if (!span) {
        n.modified = true;
        n.dirty = true;
    }
    nodes_.push_back(std::move(n));
    return NodeId{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

void Tree::detach(NodeId child) {
    auto& c = at(child);
    if (!c.parent) {
        return;
    }
    auto& siblings = at(c.parent).children;
    siblings.erase(std::remove(siblings.begin(), siblings.end(), child), siblings.end());
    c.parent = NodeId::none();
}

void Tree::append_child(NodeId parent, NodeId child) {
    if (parent == child || is_ancestor(child, parent)) {
        throw InternalError("attaching a node under its own subtree");
    }
    detach(child);
    at(parent).children.push_back(child);
    at(child).parent = parent;
}

void Tree::insert_child(NodeId parent, std::size_t index, NodeId child) {
    if (parent == child || is_ancestor(child, parent)) {
        throw InternalError("attaching a node under its own subtree");
    }
    detach(child);
    auto& kids = at(parent).children;
    index = std::min(index, kids.size());
    kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(index), child);
    at(child).parent = parent;
    mark_modified(parent);
    if (at(child).dirty) {
        mark_modified(child);
    }
}

void Tree::replace_child(NodeId parent, NodeId old_child, NodeId replacement) {
    detach(replacement);
    auto& kids = at(parent).children;
    auto it = std::find(kids.begin(), kids.end(), old_child);
    if (it == kids.end()) {
        throw InternalError("replace_child: not a child");
    }
    *it = replacement;
    at(replacement).parent = parent;
    at(old_child).parent = NodeId::none();
}

std::size_t Tree::index_in_parent(NodeId id) const {
    const auto p = parent(id);
    if (!p) {
        return 0;
    }
    const auto& kids = (*this)[p].children;
    return static_cast<std::size_t>(std::find(kids.begin(), kids.end(), id) - kids.begin());
}

void Tree::annotate(NodeId id, Label label) {
    auto& ann = at(id).annotations;
    auto it = std::lower_bound(ann.begin(), ann.end(), label);
    if (it == ann.end() || *it != label) {
        ann.insert(it, label);
    }
}

bool Tree::has_label(NodeId id, Label label) const {
    const auto& ann = (*this)[id].annotations;
    return std::binary_search(ann.begin(), ann.end(), label);
}

void Tree::mark_modified(NodeId id) {
    at(id).modified = true;
    for (NodeId cur = id; cur; cur = parent(cur)) {
        at(cur).dirty = true;
    }
}

NodeId Tree::enclosing(NodeId id, NodeKind kind) const {
    for (NodeId cur = id; cur; cur = parent(cur)) {
        if ((*this)[cur].kind == kind) {
            return cur;
        }
    }
    return NodeId::none();
}

bool Tree::is_ancestor(NodeId ancestor, NodeId node) const {
    for (NodeId cur = parent(node); cur; cur = parent(cur)) {
        if (cur == ancestor) {
            return true;
        }
    }
    return false;
}

void Tree::walk(NodeId root, const std::function<bool(NodeId)>& visit) const {
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        if (!visit(id)) {
            continue;
        }
        const auto& kids = (*this)[id].children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
            stack.push_back(*it);
        }
    }
}

std::vector<NodeId> Tree::preorder(NodeId root) const {
    std::vector<NodeId> out;
    walk(root, [&](NodeId id) {
        out.push_back(id);
        return true;
    });
    return out;
}

std::vector<NodeId> Tree::children_of_kind(NodeId id, NodeKind kind) const {
    std::vector<NodeId> out;
    for (NodeId c : (*this)[id].children) {
        if ((*this)[c].kind == kind) {
            out.push_back(c);
        }
    }
    return out;
}

bool structurally_equal(const Tree& a, NodeId na, const Tree& b, NodeId nb) {
    const Node& x = a[na];
    const Node& y = b[nb];
    if (x.kind != y.kind || x.value != y.value || x.quote != y.quote ||
        x.children.size() != y.children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.children.size(); ++i) {
        if (!structurally_equal(a, x.children[i], b, y.children[i])) {
            return false;
        }
    }
    return true;
}

std::optional<std::string> check_span_invariants(const Tree& tree, NodeId root) {
    std::optional<std::string> problem;
    tree.walk(root, [&](NodeId id) {
        if (problem) {
            return false;
        }
        const Node& n = tree[id];
        if (!n.span) {
            return true;
        }
        if (n.span->start_offset > n.span->end_offset) {
            problem = std::string(kind_name(n.kind)) + " has an inverted span";
            return false;
        }
        std::size_t cursor = n.span->start_offset;
        for (NodeId c : n.children) {
            const Node& child = tree[c];
            if (!child.span) {
                continue;
            }
            if (!n.span->contains(*child.span)) {
                problem = std::string(kind_name(child.kind)) + " at " +
                          std::to_string(child.span->start_offset) + " escapes its parent " +
                          std::string(kind_name(n.kind));
                return false;
            }
            if (child.span->start_offset < cursor) {
                problem = std::string(kind_name(child.kind)) + " at " +
                          std::to_string(child.span->start_offset) + " overlaps a previous sibling";
                return false;
            }
            cursor = child.span->end_offset;
        }
        return true;
    });
    return problem;
}

std::string dump_tree(const Tree& tree, NodeId root) {
    std::ostringstream os;
    std::function<void(NodeId, int)> rec = [&](NodeId id, int depth) {
        const Node& n = tree[id];
        os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << kind_name(n.kind);
        if (!n.value.empty()) {
            os << " '" << n.value << "'";
        }
        if (n.kind == NodeKind::ShWord && n.quote != QuoteStyle::Bare) {
            os << " (" << quote_style_name(n.quote) << ")";
        }
        if (n.span) {
            os << " @" << n.span->start_line << ':' << n.span->start_col;
        } else {
            os << " @new";
        }
        for (Label l : n.annotations) {
            os << " [" << l.name() << ']';
        }
        os << '\n';
        for (NodeId c : n.children) {
            rec(c, depth + 1);
        }
    };
    rec(root, 0);
    return os.str();
}

}  // namespace dockslim
