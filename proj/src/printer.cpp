#include "dockslim/printer.hpp"

#include <optional>
#include <utility>

#include <json.hpp>

namespace dockslim {

namespace {

bool is_token(NodeKind k) {
    switch (k) {
        case NodeKind::ShWord:
        case NodeKind::ShVariable:
        case NodeKind::ShUnparsed:
        case NodeKind::DockerKeyword:
        case NodeKind::DockerFlag:
        case NodeKind::DockerArgs:
        case NodeKind::DockerComment:
            return true;
        default:
            return false;
    }
}

std::string json_escape(std::string_view s) {
    std::string dumped = nlohmann::json(std::string(s)).dump();
    return dumped.substr(1, dumped.size() - 2);
}

std::string join_children(const Tree& tree, NodeId id, std::string_view sep) {
    std::string out;
    bool first = true;
    for (NodeId c : tree[id].children) {
        if (!first) {
            out += sep;
        }
        out += render_full(tree, c);
        first = false;
    }
    return out;
}

using Extent = std::optional<std::pair<std::size_t, std::size_t>>;

Extent extent_of(const Tree& tree, NodeId id) {
    const Node& n = tree[id];
    if (n.span) {
        return std::pair{n.span->start_offset, n.span->end_offset};
    }
    Extent out;
    for (NodeId c : n.children) {
        if (auto e = extent_of(tree, c)) {
            if (!out) {
                out = e;
            } else {
                out->first = std::min(out->first, e->first);
                out->second = std::max(out->second, e->second);
            }
        }
    }
    return out;
}

// First and last physical lines of a multi-line gap; drops comment and
// blank lines that sat between two chain elements.
std::string normalize_gap(std::string_view gap) {
    const std::size_t first_nl = gap.find('\n');
    if (first_nl == std::string_view::npos) {
        return std::string(gap);
    }
    const std::size_t last_nl = gap.rfind('\n');
    return std::string(gap.substr(0, first_nl + 1)) + std::string(gap.substr(last_nl + 1));
}

class MinimalPrinter {
public:
    MinimalPrinter(const Tree& tree, std::string_view src) : t_(tree), src_(src) {}

    void emit(NodeId id, std::string& out, bool json) const {
        const Node& n = t_[id];
        if (n.span && !n.dirty) {
            out += slice(n.span->start_offset, n.span->end_offset);
            return;
        }
        const Extent ext = extent_of(t_, id);
        if (!ext || (is_token(n.kind) && n.modified)) {
            out += escape(render_full(t_, id), json);
            return;
        }
        const bool inner_json = json || n.kind == NodeKind::DockerString;
        std::size_t cursor = ext->first;
        const auto& kids = n.children;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            const NodeId c = kids[i];
            if (const Extent ce = extent_of(t_, c)) {
                out += slice(cursor, ce->first);
                emit(c, out, inner_json);
                cursor = ce->second;
                continue;
            }
            std::string text;
            if (n.kind == NodeKind::ShSimpleCommand && n.has(NodeFlag::ExecArray)) {
                text = json_escape(t_[c].value);
            } else {
                text = escape(render_full(t_, c), inner_json);
            }
            const std::string sep = separator(id, i);
            if (i == 0) {
                out += text + sep;
            } else {
                out += sep + text;
            }
        }
        out += slice(cursor, ext->second);
    }

private:
    const Tree& t_;
    std::string_view src_;

    [[nodiscard]] std::string_view slice(std::size_t b, std::size_t e) const {
        if (b > e || e > src_.size()) {
            throw InternalError("printer: span outside the original text");
        }
        return src_.substr(b, e - b);
    }

    static std::string escape(std::string s, bool json) { return json ? json_escape(s) : s; }

    [[nodiscard]] std::string separator(NodeId parent, std::size_t index) const {
        const Node& p = t_[parent];
        switch (p.kind) {
            case NodeKind::ShAnd: return and_separator(parent, index);
            case NodeKind::ShOr: return " || ";
            case NodeKind::ShPipeline: return " | ";
            case NodeKind::ShSeq: return "; ";
            case NodeKind::ShScript: return "\n";
            case NodeKind::ShSimpleCommand:
                return p.has(NodeFlag::ExecArray) ? "\", \"" : " ";
            default: return " ";
        }
    }

    std::string and_separator(NodeId parent, std::size_t index) const {
        const auto& kids = t_[parent].children;
        Extent prev;
        Extent next;
        for (std::size_t i = index; i-- > 0;) {
            if ((prev = extent_of(t_, kids[i]))) {
                break;
            }
        }
        for (std::size_t i = index + 1; i < kids.size(); ++i) {
            if ((next = extent_of(t_, kids[i]))) {
                break;
            }
        }
        if (prev && next) {
            const std::string_view gap = slice(prev->second, next->first);
            if (gap.find("&&") != std::string_view::npos) {
                return normalize_gap(gap);
            }
            return " && ";
        }
        // Appending or prepending: follow the chain's dominant layout.
        std::vector<std::string_view> gaps;
        Extent last;
        for (NodeId c : kids) {
            const Extent e = extent_of(t_, c);
            if (!e) {
                continue;
            }
            if (last) {
                gaps.push_back(slice(last->second, e->first));
            }
            last = e;
        }
        std::size_t continued = 0;
        std::string_view last_continued;
        for (auto g : gaps) {
            if (g.find('\n') != std::string_view::npos && g.find("&&") != std::string_view::npos) {
                ++continued;
                last_continued = g;
            }
        }
        if (!gaps.empty() && continued * 2 >= gaps.size()) {
            return normalize_gap(last_continued);
        }
        return " && ";
    }
};

}  // namespace

std::string quote_word(std::string_view value) {
    if (value.empty()) {
        return "''";
    }
    static constexpr std::string_view kMeta = " \t\n|&;<>()$`\\\"'#";
    if (value.find_first_of(kMeta) == std::string_view::npos) {
        return std::string(value);
    }
    std::string out = "'";
    for (char c : value) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    out += '\'';
    return out;
}

std::string render_full(const Tree& tree, NodeId id) {
    const Node& n = tree[id];
    switch (n.kind) {
        case NodeKind::ShWord:
            return n.text.empty() ? quote_word(n.value) : n.text;
        case NodeKind::ShVariable:
            return n.text.empty() ? "$" + n.value : n.text;
        case NodeKind::ShAssignment: {
            std::string out = n.value + "=";
            if (!n.children.empty()) {
                out += render_full(tree, n.children.front());
            }
            return out;
        }
        case NodeKind::ShRedirection: {
            std::string out = n.value;
            if (!n.children.empty()) {
                out += " " + render_full(tree, n.children.front());
            }
            return out;
        }
        case NodeKind::ShSimpleCommand: return join_children(tree, id, " ");
        case NodeKind::ShAnd: return join_children(tree, id, " && ");
        case NodeKind::ShOr: return join_children(tree, id, " || ");
        case NodeKind::ShPipeline:
            return (n.value == "!" ? "! " : "") + join_children(tree, id, " | ");
        case NodeKind::ShSeq: return join_children(tree, id, "; ");
        case NodeKind::ShScript: return join_children(tree, id, "\n");
        case NodeKind::ShSubshell: return "( " + join_children(tree, id, "; ") + " )";
        case NodeKind::ShCommandSubstitution:
            if (!n.text.empty()) {
                return n.text;
            }
            if (n.has(NodeFlag::Backtick)) {
                return "`" + join_children(tree, id, "; ") + "`";
            }
            return "$(" + join_children(tree, id, "; ") + ")";
        default:
            break;
    }
    if (!n.text.empty()) {
        return n.text;
    }
    if (is_docker_kind(n.kind) && !n.children.empty()) {
        return join_children(tree, id, " ");
    }
    throw InternalError("no canonical rendering for " + std::string(kind_name(n.kind)));
}

std::string print_minimal(const Tree& tree, NodeId root, std::string_view original) {
    std::string out;
    out.reserve(original.size() + 64);
    MinimalPrinter(tree, original).emit(root, out, false);
    return out;
}

std::string print_minimal(const UnifiedAst& ast) {
    std::string out = print_minimal(ast.tree, ast.root, ast.source);
    return out;
}

std::string reconstruct_from_leaves(const Tree& tree, NodeId root, std::string_view original) {
    std::string out;
    std::function<void(NodeId)> rec = [&](NodeId id) {
        const Node& n = tree[id];
        if (is_token(n.kind)) {
            out += n.text;
            return;
        }
        if (n.children.empty()) {
            // empty containers such as `[]` own their bytes directly
            if (n.span) {
                out += original.substr(n.span->start_offset, n.span->size());
            } else {
                out += n.text;
            }
            return;
        }
        std::size_t cursor = n.span ? n.span->start_offset : 0;
        for (NodeId c : n.children) {
            const auto& cs = tree[c].span;
            if (!cs) {
                throw InternalError("reconstruct_from_leaves: unspanned node");
            }
            out += original.substr(cursor, cs->start_offset - cursor);
            rec(c);
            cursor = cs->end_offset;
        }
        if (n.span) {
            out += original.substr(cursor, n.span->end_offset - cursor);
        }
    };
    rec(root);
    return out;
}

}  // namespace dockslim
