#include "dockslim/enrichment.hpp"

#include <algorithm>
#include <cctype>

namespace dockslim {

namespace {

bool is_assignment_word(std::string_view w) {
    if (w.empty() || !(std::isalpha(static_cast<unsigned char>(w.front())) != 0 || w.front() == '_')) {
        return false;
    }
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i] == '=') {
            return true;
        }
        if (!(std::isalnum(static_cast<unsigned char>(w[i])) != 0 || w[i] == '_')) {
            return false;
        }
    }
    return false;
}

std::string_view basename(std::string_view w) {
    if (!w.empty() && w.front() == '/') {
        return w.substr(w.rfind('/') + 1);
    }
    return w;
}

bool is_python(std::string_view w) {
    if (w.substr(0, 6) != "python") {
        return false;
    }
    return std::all_of(w.begin() + 6, w.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.';
    });
}

bool is_one_of(std::string_view w, std::initializer_list<std::string_view> options) {
    return std::find(options.begin(), options.end(), w) != options.end();
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

const std::vector<std::string_view>& shells() {
    static const std::vector<std::string_view> s = {"sh", "bash", "/bin/sh", "/bin/bash"};
    return s;
}

}  // namespace

WrapperResolution resolve_wrapper_words(const std::vector<std::string>& words) {
    static const Label sudo = Label::of("SC-SUDO");
    static const Label env = Label::of("SC-ENV");
    static const Label command = Label::of("SC-COMMAND");
    static const Label nice = Label::of("SC-NICE");
    static const Label time = Label::of("SC-TIME");
    static const Label nohup = Label::of("SC-NOHUP");
    static const Label exec = Label::of("SC-EXEC");
    static const Label python = Label::of("SC-PYTHON");

    WrapperResolution res;
    const std::size_t n = words.size();
    std::size_t i = 0;
    auto finish = [&]() -> WrapperResolution& {
        if (i < n && !is_assignment_word(words[i])) {
            res.effective = i;
        }
        return res;
    };
    // Every branch advances i, so the loop is bounded by the word count.
    while (i < n) {
        const std::string_view w = basename(words[i]);
        if (w == "sudo") {
            res.wrappers.emplace_back(i, sudo);
            ++i;
            while (i < n) {
                const std::string_view a = words[i];
                if (a == "--") {
                    ++i;
                    break;
                }
                if (a.size() < 2 || a.front() != '-') {
                    break;
                }
                if (is_one_of(a, {"-u", "-g", "-C", "-h", "-p", "-r", "-t", "-U", "-D", "--user",
                                  "--group", "--close-from", "--host", "--prompt", "--role",
                                  "--type", "--other-user", "--chdir"})) {
                    i += 2;
                } else {
                    ++i;
                }
            }
            while (i < n && is_assignment_word(words[i])) {
                ++i;
            }
            continue;
        }
        if (w == "env") {
            res.wrappers.emplace_back(i, env);
            ++i;
            while (i < n) {
                const std::string_view a = words[i];
                if (a == "--") {
                    ++i;
                    break;
                }
                if (is_one_of(a, {"-S", "--split-string"}) || starts_with(a, "--split-string=")) {
                    return res;  // payload is a single string; not modelled
                }
                if (is_one_of(a, {"-u", "--unset", "-C", "--chdir"})) {
                    i += 2;
                } else if ((a.size() >= 1 && a.front() == '-') || is_assignment_word(a)) {
                    ++i;
                } else {
                    break;
                }
            }
            continue;
        }
        if (w == "command") {
            if (i + 1 < n && is_one_of(words[i + 1], {"-v", "-V"})) {
                return res;  // lookup, not execution
            }
            res.wrappers.emplace_back(i, command);
            ++i;
            while (i < n && is_one_of(words[i], {"-p", "--"})) {
                ++i;
            }
            continue;
        }
        if (w == "nice") {
            res.wrappers.emplace_back(i, nice);
            ++i;
            if (i < n && is_one_of(words[i], {"-n", "--adjustment"})) {
                i += 2;
            } else if (i < n && words[i].size() > 1 && words[i].front() == '-') {
                ++i;
            }
            continue;
        }
        if (w == "time") {
            res.wrappers.emplace_back(i, time);
            ++i;
            while (i < n && words[i].size() > 1 && words[i].front() == '-') {
                i += is_one_of(words[i], {"-f", "-o", "--format", "--output"}) ? 2 : 1;
            }
            continue;
        }
        if (w == "nohup") {
            res.wrappers.emplace_back(i, nohup);
            ++i;
            if (i < n && words[i] == "--") {
                ++i;
            }
            continue;
        }
        if (w == "exec") {
            res.wrappers.emplace_back(i, exec);
            ++i;
            while (i < n && words[i].size() > 1 && words[i].front() == '-') {
                i += words[i] == "-a" ? 2 : 1;
            }
            continue;
        }
        if (is_python(w)) {
            std::size_t j = i + 1;
            while (j < n && words[j].size() > 1 && words[j].front() == '-' && words[j] != "-m" &&
                   words[j] != "-c") {
                ++j;
            }
            if (j + 1 < n && words[j] == "-m") {
                res.wrappers.emplace_back(i, python);
                i = j + 1;
                continue;
            }
        }
        break;
    }
    return finish();
}

namespace {

std::vector<NodeId> word_children(const Tree& tree, NodeId cmd) {
    return tree.children_of_kind(cmd, NodeKind::ShWord);
}

std::vector<std::string> values_of(const Tree& tree, const std::vector<NodeId>& ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (NodeId id : ids) {
        out.push_back(tree[id].value);
    }
    return out;
}

// Applies `-xzf`-style clusters; returns true when the next word was
// consumed as a flag value.
bool apply_cluster(Tree& tree, const CommandSchema& schema, NodeId node, std::string_view cluster,
                   NodeId next) {
    for (std::size_t k = 1; k < cluster.size(); ++k) {
        const FlagSpec* spec = schema.flag(std::string{'-', cluster[k]});
        if (spec == nullptr) {
            continue;
        }
        tree.annotate(node, spec->label);
        if (spec->takes_value) {
            if (k + 1 < cluster.size()) {
                return false;  // value glued to the flag
            }
            if (next) {
                if (spec->value_label) {
                    tree.annotate(next, *spec->value_label);
                }
                return true;
            }
            return false;
        }
    }
    return false;
}

void enrich_command(Tree& tree, NodeId cmd) {
    static const Label redirect_target = Label::of("SC-REDIRECT-TARGET");
    // Re-enrichment after a repair must not keep roles from the old word list.
    for (NodeId c : tree[cmd].children) {
        tree.at(c).annotations.clear();
        if (tree[c].kind == NodeKind::ShRedirection && !tree[c].children.empty()) {
            tree.at(tree[c].children.front()).annotations.clear();
        }
    }
    for (NodeId r : tree.children_of_kind(cmd, NodeKind::ShRedirection)) {
        const std::string& op = tree[r].value;
        const bool output = op.find('>') != std::string::npos && op.back() != '&';
        if (output && !tree[r].children.empty()) {
            tree.annotate(tree[r].children.front(), redirect_target);
        }
    }

    const auto words = word_children(tree, cmd);
    if (words.empty()) {
        return;
    }
    const auto values = values_of(tree, words);
    const auto res = resolve_wrapper_words(values);
    for (const auto& [idx, label] : res.wrappers) {
        tree.annotate(words[idx], label);
    }
    if (!res.effective) {
        return;
    }
    const std::size_t e = *res.effective;
    const CommandSchema* schema = SchemaRegistry::builtin().lookup(values[e]);
    if (schema == nullptr) {
        return;
    }
    tree.annotate(words[e], schema->label);
    if (schema->annotate_only) {
        return;
    }

    const std::size_t n = words.size();
    bool end_of_flags = false;
    bool sub_decided = schema->subcommands.empty();
    std::optional<Label> positional = sub_decided ? schema->positional_label : std::nullopt;
    for (std::size_t j = e + 1; j < n; ++j) {
        const std::string_view v = values[j];
        const NodeId node = words[j];
        const NodeId next = j + 1 < n ? words[j + 1] : NodeId::none();
        if (j == e + 1 && schema->bundled_first_arg && !v.empty() && v.front() != '-' &&
            std::all_of(v.begin(), v.end(),
                        [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; })) {
            if (apply_cluster(tree, *schema, node, "-" + std::string(v), next)) {
                ++j;
            }
            continue;
        }
        if (!end_of_flags && v == "--") {
            end_of_flags = true;
            continue;
        }
        if (!end_of_flags && v.size() > 1 && v.front() == '-') {
            if (starts_with(v, "--")) {
                const std::size_t eq = v.find('=');
                const FlagSpec* spec = schema->flag(v.substr(0, eq));
                if (spec != nullptr) {
                    tree.annotate(node, spec->label);
                    if (spec->takes_value && eq == std::string_view::npos && next) {
                        if (spec->value_label) {
                            tree.annotate(next, *spec->value_label);
                        }
                        ++j;
                    }
                }
                continue;
            }
            if (const FlagSpec* spec = schema->flag(v)) {
                tree.annotate(node, spec->label);
                if (spec->takes_value && next) {
                    if (spec->value_label) {
                        tree.annotate(next, *spec->value_label);
                    }
                    ++j;
                }
                continue;
            }
            if (apply_cluster(tree, *schema, node, v, next)) {
                ++j;
            }
            continue;
        }
        if (!sub_decided) {
            sub_decided = true;
            const SubcommandSpec* best = nullptr;
            for (const auto& s : schema->subcommands) {
                if (j + s.path.size() > n || (best != nullptr && s.path.size() <= best->path.size())) {
                    continue;
                }
                bool ok = true;
                for (std::size_t k = 0; k < s.path.size() && ok; ++k) {
                    ok = values[j + k] == s.path[k];
                }
                if (ok) {
                    best = &s;
                }
            }
            if (best != nullptr) {
                j += best->path.size() - 1;
                tree.annotate(words[j], best->label);
                positional = best->positional_label;
            }
            continue;
        }
        if (positional) {
            tree.annotate(node, *positional);
        }
    }
    if (!sub_decided && schema->default_subcommand_label) {
        tree.annotate(words[e], *schema->default_subcommand_label);
    }
}

void graft_heredoc(UnifiedAst& ast, NodeId inst, const LineIndex& lines) {
    Tree& t = ast.tree;
    const auto heredocs = t.children_of_kind(inst, NodeKind::DockerHeredoc);
    const auto args = t.children_of_kind(inst, NodeKind::DockerArgs);
    bool marker_only = false;
    if (heredocs.size() == 1 && args.size() == 1) {
        std::string_view a = t[args.front()].text;
        while (!a.empty() && std::isdigit(static_cast<unsigned char>(a.front())) != 0) {
            a.remove_prefix(1);
        }
        marker_only = starts_with(a, "<<") &&
                      std::none_of(a.begin(), a.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
    }
    if (marker_only) {
        const NodeId h = heredocs.front();
        const SourceSpan span = *t[h].span;
        const std::string_view body = std::string_view(ast.source).substr(span.start_offset, span.size());
        std::size_t body_end = span.end_offset;
        const std::size_t last_nl = body.rfind('\n');
        std::string_view last = last_nl == std::string_view::npos ? body : body.substr(last_nl + 1);
        while (!last.empty() && last.front() == '\t') {
            last.remove_prefix(1);
        }
        if (!last.empty() && last.back() == '\r') {
            last.remove_suffix(1);
        }
        if (last == t[h].value) {
            body_end = last_nl == std::string_view::npos ? span.start_offset
                                                         : span.start_offset + last_nl + 1;
        }
        ShellParseOptions opts;
        opts.docker_continuations = false;
        const NodeId script = parse_shell_region(t, ast.source, lines, span.start_offset, body_end,
                                                 opts, ast.warnings);
        t.append_child(h, script);
        return;
    }
    for (NodeId a : args) {
        const SourceSpan span = *t[a].span;
        const NodeId script = t.create(NodeKind::ShScript, span);
        const NodeId u = t.create(NodeKind::ShUnparsed, span);
        t.at(u).text = t[a].text;
        t.append_child(script, u);
        t.replace_child(inst, a, script);
        ast.warnings.push_back({"heredoc payload is not analysed", span});
    }
}

void graft_exec(UnifiedAst& ast, NodeId inst, const LineIndex& lines) {
    Tree& t = ast.tree;
    const auto arrays = t.children_of_kind(inst, NodeKind::DockerExecArray);
    if (arrays.empty()) {
        return;
    }
    const NodeId arr = arrays.front();
    const std::vector<NodeId> strings = t[arr].children;
    if (strings.empty()) {
        return;
    }
    auto inner = [&](NodeId s) {
        const SourceSpan sp = *t[s].span;
        return std::pair{sp.start_offset + 1, sp.end_offset - 1};
    };
    const auto& sh = shells();
    if (strings.size() >= 3 &&
        std::find(sh.begin(), sh.end(), t[strings[0]].value) != sh.end() &&
        t[strings[1]].value == "-c") {
        const NodeId payload = strings[2];
        const auto [b, e] = inner(payload);
        if (ast.source.substr(b, e - b) == t[payload].value) {
            ShellParseOptions opts;
            opts.continuation = ast.escape;
            const NodeId script = parse_shell_region(t, ast.source, lines, b, e, opts, ast.warnings);
            t.append_child(payload, script);
        } else {
            const NodeId script = t.create(NodeKind::ShScript, lines.span(b, e));
            const NodeId u = t.create(NodeKind::ShUnparsed, lines.span(b, e));
            t.at(u).text = ast.source.substr(b, e - b);
            t.append_child(script, u);
            t.append_child(payload, script);
            ast.warnings.push_back(
                {"escaped characters in exec-form shell payload; not analysed", t[payload].span});
        }
        return;
    }
    const NodeId cmd =
        t.create(NodeKind::ShSimpleCommand, lines.span(inner(strings.front()).first,
                                                       inner(strings.back()).second));
    t.at(cmd).set(NodeFlag::ExecArray);
    for (NodeId s : strings) {
        const auto [b, e] = inner(s);
        const NodeId w = t.create(NodeKind::ShWord, lines.span(b, e));
        t.at(w).text = ast.source.substr(b, e - b);
        t.at(w).value = t[s].value;
        t.append_child(cmd, w);
        t.detach(s);
    }
    t.append_child(arr, cmd);
}

}  // namespace

std::optional<std::size_t> resolve_wrappers(const Tree& tree, NodeId cmd) {
    return resolve_wrapper_words(values_of(tree, word_children(tree, cmd))).effective;
}

UnifiedAst build_unified_ast(DockerfileAst ast) {
    if (ast.unified) {
        return ast;
    }
    const LineIndex lines(ast.source);
    Tree& t = ast.tree;
    const std::vector<NodeId> top = t[ast.root].children;
    for (NodeId inst : top) {
        if (t[inst].kind != NodeKind::DockerRun) {
            continue;
        }
        if (t[inst].has(NodeFlag::Heredoc)) {
            graft_heredoc(ast, inst, lines);
            continue;
        }
        if (t[inst].has(NodeFlag::ExecForm)) {
            graft_exec(ast, inst, lines);
            continue;
        }
        for (NodeId args : t.children_of_kind(inst, NodeKind::DockerArgs)) {
            const SourceSpan span = *t[args].span;
            ShellParseOptions opts;
            opts.continuation = ast.escape;
            const NodeId script = parse_shell_region(t, ast.source, lines, span.start_offset,
                                                     span.end_offset, opts, ast.warnings);
            t.replace_child(inst, args, script);
        }
    }
    ast.unified = true;
    return ast;
}

void enrich_subtree(Tree& tree, NodeId root) {
    tree.walk(root, [&](NodeId id) {
        const NodeKind k = tree[id].kind;
        if (k == NodeKind::ShUnparsed) {
            return false;
        }
        if (k == NodeKind::ShSimpleCommand) {
            enrich_command(tree, id);
        }
        return true;
    });
}

void enrich(UnifiedAst& ast) { enrich_subtree(ast.tree, ast.root); }

UnifiedAst analyze_source(std::string text, std::string path) {
    UnifiedAst ast = build_unified_ast(parse_dockerfile(std::move(text), std::move(path)));
    enrich(ast);
    return ast;
}

SchemaCoverage schema_coverage(const UnifiedAst& ast) {
    SchemaCoverage cov;
    const Tree& t = ast.tree;
    t.walk(ast.root, [&](NodeId id) {
        if (t[id].kind == NodeKind::ShUnparsed) {
            return false;
        }
        if (t[id].kind != NodeKind::ShSimpleCommand) {
            return true;
        }
        const auto words = word_children(t, id);
        const auto eff = resolve_wrapper_words(values_of(t, words)).effective;
        if (!eff) {
            return true;
        }
        ++cov.simple_commands;
        if (!t[words[*eff]].annotations.empty()) {
            ++cov.labelled;
        }
        return true;
    });
    return cov;
}

}  // namespace dockslim
