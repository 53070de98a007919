#include "dockslim/rules.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "dockslim/enrichment.hpp"
#include "dockslim/printer.hpp"
#include "dockslim/shell_parser.hpp"

namespace dockslim {

namespace {

const std::array<RuleInfo, kRuleCount>& infos() {
    static const std::array<RuleInfo, kRuleCount> table{{
        {RuleId::PipUseNoCacheDir, "pipUseNoCacheDir", {"pipUseCacheDir"},
         "Clean cache after pip install.", RepairKind::AddFlag,
         "add --no-cache-dir after the install subcommand"},
        {RuleId::NpmCacheCleanUseForce, "npmCacheCleanUseForce", {},
         "Clean cache after npm install.", RepairKind::AddFlag,
         "add --force to npm cache clean"},
        {RuleId::MkdirUsrSrcThenRemove, "mkdirUsrSrcThenRemove", {},
         "Remove /usr/src/* after usage.", RepairKind::TrailingCleanup,
         "append rm -rf <path> to the RUN"},
        {RuleId::RmRecursiveAfterMktempD, "rmRecurisveAfterMktempD",
         {"rmRecursiveAfterMktempD"}, "Remove temporary folders.", RepairKind::TrailingCleanup,
         "append rm -rf <dir> to the RUN"},
        {RuleId::TarSomethingRmTheSomething, "tarSomethingRmTheSomething", {},
         "Remove tar files after decompression.", RepairKind::AdjacentCleanup,
         "insert rm <archive> right after the tar command"},
        {RuleId::ApkAddUseNoCache, "apkAddUseNoCache", {},
         "Use --no-cache flag with apk add.", RepairKind::AddFlag, "add --no-cache after add"},
        {RuleId::AptGetInstallUseNoRec, "aptGetInstallUseNoRec", {},
         "Use --no-install-recommends flag in apt-get install.", RepairKind::AddFlag,
         "add --no-install-recommends after install"},
        {RuleId::AptGetInstallThenRemoveAptLists, "aptGetInstallThenRemoveAptLists",
         {"aptGetInstallRmAptLists"}, "Remove /var/lib/apt/lists/* after apt-get install.",
         RepairKind::TrailingCleanup, "append rm -rf /var/lib/apt/lists/* to the RUN"},
        {RuleId::GpgVerifyAscRmAsc, "gpgVerifyAscRmAsc", {}, "Remove .asc file after usage.",
         RepairKind::AdjacentCleanup, "insert rm <file>.asc right after gpg --verify"},
        {RuleId::NpmCacheCleanAfterInstall, "npmCacheCleanAfterInstall", {},
         "Force to clean cache after npm install.", RepairKind::TrailingCleanup,
         "append npm cache clean --force to the RUN"},
        {RuleId::GemUpdateSystemRmRootGem, "gemUpdateSystemRmRootGem", {},
         "Clean cache after gem update --system.", RepairKind::TrailingCleanup,
         "append rm -rf /root/.gem to the RUN"},
        {RuleId::GemUpdateNoDocument, "gemUpdateNoDocument", {},
         "Add --no-document flag to the .gemrc config file.", RepairKind::PrependStatement,
         "insert echo 'gem: --no-document' >> /etc/gemrc before gem update"},
        {RuleId::YumInstallRmVarCacheYum, "yumInstallRmVarCacheYum", {},
         "Clean cache after yum install.", RepairKind::TrailingCleanup,
         "append rm -rf /var/cache/yum to the RUN"},
        {RuleId::YarnCacheCleanAfterInstall, "yarnCacheCleanAfterInstall", {},
         "Clean cache after yarn install.", RepairKind::TrailingCleanup,
         "append yarn cache clean to the RUN"},
    }};
    return table;
}

std::size_t idx(RuleId id) { return static_cast<std::size_t>(id); }

bool has_dollar(std::string_view v) { return v.find('$') != std::string_view::npos; }

NodePattern label(std::string_view name) { return NodePattern::of_label(name); }

NodePattern rm_recursive_covering(ValuePredicate covered) {
    return label("SC-RM-PATH").where(std::move(covered)).has(label("SC-RM-F-RECURSIVE"));
}

struct Sink {
    std::vector<Match>& hits;
    std::vector<DetectionNote>& notes;
    const Tree& tree;
    RuleId rule;

    void note(NodeId node, std::string message) const {
        const auto& span = tree[node].span;
        notes.push_back({rule, span.value_or(SourceSpan{}), std::move(message)});
    }
};

// Detection patterns, built once.
struct Patterns {
    NodePattern pip = label("SC-PIP-INSTALL").lacks(label("SC-PIP-F-NO-CACHE-DIR"));
    NodePattern npm_force = label("SC-NPM-CACHE-CLEAN").lacks(label("SC-NPM-F-FORCE"));
    NodePattern apk = label("SC-APK-ADD").lacks(label("SC-APK-F-NO-CACHE"));
    NodePattern apt_norec =
        label("SC-APT-GET-INSTALL").lacks(label("SC-APT-GET-F-NO-INSTALL-RECOMMENDS"));
    NodePattern apt_lists = label("SC-APT-GET-INSTALL")
                                .none_after(rm_recursive_covering(
                                    ValuePredicate::covers("/var/lib/apt/lists/*")));
    NodePattern npm_after = label("SC-NPM-INSTALL")
                                .none_after(label("SC-NPM-CACHE-CLEAN").has(label("SC-NPM-F-FORCE")));
    NodePattern gem_root = label("SC-GEM-UPDATE")
                               .has(label("SC-GEM-F-SYSTEM"))
                               .none_after(rm_recursive_covering(ValuePredicate::covers("/root/.gem")));
    NodePattern gem_nodoc = make_gem_nodoc();
    NodePattern yum = label("SC-YUM-INSTALL")
                          .none_after(rm_recursive_covering(
                              ValuePredicate::custom_fn([](std::string_view v, const Match*) {
                                  return path_covers(v, "/var/cache/yum") ||
                                         path_covers(v, "/var/cache/dnf");
                              })));
    NodePattern yarn = label("SC-YARN-INSTALL").none_after(label("SC-YARN-CACHE-CLEAN"));
    NodePattern tar = label("SC-TAR-ARCHIVE")
                          .as("archive")
                          .where(ValuePredicate::custom_fn([](std::string_view v, const Match*) {
                              return v != "-" && !v.empty();
                          }))
                          .has(label("SC-TAR-EXTRACT"));
    NodePattern gpg = label("SC-GPG-ARG")
                          .as("asc")
                          .where(ValuePredicate::suffix(".asc"))
                          .has(label("SC-GPG-F-VERIFY"));
    NodePattern mkdir = label("SC-MKDIR-PATH").as("path");
    NodePattern mktemp = label("SC-MKTEMP").has(label("SC-MKTEMP-D"));

    static NodePattern make_gem_nodoc() {
        auto writes_gemrc = [](std::string_view arg_label) {
            return label(arg_label)
                .where(ValuePredicate::custom_fn([](std::string_view v, const Match*) {
                    return v.find("gem:") != std::string_view::npos &&
                           v.find("--no-document") != std::string_view::npos;
                }))
                .has(label("SC-REDIRECT-TARGET").where(ValuePredicate::suffix("gemrc")));
        };
        return label("SC-GEM-UPDATE")
            .has(label("SC-GEM-F-SYSTEM"))
            .lacks(label("SC-GEM-F-NO-DOCUMENT"))
            .none_before(writes_gemrc("SC-ECHO-ARG"))
            .none_before(writes_gemrc("SC-PRINTF-ARG"))
            .scoped_to(NodeKind::DockerFile);
    }
};

const Patterns& patterns() {
    static const Patterns p;
    return p;
}

void run_simple(const UnifiedAst& ast, const NodePattern& p, const Sink& sink) {
    for (auto& m : find_all(ast.tree, ast.root, p)) {
        sink.hits.push_back(std::move(m));
    }
}

// Path rules: the anchor's own path must be literal; the cleanup
// check runs against the bound path.
void run_path_rule(const UnifiedAst& ast, const NodePattern& anchor,
                   const std::function<bool(std::string_view)>& interesting,
                   const NodePattern& cleanup, const Sink& sink, std::string_view what) {
    const Tree& t = ast.tree;
    for (auto& m : find_all(t, ast.root, anchor)) {
        const std::string& v = t[m.node].value;
        if (!interesting(v)) {
            continue;
        }
        if (has_dollar(v)) {
            sink.note(m.node, std::string(what) + " '" + v + "' contains a variable; not checked");
            continue;
        }
        if (!holds(t, Relation::After, cleanup, m, m.scope)) {
            sink.hits.push_back(std::move(m));
        }
    }
}

// Variable or directory that receives the output of a `mktemp -d`.
std::optional<std::string> mktemp_dir_ref(const Tree& t, NodeId stmt) {
    const NodeId sub = t.enclosing(stmt, NodeKind::ShCommandSubstitution);
    if (!sub) {
        return std::nullopt;
    }
    const NodeId word = t.enclosing(sub, NodeKind::ShWord);
    if (!word) {
        return std::nullopt;
    }
    const NodeId holder = t.parent(word);
    if (!holder) {
        return std::nullopt;
    }
    if (t[holder].kind == NodeKind::ShAssignment) {
        return "$" + t[holder].value;
    }
    if (t[holder].kind != NodeKind::ShSimpleCommand) {
        return std::nullopt;
    }
    const auto& kids = t[holder].children;
    if (kids.empty() || t[kids.front()].kind != NodeKind::ShWord) {
        return std::nullopt;
    }
    static const std::array<std::string_view, 5> kDeclarers{"export", "local", "declare",
                                                            "readonly", "typeset"};
    const std::string& cmd = t[kids.front()].value;
    if (std::find(kDeclarers.begin(), kDeclarers.end(), cmd) == kDeclarers.end()) {
        return std::nullopt;
    }
    const std::string& v = t[word].value;
    const std::size_t eq = v.find('=');
    if (eq == std::string::npos || eq == 0) {
        return std::nullopt;
    }
    const std::string name = v.substr(0, eq);
    const bool ident = std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
    });
    if (!ident) {
        return std::nullopt;
    }
    return "$" + name;
}

void detect_rule(const UnifiedAst& ast, RuleId rule, const Sink& sink) {
    const Patterns& p = patterns();
    const Tree& t = ast.tree;
    switch (rule) {
        case RuleId::PipUseNoCacheDir: return run_simple(ast, p.pip, sink);
        case RuleId::NpmCacheCleanUseForce: return run_simple(ast, p.npm_force, sink);
        case RuleId::ApkAddUseNoCache: return run_simple(ast, p.apk, sink);
        case RuleId::AptGetInstallUseNoRec: return run_simple(ast, p.apt_norec, sink);
        case RuleId::AptGetInstallThenRemoveAptLists: return run_simple(ast, p.apt_lists, sink);
        case RuleId::NpmCacheCleanAfterInstall: return run_simple(ast, p.npm_after, sink);
        case RuleId::GemUpdateSystemRmRootGem: return run_simple(ast, p.gem_root, sink);
        case RuleId::GemUpdateNoDocument: return run_simple(ast, p.gem_nodoc, sink);
        case RuleId::YumInstallRmVarCacheYum: return run_simple(ast, p.yum, sink);
        case RuleId::YarnCacheCleanAfterInstall: return run_simple(ast, p.yarn, sink);
        case RuleId::TarSomethingRmTheSomething:
            return run_path_rule(
                ast, p.tar, [](std::string_view) { return true; },
                label("SC-RM-PATH").where(ValuePredicate::covers_binding("archive")), sink,
                "tar archive");
        case RuleId::GpgVerifyAscRmAsc:
            return run_path_rule(
                ast, p.gpg, [](std::string_view) { return true; },
                label("SC-RM-PATH").where(ValuePredicate::covers_binding("asc")), sink,
                "signature file");
        case RuleId::MkdirUsrSrcThenRemove:
            return run_path_rule(
                ast, p.mkdir,
                [](std::string_view v) {
                    // `$VAR/...` could point anywhere, including /usr/src
                    const std::string n = normalize_path(v);
                    return n.rfind("/usr/src/", 0) == 0 || (!n.empty() && n.front() == '$');
                },
                rm_recursive_covering(ValuePredicate::covers_binding("path")), sink, "mkdir path");
        case RuleId::RmRecursiveAfterMktempD:
            for (auto& m : find_all(t, ast.root, p.mktemp)) {
                const auto ref = m.statement ? mktemp_dir_ref(t, m.statement) : std::nullopt;
                if (!ref) {
                    sink.note(m.node, "mktemp -d result is not stored in a variable; not checked");
                    continue;
                }
                const std::string target = *ref;
                const NodePattern cleanup = rm_recursive_covering(
                    ValuePredicate::covers(target));
                if (!holds(t, Relation::After, cleanup, m, m.scope)) {
                    m.bindings["dir"] = m.node;
                    sink.hits.push_back(std::move(m));
                }
            }
            return;
    }
}

struct Placement {
    NodeId script;
    NodeId top;
    NodeId element;  // top-level element holding the statement
    std::string reason;
};

Placement placement_for(const Tree& t, NodeId stmt) {
    Placement pl;
    if (!stmt) {
        pl.reason = "no-statement";
        return pl;
    }
    if (t[stmt].has(NodeFlag::ExecArray)) {
        pl.reason = "exec-form";
        return pl;
    }
    pl.script = t.enclosing(stmt, NodeKind::ShScript);
    if (!pl.script || t[pl.script].children.size() != 1) {
        pl.reason = "unsafe-top-level";
        return pl;
    }
    pl.top = t[pl.script].children.front();
    const NodeKind k = t[pl.top].kind;
    if (k == NodeKind::ShSimpleCommand) {
        pl.element = pl.top;
    } else if (k == NodeKind::ShAnd) {
        for (NodeId c : t[pl.top].children) {
            if (c == stmt || t.is_ancestor(c, stmt)) {
                pl.element = c;
                break;
            }
        }
    }
    if (!pl.element) {
        pl.reason = "unsafe-top-level";
    }
    return pl;
}

std::string_view flag_for(RuleId rule) {
    switch (rule) {
        case RuleId::PipUseNoCacheDir: return "--no-cache-dir";
        case RuleId::NpmCacheCleanUseForce: return "--force";
        case RuleId::ApkAddUseNoCache: return "--no-cache";
        case RuleId::AptGetInstallUseNoRec: return "--no-install-recommends";
        default: return {};
    }
}

std::string cleanup_for(const Tree& t, const SmellDiagnostic& d) {
    const Node& anchor = t[d.anchor.node];
    switch (d.rule) {
        case RuleId::AptGetInstallThenRemoveAptLists: return "rm -rf /var/lib/apt/lists/*";
        case RuleId::NpmCacheCleanAfterInstall: return "npm cache clean --force";
        case RuleId::YarnCacheCleanAfterInstall: return "yarn cache clean";
        case RuleId::GemUpdateSystemRmRootGem: return "rm -rf /root/.gem";
        case RuleId::GemUpdateNoDocument: return "echo 'gem: --no-document' >> /etc/gemrc";
        case RuleId::YumInstallRmVarCacheYum: {
            const auto& kids = t[d.anchor.statement].children;
            for (NodeId c : kids) {
                const std::string& v = t[c].value;
                const std::string base = v.substr(v.rfind('/') == std::string::npos ? 0 : v.rfind('/') + 1);
                if (base == "dnf" || base == "microdnf") {
                    return "rm -rf /var/cache/dnf";
                }
                if (base == "yum") {
                    break;
                }
            }
            return "rm -rf /var/cache/yum";
        }
        case RuleId::MkdirUsrSrcThenRemove: return "rm -rf " + quote_word(anchor.value);
        case RuleId::TarSomethingRmTheSomething:
        case RuleId::GpgVerifyAscRmAsc: return "rm " + quote_word(anchor.value);
        case RuleId::RmRecursiveAfterMktempD: {
            const auto ref = mktemp_dir_ref(t, d.anchor.statement);
            return "rm -rf \"" + ref.value_or("") + "\"";
        }
        default: return {};
    }
}

NodeId import_node(Tree& dst, const Tree& src, NodeId id) {
    const Node& n = src[id];
    const NodeId out = dst.create(n.kind);
    Node& o = dst.at(out);
    o.text = n.text;
    o.value = n.value;
    o.quote = n.quote;
    o.flags = n.flags;
    for (NodeId c : n.children) {
        dst.append_child(out, import_node(dst, src, c));
    }
    return out;
}

SmellDiagnostic make_diagnostic(const UnifiedAst& ast, RuleId rule, Match m) {
    const Tree& t = ast.tree;
    SmellDiagnostic d;
    d.rule = rule;
    d.path = ast.path;
    d.instruction = t.enclosing(m.node, NodeKind::DockerRun);
    if (t[m.node].span) {
        d.span = *t[m.node].span;
    } else if (m.statement && t[m.statement].span) {
        d.span = *t[m.statement].span;
    } else if (d.instruction && t[d.instruction].span) {
        d.span = *t[d.instruction].span;
    }
    d.message = std::string(rule_info(rule).message);
    d.anchor = std::move(m);
    if (rule_info(rule).repair == RepairKind::AddFlag) {
        const NodeId stmt = d.anchor.statement;
        d.fixable = stmt && t.parent(d.anchor.node) == stmt;
        if (!d.fixable) {
            d.not_fixable_reason = "no-statement";
        }
    } else {
        const Placement pl = placement_for(t, d.anchor.statement);
        d.fixable = pl.reason.empty();
        d.not_fixable_reason = pl.reason;
    }
    return d;
}

std::vector<SmellDiagnostic> detect_one(const UnifiedAst& ast, RuleId rule) {
    RuleSet only;
    only.set(idx(rule));
    return detect(ast, only);
}

}  // namespace

const std::vector<RuleId>& all_rules() {
    static const std::vector<RuleId> ids = [] {
        std::vector<RuleId> v;
        for (const auto& i : infos()) {
            v.push_back(i.id);
        }
        return v;
    }();
    return ids;
}

const RuleInfo& rule_info(RuleId id) { return infos().at(idx(id)); }

std::string_view rule_name(RuleId id) { return rule_info(id).name; }

std::optional<RuleId> rule_from_name(std::string_view name) {
    for (const auto& i : infos()) {
        if (i.name == name ||
            std::find(i.aliases.begin(), i.aliases.end(), name) != i.aliases.end()) {
            return i.id;
        }
    }
    return std::nullopt;
}

RuleSet all_rule_set() { return RuleSet{}.set(); }

RuleSet parse_rule_list(std::string_view list) {
    RuleSet out;
    bool any = false;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        std::size_t comma = list.find(',', pos);
        if (comma == std::string_view::npos) {
            comma = list.size();
        }
        std::string_view item = list.substr(pos, comma - pos);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())) != 0) {
            item.remove_prefix(1);
        }
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())) != 0) {
            item.remove_suffix(1);
        }
        if (!item.empty()) {
            const auto id = rule_from_name(item);
            if (!id) {
                throw ConfigError("unknown rule '" + std::string(item) + "'");
            }
            out.set(idx(*id));
            any = true;
        }
        pos = comma + 1;
    }
    return any ? out : all_rule_set();
}

void validate_rule_patterns() { (void)patterns(); }

std::string_view repair_status_name(RepairStatus status) {
    switch (status) {
        case RepairStatus::Applied: return "applied";
        case RepairStatus::RolledBack: return "rolled-back";
        case RepairStatus::NotFixable: return "not-fixable";
    }
    return "?";
}

DetectResult detect_all(const UnifiedAst& ast, const RuleSet& rules) {
    DetectResult out;
    std::unordered_map<std::uint32_t, std::size_t> order;
    std::size_t k = 0;
    ast.tree.walk(ast.root, [&](NodeId id) {
        order[id.value] = k++;
        return true;
    });
    for (RuleId rule : all_rules()) {
        if (!rules.test(idx(rule))) {
            continue;
        }
        std::vector<Match> hits;
        detect_rule(ast, rule, Sink{hits, out.notes, ast.tree, rule});
        for (auto& m : hits) {
            out.diagnostics.push_back(make_diagnostic(ast, rule, std::move(m)));
        }
    }
    std::stable_sort(out.diagnostics.begin(), out.diagnostics.end(),
                     [&](const SmellDiagnostic& a, const SmellDiagnostic& b) {
                         const std::size_t pa = order[a.anchor.node.value];
                         const std::size_t pb = order[b.anchor.node.value];
                         if (pa != pb) {
                             return pa < pb;
                         }
                         return idx(a.rule) < idx(b.rule);
                     });
    std::stable_sort(out.notes.begin(), out.notes.end(),
                     [](const DetectionNote& a, const DetectionNote& b) {
                         return a.span.start_offset < b.span.start_offset;
                     });
    return out;
}

std::vector<SmellDiagnostic> detect(const UnifiedAst& ast, const RuleSet& rules) {
    return detect_all(ast, rules).diagnostics;
}

NodeId synthesize_statement(Tree& tree, std::string_view shell) {
    ShellParseOptions opts;
    opts.docker_continuations = false;
    const ShellAst parsed = parse_shell(shell, opts);
    const auto& kids = parsed.tree[parsed.root].children;
    if (kids.size() != 1 || parsed.tree[kids.front()].kind == NodeKind::ShUnparsed) {
        throw InternalError("synthesized statement does not parse: " + std::string(shell));
    }
    return import_node(tree, parsed.tree, kids.front());
}

RepairOutcome repair(UnifiedAst& ast, const SmellDiagnostic& d) {
    RepairOutcome o;
    o.rule = d.rule;
    o.span = d.span;
    if (!d.fixable) {
        o.status = RepairStatus::NotFixable;
        o.reason = d.not_fixable_reason;
        return o;
    }
    Tree& t = ast.tree;
    o.snapshot = std::make_shared<const Tree>(t);
    const RepairKind kind = rule_info(d.rule).repair;

    if (kind == RepairKind::AddFlag) {
        const NodeId cmd = d.anchor.statement;
        const std::size_t pos = t.index_in_parent(d.anchor.node) + 1;
        const NodeId word = t.create(NodeKind::ShWord);
        t.at(word).value = std::string(flag_for(d.rule));
        t.at(word).text = t[word].value;
        t.insert_child(cmd, pos, word);
        o.edits.push_back({RepairEdit::Kind::Inserted, word, cmd, pos, t[word].value});
        o.status = RepairStatus::Applied;
        return o;
    }

    const Placement pl = placement_for(t, d.anchor.statement);
    if (!pl.reason.empty()) {
        o.status = RepairStatus::NotFixable;
        o.reason = pl.reason;
        o.snapshot.reset();
        return o;
    }
    const NodeId stmt = synthesize_statement(t, cleanup_for(t, d));
    NodeId chain = pl.top;
    if (t[pl.top].kind != NodeKind::ShAnd) {
        chain = t.create(NodeKind::ShAnd);
        t.replace_child(pl.script, pl.top, chain);
        t.append_child(chain, pl.top);
        t.mark_modified(chain);
        o.edits.push_back({RepairEdit::Kind::Wrapped, chain, pl.script, 0, "&&"});
    }
    const std::size_t elem_index = t.index_in_parent(pl.element);
    std::size_t pos = 0;
    switch (kind) {
        case RepairKind::TrailingCleanup: pos = t[chain].children.size(); break;
        case RepairKind::AdjacentCleanup: pos = elem_index + 1; break;
        case RepairKind::PrependStatement: pos = elem_index; break;
        case RepairKind::AddFlag: break;
    }
    t.insert_child(chain, pos, stmt);
    o.edits.push_back({RepairEdit::Kind::Inserted, stmt, chain, pos, render_full(t, stmt)});
    o.status = RepairStatus::Applied;
    return o;
}

RepairOutcome verify_or_rollback(UnifiedAst& ast, const SmellDiagnostic& d, RepairOutcome o) {
    if (o.status != RepairStatus::Applied) {
        return o;
    }
    enrich(ast);
    const auto again = detect_one(ast, d.rule);
    const bool still = std::any_of(again.begin(), again.end(), [&](const SmellDiagnostic& x) {
        return x.anchor.node == d.anchor.node && x.instruction == d.instruction;
    });
    if (!still) {
        return o;
    }
    if (!o.snapshot) {
        throw InternalError("repair without a snapshot cannot be rolled back");
    }
    ast.tree = *o.snapshot;
    o.status = RepairStatus::RolledBack;
    o.reason = "still-detected";
    o.edits.clear();
    return o;
}

FixResult fix(UnifiedAst& ast, const RuleSet& rules, const RepairFn& repair_fn) {
    FixResult out;
    out.diagnostics = detect(ast, rules);
    for (const auto& d : out.diagnostics) {
        const auto current = detect_one(ast, d.rule);
        auto it = std::find_if(current.begin(), current.end(), [&](const SmellDiagnostic& x) {
            return x.anchor.node == d.anchor.node;
        });
        if (it == current.end()) {
            RepairOutcome o;
            o.rule = d.rule;
            o.span = d.span;
            o.status = RepairStatus::Applied;
            o.note = "resolved by an earlier repair";
            out.outcomes.push_back(std::move(o));
            continue;
        }
        RepairOutcome o = repair_fn ? repair_fn(ast, *it) : repair(ast, *it);
        if (o.status == RepairStatus::Applied && !o.snapshot) {
            throw InternalError("repair hook returned an applied outcome without a snapshot");
        }
        out.outcomes.push_back(verify_or_rollback(ast, *it, std::move(o)));
    }
    out.output = print_minimal(ast);
    return out;
}

}  // namespace dockslim
