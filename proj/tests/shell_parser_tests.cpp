#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dockslim/shell_parser.hpp"

using namespace dockslim;

namespace {

NodeId top(const ShellAst& ast) {
    const auto& kids = ast.tree[ast.root].children;
    REQUIRE(kids.size() == 1);
    return kids.front();
}

std::vector<std::string> word_values(const Tree& t, NodeId cmd) {
    std::vector<std::string> out;
    for (NodeId c : t[cmd].children) {
        if (t[c].kind == NodeKind::ShWord) {
            out.push_back(t[c].value);
        }
    }
    return out;
}

bool contains_kind(const Tree& t, NodeId root, NodeKind kind) {
    bool found = false;
    t.walk(root, [&](NodeId id) {
        found = found || t[id].kind == kind;
        return true;
    });
    return found;
}

}  // namespace

TEST_CASE("single simple command has three words") {
    const auto ast = parse_shell("npm cache clean");
    const NodeId cmd = top(ast);
    CHECK(ast.tree[cmd].kind == NodeKind::ShSimpleCommand);
    CHECK(word_values(ast.tree, cmd) == std::vector<std::string>{"npm", "cache", "clean"});
    CHECK(ast.warnings.empty());
}

TEST_CASE("and list of two commands") {
    const auto ast = parse_shell("apt-get update && apt-get install -y wget");
    const NodeId chain = top(ast);
    REQUIRE(ast.tree[chain].kind == NodeKind::ShAnd);
    REQUIRE(ast.tree[chain].children.size() == 2);
    for (NodeId c : ast.tree[chain].children) {
        CHECK(ast.tree[c].kind == NodeKind::ShSimpleCommand);
    }
}

TEST_CASE("and chains are flat") {
    const auto ast = parse_shell("a && b && c && d");
    const NodeId chain = top(ast);
    REQUIRE(ast.tree[chain].kind == NodeKind::ShAnd);
    CHECK(ast.tree[chain].children.size() == 4);
}

TEST_CASE("mixed and/or chains nest left to right") {
    const auto ast = parse_shell("a && b || c && d");
    const Tree& t = ast.tree;
    const NodeId outer = top(ast);
    REQUIRE(t[outer].kind == NodeKind::ShAnd);
    REQUIRE(t[outer].children.size() == 2);
    const NodeId mid = t[outer].children[0];
    REQUIRE(t[mid].kind == NodeKind::ShOr);
    CHECK(t[t[mid].children[0]].kind == NodeKind::ShAnd);
}

TEST_CASE("assignment with command substitution") {
    const auto ast = parse_shell("ACTUAL_URL=$(curl -Ls -o /dev/null $URL)");
    const Tree& t = ast.tree;
    const NodeId cmd = top(ast);
    REQUIRE(t[cmd].kind == NodeKind::ShSimpleCommand);
    REQUIRE(t[cmd].children.size() == 1);
    const NodeId assign = t[cmd].children[0];
    CHECK(t[assign].kind == NodeKind::ShAssignment);
    CHECK(t[assign].value == "ACTUAL_URL");
    CHECK(contains_kind(t, assign, NodeKind::ShCommandSubstitution));
    CHECK(contains_kind(t, assign, NodeKind::ShVariable));
}

TEST_CASE("if statement becomes a compound with nested statements") {
    const auto ast = parse_shell("if [ -f x ]; then rm x; fi");
    const Tree& t = ast.tree;
    const NodeId c = top(ast);
    CHECK(t[c].kind == NodeKind::ShCompound);
    CHECK(t[c].value == "if");
    CHECK(t.children_of_kind(c, NodeKind::ShSimpleCommand).size() == 2);
    CHECK(ast.warnings.empty());
}

TEST_CASE("words record quoting style") {
    const auto ast = parse_shell("echo 'a b' \"c $D\" e f'g'");
    const Tree& t = ast.tree;
    const auto& kids = t[top(ast)].children;
    REQUIRE(kids.size() == 5);
    CHECK(t[kids[1]].quote == QuoteStyle::Single);
    CHECK(t[kids[1]].value == "a b");
    CHECK(t[kids[2]].quote == QuoteStyle::Double);
    CHECK(t[kids[2]].value == "c $D");
    CHECK(t[kids[3]].quote == QuoteStyle::Bare);
    CHECK(t[kids[4]].quote == QuoteStyle::Mixed);
    CHECK(t[kids[4]].value == "fg");
    CHECK(t[kids[4]].text == "f'g'");
}

TEST_CASE("backticks become command substitution") {
    const auto ast = parse_shell("echo `date`");
    const Tree& t = ast.tree;
    NodeId sub;
    t.walk(ast.root, [&](NodeId id) {
        if (t[id].kind == NodeKind::ShCommandSubstitution) {
            sub = id;
        }
        return true;
    });
    REQUIRE(sub.valid());
    CHECK(t[sub].has(NodeFlag::Backtick));
    CHECK(contains_kind(t, sub, NodeKind::ShSimpleCommand));
}

TEST_CASE("redirections keep operator and target") {
    const auto ast = parse_shell("echo hi >> /etc/gemrc 2>&1");
    const Tree& t = ast.tree;
    const auto reds = t.children_of_kind(top(ast), NodeKind::ShRedirection);
    REQUIRE(reds.size() == 2);
    CHECK(t[reds[0]].value == ">>");
    CHECK(t[t[reds[0]].children[0]].value == "/etc/gemrc");
    CHECK(t[reds[1]].value == "2>&");
}

TEST_CASE("continuations are whitespace") {
    const std::string text = "apt-get update \\\n    && apt-get install -y \\\n        wget";
    const auto ast = parse_shell(text);
    const Tree& t = ast.tree;
    const NodeId chain = top(ast);
    REQUIRE(t[chain].kind == NodeKind::ShAnd);
    CHECK(word_values(t, t[chain].children[1]) ==
          std::vector<std::string>{"apt-get", "install", "-y", "wget"});
}

TEST_CASE("comment lines inside a continued instruction are dropped") {
    const std::string text = "apt-get update \\\n  # refresh\n  && apt-get install -y wget";
    const auto ast = parse_shell(text);
    const NodeId chain = top(ast);
    CHECK(ast.tree[chain].kind == NodeKind::ShAnd);
    CHECK(ast.tree[chain].children.size() == 2);
}

TEST_CASE("unsupported statement degrades locally") {
    const auto ast = parse_shell("foo() { bar; } ; apt-get install x");
    const Tree& t = ast.tree;
    const NodeId seq = top(ast);
    REQUIRE(t[seq].kind == NodeKind::ShSeq);
    CHECK(contains_kind(t, seq, NodeKind::ShUnparsed));
    const NodeId last = t[seq].children.back();
    CHECK(t[last].kind == NodeKind::ShSimpleCommand);
    CHECK(!ast.warnings.empty());
}

TEST_CASE("heredoc redirect swallows the rest of the script") {
    const auto ast = parse_shell("cat <<EOF > x\nhello\nEOF");
    const NodeId n = top(ast);
    CHECK(ast.tree[n].kind == NodeKind::ShUnparsed);
    CHECK(ast.tree[n].text == "cat <<EOF > x\nhello\nEOF");
}

TEST_CASE("unterminated quote turns the whole script unparsed") {
    const auto ast = parse_shell("echo ok && echo 'oops");
    const NodeId n = top(ast);
    CHECK(ast.tree[n].kind == NodeKind::ShUnparsed);
    CHECK(ast.warnings.size() == 1);
}

TEST_CASE("pipelines, subshells and loops") {
    const auto ast = parse_shell(
        "curl -fsSL x | tar -xz -C /opt && (cd /opt && make) && for f in a b; do echo $f; done");
    const Tree& t = ast.tree;
    const NodeId chain = top(ast);
    REQUIRE(t[chain].kind == NodeKind::ShAnd);
    REQUIRE(t[chain].children.size() == 3);
    CHECK(t[t[chain].children[0]].kind == NodeKind::ShPipeline);
    CHECK(t[t[chain].children[1]].kind == NodeKind::ShSubshell);
    CHECK(t[t[chain].children[2]].kind == NodeKind::ShCompound);
    CHECK(ast.warnings.empty());
}

TEST_CASE("case statements parse") {
    const auto ast = parse_shell("case \"$A\" in\n  x|y) echo 1 ;;\n  *) echo 2 ;;\nesac");
    CHECK(ast.tree[top(ast)].kind == NodeKind::ShCompound);
    CHECK(ast.warnings.empty());
}

TEST_CASE("spans nest and stay inside the text") {
    const std::string text =
        "set -eux; \\\n  savedAptMark=\"$(apt-mark showmanual)\"; \\\n  apt-get install -y "
        "--no-install-recommends ca-certificates wget; \\\n  rm -rf /var/lib/apt/lists/*";
    const auto ast = parse_shell(text);
    CHECK(!check_span_invariants(ast.tree, ast.root).has_value());
    CHECK(ast.warnings.empty());
}
