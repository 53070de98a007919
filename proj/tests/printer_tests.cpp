#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "dockslim/enrichment.hpp"
#include "dockslim/printer.hpp"
#include "dockslim/rules.hpp"
#include "dockslim/shell_parser.hpp"
#include "test_support.hpp"

using namespace dockslim;
using namespace dockslim::testing;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(DOCKSLIM_FIXTURE_DIR) + "/corpus/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

NodeId make_command(Tree& t, std::initializer_list<const char*> ws) {
    const NodeId cmd = t.create(NodeKind::ShSimpleCommand);
    for (const char* w : ws) {
        const NodeId n = t.create(NodeKind::ShWord);
        t.at(n).value = w;
        t.append_child(cmd, n);
    }
    return cmd;
}

}  // namespace

TEST_CASE("unmodified trees print identically") {
    const std::string src =
        "FROM alpine AS base\n"
        "# keep\n"
        "RUN set -eux; \\\n"
        "\tapk add --no-cache curl   \\\n"
        "\t  && echo \"$(date)\" > /x  # trailing\n"
        "\n"
        "CMD [\"sh\", \"-c\", \"echo hi\"]\n";
    const auto ast = analyze_source(src);
    CHECK(print_minimal(ast) == src);
}

TEST_CASE("npm fix on the 40-line file is a one-line diff") {
    const std::string src = slurp("npm_force_40_lines.Dockerfile");
    auto ast = analyze_source(src);
    const auto r = fix(ast, all_rule_set());
    const std::string d = unified_diff(src, r.output, "a/Dockerfile", "b/Dockerfile", 0);
    CHECK(d.find("@@ -21,1 +21,1 @@\n-RUN npm cache clean\n+RUN npm cache clean --force\n") !=
          std::string::npos);
    CHECK(std::count(d.begin(), d.end(), '@') == 4);
}

TEST_CASE("appended cleanup follows continuation style") {
    const std::string src =
        "RUN apt-get update \\\n"
        "    && apt-get install -y --no-install-recommends curl \\\n"
        "    && echo done\n";
    auto ast = analyze_source(src);
    const auto r = fix(ast, all_rule_set());
    CHECK(r.output ==
          "RUN apt-get update \\\n"
          "    && apt-get install -y --no-install-recommends curl \\\n"
          "    && echo done \\\n"
          "    && rm -rf /var/lib/apt/lists/*\n");
}

TEST_CASE("inline chains stay inline") {
    auto ast = analyze_source("RUN apt-get update && apt-get install -y --no-install-recommends curl\n");
    CHECK(fix(ast, all_rule_set()).output ==
          "RUN apt-get update && apt-get install -y --no-install-recommends curl && rm -rf /var/lib/apt/lists/*\n");
}

TEST_CASE("render_full of a plain command") {
    Tree t;
    const NodeId cmd = make_command(t, {"rm", "-rf", "/var/cache/yum"});
    CHECK(render_full(t, cmd) == "rm -rf /var/cache/yum");
}

TEST_CASE("render_full of an AND") {
    Tree t;
    const NodeId a = t.create(NodeKind::ShAnd);
    t.append_child(a, make_command(t, {"a"}));
    t.append_child(a, make_command(t, {"b"}));
    CHECK(render_full(t, a) == "a && b");
}

TEST_CASE("echo gemrc statement reparses to the same tree") {
    Tree t;
    const NodeId s = synthesize_statement(t, "echo 'gem: --no-document' >> /etc/gemrc");
    const std::string text = render_full(t, s);
    CHECK(text == "echo 'gem: --no-document' >> /etc/gemrc");
    const auto again = parse_shell(text);
    REQUIRE(again.tree[again.root].children.size() == 1);
    CHECK(structurally_equal(t, s, again.tree, again.tree[again.root].children.front()));
}

TEST_CASE("quote_word") {
    CHECK(quote_word("/var/lib/apt/lists/*") == "/var/lib/apt/lists/*");
    CHECK(quote_word("--force") == "--force");
    CHECK(quote_word("gem: --no-document") == "'gem: --no-document'");
    CHECK(quote_word("a;b") == "'a;b'");
}

TEST_CASE("unified diff") {
    CHECK(unified_diff("a\nb\n", "a\nb\n", "x", "y").empty());
    const std::string d = unified_diff("a\nb\nc\n", "a\nB\nc\n", "x", "y", 1);
    CHECK(d == "--- x\n+++ y\n@@ -1,3 +1,3 @@\n a\n-b\n+B\n c\n");
}

TEST_CASE("leaf reconstruction owns every byte") {
    const std::string src = "FROM a\nRUN if [ -f x ]; then rm x; fi \\\n  && echo `id -u` | tee /o\nENTRYPOINT []\n";
    const auto ast = analyze_source(src);
    CHECK(reconstruct_from_leaves(ast.tree, ast.root, src) == src);
}
