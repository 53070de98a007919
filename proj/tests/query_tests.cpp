#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dockslim/enrichment.hpp"
#include "dockslim/query.hpp"
#include "test_support.hpp"

using namespace dockslim;
using namespace dockslim::testing;

namespace {

NodePattern rm_of(std::string path) {
    return NodePattern::of_label("SC-RM-PATH").where(ValuePredicate::covers(std::move(path)));
}

}  // namespace

TEST_CASE("npm cache clean is found once") {
    const auto ast = analyze_source("RUN npm cache clean");
    CHECK(find_all(ast.tree, ast.root, NodePattern::of_label("SC-NPM-CACHE-CLEAN")).size() == 1);
}

TEST_CASE("must-not-exist flag defeats the match") {
    const auto ast = analyze_source("RUN npm cache clean --force");
    const auto p = NodePattern::of_label("SC-NPM-CACHE-CLEAN").lacks(NodePattern::of_label("SC-NPM-F-FORCE"));
    CHECK(find_all(ast.tree, ast.root, p).empty());
    const auto bare = analyze_source("RUN npm cache clean");
    CHECK(find_all(bare.tree, bare.root, p).size() == 1);
}

TEST_CASE("two pip installs match in document order") {
    const auto ast = analyze_source("RUN pip install a && pip3 install b");
    const auto ms = find_all(ast.tree, ast.root, NodePattern::of_label("SC-PIP-INSTALL"));
    REQUIRE(ms.size() == 2);
    CHECK(ast.tree[ms[0].node].span->start_offset < ast.tree[ms[1].node].span->start_offset);
    CHECK(ms[0].statement == nth_command(ast, 0));
    CHECK(ms[1].statement == nth_command(ast, 1));
}

TEST_CASE("after relation within the same RUN") {
    const auto ast = analyze_source("RUN apt-get install -y x && rm -rf /var/lib/apt/lists/*");
    const auto anchors = find_all(ast.tree, ast.root, NodePattern::of_label("SC-APT-GET-INSTALL"));
    REQUIRE(anchors.size() == 1);
    const Match& a = anchors.front();
    CHECK(ast.tree[a.scope].kind == NodeKind::DockerRun);
    NodeId found;
    CHECK(holds(ast.tree, Relation::After, rm_of("/var/lib/apt/lists"), a, a.scope, &found));
    CHECK(ast.tree[found].value == "/var/lib/apt/lists/*");
    CHECK_FALSE(holds(ast.tree, Relation::Before, rm_of("/var/lib/apt/lists"), a, a.scope));
}

TEST_CASE("a later RUN does not count") {
    const auto ast = analyze_source("RUN apt-get install -y x\nRUN rm -rf /var/lib/apt/lists/*\n");
    const auto anchors = find_all(ast.tree, ast.root, NodePattern::of_label("SC-APT-GET-INSTALL"));
    REQUIRE(anchors.size() == 1);
    CHECK_FALSE(holds(ast.tree, Relation::After, rm_of("/var/lib/apt/lists"), anchors[0], anchors[0].scope));
    // widening the scope to the file finds it
    CHECK(holds(ast.tree, Relation::After, rm_of("/var/lib/apt/lists"), anchors[0], ast.root));
}

TEST_CASE("in-node flag check") {
    const auto ast = analyze_source("RUN apk add --no-cache curl");
    const auto anchors = find_all(ast.tree, ast.root, NodePattern::of_label("SC-APK-ADD"));
    REQUIRE(anchors.size() == 1);
    CHECK(holds(ast.tree, Relation::InNode, NodePattern::of_label("SC-APK-F-NO-CACHE"), anchors[0],
                anchors[0].scope));
}

TEST_CASE("unknown labels fail when the pattern is built") {
    CHECK_THROWS_AS(NodePattern::of_label("SC-APK-F-NOCACHE"), ConfigError);
}

TEST_CASE("nothing inside SC-UNPARSED is matched") {
    const auto ast = analyze_source("RUN f() { pip install x; }\n");
    CHECK(find_all(ast.tree, ast.root, NodePattern::of_label("SC-PIP-INSTALL")).empty());
    std::size_t unparsed = 0;
    ast.tree.walk(ast.root, [&](NodeId id) {
        unparsed += ast.tree[id].kind == NodeKind::ShUnparsed ? 1 : 0;
        return true;
    });
    CHECK(unparsed == 1);
}

TEST_CASE("bindings are recorded") {
    const auto ast = analyze_source("RUN tar -xzf a.tgz && rm a.tgz");
    const auto p = NodePattern::of_label("SC-TAR-ARCHIVE").as("archive");
    const auto ms = find_all(ast.tree, ast.root, p);
    REQUIRE(ms.size() == 1);
    REQUIRE(ms[0].binding("archive").has_value());
    CHECK(*ms[0].binding("archive") == ms[0].node);
    const auto rm = NodePattern::of_label("SC-RM-PATH").where(ValuePredicate::covers_binding("archive"));
    CHECK(holds(ast.tree, Relation::After, rm, ms[0], ms[0].scope));
}

TEST_CASE("statements_in flattens in textual order") {
    const auto ast = analyze_source("RUN a && b || c; d | e");
    const NodeId r = ast.instructions().front();
    std::vector<std::string> names;
    for (NodeId s : statements_in(ast.tree, r)) {
        names.push_back(ast.tree[words(ast.tree, s).front()].value);
    }
    CHECK(names == std::vector<std::string>{"a", "b", "c", "d", "e"});
}

TEST_CASE("value predicates") {
    Tree t;
    CHECK(ValuePredicate::exact("x").test(t, "x", nullptr));
    CHECK_FALSE(ValuePredicate::exact("x").test(t, "xy", nullptr));
    CHECK(ValuePredicate::prefix("/usr/src").test(t, "/usr/src/app", nullptr));
    CHECK(ValuePredicate::suffix(".asc").test(t, "k.asc", nullptr));
    CHECK(ValuePredicate::glob("*.tar.*").test(t, "a.tar.gz", nullptr));
    CHECK(ValuePredicate::contains("gem:").test(t, "gem: --no-document", nullptr));
    CHECK(ValuePredicate::custom_fn([](std::string_view v, const Match*) { return v.size() == 2; })
              .test(t, "ab", nullptr));
}

TEST_CASE("path normalisation and coverage") {
    CHECK(normalize_path("'./a/b/'") == "a/b");
    CHECK(normalize_path("~/.gem") == "/root/.gem");
    CHECK(normalize_path("${HOME}/.gem") == "/root/.gem");
    CHECK(path_covers("/tmp/firefox.*", "/tmp/firefox.tar.bz2"));
    CHECK(path_covers("/var/lib/apt/lists/*", "/var/lib/apt/lists"));
    CHECK(path_covers("/var/cache", "/var/cache/yum"));
    CHECK(path_covers("/root/.gem", "~/.gem"));
    CHECK_FALSE(path_covers("/var/cache/apt", "/var/cache/yum"));
    CHECK_FALSE(path_covers("/tmp/other*", "/tmp/firefox.tar.bz2"));
}

TEST_CASE("matching is deterministic") {
    const auto ast = analyze_source("RUN pip install a; pip install b && pip install c\n");
    const auto p = NodePattern::of_label("SC-PIP-INSTALL");
    const auto a = find_all(ast.tree, ast.root, p);
    const auto b = find_all(ast.tree, ast.root, p);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].node == b[i].node);
    }
}
