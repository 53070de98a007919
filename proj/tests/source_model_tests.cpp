#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dockslim/source_model.hpp"

using namespace dockslim;

namespace {

SourceSpan off(std::size_t b, std::size_t e) {
    SourceSpan s;
    s.start_offset = b;
    s.end_offset = e;
    return s;
}

}  // namespace

TEST_CASE("span_text slices bytes exactly") {
    CHECK(span_text("FROM alpine", off(0, 4)) == "FROM");
    CHECK(span_text("RUN ls", off(4, 6)) == "ls");
    CHECK(span_text("abc", off(1, 1)).empty());
}

TEST_CASE("span_text rejects spans past the end") {
    CHECK_THROWS_AS(span_text("abc", off(2, 9)), InternalError);
    CHECK_THROWS_AS(span_text("abc", off(3, 2)), InternalError);
}

TEST_CASE("line index maps offsets to 1-based positions") {
    const LineIndex idx("ab\ncd\n\nx");
    const SourceSpan s = idx.span(4, 8);
    CHECK(s.start_line == 2);
    CHECK(s.start_col == 2);
    CHECK(s.end_line == 4);
    CHECK(s.end_col == 2);
    CHECK(idx.line_of(0) == 1);
    CHECK(idx.line_of(6) == 3);
}

TEST_CASE("kind names round-trip") {
    CHECK(kind_name(NodeKind::DockerRun) == "DOCKER-RUN");
    CHECK(kind_name(NodeKind::ShSimpleCommand) == "SC-SIMPLE-COMMAND");
    CHECK(kind_from_name("SC-AND") == NodeKind::ShAnd);
    CHECK_FALSE(kind_from_name("SC-NOPE").has_value());
}

TEST_CASE("labels outside the vocabulary are a configuration error") {
    CHECK(Label::of("SC-PIP-INSTALL").name() == "SC-PIP-INSTALL");
    CHECK_THROWS_AS(Label::of("SC-PIP-INSTAL"), ConfigError);
    CHECK_FALSE(Label::find("nope").has_value());
}

TEST_CASE("annotating twice keeps one label") {
    Tree t;
    const NodeId n = t.create(NodeKind::ShWord, off(0, 1));
    t.annotate(n, "SC-PIP");
    t.annotate(n, "SC-PIP");
    CHECK(t[n].annotations.size() == 1);
    CHECK(t.has_label(n, Label::of("SC-PIP")));
}

TEST_CASE("mark_modified dirties every ancestor") {
    Tree t;
    const NodeId root = t.create(NodeKind::DockerFile, off(0, 10));
    const NodeId run = t.create(NodeKind::DockerRun, off(0, 10));
    const NodeId cmd = t.create(NodeKind::ShSimpleCommand, off(4, 10));
    const NodeId other = t.create(NodeKind::DockerRun, off(0, 0));
    t.append_child(root, run);
    t.append_child(run, cmd);
    t.append_child(root, other);
    CHECK_FALSE(t.subtree_dirty(root));

    t.mark_modified(cmd);
    CHECK(t[cmd].modified);
    CHECK(t.subtree_dirty(run));
    CHECK(t.subtree_dirty(root));
    CHECK_FALSE(t[run].modified);
    CHECK_FALSE(t.subtree_dirty(other));
}

TEST_CASE("insert_child reparents and marks the parent") {
    Tree t;
    const NodeId a = t.create(NodeKind::ShAnd, off(0, 5));
    const NodeId b = t.create(NodeKind::ShAnd, off(6, 9));
    const NodeId w = t.create(NodeKind::ShWord, off(0, 1));
    t.append_child(a, w);
    CHECK_FALSE(t[a].modified);

    t.insert_child(b, 0, w);
    CHECK(t[a].children.empty());
    CHECK(t[b].children == std::vector<NodeId>{w});
    CHECK(t.parent(w) == b);
    CHECK(t[b].modified);
}

TEST_CASE("nodes created without a span are synthesized and modified") {
    Tree t;
    const NodeId n = t.create(NodeKind::ShWord);
    CHECK(t[n].synthesized());
    CHECK(t[n].modified);
}

TEST_CASE("a copied tree is an independent snapshot") {
    Tree t;
    const NodeId root = t.create(NodeKind::ShScript, off(0, 3));
    const Tree snap = t;
    t.insert_child(root, 0, t.create(NodeKind::ShWord));
    CHECK(t[root].children.size() == 1);
    CHECK(snap[root].children.empty());
    CHECK_FALSE(snap[root].modified);
}

TEST_CASE("enclosing and is_ancestor") {
    Tree t;
    const NodeId run = t.create(NodeKind::DockerRun, off(0, 9));
    const NodeId cmd = t.create(NodeKind::ShSimpleCommand, off(4, 9));
    const NodeId w = t.create(NodeKind::ShWord, off(4, 6));
    t.append_child(run, cmd);
    t.append_child(cmd, w);
    CHECK(t.enclosing(w, NodeKind::DockerRun) == run);
    CHECK(t.enclosing(cmd, NodeKind::ShSimpleCommand) == cmd);
    CHECK_FALSE(t.enclosing(run, NodeKind::ShAnd).valid());
    CHECK(t.is_ancestor(run, w));
    CHECK_FALSE(t.is_ancestor(w, w));
    CHECK(t.preorder(run) == std::vector<NodeId>{run, cmd, w});
}
