#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dockslim/dockerfile_parser.hpp"
#include "dockslim/enrichment.hpp"
#include "dockslim/printer.hpp"

using namespace dockslim;

namespace {

std::vector<NodeKind> kinds(const DockerfileAst& ast) {
    std::vector<NodeKind> out;
    for (NodeId id : ast.instructions()) {
        out.push_back(ast.tree[id].kind);
    }
    return out;
}

std::size_t count_kind(const Tree& t, NodeId root, NodeKind kind) {
    std::size_t n = 0;
    t.walk(root, [&](NodeId id) {
        n += t[id].kind == kind ? 1 : 0;
        return true;
    });
    return n;
}

}  // namespace

TEST_CASE("two instructions make one stage") {
    const auto ast = parse_dockerfile("FROM alpine\nRUN apk add curl");
    CHECK(ast.tree[ast.root].kind == NodeKind::DockerFile);
    CHECK(kinds(ast) == std::vector<NodeKind>{NodeKind::DockerFrom, NodeKind::DockerRun});
    CHECK(ast.stages().size() == 1);
    CHECK(parse_status(ast) == ParseStatus::Ok);
}

TEST_CASE("empty input has no instructions and a warning") {
    const auto ast = parse_dockerfile("");
    CHECK(ast.instructions().empty());
    CHECK_FALSE(ast.warnings.empty());
}

TEST_CASE("continuation lines fold into one RUN") {
    const std::string src = "RUN apt-get update \\\n && apt-get install -y wget";
    const auto ast = parse_dockerfile(src);
    REQUIRE(ast.instructions().size() == 1);
    const Node& run = ast.tree[ast.instructions().front()];
    CHECK(run.kind == NodeKind::DockerRun);
    REQUIRE(run.span.has_value());
    CHECK(run.span->start_line == 1);
    CHECK(run.span->end_line == 2);
    CHECK(run.span->end_offset == src.size());
}

TEST_CASE("exec form RUN keeps its string elements") {
    const auto ast = parse_dockerfile("RUN [\"sh\", \"-c\", \"npm install\"]");
    REQUIRE(ast.instructions().size() == 1);
    const NodeId run = ast.instructions().front();
    CHECK(ast.tree[run].has(NodeFlag::ExecForm));
    CHECK(count_kind(ast.tree, run, NodeKind::DockerString) == 3);
}

TEST_CASE("unknown keywords become DOCKER-UNKNOWN") {
    const auto ast = parse_dockerfile("FROM a\nFROBNICATE x y\nRUN ls\n");
    CHECK(kinds(ast) ==
          std::vector<NodeKind>{NodeKind::DockerFrom, NodeKind::DockerUnknown, NodeKind::DockerRun});
    CHECK(parse_status(ast) == ParseStatus::Partial);
}

TEST_CASE("stages follow FROM instructions") {
    const auto ast = parse_dockerfile(
        "ARG V=1\nFROM a AS build\nRUN make\nFROM b\nCOPY --from=build /x /x\nRUN ls\n");
    const auto stages = ast.stages();
    REQUIRE(stages.size() == 2);
    CHECK(stages[0].size() == 2);
    CHECK(stages[1].size() == 3);
}

TEST_CASE("round trip keeps comments, case and blank lines") {
    const std::string src =
        "# syntax=docker/dockerfile:1\n"
        "from alpine:3.19   \n"
        "\n"
        "# a comment\n"
        "run apk add \\\n"
        "    # inside\n"
        "    curl\n"
        "ENV A=1 \\\n"
        "    B=\"two words\"\n"
        "CMD [\"sh\"]";
    const auto ast = analyze_source(src);
    CHECK(print_minimal(ast) == src);
    CHECK(reconstruct_from_leaves(ast.tree, ast.root, src) == src);
    CHECK_FALSE(check_span_invariants(ast.tree, ast.root).has_value());
}

TEST_CASE("escape directive changes the continuation character") {
    const std::string src = "# escape=`\nFROM windows\nRUN dir `\n    c:\\\n";
    const auto ast = parse_dockerfile(src);
    CHECK(ast.escape == '`');
    CHECK(ast.instructions().size() == 2);
    CHECK(print_minimal(analyze_source(src)) == src);
}

TEST_CASE("heredoc RUN is flagged and round-trips") {
    const std::string src = "FROM a\nRUN <<EOF\napt-get update\nEOF\nRUN ls\n";
    const auto ast = parse_dockerfile(src);
    REQUIRE(ast.instructions().size() == 3);
    CHECK(ast.tree[ast.instructions()[1]].has(NodeFlag::Heredoc));
    CHECK(print_minimal(analyze_source(src)) == src);
}

TEST_CASE("invalid utf-8 is reported but still parsed") {
    std::string src = "FROM a\nRUN echo \xff\n";
    const auto ast = parse_dockerfile(src);
    CHECK(ast.invalid_utf8);
    CHECK_FALSE(ast.warnings.empty());
    CHECK(ast.instructions().size() == 2);
    CHECK_FALSE(is_valid_utf8(src));
    CHECK(is_valid_utf8("caf\xc3\xa9"));
}

TEST_CASE("binary garbage is failed-soft") {
    std::string src("\x00\x01\x02\x03", 4);
    CHECK(parse_status(parse_dockerfile(src)) == ParseStatus::FailedSoft);
}
