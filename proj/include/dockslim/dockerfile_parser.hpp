#pragma once

// Line-oriented Dockerfile parser producing DOCKER-* nodes.

#include <string>
#include <string_view>
#include <vector>

#include "dockslim/shell_parser.hpp"
#include "dockslim/source_model.hpp"

namespace dockslim {

enum class ParseStatus { Ok, Partial, FailedSoft };
std::string_view parse_status_name(ParseStatus status);

struct DockerfileAst {
    std::string path;
    std::string source;
    Tree tree;
    NodeId root;  // DOCKER-FILE
    std::vector<ParseWarning> warnings;
    char escape = '\\';
    bool invalid_utf8 = false;
    bool has_nul = false;
    bool unified = false;  // RUN payloads have been parsed as shell

    [[nodiscard]] std::vector<NodeId> instructions() const;
    /// Instructions grouped by FROM; anything before the first FROM is not
    /// part of a stage.
    [[nodiscard]] std::vector<std::vector<NodeId>> stages() const;
    [[nodiscard]] LineIndex line_index() const { return LineIndex(source); }
};

/// The shell-enriched tree is the same structure with SC-* subtrees grafted
/// under RUN instructions.
using UnifiedAst = DockerfileAst;

DockerfileAst parse_dockerfile(std::string text, std::string path = {});

/// ok: fully understood. partial: some region is SC-UNPARSED or DOCKER-UNKNOWN,
/// or the bytes are not valid UTF-8. failed-soft: nothing recognisable.
ParseStatus parse_status(const DockerfileAst& ast);

/// Checks whether `text` is well-formed UTF-8.
bool is_valid_utf8(std::string_view text);

}  // namespace dockslim
