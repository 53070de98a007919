#pragma once

// Parser for the POSIX-shell subset found in RUN payloads. Anything outside
// the subset degrades to SC-UNPARSED rather than failing.

#include <string>
#include <string_view>
#include <vector>

#include "dockslim/source_model.hpp"

namespace dockslim {

struct ParseWarning {
    std::string message;
    std::optional<SourceSpan> span;
};

struct ShellParseOptions {
    /// Line-continuation character inherited from the Dockerfile (`\` or `` ` ``).
    char continuation = '\\';
    /// Treat continuation + optional trailing blanks + newline as Docker does,
    /// and drop comment-only and blank lines that follow a continuation.
    bool docker_continuations = true;
};

struct ShellAst {
    std::string source;
    Tree tree;
    NodeId root;  // SC-SCRIPT
    std::vector<ParseWarning> warnings;
};

ShellAst parse_shell(std::string_view text, const ShellParseOptions& options = {});

/// Parses `file_text[begin, end)` into `tree`, returning a new SC-SCRIPT node
/// whose spans are expressed in file coordinates.
NodeId parse_shell_region(Tree& tree, std::string_view file_text, const LineIndex& lines,
                          std::size_t begin, std::size_t end, const ShellParseOptions& options,
                          std::vector<ParseWarning>& warnings);

}  // namespace dockslim
