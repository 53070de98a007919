#pragma once

// Reprinting: original bytes for untouched regions, canonical text for
// synthesized or modified nodes; plus unified diffs of the result.

#include <string>
#include <string_view>

#include "dockslim/dockerfile_parser.hpp"
#include "dockslim/source_model.hpp"

namespace dockslim {

/// Emits `root` reusing `original` for every clean spanned subtree.
std::string print_minimal(const Tree& tree, NodeId root, std::string_view original);
std::string print_minimal(const UnifiedAst& ast);

/// Canonical rendering with no access to source text: single spaces between
/// words, " && " between AND elements, and so on. Throws InternalError for
/// nodes that have no canonical form and no stored text.
std::string render_full(const Tree& tree, NodeId node);

/// Rebuilds the text from leaf tokens and the original text between them,
/// ignoring modification state. Used to check that every byte is owned by
/// the tree.
std::string reconstruct_from_leaves(const Tree& tree, NodeId root, std::string_view original);

/// Word text for a synthesized argument: bare unless the value contains a
/// shell metacharacter, then single-quoted.
std::string quote_word(std::string_view value);

/// Unified diff of two texts, line based. Empty when the texts are equal.
std::string unified_diff(std::string_view before, std::string_view after,
                         std::string_view from_label, std::string_view to_label, int context = 3);

}  // namespace dockslim
