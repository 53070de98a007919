#pragma once

// Grafting shell trees under RUN instructions and annotating command words
// with schema-driven labels.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dockslim/dockerfile_parser.hpp"
#include "dockslim/source_model.hpp"

namespace dockslim {

struct FlagSpec {
    std::vector<std::string> spellings;  // "-f", "--force", "-nv"
    Label label;
    bool takes_value = false;
    std::optional<Label> value_label;
};

struct SubcommandSpec {
    std::vector<std::string> path;  // {"cache", "clean"}
    Label label;                    // attached to the last word of the path
    std::optional<Label> positional_label;
};

struct CommandSchema {
    std::vector<std::string> names;
    Label label;
    std::vector<FlagSpec> flags;
    std::vector<SubcommandSpec> subcommands;
    std::optional<Label> positional_label;  // used when there are no subcommands
    /// Label for the command word when no subcommand is given (bare `yarn`).
    std::optional<Label> default_subcommand_label;
    /// First argument is a dash-less flag cluster (`tar xzf`).
    bool bundled_first_arg = false;
    /// Only the command word is labelled (npx).
    bool annotate_only = false;

    [[nodiscard]] const FlagSpec* flag(std::string_view spelling) const;
};

/// Declarative table of supported command lines. Built once; every label is
/// resolved at construction so a typo surfaces as ConfigError at startup.
class SchemaRegistry {
public:
    static const SchemaRegistry& builtin();

    /// Schema for a command word (already unquoted), matched by exact name or
    /// by basename for absolute paths. Names containing `$` never match.
    [[nodiscard]] const CommandSchema* lookup(std::string_view command) const;
    [[nodiscard]] const std::vector<CommandSchema>& schemas() const { return schemas_; }

private:
    SchemaRegistry();
    std::vector<CommandSchema> schemas_;
};

struct WrapperResolution {
    std::optional<std::size_t> effective;  // index of the effective command word
    std::vector<std::pair<std::size_t, Label>> wrappers;
};

/// Walks wrapper commands (sudo, env, command, nice, time, nohup, exec,
/// `python -m`) and their options over a list of word values.
WrapperResolution resolve_wrapper_words(const std::vector<std::string>& words);

/// Index among the SC-WORD children of `cmd` of its effective command word.
std::optional<std::size_t> resolve_wrappers(const Tree& tree, NodeId cmd);

/// Embeds a parsed SC-SCRIPT under every RUN instruction.
UnifiedAst build_unified_ast(DockerfileAst ast);

/// Adds schema labels to every simple command under `ast.root`. Idempotent;
/// never touches text, spans or modification state.
void enrich(UnifiedAst& ast);
void enrich_subtree(Tree& tree, NodeId root);

/// Parse + build + enrich in one step.
UnifiedAst analyze_source(std::string text, std::string path = {});

/// Share of simple commands whose effective command received a label.
struct SchemaCoverage {
    std::size_t simple_commands = 0;
    std::size_t labelled = 0;
};
SchemaCoverage schema_coverage(const UnifiedAst& ast);

}  // namespace dockslim
