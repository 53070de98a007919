#pragma once

// The size-related smells: detection queries, repairs, and the
// verify-or-rollback fix loop.

#include <bitset>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dockslim/dockerfile_parser.hpp"
#include "dockslim/query.hpp"

namespace dockslim {

enum class RuleId : std::uint8_t {
    PipUseNoCacheDir,
    NpmCacheCleanUseForce,
    MkdirUsrSrcThenRemove,
    RmRecursiveAfterMktempD,
    TarSomethingRmTheSomething,
    ApkAddUseNoCache,
    AptGetInstallUseNoRec,
    AptGetInstallThenRemoveAptLists,
    GpgVerifyAscRmAsc,
    NpmCacheCleanAfterInstall,
    GemUpdateSystemRmRootGem,
    GemUpdateNoDocument,
    YumInstallRmVarCacheYum,
    YarnCacheCleanAfterInstall,
};
inline constexpr std::size_t kRuleCount = 14;

using RuleSet = std::bitset<kRuleCount>;

enum class RepairKind { AddFlag, TrailingCleanup, AdjacentCleanup, PrependStatement };

struct RuleInfo {
    RuleId id;
    std::string_view name;
    std::vector<std::string_view> aliases;
    std::string_view message;
    RepairKind repair;
    std::string_view repair_summary;
};

const std::vector<RuleId>& all_rules();
const RuleInfo& rule_info(RuleId id);
std::string_view rule_name(RuleId id);
/// Accepts canonical names and aliases, case-sensitively.
std::optional<RuleId> rule_from_name(std::string_view name);
RuleSet all_rule_set();
/// Comma-separated names; throws ConfigError on unknown names. Empty input
/// selects every rule.
RuleSet parse_rule_list(std::string_view list);

/// Builds every detection pattern once so that label typos fail at startup.
void validate_rule_patterns();

struct SmellDiagnostic {
    RuleId rule;
    std::string path;
    SourceSpan span;  // anchor span (statement or instruction when the anchor is synthesized)
    Match anchor;
    NodeId instruction;  // enclosing DOCKER-RUN
    std::string message;
    bool fixable = false;
    std::string not_fixable_reason;

    [[nodiscard]] std::size_t line() const { return span.start_line; }
    [[nodiscard]] std::size_t column() const { return span.start_col; }
};

/// Detection suppressed because a path holds an unresolved variable.
struct DetectionNote {
    RuleId rule;
    SourceSpan span;
    std::string message;
};

struct DetectResult {
    std::vector<SmellDiagnostic> diagnostics;
    std::vector<DetectionNote> notes;
};

DetectResult detect_all(const UnifiedAst& ast, const RuleSet& rules);
std::vector<SmellDiagnostic> detect(const UnifiedAst& ast, const RuleSet& rules);

enum class RepairStatus { Applied, RolledBack, NotFixable };
std::string_view repair_status_name(RepairStatus status);

struct RepairEdit {
    enum class Kind { Inserted, Wrapped } kind;
    NodeId node;
    NodeId parent;
    std::size_t position;
    std::string text;  // canonical rendering of the inserted node
};

struct RepairOutcome {
    RuleId rule;
    RepairStatus status = RepairStatus::NotFixable;
    std::vector<RepairEdit> edits;
    std::string reason;  // set unless applied
    std::string note;
    SourceSpan span;
    std::shared_ptr<const Tree> snapshot;  // tree before the edit, for rollback
};

RepairOutcome repair(UnifiedAst& ast, const SmellDiagnostic& d);
RepairOutcome verify_or_rollback(UnifiedAst& ast, const SmellDiagnostic& d, RepairOutcome o);

using RepairFn = std::function<RepairOutcome(UnifiedAst&, const SmellDiagnostic&)>;

struct FixResult {
    std::vector<SmellDiagnostic> diagnostics;  // before repair
    std::vector<RepairOutcome> outcomes;       // one per diagnostic, same order
    std::string output;                        // reprinted file
};

/// detect -> repair -> verify for each diagnostic in document order. The
/// repair function can be replaced (tests use this to force rollbacks).
FixResult fix(UnifiedAst& ast, const RuleSet& rules, const RepairFn& repair_fn = {});

/// Parses `shell` and copies its single top statement into `tree` as
/// synthesized (spanless) nodes.
NodeId synthesize_statement(Tree& tree, std::string_view shell);

}  // namespace dockslim
