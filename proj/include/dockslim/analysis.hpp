#pragma once

// Per-file lint/fix pipelines, file discovery and corpus statistics.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dockslim/detail/parallel.hpp"
#include "dockslim/rules.hpp"

namespace dockslim {

struct FileReport {
    std::string path;
    ParseStatus status = ParseStatus::Ok;
    std::optional<std::string> error;  // I/O problems
    std::vector<ParseWarning> warnings;
    std::vector<SmellDiagnostic> diagnostics;
    std::vector<DetectionNote> notes;
    std::vector<RepairOutcome> repairs;     // fix mode
    std::vector<SmellDiagnostic> residual;  // fix mode, from a reparse of `output`
    std::string original;
    std::string output;  // fix mode; equals original when nothing changed

    [[nodiscard]] bool failed() const { return error.has_value() || status == ParseStatus::FailedSoft; }
    [[nodiscard]] bool changed() const { return output != original; }
};

FileReport lint_text(std::string text, std::string path, const RuleSet& rules);
/// Runs the fix loop, then reparses the output to compute the residual.
FileReport fix_text(std::string text, std::string path, const RuleSet& rules,
                    const RepairFn& repair_fn = {});

std::optional<std::string> read_file(const std::filesystem::path& p, std::string& error);

struct DiscoveryOptions {
    std::vector<std::string> globs{"Dockerfile", "*.Dockerfile", "Dockerfile.*"};
    /// When set, any file whose name contains this string is taken instead.
    std::optional<std::string> substring;
};

struct DiscoveredFile {
    std::filesystem::path path;
    std::filesystem::path root;  // directory argument it was found under (or its parent)
};

bool is_dockerfile_name(const std::string& name, const DiscoveryOptions& opts);

/// Explicit files are always kept; directories are walked recursively.
/// Missing paths are reported through `errors` (one entry per path).
std::vector<DiscoveredFile> discover(const std::vector<std::string>& paths,
                                     const DiscoveryOptions& opts,
                                     std::vector<std::pair<std::string, std::string>>& errors);

struct RuleCount {
    std::size_t occurrences = 0;
    std::size_t files = 0;
};

struct CorpusStats {
    std::array<RuleCount, kRuleCount> before{};
    std::array<RuleCount, kRuleCount> after{};
    std::size_t files_scanned = 0;
    std::size_t duplicates = 0;
    std::size_t unique_files = 0;
    std::size_t failed_soft = 0;
    std::size_t files_with_smell_before = 0;
    std::size_t files_with_smell_after = 0;

    [[nodiscard]] RuleCount total_before() const;
    [[nodiscard]] RuleCount total_after() const;
};

struct StatsInput {
    std::string path;
    std::string text;
};

/// Deduplicates byte-identical inputs, then lints and fixes each unique file.
CorpusStats compute_stats(const std::vector<StatsInput>& files, const RuleSet& rules, unsigned jobs = 1);

/// Two-level header table: "# Docker Smell" and "# Dockerfile with Smell",
/// each split into "Before Repair" and "After Repaired".
std::string format_stats_table(const CorpusStats& stats);
std::string format_stats_json(const CorpusStats& stats);

}  // namespace dockslim
