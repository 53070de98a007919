#include "dockslim/analysis.hpp"

#include <fnmatch.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "dockslim/enrichment.hpp"

namespace dockslim {

namespace fs = std::filesystem;

FileReport lint_text(std::string text, std::string path, const RuleSet& rules) {
    FileReport r;
    r.path = path;
    r.original = text;
    r.output = text;
    UnifiedAst ast = analyze_source(std::move(text), std::move(path));
    r.status = parse_status(ast);
    r.warnings = ast.warnings;
    if (r.status == ParseStatus::FailedSoft) {
        return r;
    }
    DetectResult d = detect_all(ast, rules);
    r.diagnostics = std::move(d.diagnostics);
    r.notes = std::move(d.notes);
    return r;
}

FileReport fix_text(std::string text, std::string path, const RuleSet& rules,
                    const RepairFn& repair_fn) {
    FileReport r;
    r.path = path;
    r.original = text;
    r.output = text;
    UnifiedAst ast = analyze_source(std::move(text), path);
    r.status = parse_status(ast);
    r.warnings = ast.warnings;
    if (r.status == ParseStatus::FailedSoft) {
        return r;
    }
    r.notes = detect_all(ast, rules).notes;
    FixResult fixed = fix(ast, rules, repair_fn);
    r.diagnostics = std::move(fixed.diagnostics);
    r.repairs = std::move(fixed.outcomes);
    r.output = std::move(fixed.output);
    // Residual comes from the printed text, not from the repaired tree.
    const UnifiedAst reparsed = analyze_source(r.output, path);
    r.residual = detect(reparsed, rules);
    return r;
}

std::optional<std::string> read_file(const fs::path& p, std::string& error) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        error = std::strerror(errno);
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        error = "read error";
        return std::nullopt;
    }
    return std::move(ss).str();
}

bool is_dockerfile_name(const std::string& name, const DiscoveryOptions& opts) {
    if (opts.substring) {
        return name.find(*opts.substring) != std::string::npos;
    }
    for (const auto& g : opts.globs) {
        if (fnmatch(g.c_str(), name.c_str(), 0) == 0) {
            return true;
        }
    }
    return false;
}

std::vector<DiscoveredFile> discover(const std::vector<std::string>& paths,
                                     const DiscoveryOptions& opts,
                                     std::vector<std::pair<std::string, std::string>>& errors) {
    std::vector<DiscoveredFile> out;
    std::set<std::string> seen;
    auto add = [&](const fs::path& p, const fs::path& root) {
        if (seen.insert(p.lexically_normal().string()).second) {
            out.push_back({p, root});
        }
    };
    for (const auto& arg : paths) {
        const fs::path p(arg);
        std::error_code ec;
        const auto st = fs::status(p, ec);
        if (ec || !fs::exists(st)) {
            errors.emplace_back(arg, ec ? ec.message() : "no such file or directory");
            continue;
        }
        if (!fs::is_directory(st)) {
            add(p, p.parent_path());
            continue;
        }
        fs::recursive_directory_iterator it(p, fs::directory_options::skip_permission_denied, ec);
        if (ec) {
            errors.emplace_back(arg, ec.message());
            continue;
        }
        for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
            if (ec) {
                errors.emplace_back(it->path().string(), ec.message());
                break;
            }
            std::error_code fec;
            if (it->is_regular_file(fec) && is_dockerfile_name(it->path().filename().string(), opts)) {
                add(it->path(), p);
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const DiscoveredFile& a, const DiscoveredFile& b) { return a.path < b.path; });
    return out;
}

namespace {

RuleCount sum(const std::array<RuleCount, kRuleCount>& counts) {
    RuleCount t;
    for (const auto& c : counts) {
        t.occurrences += c.occurrences;
        t.files += c.files;
    }
    return t;
}

void tally(std::array<RuleCount, kRuleCount>& counts, const std::vector<SmellDiagnostic>& diags) {
    std::array<std::size_t, kRuleCount> per_file{};
    for (const auto& d : diags) {
        ++per_file[static_cast<std::size_t>(d.rule)];
    }
    for (std::size_t i = 0; i < kRuleCount; ++i) {
        counts[i].occurrences += per_file[i];
        counts[i].files += per_file[i] > 0 ? 1 : 0;
    }
}

std::string cell(std::size_t n, std::size_t total) {
    std::ostringstream s;
    s << n;
    if (total > 0) {
        s << " (" << std::fixed << std::setprecision(1)
          << 100.0 * static_cast<double>(n) / static_cast<double>(total) << "%)";
    }
    return s.str();
}

}  // namespace

RuleCount CorpusStats::total_before() const { return sum(before); }
RuleCount CorpusStats::total_after() const { return sum(after); }

CorpusStats compute_stats(const std::vector<StatsInput>& files, const RuleSet& rules, unsigned jobs) {
    CorpusStats st;
    st.files_scanned = files.size();
    std::vector<std::size_t> unique;
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash;
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto& bucket = by_hash[std::hash<std::string>{}(files[i].text)];
        const bool dup = std::any_of(bucket.begin(), bucket.end(),
                                     [&](std::size_t j) { return files[j].text == files[i].text; });
        if (dup) {
            ++st.duplicates;
            continue;
        }
        bucket.push_back(i);
        unique.push_back(i);
    }
    st.unique_files = unique.size();

    const auto reports = parallel_map<FileReport>(unique.size(), jobs, [&](std::size_t k) {
        const auto& f = files[unique[k]];
        return fix_text(f.text, f.path, rules);
    });
    for (const auto& r : reports) {
        if (r.failed()) {
            ++st.failed_soft;
            continue;
        }
        tally(st.before, r.diagnostics);
        tally(st.after, r.residual);
        st.files_with_smell_before += r.diagnostics.empty() ? 0 : 1;
        st.files_with_smell_after += r.residual.empty() ? 0 : 1;
    }
    return st;
}

std::string format_stats_table(const CorpusStats& st) {
    constexpr int kName = 33;
    constexpr int kCol = 16;
    const RuleCount tb = st.total_before();
    const RuleCount ta = st.total_after();
    std::ostringstream out;
    auto row = [&](std::string_view name, const std::array<std::string, 4>& cols) {
        out << std::left << std::setw(kName) << name;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            out << (i == 2 ? " | " : " ") << std::right << std::setw(kCol) << cols[i];
        }
        out << '\n';
    };
    out << std::left << std::setw(kName) << "Docker Smell" << ' ' << std::right
        << std::setw(2 * kCol + 1) << "# Docker Smell" << " | " << std::setw(2 * kCol + 1)
        << "# Dockerfile with Smell" << '\n';
    row("", {"Before Repair", "After Repaired", "Before Repair", "After Repaired"});
    const std::string rule_line(kName + 4 * (kCol + 1) + 2, '-');
    out << rule_line << '\n';
    for (RuleId id : all_rules()) {
        const std::size_t i = static_cast<std::size_t>(id);
        row(rule_name(id), {cell(st.before[i].occurrences, tb.occurrences),
                            cell(st.after[i].occurrences, ta.occurrences),
                            cell(st.before[i].files, tb.files), cell(st.after[i].files, ta.files)});
    }
    out << rule_line << '\n';
    row("Total", {std::to_string(tb.occurrences), std::to_string(ta.occurrences),
                  std::to_string(tb.files), std::to_string(ta.files)});
    out << '\n';
    out << "Files scanned: " << st.files_scanned << " (unique: " << st.unique_files
        << ", duplicates: " << st.duplicates << ", failed-soft: " << st.failed_soft << ")\n";
    out << "Dockerfiles with at least one smell: " << st.files_with_smell_before
        << " before repair, " << st.files_with_smell_after << " after\n";
    return out.str();
}

std::string format_stats_json(const CorpusStats& st) {
    using nlohmann::ordered_json;
    auto counts = [](const RuleCount& c) {
        return ordered_json{{"occurrences", c.occurrences}, {"files", c.files}};
    };
    ordered_json rules = ordered_json::array();
    for (RuleId id : all_rules()) {
        const std::size_t i = static_cast<std::size_t>(id);
        rules.push_back({{"rule", rule_name(id)},
                         {"before", counts(st.before[i])},
                         {"after", counts(st.after[i])}});
    }
    ordered_json j{
        {"rules", rules},
        {"total", {{"before", counts(st.total_before())}, {"after", counts(st.total_after())}}},
        {"files_scanned", st.files_scanned},
        {"unique_files", st.unique_files},
        {"duplicates", st.duplicates},
        {"failed_soft", st.failed_soft},
        {"files_with_smell", {{"before", st.files_with_smell_before},
                              {"after", st.files_with_smell_after}}},
    };
    return j.dump(2) + "\n";
}

}  // namespace dockslim
