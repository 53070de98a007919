#include "dockslim/cli.hpp"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dockslim/analysis.hpp"
#include "dockslim/printer.hpp"

namespace dockslim {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr std::string_view kVersion = "0.1.0";

struct CommonOptions {
    std::vector<std::string> paths;
    std::string rules;
    std::string format = "text";
    bool verbose = false;
    unsigned jobs = 0;
    std::vector<std::string> globs;
    std::string substring;
};

void add_common(CLI::App& cmd, CommonOptions& o, bool with_format = true) {
    cmd.add_option("paths", o.paths, "Dockerfiles or directories to scan (default: .)");
    cmd.add_option("--rules", o.rules,
                   "Comma-separated rule names (default: $DOCKSLIM_RULES, else all rules)");
    if (with_format) {
        cmd.add_option("--format", o.format, "Report format")
            ->check(CLI::IsMember({"text", "json"}));
    }
    cmd.add_flag("-v,--verbose", o.verbose, "Also print parse warnings and unverifiable notes");
    cmd.add_option("-j,--jobs", o.jobs, "Worker threads (default: hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--glob", o.globs,
                   "File name pattern used when walking directories (repeatable; default: "
                   "Dockerfile, *.Dockerfile, Dockerfile.*)");
    cmd.add_option("--substring", o.substring,
                   "Take every file whose name contains this string instead of using globs");
}

RuleSet resolve_rules(const CommonOptions& o) {
    if (!o.rules.empty()) {
        return parse_rule_list(o.rules);
    }
    if (const char* env = std::getenv("DOCKSLIM_RULES"); env != nullptr && *env != '\0') {
        return parse_rule_list(env);
    }
    return all_rule_set();
}

unsigned resolve_jobs(const CommonOptions& o) {
    if (o.jobs > 0) {
        return o.jobs;
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

DiscoveryOptions discovery_options(const CommonOptions& o) {
    DiscoveryOptions d;
    if (!o.globs.empty()) {
        d.globs = o.globs;
    }
    if (!o.substring.empty()) {
        d.substring = o.substring;
    }
    return d;
}

struct Job {
    DiscoveredFile file;
    std::optional<std::string> error;
};

std::vector<Job> collect(const CommonOptions& o) {
    const std::vector<std::string> paths = o.paths.empty() ? std::vector<std::string>{"."} : o.paths;
    std::vector<std::pair<std::string, std::string>> errors;
    std::vector<Job> jobs;
    for (auto& f : discover(paths, discovery_options(o), errors)) {
        jobs.push_back({std::move(f), std::nullopt});
    }
    for (auto& [path, msg] : errors) {
        jobs.push_back({{path, {}}, msg});
    }
    std::sort(jobs.begin(), jobs.end(),
              [](const Job& a, const Job& b) { return a.file.path < b.file.path; });
    return jobs;
}

template <typename Fn>
std::vector<FileReport> process(const std::vector<Job>& jobs, unsigned threads, Fn run) {
    return parallel_map<FileReport>(jobs.size(), threads, [&](std::size_t i) {
        const Job& j = jobs[i];
        if (j.error) {
            FileReport r;
            r.path = j.file.path.string();
            r.error = j.error;
            return r;
        }
        std::string error;
        auto text = read_file(j.file.path, error);
        if (!text) {
            FileReport r;
            r.path = j.file.path.string();
            r.error = error;
            return r;
        }
        return run(std::move(*text), j.file.path.string());
    });
}

ordered_json diagnostic_json(const SmellDiagnostic& d) {
    ordered_json j{{"rule", rule_name(d.rule)}, {"path", d.path},       {"line", d.line()},
                   {"column", d.column()},      {"message", d.message}, {"fixable", d.fixable}};
    if (!d.fixable) {
        j["reason"] = d.not_fixable_reason;
    }
    return j;
}

ordered_json file_json(const FileReport& r, bool verbose) {
    ordered_json j{{"path", r.path}, {"status", parse_status_name(r.status)}};
    if (r.error) {
        j["status"] = "error";
        j["error"] = *r.error;
    }
    ordered_json diags = ordered_json::array();
    for (const auto& d : r.diagnostics) {
        diags.push_back(diagnostic_json(d));
    }
    j["diagnostics"] = diags;
    if (verbose) {
        ordered_json notes = ordered_json::array();
        for (const auto& n : r.notes) {
            notes.push_back({{"rule", rule_name(n.rule)},
                             {"line", n.span.start_line},
                             {"column", n.span.start_col},
                             {"message", n.message}});
        }
        j["notes"] = notes;
        ordered_json warnings = ordered_json::array();
        for (const auto& w : r.warnings) {
            ordered_json wj{{"message", w.message}};
            if (w.span) {
                wj["line"] = w.span->start_line;
                wj["column"] = w.span->start_col;
            }
            warnings.push_back(wj);
        }
        j["warnings"] = warnings;
    }
    return j;
}

void print_file_problems(std::ostream& out, const FileReport& r, bool verbose) {
    if (r.error) {
        out << r.path << ": error: " << *r.error << '\n';
        return;
    }
    if (r.status == ParseStatus::FailedSoft) {
        out << r.path << ": error: not a parseable Dockerfile\n";
    }
    if (verbose) {
        if (r.status == ParseStatus::Partial) {
            out << r.path << ": note: parsed partially\n";
        }
        for (const auto& w : r.warnings) {
            out << r.path;
            if (w.span) {
                out << ':' << w.span->start_line << ':' << w.span->start_col;
            }
            out << ": warning: " << w.message << '\n';
        }
        for (const auto& n : r.notes) {
            out << r.path << ':' << n.span.start_line << ':' << n.span.start_col
                << ": note: " << rule_name(n.rule) << ": " << n.message << '\n';
        }
    }
}

void print_diagnostic(std::ostream& out, const SmellDiagnostic& d) {
    out << d.path << ':' << d.line() << ':' << d.column() << ": " << rule_name(d.rule) << ": "
        << d.message;
    if (d.fixable) {
        out << " [fixable]";
    } else {
        out << " [not fixable: " << d.not_fixable_reason << "]";
    }
    out << '\n';
}

// temp file + rename
bool write_file(const fs::path& p, std::string_view content, std::string& error) {
    std::error_code ec;
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path(), ec);
        if (ec) {
            error = ec.message();
            return false;
        }
    }
    fs::path tmp = p;
    tmp += ".dockslim-tmp";
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        if (!o) {
            error = std::strerror(errno);
            return false;
        }
        o.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!o) {
            error = "write failed";
            return false;
        }
    }
    fs::rename(tmp, p, ec);
    if (ec) {
        fs::remove(tmp, ec);
        error = "rename failed";
        return false;
    }
    return true;
}

class ReportSink {
public:
    ReportSink(std::ostream& out, const std::string& path) : out_(&out) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw ConfigError("cannot open output file '" + path + "'");
            }
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

int cmd_lint(const CommonOptions& o, const std::string& output, std::ostream& out) {
    const RuleSet rules = resolve_rules(o);
    const auto jobs = collect(o);
    const auto reports = process(jobs, resolve_jobs(o), [&](std::string text, std::string path) {
        return lint_text(std::move(text), std::move(path), rules);
    });
    ReportSink sink(out, output);
    std::ostream& os = sink.stream();
    bool failed = false;
    std::size_t total = 0;
    std::size_t smelly = 0;
    for (const auto& r : reports) {
        failed = failed || r.failed();
        total += r.diagnostics.size();
        smelly += r.diagnostics.empty() ? 0 : 1;
    }
    if (o.format == "json") {
        ordered_json files = ordered_json::array();
        for (const auto& r : reports) {
            files.push_back(file_json(r, o.verbose));
        }
        ordered_json j{{"files", files},
                       {"summary",
                        {{"files", reports.size()},
                         {"files_with_smell", smelly},
                         {"diagnostics", total}}}};
        os << j.dump(2) << '\n';
    } else {
        for (const auto& r : reports) {
            print_file_problems(os, r, o.verbose);
            for (const auto& d : r.diagnostics) {
                print_diagnostic(os, d);
            }
        }
        os << total << (total == 1 ? " smell" : " smells") << " in " << smelly
           << (smelly == 1 ? " file" : " files") << " (" << reports.size() << " scanned)\n";
    }
    if (failed) {
        return 2;
    }
    return total > 0 ? 1 : 0;
}

struct FixOptions {
    bool in_place = false;
    bool diff = false;
    std::string output_dir;
    int unified = 3;
};

int cmd_fix(const CommonOptions& o, const FixOptions& f, std::ostream& out, std::ostream& err) {
    const RuleSet rules = resolve_rules(o);
    const auto jobs = collect(o);
    auto reports = process(jobs, resolve_jobs(o), [&](std::string text, std::string path) {
        return fix_text(std::move(text), std::move(path), rules);
    });

    bool failed = false;
    bool residual = false;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        FileReport& r = reports[i];
        if (r.failed()) {
            failed = true;
            continue;
        }
        residual = residual || !r.residual.empty();
        std::string error;
        if (f.in_place && r.changed() && !write_file(jobs[i].file.path, r.output, error)) {
            r.error = "cannot write: " + error;
            failed = true;
        }
        if (!f.output_dir.empty()) {
            const fs::path rel = jobs[i].file.path.lexically_relative(jobs[i].file.root);
            const fs::path target = fs::path(f.output_dir) /
                                    (rel.empty() || *rel.begin() == ".." ? jobs[i].file.path.filename() : rel);
            if (!write_file(target, r.output, error)) {
                r.error = "cannot write " + target.string() + ": " + error;
                failed = true;
            }
        }
    }

    const bool to_stdout_diff = !f.in_place && f.output_dir.empty();
    if (o.format == "json") {
        ordered_json files = ordered_json::array();
        for (const auto& r : reports) {
            ordered_json j = file_json(r, o.verbose);
            ordered_json repairs = ordered_json::array();
            for (std::size_t k = 0; k < r.repairs.size(); ++k) {
                const auto& rep = r.repairs[k];
                ordered_json rj{{"rule", rule_name(rep.rule)},
                                {"line", rep.span.start_line},
                                {"status", repair_status_name(rep.status)}};
                if (!rep.reason.empty()) {
                    rj["reason"] = rep.reason;
                }
                if (!rep.note.empty()) {
                    rj["note"] = rep.note;
                }
                repairs.push_back(rj);
            }
            j["repairs"] = repairs;
            ordered_json res = ordered_json::array();
            for (const auto& d : r.residual) {
                res.push_back(diagnostic_json(d));
            }
            j["residual"] = res;
            j["changed"] = r.changed();
            if (to_stdout_diff) {
                j["diff"] = unified_diff(r.original, r.output, "a/" + r.path, "b/" + r.path, f.unified);
            }
            files.push_back(j);
        }
        out << ordered_json{{"files", files}}.dump(2) << '\n';
    } else {
        for (const auto& r : reports) {
            print_file_problems(err, r, o.verbose);
            if (r.failed()) {
                continue;
            }
            if (to_stdout_diff) {
                out << unified_diff(r.original, r.output, "a/" + r.path, "b/" + r.path, f.unified);
            }
            std::size_t applied = 0;
            std::size_t rolled_back = 0;
            std::size_t not_fixable = 0;
            for (std::size_t k = 0; k < r.repairs.size(); ++k) {
                const auto& rep = r.repairs[k];
                switch (rep.status) {
                    case RepairStatus::Applied: ++applied; break;
                    case RepairStatus::RolledBack: ++rolled_back; break;
                    case RepairStatus::NotFixable: ++not_fixable; break;
                }
                if (rep.status != RepairStatus::Applied) {
                    err << r.path << ':' << rep.span.start_line << ':' << rep.span.start_col << ": "
                        << rule_name(rep.rule) << ": " << repair_status_name(rep.status) << " ("
                        << rep.reason << ")\n";
                }
            }
            if (!r.repairs.empty()) {
                err << r.path << ": " << applied << " applied, " << rolled_back << " rolled back, "
                    << not_fixable << " not fixable\n";
            }
        }
    }
    if (failed) {
        return 2;
    }
    return residual ? 1 : 0;
}

int cmd_stats(const CommonOptions& o, std::ostream& out, std::ostream& err) {
    const RuleSet rules = resolve_rules(o);
    const auto jobs = collect(o);
    std::vector<StatsInput> inputs;
    bool failed = false;
    for (const auto& j : jobs) {
        if (j.error) {
            err << j.file.path.string() << ": error: " << *j.error << '\n';
            failed = true;
            continue;
        }
        std::string error;
        auto text = read_file(j.file.path, error);
        if (!text) {
            err << j.file.path.string() << ": error: " << error << '\n';
            failed = true;
            continue;
        }
        inputs.push_back({j.file.path.string(), std::move(*text)});
    }
    const CorpusStats st = compute_stats(inputs, rules, resolve_jobs(o));
    out << (o.format == "json" ? format_stats_json(st) : format_stats_table(st));
    return failed ? 2 : 0;
}

int cmd_rules(const std::string& format, std::ostream& out) {
    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (RuleId id : all_rules()) {
            const RuleInfo& i = rule_info(id);
            ordered_json aliases = ordered_json::array();
            for (auto a : i.aliases) {
                aliases.push_back(a);
            }
            arr.push_back({{"rule", i.name},
                           {"aliases", aliases},
                           {"message", i.message},
                           {"fixable", true},
                           {"repair", i.repair_summary}});
        }
        out << arr.dump(2) << '\n';
        return 0;
    }
    for (RuleId id : all_rules()) {
        const RuleInfo& i = rule_info(id);
        out << i.name;
        for (auto a : i.aliases) {
            out << " (alias " << a << ')';
        }
        out << "\n    " << i.message << "\n    fix: " << i.repair_summary << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Detects and repairs Dockerfile smells that inflate image size", "dockslim"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    CommonOptions lint_o;
    std::string lint_output;
    auto* lint = app.add_subcommand("lint", "Report smells");
    add_common(*lint, lint_o);
    lint->add_option("-o,--output", lint_output, "Write the report to a file instead of stdout");

    CommonOptions fix_o;
    FixOptions fix_f;
    auto* fix = app.add_subcommand("fix", "Repair smells (prints a unified diff by default)");
    add_common(*fix, fix_o);
    auto* in_place = fix->add_flag("-i,--in-place", fix_f.in_place, "Rewrite files in place");
    auto* diff = fix->add_flag("--diff", fix_f.diff, "Print a unified diff to stdout (default)");
    auto* out_dir = fix->add_option("--output-dir", fix_f.output_dir,
                                    "Write repaired copies under this directory");
    in_place->excludes(diff)->excludes(out_dir);
    diff->excludes(out_dir);
    fix->add_option("-U,--unified", fix_f.unified, "Context lines in diffs")
        ->check(CLI::NonNegativeNumber);

    CommonOptions stats_o;
    auto* stats = app.add_subcommand("stats", "Per-rule counts before and after repair for a corpus");
    add_common(*stats, stats_o);

    std::string rules_format = "text";
    auto* rules = app.add_subcommand("rules", "List the supported rules");
    rules->add_option("--format", rules_format)->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        validate_rule_patterns();
        if (lint->parsed()) {
            return cmd_lint(lint_o, lint_output, out);
        }
        if (fix->parsed()) {
            return cmd_fix(fix_o, fix_f, out, err);
        }
        if (stats->parsed()) {
            return cmd_stats(stats_o, out, err);
        }
        return cmd_rules(rules_format, out);
    } catch (const ConfigError& e) {
        err << "dockslim: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "dockslim: internal error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace dockslim
