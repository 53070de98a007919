#include "dockslim/dockerfile_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>

#include <json.hpp>

namespace dockslim {

std::string_view parse_status_name(ParseStatus status) {
    switch (status) {
        case ParseStatus::Ok: return "ok";
        case ParseStatus::Partial: return "partial";
        case ParseStatus::FailedSoft: return "failed-soft";
    }
    return "?";
}

bool is_valid_utf8(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        const auto c = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        }
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > text.size()) {
            return false;
        }
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xC0) != 0x80) {
                return false;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        static constexpr std::array<std::uint32_t, 5> kMin = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            return false;
        }
        i += len;
    }
    return true;
}

std::vector<NodeId> DockerfileAst::instructions() const {
    std::vector<NodeId> out;
    for (NodeId c : tree[root].children) {
        if (is_instruction_kind(tree[c].kind)) {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<std::vector<NodeId>> DockerfileAst::stages() const {
    std::vector<std::vector<NodeId>> out;
    for (NodeId c : instructions()) {
        if (tree[c].kind == NodeKind::DockerFrom) {
            out.emplace_back();
        }
        if (!out.empty()) {
            out.back().push_back(c);
        }
    }
    return out;
}

ParseStatus parse_status(const DockerfileAst& ast) {
    if (ast.has_nul) {
        return ParseStatus::FailedSoft;
    }
    bool recognised = false;
    bool unknown = false;
    for (NodeId c : ast.tree[ast.root].children) {
        const NodeKind k = ast.tree[c].kind;
        if (k == NodeKind::DockerUnknown) {
            unknown = true;
        } else if (is_instruction_kind(k)) {
            recognised = true;
        }
    }
    if (unknown && !recognised) {
        return ParseStatus::FailedSoft;
    }
    bool unparsed = false;
    ast.tree.walk(ast.root, [&](NodeId id) {
        unparsed = unparsed || ast.tree[id].kind == NodeKind::ShUnparsed;
        return !unparsed;
    });
    if (unknown || unparsed || ast.invalid_utf8) {
        return ParseStatus::Partial;
    }
    return ParseStatus::Ok;
}

namespace {

struct Keyword {
    std::string_view name;
    NodeKind kind;
    bool takes_flags;
    bool exec_form;
    bool heredoc;
};

constexpr std::array<Keyword, 18> kKeywords{{
    {"FROM", NodeKind::DockerFrom, true, false, false},
    {"RUN", NodeKind::DockerRun, true, true, true},
    {"COPY", NodeKind::DockerCopy, true, false, true},
    {"ADD", NodeKind::DockerAdd, true, false, true},
    {"ENV", NodeKind::DockerEnv, false, false, false},
    {"ARG", NodeKind::DockerArg, false, false, false},
    {"WORKDIR", NodeKind::DockerWorkdir, false, false, false},
    {"EXPOSE", NodeKind::DockerExpose, false, false, false},
    {"ENTRYPOINT", NodeKind::DockerEntrypoint, false, true, false},
    {"CMD", NodeKind::DockerCmd, false, true, false},
    {"LABEL", NodeKind::DockerLabel, false, false, false},
    {"USER", NodeKind::DockerUser, false, false, false},
    {"VOLUME", NodeKind::DockerVolume, false, false, false},
    {"SHELL", NodeKind::DockerShell, false, true, false},
    {"HEALTHCHECK", NodeKind::DockerHealthcheck, true, false, false},
    {"ONBUILD", NodeKind::DockerOnbuild, false, false, false},
    {"STOPSIGNAL", NodeKind::DockerStopsignal, false, false, false},
    {"MAINTAINER", NodeKind::DockerMaintainer, false, false, false},
}};

const Keyword* find_keyword(std::string_view word) {
    std::string upper(word);
    for (char& c : upper) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    for (const auto& k : kKeywords) {
        if (k.name == upper) {
            return &k;
        }
    }
    return nullptr;
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

struct HeredocMarker {
    std::string name;
    bool strip_tabs = false;
};

class DockerfileParser {
public:
    explicit DockerfileParser(DockerfileAst& ast)
        : ast_(ast), text_(ast.source), lines_(ast.source), n_(ast.source.size()) {}

    void run() {
        Tree& t = ast_.tree;
        ast_.root = t.create(NodeKind::DockerFile, lines_.span(0, n_));
        std::size_t pos = 0;
        if (text_.substr(0, 3) == "\xEF\xBB\xBF") {
            pos = 3;
        }
        bool directives_allowed = true;
        bool any_instruction = false;
        while (pos < n_) {
            const std::size_t le = line_end(pos);
            std::size_t first = pos;
            while (first < le && is_blank(text_[first])) {
                ++first;
            }
            if (first == le) {
                directives_allowed = false;
                pos = le + 1;
                continue;
            }
            if (text_[first] == '#') {
                const std::size_t stop = trim_end(first, le);
                const NodeId c = t.create(NodeKind::DockerComment, lines_.span(first, stop));
                t.at(c).text = std::string(text_.substr(first, stop - first));
                if (directives_allowed && apply_directive(c)) {
                    t.at(c).set(NodeFlag::Directive);
                } else {
                    directives_allowed = false;
                }
                t.append_child(ast_.root, c);
                pos = le + 1;
                continue;
            }
            directives_allowed = false;
            any_instruction = true;
            pos = parse_instruction(first);
        }
        if (!any_instruction) {
            ast_.warnings.push_back({"no instructions found", std::nullopt});
        }
    }

private:
    DockerfileAst& ast_;
    std::string_view text_;
    LineIndex lines_;
    std::size_t n_;

    [[nodiscard]] std::size_t line_end(std::size_t pos) const {
        const std::size_t nl = text_.find('\n', pos);
        return nl == std::string_view::npos ? n_ : nl;
    }

    [[nodiscard]] std::size_t trim_end(std::size_t lo, std::size_t hi) const {
        while (hi > lo && is_blank(text_[hi - 1])) {
            --hi;
        }
        return hi;
    }

    [[nodiscard]] char esc() const { return ast_.escape; }

    // `# key=value` at the top of the file.
    bool apply_directive(NodeId comment) {
        std::string_view body = std::string_view(ast_.tree[comment].text).substr(1);
        const std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) {
            return false;
        }
        auto trim = [](std::string_view s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) {
                s.remove_prefix(1);
            }
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) {
                s.remove_suffix(1);
            }
            return s;
        };
        const std::string key = lower(trim(body.substr(0, eq)));
        const std::string_view value = trim(body.substr(eq + 1));
        if (key != "syntax" && key != "escape" && key != "check") {
            return false;
        }
        ast_.tree.at(comment).value = key;
        if (key == "escape") {
            if (value == "`" || value == "\\") {
                ast_.escape = value.front();
            } else {
                ast_.warnings.push_back(
                    {"invalid escape directive '" + std::string(value) + "'", ast_.tree[comment].span});
            }
        }
        return true;
    }

    // True when the physical line [ls, le) ends with the escape character.
    [[nodiscard]] bool continues(std::size_t ls, std::size_t le) const {
        const std::size_t e = trim_end(ls, le);
        return e > ls && text_[e - 1] == esc();
    }

    [[nodiscard]] bool dropped_line(std::size_t ls, std::size_t le) const {
        std::size_t j = ls;
        while (j < le && is_blank(text_[j])) {
            ++j;
        }
        return j == le || text_[j] == '#';
    }

    // Skips blanks, continuations and the blank/comment lines Docker drops
    // after a continuation.
    std::size_t skip_ws(std::size_t p, std::size_t limit) const {
        for (;;) {
            while (p < limit && is_blank(text_[p])) {
                ++p;
            }
            if (p < limit && text_[p] == esc()) {
                std::size_t j = p + 1;
                while (j < limit && is_blank(text_[j])) {
                    ++j;
                }
                if (j < limit && text_[j] == '\n') {
                    p = j + 1;
                    while (p < limit) {
                        const std::size_t le = std::min(line_end(p), limit);
                        if (!dropped_line(p, le)) {
                            break;
                        }
                        p = le + 1;
                    }
                    continue;
                }
                if (j >= limit) {
                    return limit;
                }
            }
            return std::min(p, limit);
        }
    }

    // Parses the instruction whose keyword starts at `start`; returns the
    // offset of the first line after it.
    std::size_t parse_instruction(std::size_t start) {
        Tree& t = ast_.tree;
        std::size_t ls = start;
        std::size_t le = line_end(start);
        std::size_t content_end = trim_end(start, le);
        while (continues(ls, le) && le < n_) {
            std::size_t p = le + 1;
            bool found = false;
            while (p < n_) {
                const std::size_t e = line_end(p);
                if (!dropped_line(p, e)) {
                    ls = p;
                    le = e;
                    content_end = trim_end(p, e);
                    found = true;
                    break;
                }
                p = e + 1;
            }
            if (!found) {
                break;
            }
        }
        std::size_t next = le + 1;

        std::size_t kw_end = start;
        while (kw_end < content_end && !std::isspace(static_cast<unsigned char>(text_[kw_end])) &&
               text_[kw_end] != esc()) {
            ++kw_end;
        }
        if (kw_end == start) {
            kw_end = start + 1;
        }
        const std::string_view word = text_.substr(start, kw_end - start);
        const bool alpha = std::all_of(word.begin(), word.end(), [](char c) {
            return std::isalpha(static_cast<unsigned char>(c)) != 0;
        });
        const Keyword* kw = alpha ? find_keyword(word) : nullptr;

        const NodeId inst = t.create(kw ? kw->kind : NodeKind::DockerUnknown);
        const NodeId keyword = t.create(NodeKind::DockerKeyword, lines_.span(start, kw_end));
        t.at(keyword).text = std::string(word);
        t.at(keyword).value = kw ? std::string(kw->name) : std::string(word);
        t.at(inst).value = t[keyword].value;
        t.append_child(inst, keyword);

        std::size_t p = skip_ws(kw_end, content_end);
        if (kw && kw->takes_flags) {
            while (p + 1 < content_end && text_[p] == '-' && text_[p + 1] == '-') {
                std::size_t e = p;
                while (e < content_end && !std::isspace(static_cast<unsigned char>(text_[e]))) {
                    ++e;
                }
                const NodeId flag = t.create(NodeKind::DockerFlag, lines_.span(p, e));
                t.at(flag).text = std::string(text_.substr(p, e - p));
                t.at(flag).value = t[flag].text;
                t.append_child(inst, flag);
                p = skip_ws(e, content_end);
            }
        }

        if (p < content_end) {
            bool exec = false;
            if (kw && kw->exec_form && text_[p] == '[') {
                exec = parse_exec_array(inst, p, content_end);
            }
            if (!exec) {
                const NodeId args = t.create(NodeKind::DockerArgs, lines_.span(p, content_end));
                t.at(args).text = std::string(text_.substr(p, content_end - p));
                t.append_child(inst, args);
            }
        }

        std::size_t inst_end = content_end;
        if (kw && kw->heredoc) {
            const auto markers = heredoc_markers(p, content_end);
            for (const auto& marker : markers) {
                const std::size_t body_start = std::min(next, n_);
                std::size_t q = body_start;
                std::optional<std::size_t> stop;
                while (q < n_) {
                    const std::size_t e = line_end(q);
                    std::size_t b = q;
                    if (marker.strip_tabs) {
                        while (b < e && text_[b] == '\t') {
                            ++b;
                        }
                    }
                    std::size_t ee = e;
                    if (ee > b && text_[ee - 1] == '\r') {
                        --ee;
                    }
                    if (text_.substr(b, ee - b) == marker.name) {
                        stop = ee;
                        next = e + 1;
                        break;
                    }
                    q = e + 1;
                }
                std::size_t end = 0;
                if (stop) {
                    end = *stop;
                } else {
                    end = n_;
                    while (end > body_start &&
                           std::isspace(static_cast<unsigned char>(text_[end - 1])) != 0) {
                        --end;
                    }
                    next = n_;
                    ast_.warnings.push_back(
                        {"heredoc '" + marker.name + "' is not terminated", lines_.span(start, end)});
                }
                const NodeId h = t.create(NodeKind::DockerHeredoc, lines_.span(body_start, end));
                t.at(h).text = std::string(text_.substr(body_start, end - body_start));
                t.at(h).value = marker.name;
                t.append_child(inst, h);
                inst_end = end;
                if (kw->kind == NodeKind::DockerRun) {
                    t.at(inst).set(NodeFlag::Heredoc);
                }
            }
        }

        t.at(inst).span = lines_.span(start, inst_end);
        if (!kw) {
            ast_.warnings.push_back(
                {"unknown instruction '" + std::string(word) + "'", t[inst].span});
        }
        t.append_child(ast_.root, inst);
        return next;
    }

    std::vector<HeredocMarker> heredoc_markers(std::size_t p, std::size_t end) const {
        std::vector<HeredocMarker> out;
        while (p < end) {
            p = skip_ws(p, end);
            std::size_t e = p;
            while (e < end && !std::isspace(static_cast<unsigned char>(text_[e]))) {
                ++e;
            }
            if (e == p) {
                ++p;  // newline inside a continued instruction
                continue;
            }
            std::string_view tok = text_.substr(p, e - p);
            p = e;
            while (!tok.empty() && std::isdigit(static_cast<unsigned char>(tok.front())) != 0) {
                tok.remove_prefix(1);
            }
            if (tok.substr(0, 2) != "<<") {
                continue;
            }
            tok.remove_prefix(2);
            HeredocMarker m;
            if (!tok.empty() && tok.front() == '-') {
                m.strip_tabs = true;
                tok.remove_prefix(1);
            }
            if (tok.size() >= 2 && (tok.front() == '"' || tok.front() == '\'') &&
                tok.back() == tok.front()) {
                tok = tok.substr(1, tok.size() - 2);
            }
            const bool ok = !tok.empty() && std::all_of(tok.begin(), tok.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-' ||
                       c == '.';
            });
            if (ok) {
                m.name = std::string(tok);
                out.push_back(std::move(m));
            }
        }
        return out;
    }

    // JSON array of strings; on any deviation the caller falls back to
    // shell form, as Docker does.
    bool parse_exec_array(NodeId inst, std::size_t open, std::size_t end) {
        Tree& t = ast_.tree;
        struct Element {
            std::size_t b, e;
            std::string decoded;
        };
        std::vector<Element> elements;
        std::size_t q = skip_ws(open + 1, end);
        bool closed = false;
        if (q < end && text_[q] == ']') {
            closed = true;
            ++q;
        }
        while (!closed) {
            if (q >= end || text_[q] != '"') {
                return false;
            }
            std::size_t r = q + 1;
            while (r < end && text_[r] != '"') {
                if (text_[r] == '\n') {
                    return false;
                }
                r += text_[r] == '\\' ? 2 : 1;
            }
            if (r >= end) {
                return false;
            }
            std::string decoded;
            try {
                const auto j = nlohmann::json::parse(text_.substr(q, r + 1 - q));
                if (!j.is_string()) {
                    return false;
                }
                decoded = j.get<std::string>();
            } catch (const nlohmann::json::exception&) {
                return false;
            }
            elements.push_back({q, r + 1, std::move(decoded)});
            q = skip_ws(r + 1, end);
            if (q < end && text_[q] == ',') {
                q = skip_ws(q + 1, end);
                continue;
            }
            if (q < end && text_[q] == ']') {
                ++q;
                closed = true;
                break;
            }
            return false;
        }
        if (skip_ws(q, end) != end) {
            return false;
        }
        const NodeId arr = t.create(NodeKind::DockerExecArray, lines_.span(open, q));
        for (const auto& el : elements) {
            const NodeId s = t.create(NodeKind::DockerString, lines_.span(el.b, el.e));
            t.at(s).text = std::string(text_.substr(el.b, el.e - el.b));
            t.at(s).value = el.decoded;
            t.append_child(arr, s);
        }
        t.append_child(inst, arr);
        t.at(inst).set(NodeFlag::ExecForm);
        return true;
    }
};

}  // namespace

DockerfileAst parse_dockerfile(std::string text, std::string path) {
    DockerfileAst ast;
    ast.path = std::move(path);
    ast.source = std::move(text);
    ast.has_nul = ast.source.find('\0') != std::string::npos;
    if (!is_valid_utf8(ast.source)) {
        ast.invalid_utf8 = true;
        ast.warnings.push_back({"file is not valid UTF-8; bytes kept as-is", std::nullopt});
    }
    DockerfileParser parser(ast);
    parser.run();
    return ast;
}

}  // namespace dockslim
