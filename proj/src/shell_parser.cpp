#include "dockslim/shell_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>

namespace dockslim {
namespace {

// Construct outside the supported subset; the enclosing statement becomes
// SC-UNPARSED. `to_end` swallows the rest of the region (heredocs).
struct Unsupported {
    std::size_t pos;
    std::string what;
    bool to_end = false;
};

// Input the parser cannot resynchronise after (unterminated quote, ...).
struct Fatal {
    std::size_t pos;
    std::string what;
};

struct Terminators {
    bool close_paren = false;
    bool double_semi = false;
    std::vector<std::string_view> words;
};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

bool is_word_break(char c) {
    switch (c) {
        case ' ': case '\t': case '\n': case '\r': case ';': case '&':
        case '|': case '<': case '>': case '(': case ')':
            return true;
        default:
            return false;
    }
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class ShellParser {
public:
    ShellParser(Tree& tree, std::string_view src, const LineIndex& lines, std::size_t begin,
                std::size_t end, const ShellParseOptions& opts, std::vector<ParseWarning>& warnings)
        : t_(tree), src_(src), lines_(lines), begin_(begin), pos_(begin), end_(end), opts_(opts),
          warnings_(warnings) {}

    NodeId parse_script() {
        const NodeId script = make(NodeKind::ShScript, begin_, end_);
        try {
            std::optional<NodeId> top = parse_list({});
            skip_blank(true);
            if (!at_end()) {
                const std::size_t stop = trim_back(pos_, end_);
                const NodeId rest = make(NodeKind::ShUnparsed, pos_, stop, true);
                warn("unexpected '" + std::string(1, src_[pos_]) + "'", rest);
                top = top ? join_seq(*top, rest) : rest;
            }
            if (top) {
                t_.append_child(script, *top);
            }
        } catch (const Fatal& fatal) {
            std::size_t first = begin_;
            while (first < end_ && std::isspace(static_cast<unsigned char>(src_[first])) != 0) {
                ++first;
            }
            const std::size_t last = trim_back(first, end_);
            const NodeId rest = make(NodeKind::ShUnparsed, first, last, true);
            t_.append_child(script, rest);
            warn(fatal.what + "; script left unparsed", rest);
        }
        return script;
    }

    std::optional<NodeId> parse_region_list() {
        std::optional<NodeId> list = parse_list({});
        skip_blank(true);
        if (!at_end()) {
            throw Fatal{pos_, "unexpected text in command substitution"};
        }
        return list;
    }

private:
    Tree& t_;
    std::string_view src_;
    const LineIndex& lines_;
    std::size_t begin_;
    std::size_t pos_;
    std::size_t end_;
    ShellParseOptions opts_;
    std::vector<ParseWarning>& warnings_;

    // --- low level -------------------------------------------------------

    [[nodiscard]] bool at_end() const { return pos_ >= end_; }
    [[nodiscard]] char peek(std::size_t k = 0) const {
        return pos_ + k < end_ ? src_[pos_ + k] : '\0';
    }
    [[nodiscard]] bool starts_with(std::string_view s) const {
        return pos_ + s.size() <= end_ && src_.substr(pos_, s.size()) == s;
    }

    NodeId make(NodeKind kind, std::size_t b, std::size_t e, bool keep_text = false) {
        const NodeId id = t_.create(kind, lines_.span(b, e));
        if (keep_text) {
            t_.at(id).text = std::string(src_.substr(b, e - b));
        }
        return id;
    }
    void set_end(NodeId id, std::size_t e) {
        const auto b = t_[id].span->start_offset;
        t_.at(id).span = lines_.span(b, e);
    }
    [[nodiscard]] std::size_t start_of(NodeId id) const { return t_[id].span->start_offset; }
    [[nodiscard]] std::size_t end_of(NodeId id) const { return t_[id].span->end_offset; }

    void warn(std::string message, NodeId at) {
        warnings_.push_back({std::move(message), t_[at].span});
    }

    NodeId join_seq(NodeId a, NodeId b) {
        if (t_[a].kind == NodeKind::ShSeq) {
            t_.append_child(a, b);
            set_end(a, end_of(b));
            return a;
        }
        const NodeId seq = make(NodeKind::ShSeq, start_of(a), end_of(b));
        t_.append_child(seq, a);
        t_.append_child(seq, b);
        return seq;
    }

    // Length of a line continuation starting at `at`, or 0.
    [[nodiscard]] std::size_t continuation_length(std::size_t at) const {
        if (at >= end_ || src_[at] != opts_.continuation) {
            return 0;
        }
        std::size_t j = at + 1;
        if (opts_.docker_continuations) {
            while (j < end_ && is_blank(src_[j])) {
                ++j;
            }
            if (j >= end_) {
                return j - at;
            }
        } else if (j < end_ && src_[j] == '\r') {
            ++j;
        }
        if (j < end_ && src_[j] == '\n') {
            return j + 1 - at;
        }
        return 0;
    }

    // Docker drops blank and comment-only lines inside a continued instruction.
    void skip_docker_dropped_lines() {
        if (!opts_.docker_continuations) {
            return;
        }
        for (;;) {
            std::size_t j = pos_;
            while (j < end_ && is_blank(src_[j])) {
                ++j;
            }
            if (j < end_ && src_[j] == '\n') {
                pos_ = j + 1;
                continue;
            }
            if (j < end_ && src_[j] == '#') {
                while (j < end_ && src_[j] != '\n') {
                    ++j;
                }
                pos_ = std::min(j + 1, end_);
                continue;
            }
            break;
        }
    }

    [[nodiscard]] bool line_ends_with_continuation(std::size_t newline) const {
        std::size_t j = newline;
        while (j > pos_ && is_blank(src_[j - 1])) {
            --j;
        }
        return j > 0 && src_[j - 1] == opts_.continuation;
    }

    void skip_comment() {
        for (;;) {
            while (!at_end() && peek() != '\n') {
                ++pos_;
            }
            // Docker joins continued lines before the shell sees them, so a
            // comment runs on across continuations.
            if (opts_.docker_continuations && !at_end() && line_ends_with_continuation(pos_)) {
                ++pos_;
                continue;
            }
            return;
        }
    }

    void skip_blank(bool newlines) {
        while (!at_end()) {
            const char c = peek();
            if (is_blank(c)) {
                ++pos_;
            } else if (const std::size_t n = continuation_length(pos_)) {
                pos_ += n;
                skip_docker_dropped_lines();
            } else if (c == '\n' && newlines) {
                ++pos_;
            } else if (c == '#') {
                skip_comment();
            } else {
                break;
            }
        }
    }

    [[nodiscard]] std::size_t trim_back(std::size_t lo, std::size_t hi) const {
        for (;;) {
            while (hi > lo && std::isspace(static_cast<unsigned char>(src_[hi - 1])) != 0) {
                --hi;
            }
            if (hi > lo && src_[hi - 1] == opts_.continuation && hi < end_ &&
                continuation_length(hi - 1) > 0) {
                --hi;
                continue;
            }
            return hi;
        }
    }

    [[nodiscard]] bool is_break_at(std::size_t i) const {
        return i >= end_ || is_word_break(src_[i]) || continuation_length(i) > 0;
    }

    // Reserved word at the cursor, if the next token is one.
    [[nodiscard]] std::string_view peek_reserved_word() const {
        if (at_end()) {
            return {};
        }
        const char c = peek();
        if (c == '{' || c == '}' || c == '!') {
            return is_break_at(pos_ + 1) ? src_.substr(pos_, 1) : std::string_view{};
        }
        std::size_t j = pos_;
        while (j < end_ && std::isalpha(static_cast<unsigned char>(src_[j])) != 0) {
            ++j;
        }
        if (j == pos_ || !is_break_at(j)) {
            return {};
        }
        return src_.substr(pos_, j - pos_);
    }

    [[nodiscard]] bool at_terminator(const Terminators& term) const {
        if (at_end()) {
            return true;
        }
        const char c = peek();
        if (c == ')') {
            return term.close_paren;
        }
        if (term.double_semi && c == ';' && (peek(1) == ';' || peek(1) == '&')) {
            return true;
        }
        if (!term.words.empty()) {
            const auto w = peek_reserved_word();
            return !w.empty() && std::find(term.words.begin(), term.words.end(), w) != term.words.end();
        }
        return false;
    }

    void expect_keyword(std::string_view kw) {
        skip_blank(true);
        if (peek_reserved_word() != kw) {
            throw Unsupported{pos_, "expected '" + std::string(kw) + "'"};
        }
        pos_ += kw.size();
    }

    // --- lists -------------------------------------------------------------

    std::optional<NodeId> parse_list(const Terminators& term) {
        std::vector<NodeId> items;
        for (;;) {
            skip_blank(true);
            if (at_terminator(term)) {
                break;
            }
            items.push_back(parse_and_or(term));
            skip_blank(false);
            if (at_end()) {
                break;
            }
            const char c = peek();
            if (c == ';') {
                if (term.double_semi && (peek(1) == ';' || peek(1) == '&')) {
                    break;
                }
                ++pos_;
                continue;
            }
            if (c == '&' && peek(1) != '&' && peek(1) != '>') {
                ++pos_;
                continue;
            }
            if (c == '\n') {
                ++pos_;
                continue;
            }
            break;
        }
        if (items.empty()) {
            return std::nullopt;
        }
        if (items.size() == 1) {
            return items.front();
        }
        const NodeId seq = make(NodeKind::ShSeq, start_of(items.front()), end_of(items.back()));
        for (NodeId item : items) {
            t_.append_child(seq, item);
        }
        return seq;
    }

    NodeId parse_and_or(const Terminators& term) {
        NodeId acc = parse_pipeline(term);
        bool acc_is_chain = false;
        for (;;) {
            const std::size_t save = pos_;
            skip_blank(false);
            NodeKind kind;
            if (starts_with("&&")) {
                kind = NodeKind::ShAnd;
            } else if (starts_with("||")) {
                kind = NodeKind::ShOr;
            } else {
                pos_ = save;
                break;
            }
            pos_ += 2;
            skip_blank(true);
            const NodeId rhs = parse_pipeline(term);
            if (acc_is_chain && t_[acc].kind == kind) {
                t_.append_child(acc, rhs);
                set_end(acc, end_of(rhs));
            } else {
                const NodeId chain = make(kind, start_of(acc), end_of(rhs));
                t_.append_child(chain, acc);
                t_.append_child(chain, rhs);
                acc = chain;
                acc_is_chain = true;
            }
        }
        return acc;
    }

    NodeId parse_pipeline(const Terminators& term) {
        const std::size_t start = pos_;
        bool bang = false;
        if (peek() == '!' && is_break_at(pos_ + 1)) {
            bang = true;
            ++pos_;
            skip_blank(false);
        }
        std::vector<NodeId> cmds{parse_command(term)};
        for (;;) {
            const std::size_t save = pos_;
            skip_blank(false);
            if (peek() == '|' && peek(1) != '|') {
                pos_ += peek(1) == '&' ? 2 : 1;
                skip_blank(true);
                cmds.push_back(parse_command(term));
            } else {
                pos_ = save;
                break;
            }
        }
        if (cmds.size() == 1 && !bang) {
            return cmds.front();
        }
        const NodeId pipe = make(NodeKind::ShPipeline, start, end_of(cmds.back()));
        if (bang) {
            t_.at(pipe).value = "!";
        }
        for (NodeId c : cmds) {
            t_.append_child(pipe, c);
        }
        return pipe;
    }

    // --- commands ------------------------------------------------------------

    NodeId parse_command(const Terminators& term) {
        const std::size_t start = pos_;
        try {
            return parse_command_inner(term);
        } catch (const Unsupported& u) {
            std::size_t stop = u.to_end ? end_ : scan_statement_end(start);
            stop = trim_back(start, stop);
            if (stop <= start) {
                if (start >= end_) {
                    throw Fatal{start, u.what};
                }
                stop = start + 1;
            }
            pos_ = stop;
            const NodeId n = make(NodeKind::ShUnparsed, start, stop, true);
            warn("unsupported shell construct (" + u.what + ")", n);
            return n;
        }
    }

    NodeId parse_command_inner(const Terminators& term) {
        skip_blank(false);
        if (at_end()) {
            throw Unsupported{pos_, "missing command"};
        }
        if (peek() == '(') {
            if (peek(1) == '(') {
                throw Unsupported{pos_, "arithmetic command"};
            }
            return parse_subshell();
        }
        if (starts_with("[[") && is_break_at(pos_ + 2)) {
            return parse_double_bracket();
        }
        const auto w = peek_reserved_word();
        if (w == "if") {
            return parse_if();
        }
        if (w == "for") {
            return parse_for();
        }
        if (w == "while" || w == "until") {
            return parse_while(w);
        }
        if (w == "case") {
            return parse_case();
        }
        if (w == "{") {
            return parse_brace();
        }
        if (w == "function" || w == "select" || w == "coproc") {
            throw Unsupported{pos_, std::string(w)};
        }
        return parse_simple_command(term);
    }

    NodeId parse_simple_command(const Terminators& /*term*/) {
        const std::size_t start = pos_;
        const NodeId cmd = make(NodeKind::ShSimpleCommand, start, start);
        bool seen_word = false;
        std::size_t last_end = start;
        for (;;) {
            const std::size_t save = pos_;
            skip_blank(false);
            if (at_end()) {
                break;
            }
            const char c = peek();
            if (at_redirection()) {
                const NodeId r = parse_redirection();
                t_.append_child(cmd, r);
                last_end = end_of(r);
                continue;
            }
            if (c == ';' || c == '&' || c == '|' || c == '\n' || c == ')') {
                pos_ = save;
                break;
            }
            if (c == '(') {
                throw Unsupported{pos_, seen_word ? "function definition" : "unexpected '('"};
            }
            NodeId part;
            if (!seen_word && at_assignment()) {
                part = parse_assignment();
            } else {
                part = parse_word();
                seen_word = true;
            }
            t_.append_child(cmd, part);
            last_end = end_of(part);
        }
        if (t_[cmd].children.empty()) {
            throw Unsupported{start, "empty command"};
        }
        set_end(cmd, last_end);
        return cmd;
    }

    NodeId parse_subshell() {
        const std::size_t start = pos_;
        ++pos_;
        Terminators term;
        term.close_paren = true;
        const auto inner = parse_list(term);
        skip_blank(true);
        if (peek() != ')') {
            throw Fatal{start, "unterminated subshell"};
        }
        ++pos_;
        const NodeId sub = make(NodeKind::ShSubshell, start, pos_);
        if (inner) {
            t_.append_child(sub, *inner);
        }
        parse_trailing_redirections(sub);
        return sub;
    }

    NodeId parse_double_bracket() {
        const std::size_t start = pos_;
        std::size_t j = pos_ + 2;
        while (j + 1 < end_) {
            if (src_[j] == ']' && src_[j + 1] == ']' && is_break_at(j + 2)) {
                break;
            }
            ++j;
        }
        if (j + 1 >= end_) {
            throw Unsupported{start, "unterminated [["};
        }
        pos_ = j + 2;
        const NodeId n = make(NodeKind::ShUnparsed, start, pos_, true);
        warn("unsupported shell construct ([[ ... ]])", n);
        return n;
    }

    NodeId parse_if() {
        const std::size_t start = pos_;
        pos_ += 2;
        const NodeId node = make(NodeKind::ShCompound, start, start);
        t_.at(node).value = "if";
        Terminators then_term;
        then_term.words = {"then"};
        Terminators body_term;
        body_term.words = {"elif", "else", "fi"};
        Terminators fi_term;
        fi_term.words = {"fi"};
        for (;;) {
            append_opt(node, parse_list(then_term));
            expect_keyword("then");
            append_opt(node, parse_list(body_term));
            skip_blank(true);
            const auto w = peek_reserved_word();
            if (w == "elif") {
                pos_ += 4;
                continue;
            }
            if (w == "else") {
                pos_ += 4;
                append_opt(node, parse_list(fi_term));
            }
            expect_keyword("fi");
            break;
        }
        set_end(node, pos_);
        parse_trailing_redirections(node);
        return node;
    }

    NodeId parse_while(std::string_view kw) {
        const std::size_t start = pos_;
        pos_ += kw.size();
        const NodeId node = make(NodeKind::ShCompound, start, start);
        t_.at(node).value = std::string(kw);
        Terminators do_term;
        do_term.words = {"do"};
        Terminators done_term;
        done_term.words = {"done"};
        append_opt(node, parse_list(do_term));
        expect_keyword("do");
        append_opt(node, parse_list(done_term));
        expect_keyword("done");
        set_end(node, pos_);
        parse_trailing_redirections(node);
        return node;
    }

    NodeId parse_for() {
        const std::size_t start = pos_;
        pos_ += 3;
        const NodeId node = make(NodeKind::ShCompound, start, start);
        t_.at(node).value = "for";
        skip_blank(false);
        if (starts_with("((")) {
            throw Unsupported{pos_, "arithmetic for"};
        }
        t_.append_child(node, parse_word());
        skip_blank(true);
        if (peek_reserved_word() == "in") {
            pos_ += 2;
            for (;;) {
                skip_blank(false);
                if (at_end()) {
                    throw Unsupported{pos_, "unterminated for"};
                }
                if (peek() == ';' || peek() == '\n') {
                    ++pos_;
                    break;
                }
                t_.append_child(node, parse_word());
            }
        } else if (peek() == ';') {
            ++pos_;
        }
        Terminators done_term;
        done_term.words = {"done"};
        expect_keyword("do");
        append_opt(node, parse_list(done_term));
        expect_keyword("done");
        set_end(node, pos_);
        parse_trailing_redirections(node);
        return node;
    }

    NodeId parse_case() {
        const std::size_t start = pos_;
        pos_ += 4;
        const NodeId node = make(NodeKind::ShCompound, start, start);
        t_.at(node).value = "case";
        skip_blank(false);
        t_.append_child(node, parse_word());
        expect_keyword("in");
        Terminators item_term;
        item_term.words = {"esac"};
        item_term.double_semi = true;
        for (;;) {
            skip_blank(true);
            if (peek_reserved_word() == "esac") {
                pos_ += 4;
                break;
            }
            if (at_end()) {
                throw Unsupported{pos_, "unterminated case"};
            }
            if (peek() == '(') {
                ++pos_;
            }
            for (;;) {
                skip_blank(false);
                t_.append_child(node, parse_word());
                skip_blank(false);
                if (peek() == '|') {
                    ++pos_;
                    continue;
                }
                break;
            }
            if (peek() != ')') {
                throw Unsupported{pos_, "malformed case pattern"};
            }
            ++pos_;
            append_opt(node, parse_list(item_term));
            skip_blank(true);
            if (starts_with(";;&")) {
                pos_ += 3;
            } else if (starts_with(";;") || starts_with(";&")) {
                pos_ += 2;
            }
        }
        set_end(node, pos_);
        parse_trailing_redirections(node);
        return node;
    }

    NodeId parse_brace() {
        const std::size_t start = pos_;
        ++pos_;
        const NodeId node = make(NodeKind::ShCompound, start, start);
        t_.at(node).value = "{";
        Terminators close;
        close.words = {"}"};
        append_opt(node, parse_list(close));
        expect_keyword("}");
        set_end(node, pos_);
        parse_trailing_redirections(node);
        return node;
    }

    void append_opt(NodeId parent, std::optional<NodeId> child) {
        if (child) {
            t_.append_child(parent, *child);
        }
    }

    void parse_trailing_redirections(NodeId node) {
        for (;;) {
            const std::size_t save = pos_;
            skip_blank(false);
            if (!at_end() && at_redirection()) {
                const NodeId r = parse_redirection();
                t_.append_child(node, r);
                set_end(node, end_of(r));
            } else {
                pos_ = save;
                return;
            }
        }
    }

    // --- redirections and assignments ------------------------------------------

    [[nodiscard]] bool at_redirection() const {
        std::size_t i = pos_;
        while (i < end_ && std::isdigit(static_cast<unsigned char>(src_[i])) != 0) {
            ++i;
        }
        if (i >= end_) {
            return false;
        }
        if (src_[i] == '<' || src_[i] == '>') {
            return true;
        }
        return i == pos_ && src_[i] == '&' && i + 1 < end_ && src_[i + 1] == '>';
    }

    NodeId parse_redirection() {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
            ++pos_;
        }
        static constexpr std::array<std::string_view, 12> kOps = {
            "&>>", "<<<", "<<-", "&>", ">>", ">&", ">|", "<<", "<&", "<>", ">", "<"};
        std::string_view op;
        for (auto candidate : kOps) {
            if (starts_with(candidate)) {
                op = candidate;
                break;
            }
        }
        if (op == "<<" || op == "<<-") {
            throw Unsupported{start, "heredoc", true};
        }
        pos_ += op.size();
        const std::size_t op_end = pos_;
        skip_blank(false);
        if (at_end() || is_word_break(peek())) {
            throw Unsupported{start, "missing redirection target"};
        }
        const NodeId target = parse_word();
        const NodeId r = make(NodeKind::ShRedirection, start, end_of(target), true);
        t_.at(r).value = std::string(src_.substr(start, op_end - start));
        t_.append_child(r, target);
        return r;
    }

    [[nodiscard]] bool at_assignment() const {
        std::size_t i = pos_;
        if (i >= end_ || !is_name_start(src_[i])) {
            return false;
        }
        while (i < end_ && is_name_char(src_[i])) {
            ++i;
        }
        if (i < end_ && src_[i] == '+') {
            ++i;
        }
        return i < end_ && src_[i] == '=';
    }

    NodeId parse_assignment() {
        const std::size_t start = pos_;
        while (is_name_char(peek())) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));
        if (peek() == '+') {
            ++pos_;
        }
        ++pos_;  // '='
        if (peek() == '(') {
            throw Unsupported{start, "array assignment"};
        }
        const NodeId a = make(NodeKind::ShAssignment, start, pos_);
        t_.at(a).value = name;
        if (!at_end() && !is_word_break(peek()) && continuation_length(pos_) == 0) {
            const NodeId v = parse_word();
            t_.append_child(a, v);
        }
        set_end(a, pos_);
        t_.at(a).text = std::string(src_.substr(start, pos_ - start));
        return a;
    }

    // --- words -----------------------------------------------------------------

    NodeId parse_word() {
        const std::size_t start = pos_;
        const NodeId word = make(NodeKind::ShWord, start, start);
        std::string value;
        int single_segments = 0;
        int double_segments = 0;
        bool bare = false;
        while (!at_end()) {
            const char c = peek();
            if (is_word_break(c)) {
                break;
            }
            if (const std::size_t n = continuation_length(pos_)) {
                pos_ += n;
                skip_docker_dropped_lines();
                continue;
            }
            if (c == '\\') {
                bare = true;
                if (pos_ + 1 < end_) {
                    value += src_[pos_ + 1];
                    pos_ += 2;
                } else {
                    value += c;
                    ++pos_;
                }
                continue;
            }
            if (c == '\'') {
                const std::size_t close = src_.find('\'', pos_ + 1);
                if (close == std::string_view::npos || close >= end_) {
                    throw Fatal{pos_, "unterminated single quote"};
                }
                value.append(src_.substr(pos_ + 1, close - pos_ - 1));
                pos_ = close + 1;
                ++single_segments;
                continue;
            }
            if (c == '"') {
                parse_double_quoted(word, value);
                ++double_segments;
                continue;
            }
            if (c == '$') {
                bare = true;
                parse_dollar(word, value);
                continue;
            }
            if (c == '`') {
                bare = true;
                parse_backtick(word, value);
                continue;
            }
            bare = true;
            value += c;
            ++pos_;
        }
        if (pos_ == start) {
            throw Unsupported{start, "expected a word"};
        }
        Node& n = t_.at(word);
        n.span = lines_.span(start, pos_);
        n.text = std::string(src_.substr(start, pos_ - start));
        n.value = std::move(value);
        if (!bare && single_segments == 1 && double_segments == 0) {
            n.quote = QuoteStyle::Single;
        } else if (!bare && double_segments == 1 && single_segments == 0) {
            n.quote = QuoteStyle::Double;
        } else if (single_segments == 0 && double_segments == 0) {
            n.quote = QuoteStyle::Bare;
        } else {
            n.quote = QuoteStyle::Mixed;
        }
        return word;
    }

    void parse_double_quoted(NodeId word, std::string& value) {
        const std::size_t open = pos_;
        ++pos_;
        for (;;) {
            if (at_end()) {
                throw Fatal{open, "unterminated double quote"};
            }
            const char c = peek();
            if (c == '"') {
                ++pos_;
                return;
            }
            if (c == '\\') {
                if (const std::size_t n = continuation_length(pos_)) {
                    pos_ += n;
                    skip_docker_dropped_lines();
                    continue;
                }
                const char next = peek(1);
                if (next == '$' || next == '`' || next == '"' || next == '\\') {
                    value += next;
                    pos_ += 2;
                } else {
                    value += c;
                    ++pos_;
                }
                continue;
            }
            if (c == '$') {
                parse_dollar(word, value);
                continue;
            }
            if (c == '`') {
                parse_backtick(word, value);
                continue;
            }
            value += c;
            ++pos_;
        }
    }

    // Index just past the `close` that balances an already-consumed `open`.
    [[nodiscard]] std::size_t find_balanced(std::size_t from, char open, char close) const {
        int depth = 1;
        std::size_t i = from;
        while (i < end_) {
            const char c = src_[i];
            if (c == '\\') {
                i += 2;
                continue;
            }
            if (c == '\'') {
                const std::size_t q = src_.find('\'', i + 1);
                if (q == std::string_view::npos || q >= end_) {
                    return std::string_view::npos;
                }
                i = q + 1;
                continue;
            }
            if (c == open) {
                ++depth;
            } else if (c == close && --depth == 0) {
                return i + 1;
            }
            ++i;
        }
        return std::string_view::npos;
    }

    void parse_dollar(NodeId word, std::string& value) {
        const std::size_t start = pos_;
        const char n1 = peek(1);
        if (n1 == '(' && peek(2) == '(') {
            const std::size_t close = find_balanced(pos_ + 2, '(', ')');
            if (close == std::string_view::npos) {
                throw Fatal{start, "unterminated arithmetic expansion"};
            }
            pos_ = close;
            value.append(src_.substr(start, pos_ - start));
            return;
        }
        if (n1 == '(') {
            pos_ += 2;
            Terminators term;
            term.close_paren = true;
            const auto inner = parse_list(term);
            skip_blank(true);
            if (peek() != ')') {
                throw Fatal{start, "unterminated command substitution"};
            }
            ++pos_;
            const NodeId sub = make(NodeKind::ShCommandSubstitution, start, pos_, true);
            t_.at(sub).value = t_[sub].text;
            if (inner) {
                t_.append_child(sub, *inner);
            }
            t_.append_child(word, sub);
            value += t_[sub].text;
            return;
        }
        if (n1 == '{') {
            const std::size_t close = find_balanced(pos_ + 2, '{', '}');
            if (close == std::string_view::npos) {
                throw Fatal{start, "unterminated parameter expansion"};
            }
            pos_ = close;
            std::size_t k = start + 2;
            if (k < close && (src_[k] == '#' || src_[k] == '!')) {
                ++k;
            }
            std::size_t name_end = k;
            while (name_end < close && is_name_char(src_[name_end])) {
                ++name_end;
            }
            if (name_end == k && k < close - 1) {
                name_end = k + 1;  // ${@}, ${1}, ...
            }
            add_variable(word, start, pos_, src_.substr(k, name_end - k));
            value.append(src_.substr(start, pos_ - start));
            return;
        }
        if (is_name_start(n1)) {
            std::size_t j = pos_ + 1;
            while (j < end_ && is_name_char(src_[j])) {
                ++j;
            }
            pos_ = j;
            add_variable(word, start, pos_, src_.substr(start + 1, j - start - 1));
            value.append(src_.substr(start, pos_ - start));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(n1)) != 0 ||
            std::string_view("@*#?$!-").find(n1) != std::string_view::npos) {
            if (n1 != '\0') {
                pos_ += 2;
                add_variable(word, start, pos_, src_.substr(start + 1, 1));
                value.append(src_.substr(start, 2));
                return;
            }
        }
        if (n1 == '\'') {
            std::size_t j = pos_ + 2;
            while (j < end_ && src_[j] != '\'') {
                j += src_[j] == '\\' ? 2 : 1;
            }
            if (j >= end_) {
                throw Fatal{start, "unterminated $'...' string"};
            }
            value.append(src_.substr(pos_ + 2, j - pos_ - 2));
            pos_ = j + 1;
            return;
        }
        value += '$';
        ++pos_;
    }

    void add_variable(NodeId word, std::size_t b, std::size_t e, std::string_view name) {
        const NodeId v = make(NodeKind::ShVariable, b, e, true);
        t_.at(v).value = std::string(name);
        t_.append_child(word, v);
    }

    void parse_backtick(NodeId word, std::string& value) {
        const std::size_t start = pos_;
        std::size_t i = pos_ + 1;
        while (i < end_ && src_[i] != '`') {
            i += src_[i] == '\\' ? 2 : 1;
        }
        if (i >= end_) {
            throw Fatal{start, "unterminated backtick substitution"};
        }
        const NodeId sub = make(NodeKind::ShCommandSubstitution, start, i + 1, true);
        t_.at(sub).set(NodeFlag::Backtick);
        t_.at(sub).value = t_[sub].text;
        ShellParser inner(t_, src_, lines_, start + 1, i, opts_, warnings_);
        try {
            if (auto list = inner.parse_region_list()) {
                t_.append_child(sub, *list);
            }
        } catch (const Fatal& f) {
            if (i > start + 1) {
                const NodeId u = make(NodeKind::ShUnparsed, start + 1, i, true);
                t_.append_child(sub, u);
                warn(f.what, u);
            }
        }
        t_.append_child(word, sub);
        pos_ = i + 1;
        value += t_[sub].text;
    }

    // --- recovery ----------------------------------------------------------------

    // End of the statement starting at `start`: the first unquoted list
    // operator at nesting depth zero.
    [[nodiscard]] std::size_t scan_statement_end(std::size_t start) const {
        static constexpr std::array<std::string_view, 7> kOpeners = {
            "if", "case", "for", "while", "until", "select", "{"};
        static constexpr std::array<std::string_view, 4> kClosers = {"fi", "esac", "done", "}"};
        static constexpr std::array<std::string_view, 6> kCmdPrefix = {
            "then", "do", "else", "elif", "!", "in"};
        int paren = 0;
        int keywords = 0;
        bool cmd_pos = true;
        std::size_t i = start;
        while (i < end_) {
            const char c = src_[i];
            if (const std::size_t n = continuation_length(i)) {
                i += n;
                continue;
            }
            if (c == '\\') {
                i += 2;
                cmd_pos = false;
                continue;
            }
            if (c == '\'' || c == '"' || c == '`') {
                std::size_t j = i + 1;
                while (j < end_ && src_[j] != c) {
                    j += (src_[j] == '\\' && c != '\'') ? 2 : 1;
                }
                if (j >= end_) {
                    return end_;
                }
                i = j + 1;
                cmd_pos = false;
                continue;
            }
            if (c == '(') {
                ++paren;
                ++i;
                cmd_pos = true;
                continue;
            }
            if (c == ')') {
                if (paren == 0) {
                    return i;
                }
                --paren;
                ++i;
                continue;
            }
            if (paren == 0 && keywords == 0 &&
                (c == ';' || c == '\n' || c == '&' || c == '|')) {
                return i;
            }
            if (c == ';' || c == '\n' || c == '&' || c == '|') {
                cmd_pos = true;
                ++i;
                continue;
            }
            if (is_blank(c)) {
                ++i;
                continue;
            }
            if (c == '#' && (i == start || is_blank(src_[i - 1]) || src_[i - 1] == '\n')) {
                while (i < end_ && src_[i] != '\n') {
                    ++i;
                }
                continue;
            }
            std::size_t j = i;
            while (j < end_ && !is_word_break(src_[j]) && src_[j] != '\'' && src_[j] != '"' &&
                   src_[j] != '`' && src_[j] != '\\') {
                ++j;
            }
            if (j == i) {
                ++i;
                continue;
            }
            const std::string_view w = src_.substr(i, j - i);
            if (cmd_pos && std::find(kOpeners.begin(), kOpeners.end(), w) != kOpeners.end()) {
                ++keywords;
            } else if (cmd_pos && keywords > 0 &&
                       std::find(kClosers.begin(), kClosers.end(), w) != kClosers.end()) {
                --keywords;
            }
            cmd_pos = std::find(kCmdPrefix.begin(), kCmdPrefix.end(), w) != kCmdPrefix.end() ||
                      std::find(kOpeners.begin(), kOpeners.end(), w) != kOpeners.end();
            i = j;
        }
        return end_;
    }
};

}  // namespace

NodeId parse_shell_region(Tree& tree, std::string_view file_text, const LineIndex& lines,
                          std::size_t begin, std::size_t end, const ShellParseOptions& options,
                          std::vector<ParseWarning>& warnings) {
    ShellParser parser(tree, file_text, lines, begin, end, options, warnings);
    return parser.parse_script();
}

ShellAst parse_shell(std::string_view text, const ShellParseOptions& options) {
    ShellAst ast;
    ast.source = std::string(text);
    const LineIndex lines(ast.source);
    ast.root = parse_shell_region(ast.tree, ast.source, lines, 0, ast.source.size(), options,
                                  ast.warnings);
    return ast;
}

}  // namespace dockslim
