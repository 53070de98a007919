#include <algorithm>
#include <string>
#include <vector>

#include "dockslim/printer.hpp"

namespace dockslim {

namespace {

struct Line {
    std::string_view text;  // without the newline
    bool newline = true;
};

std::vector<Line> split_lines(std::string_view s) {
    std::vector<Line> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t nl = s.find('\n', pos);
        if (nl == std::string_view::npos) {
            out.push_back({s.substr(pos), false});
            break;
        }
        out.push_back({s.substr(pos, nl - pos), true});
        pos = nl + 1;
    }
    return out;
}

bool same(const Line& a, const Line& b) { return a.text == b.text && a.newline == b.newline; }

enum class Op { Keep, Del, Add };

struct Edit {
    Op op;
    std::size_t a;  // index into before (Keep/Del)
    std::size_t b;  // index into after (Keep/Add)
};

// Common prefix/suffix are stripped first; repairs are local so the LCS
// table only covers the changed middle.
std::vector<Edit> diff_lines(const std::vector<Line>& a, const std::vector<Line>& b) {
    std::size_t pre = 0;
    while (pre < a.size() && pre < b.size() && same(a[pre], b[pre])) {
        ++pre;
    }
    std::size_t suf = 0;
    while (suf < a.size() - pre && suf < b.size() - pre &&
           same(a[a.size() - 1 - suf], b[b.size() - 1 - suf])) {
        ++suf;
    }
    const std::size_t n = a.size() - pre - suf;
    const std::size_t m = b.size() - pre - suf;
    std::vector<Edit> edits;
    for (std::size_t i = 0; i < pre; ++i) {
        edits.push_back({Op::Keep, i, i});
    }
    if (n * m <= 16'000'000) {
        std::vector<std::vector<std::uint32_t>> lcs(n + 1, std::vector<std::uint32_t>(m + 1, 0));
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = m; j-- > 0;) {
                lcs[i][j] = same(a[pre + i], b[pre + j]) ? lcs[i + 1][j + 1] + 1
                                                          : std::max(lcs[i + 1][j], lcs[i][j + 1]);
            }
        }
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < n || j < m) {
            if (i < n && j < m && same(a[pre + i], b[pre + j])) {
                edits.push_back({Op::Keep, pre + i, pre + j});
                ++i;
                ++j;
            } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
                edits.push_back({Op::Del, pre + i, 0});
                ++i;
            } else {
                edits.push_back({Op::Add, 0, pre + j});
                ++j;
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            edits.push_back({Op::Del, pre + i, 0});
        }
        for (std::size_t j = 0; j < m; ++j) {
            edits.push_back({Op::Add, 0, pre + j});
        }
    }
    for (std::size_t k = 0; k < suf; ++k) {
        edits.push_back({Op::Keep, a.size() - suf + k, b.size() - suf + k});
    }
    return edits;
}

std::string range(std::size_t start, std::size_t count) {
    // Empty ranges point at the line before the change.
    const std::size_t line = count == 0 ? start : start + 1;
    return std::to_string(line) + "," + std::to_string(count);
}

}  // namespace

std::string unified_diff(std::string_view before, std::string_view after,
                         std::string_view from_label, std::string_view to_label, int context) {
    if (before == after) {
        return {};
    }
    const auto a = split_lines(before);
    const auto b = split_lines(after);
    const auto edits = diff_lines(a, b);
    const std::size_t ctx = static_cast<std::size_t>(std::max(context, 0));

    std::string out;
    out += "--- ";
    out += from_label;
    out += "\n+++ ";
    out += to_label;
    out += '\n';

    std::size_t k = 0;
    while (k < edits.size()) {
        while (k < edits.size() && edits[k].op == Op::Keep) {
            ++k;
        }
        if (k == edits.size()) {
            break;
        }
        // Grow the hunk while changes are within 2*ctx of each other.
        const std::size_t start = k >= ctx ? k - ctx : 0;
        std::size_t end = k;
        std::size_t last_change = k;
        while (end < edits.size()) {
            if (edits[end].op != Op::Keep) {
                last_change = end;
            } else if (end - last_change > 2 * ctx) {
                break;
            }
            ++end;
        }
        end = std::min(edits.size(), last_change + ctx + 1);

        std::size_t a_start = 0;
        std::size_t b_start = 0;
        std::size_t a_count = 0;
        std::size_t b_count = 0;
        bool a_set = false;
        bool b_set = false;
        // Position of the hunk in each file.
        std::size_t a_pos = 0;
        std::size_t b_pos = 0;
        for (std::size_t i = 0; i < start; ++i) {
            if (edits[i].op != Op::Add) {
                ++a_pos;
            }
            if (edits[i].op != Op::Del) {
                ++b_pos;
            }
        }
        std::string body;
        for (std::size_t i = start; i < end; ++i) {
            const Edit& e = edits[i];
            const Line& line = e.op == Op::Add ? b[e.b] : a[e.a];
            const char mark = e.op == Op::Keep ? ' ' : (e.op == Op::Del ? '-' : '+');
            if (e.op != Op::Add) {
                if (!a_set) {
                    a_start = e.a;
                    a_set = true;
                }
                ++a_count;
            }
            if (e.op != Op::Del) {
                if (!b_set) {
                    b_start = e.b;
                    b_set = true;
                }
                ++b_count;
            }
            body += mark;
            body += line.text;
            body += '\n';
            if (!line.newline) {
                body += "\\ No newline at end of file\n";
            }
        }
        if (!a_set) {
            a_start = a_pos;
        }
        if (!b_set) {
            b_start = b_pos;
        }
        out += "@@ -" + range(a_start, a_count) + " +" + range(b_start, b_count) + " @@\n";
        out += body;
        k = end;
    }
    return out;
}

}  // namespace dockslim
