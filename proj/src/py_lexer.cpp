#include "vocalign/py_lexer.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace vocalign {

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "False",  "None",   "True",    "and",      "as",       "assert", "async",
    "await",  "break",  "class",   "continue", "def",      "del",    "elif",
    "else",   "except", "finally", "for",      "from",     "global", "if",
    "import", "in",     "is",      "lambda",   "nonlocal", "not",    "or",
    "pass",   "raise",  "return",  "try",      "while",    "with",   "yield",
};

// longest-first so a linear scan gives maximal munch; '=' is handled after
// the table so it cannot shadow '=='
const std::array<const char*, 46> kOperators = {
    "**=", "//=", ">>=", "<<=", "...", "!=", ">=", "<=", "==", "->", ":=",
    "+=",  "-=",  "*=",  "/=",  "%=",  "&=", "|=", "^=", "@=", "**", "//",
    "<<",  ">>",  "(",   ")",   "[",   "]",  "{",  "}",  ",",  ":",  ".",
    ";",   "+",   "-",   "*",   "/",   "%",  "@",  "&",  "|",  "^",  "~",
    "<",   ">",
};

} // namespace

bool is_python_keyword(std::string_view word) {
    return kKeywords.find(word) != kKeywords.end();
}

int LexResult::total_lines() const {
    int n = 0;
    for (auto f : line_flags)
        if (f & kLineNonBlank)
            ++n;
    return n;
}

int LexResult::comment_lines() const {
    int n = 0;
    for (auto f : line_flags)
        if (f & kLineComment)
            ++n;
    return n;
}

namespace {

bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool is_ident_cont(unsigned char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_string_prefix(std::string_view s) {
    if (s.empty() || s.size() > 2)
        return false;
    for (char c : s) {
        switch (c) {
        case 'r': case 'R': case 'b': case 'B':
        case 'u': case 'U': case 'f': case 'F':
            break;
        default:
            return false;
        }
    }
    return true;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    LexResult run() {
        begin_physical_line(false);
        while (pos_ < src_.size())
            step();
        flush_logical_line();
        if (bracket_depth_ > 0) {
            result_.anomalies.push_back("unbalanced brackets at end of file");
            result_.ok = false;
        }
        return std::move(result_);
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int bracket_depth_ = 0;
    LogicalLine current_;
    LexResult result_;

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    // called with pos_ at the first character of the new physical line
    void begin_physical_line(bool in_string) {
        while (static_cast<int>(result_.line_flags.size()) < line_)
            result_.line_flags.push_back(0);
        std::uint8_t flags = 0;
        if (in_string) {
            for (std::size_t j = pos_; j < src_.size() && src_[j] != '\n'; ++j) {
                if (src_[j] != ' ' && src_[j] != '\t' && src_[j] != '\r') {
                    flags = kLineNonBlank;
                    break;
                }
            }
        } else {
            std::size_t i = pos_;
            while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t' || src_[i] == '\r'))
                ++i;
            if (i < src_.size() && src_[i] != '\n') {
                flags = kLineNonBlank;
                if (src_[i] == '#')
                    flags |= kLineComment;
            }
        }
        result_.line_flags[line_ - 1] = flags;
    }

    void newline(bool in_string) {
        ++line_;
        begin_physical_line(in_string);
    }

    void flush_logical_line() {
        if (!current_.tokens.empty()) {
            current_.end_line = line_;
            result_.lines.push_back(std::move(current_));
        }
        current_ = LogicalLine{};
    }

    int indent_at(std::size_t pos) const {
        std::size_t bol = pos == 0 ? std::string_view::npos : src_.rfind('\n', pos - 1);
        bol = bol == std::string_view::npos ? 0 : bol + 1;
        int col = 0;
        for (std::size_t i = bol; i < src_.size(); ++i) {
            if (src_[i] == ' ')
                ++col;
            else if (src_[i] == '\t')
                col = (col / 8 + 1) * 8;
            else
                break;
        }
        return col;
    }

    void push(TokKind kind, std::string text, std::string value, int line,
              std::size_t start_pos) {
        if (current_.tokens.empty()) {
            current_.start_line = line;
            current_.indent = indent_at(start_pos);
        }
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.value = std::move(value);
        t.line = line;
        current_.tokens.push_back(std::move(t));
    }

    void step() {
        const char c = peek();
        if (c == ' ' || c == '\t' || c == '\r') {
            ++pos_;
            return;
        }
        if (c == '\n') {
            ++pos_;
            if (bracket_depth_ == 0)
                flush_logical_line();
            newline(false);
            return;
        }
        if (c == '\\' && peek(1) == '\n') {
            pos_ += 2;
            newline(false);
            return;
        }
        if (c == '#') {
            lex_comment();
            return;
        }
        if (is_digit(c) || (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
            lex_number();
            return;
        }
        if (is_ident_start(c)) {
            lex_word();
            return;
        }
        if (c == '"' || c == '\'') {
            lex_string({});
            return;
        }
        lex_operator();
    }

    void lex_comment() {
        const int line = line_;
        std::size_t end = src_.find('\n', pos_);
        if (end == std::string_view::npos)
            end = src_.size();
        std::string_view body = src_.substr(pos_ + 1, end - pos_ - 1);
        while (!body.empty() && (body.front() == ' ' || body.front() == '\t'))
            body.remove_prefix(1);
        result_.comments.emplace_back(line, std::string(body));
        pos_ = end;
    }

    void lex_word() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_cont(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        std::string word(src_.substr(start, pos_ - start));
        if ((peek() == '"' || peek() == '\'') && is_string_prefix(word)) {
            pos_ = start;
            lex_string(word);
            return;
        }
        const TokKind kind =
            is_python_keyword(word) ? TokKind::Keyword : TokKind::Identifier;
        push(kind, word, word, line_, start);
    }

    void lex_number() {
        const std::size_t start = pos_;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'o' ||
                              peek(1) == 'O' || peek(1) == 'b' || peek(1) == 'B')) {
            pos_ += 2;
            while (pos_ < src_.size() && is_ident_cont(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        } else {
            bool seen_dot = false;
            while (pos_ < src_.size()) {
                const char c = src_[pos_];
                if (is_digit(static_cast<unsigned char>(c)) || c == '_') {
                    ++pos_;
                } else if (c == '.' && !seen_dot &&
                           (is_digit(static_cast<unsigned char>(peek(1))) ||
                            (!is_ident_start(static_cast<unsigned char>(peek(1))) &&
                             peek(1) != '.'))) {
                    seen_dot = true;
                    ++pos_;
                } else if ((c == 'e' || c == 'E') &&
                           (is_digit(static_cast<unsigned char>(peek(1))) ||
                            ((peek(1) == '+' || peek(1) == '-') &&
                             is_digit(static_cast<unsigned char>(peek(2)))))) {
                    pos_ += 2; // 'e' plus sign or first digit
                    while (pos_ < src_.size() && is_digit(static_cast<unsigned char>(src_[pos_])))
                        ++pos_;
                    break;
                } else {
                    break;
                }
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J'))
            ++pos_;
        std::string text(src_.substr(start, pos_ - start));
        push(TokKind::Number, text, text, line_, start);
    }

    char decode_escape(char c) const {
        switch (c) {
        case 'n': return '\n';
        case 't': return '\t';
        case 'r': return '\r';
        case 'a': return '\a';
        case 'b': return '\b';
        case 'f': return '\f';
        case 'v': return '\v';
        default: return '\0';
        }
    }

    void lex_string(std::string prefix) {
        const int start_line = line_;
        const std::size_t start = pos_;
        pos_ += prefix.size();
        const char q = src_[pos_];
        const bool raw = prefix.find('r') != std::string::npos ||
                         prefix.find('R') != std::string::npos;
        bool triple = false;
        if (peek(1) == q && peek(2) == q) {
            triple = true;
            pos_ += 3;
        } else {
            pos_ += 1;
        }

        std::string value;
        bool terminated = false;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\\' && pos_ + 1 < src_.size()) {
                const char next = src_[pos_ + 1];
                if (next == '\n') {
                    if (!triple && raw) {
                        // a raw single-line string cannot continue a line
                        ++pos_; // leave the newline for step()
                        break;
                    }
                    if (raw) { // raw triple keeps both characters
                        value += c;
                        value += next;
                    } // cooked: line continuation, nothing appended
                    pos_ += 2;
                    newline(true);
                    continue;
                }
                if (raw) {
                    value += c;
                    value += next;
                } else if (next == '\\' || next == '\'' || next == '"') {
                    value += next;
                } else {
                    const char dec = decode_escape(next);
                    if (dec != '\0') {
                        value += dec;
                    } else if (next == '0') {
                        value += '\0';
                    } else { // unknown escape: keep the pair
                        value += c;
                        value += next;
                    }
                }
                pos_ += 2;
                continue;
            }
            if (c == '\n') {
                if (!triple)
                    break; // unterminated; the newline is handled by step()
                value += c;
                ++pos_;
                newline(true);
                continue;
            }
            if (c == q) {
                if (!triple) {
                    ++pos_;
                    terminated = true;
                    break;
                }
                if (peek(1) == q && peek(2) == q) {
                    pos_ += 3;
                    terminated = true;
                    break;
                }
            }
            value += c;
            ++pos_;
        }
        if (!terminated) {
            result_.anomalies.push_back("unterminated string literal at line " +
                                        std::to_string(start_line));
            result_.ok = false;
        }
        std::string text(src_.substr(start, pos_ - start));
        push(TokKind::String, std::move(text), std::move(value), start_line, start);
    }

    void lex_operator() {
        for (const char* op : kOperators) {
            const std::size_t len = std::char_traits<char>::length(op);
            if (src_.compare(pos_, len, op) == 0) {
                if (op[0] == '(' || op[0] == '[' || op[0] == '{')
                    ++bracket_depth_;
                else if (op[0] == ')' || op[0] == ']' || op[0] == '}')
                    bracket_depth_ = std::max(0, bracket_depth_ - 1);
                push(TokKind::Operator, op, op, line_, pos_);
                pos_ += len;
                return;
            }
        }
        if (peek() == '=') {
            push(TokKind::Operator, "=", "=", line_, pos_);
            ++pos_;
            return;
        }
        result_.anomalies.push_back(std::string("unexpected character '") + peek() +
                                    "' at line " + std::to_string(line_));
        ++pos_;
    }
};

} // namespace

LexResult lex_python(std::string_view source) { return Lexer(source).run(); }

} // namespace vocalign
