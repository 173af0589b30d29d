#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vocalign {

enum class TokKind { Identifier, Keyword, Number, String, Operator };

struct Token {
    TokKind kind = TokKind::Identifier;
    std::string text;  // raw source text (strings keep prefix and quotes)
    std::string value; // strings: decoded content; everything else: == text
    int line = 1;      // 1-based physical line of the token's first character
};

// One logical line: physical lines joined across bracket continuations and
// trailing backslashes. Only lines holding at least one code token appear.
struct LogicalLine {
    int indent = 0; // leading whitespace of the first physical line, tabstop 8
    int start_line = 1;
    int end_line = 1;
    std::vector<Token> tokens;
};

// Per-physical-line classification bits.
inline constexpr std::uint8_t kLineNonBlank = 1; // has a non-whitespace char
inline constexpr std::uint8_t kLineComment = 2;  // first non-whitespace starts a comment

struct LexResult {
    std::vector<LogicalLine> lines;
    std::vector<std::pair<int, std::string>> comments; // (line, body after '#')
    std::vector<std::uint8_t> line_flags;              // index = physical line - 1
    bool ok = true;                                    // false: block structure unusable
    std::vector<std::string> anomalies;

    int total_lines() const;   // non-blank physical lines
    int comment_lines() const; // comment-only physical lines
};

// Tokenize Python source. Never throws: anomalies (unterminated strings,
// unbalanced brackets, stray characters) are recorded and lexing continues;
// `ok` is cleared only when the anomaly breaks block structure.
LexResult lex_python(std::string_view source);

bool is_python_keyword(std::string_view word);

} // namespace vocalign
