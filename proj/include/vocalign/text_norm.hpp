#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace vocalign {

// Fixed English stopword list. The built-in list is compiled in and mirrored
// at data/stopwords.txt; `--stopwords <path>` swaps in a custom list.
class Stopwords {
public:
    static const Stopwords& builtin();
    static Stopwords load(const std::filesystem::path& path); // one token per line, '#' comments allowed

    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

enum class TokenSource { CodeIdentifiers, DocText };

struct TokenSet {
    std::set<std::string> tokens;
    TokenSource source = TokenSource::CodeIdentifiers;
};

struct TextStats {
    std::size_t words = 0;
    std::size_t sentences = 0;
    std::size_t syllables = 0;
};

// Split one identifier on underscores, camelCase boundaries (including
// acronym runs: HTTPServer -> http, server) and letter/digit boundaries.
// Fragments are lowercased; fragments shorter than 2 chars or without a
// letter are dropped. Stopword filtering is the caller's policy.
std::vector<std::string> split_identifier(std::string_view identifier);

TokenSet normalize_identifiers(const std::vector<std::string>& identifiers,
                               const Stopwords& stopwords = Stopwords::builtin());

TokenSet normalize_text(std::string_view text,
                        const Stopwords& stopwords = Stopwords::builtin());

TextStats text_stats(std::string_view text);

// Vowel-group heuristic; 0 for tokens without letters, otherwise >= 1.
std::size_t count_syllables(std::string_view word);

} // namespace vocalign
