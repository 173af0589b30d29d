#include "vocalign/text_norm.hpp"

#include <cctype>

namespace vocalign {

namespace {

bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
char to_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool is_vowel(char c) {
    switch (to_lower(c)) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
        return true;
    default:
        return false;
    }
}

// keeps only fragments with >= 2 chars and at least one letter, lowercased
void push_fragment(std::string_view frag, std::vector<std::string>& out) {
    if (frag.size() < 2)
        return;
    bool has_letter = false;
    std::string lowered;
    lowered.reserve(frag.size());
    for (char c : frag) {
        has_letter = has_letter || is_alpha(c);
        lowered.push_back(to_lower(c));
    }
    if (has_letter)
        out.push_back(std::move(lowered));
}

} // namespace

std::vector<std::string> split_identifier(std::string_view identifier) {
    std::vector<std::string> fragments;
    std::size_t start = 0;
    const std::size_t n = identifier.size();
    for (std::size_t i = 0; i <= n; ++i) {
        bool boundary = false;
        if (i == n || !is_alnum(identifier[i])) {
            boundary = true; // underscore or any other separator
        } else if (i > start) {
            const char prev = identifier[i - 1];
            const char cur = identifier[i];
            if (is_digit(prev) != is_digit(cur)) {
                boundary = true; // letter<->digit transition
            } else if (is_lower(prev) && is_upper(cur)) {
                boundary = true; // camelCase
            } else if (is_upper(prev) && is_upper(cur) && i + 1 < n && is_lower(identifier[i + 1])) {
                boundary = true; // acronym run: HTTPServer -> HTTP|Server
            }
        }
        if (boundary) {
            if (i > start)
                push_fragment(identifier.substr(start, i - start), fragments);
            start = (i < n && !is_alnum(identifier[i])) ? i + 1 : i;
        }
    }
    return fragments;
}

TokenSet normalize_identifiers(const std::vector<std::string>& identifiers,
                               const Stopwords& stopwords) {
    TokenSet result;
    result.source = TokenSource::CodeIdentifiers;
    for (const std::string& ident : identifiers) {
        for (std::string& frag : split_identifier(ident)) {
            if (!stopwords.contains(frag))
                result.tokens.insert(std::move(frag));
        }
    }
    return result;
}

TokenSet normalize_text(std::string_view text, const Stopwords& stopwords) {
    TokenSet result;
    result.source = TokenSource::DocText;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (!is_alnum(text[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        bool has_letter = false;
        while (i < n && is_alnum(text[i])) {
            has_letter = has_letter || is_alpha(text[i]);
            ++i;
        }
        if (!has_letter || i - start < 2)
            continue;
        std::string token;
        token.reserve(i - start);
        for (std::size_t j = start; j < i; ++j)
            token.push_back(to_lower(text[j]));
        if (!stopwords.contains(token))
            result.tokens.insert(std::move(token));
    }
    return result;
}

std::size_t count_syllables(std::string_view word) {
    std::size_t groups = 0;
    bool in_group = false;
    bool any_letter = false;
    char last_letter = '\0';
    for (char c : word) {
        if (is_alpha(c)) {
            any_letter = true;
            last_letter = c;
            if (is_vowel(c)) {
                if (!in_group)
                    ++groups;
                in_group = true;
            } else {
                in_group = false;
            }
        } else {
            in_group = false;
        }
    }
    if (!any_letter)
        return 0;
    if (groups > 1 && to_lower(last_letter) == 'e')
        --groups; // terminal silent 'e'
    return groups == 0 ? 1 : groups;
}

TextStats text_stats(std::string_view text) {
    TextStats stats;
    std::size_t i = 0;
    const std::size_t n = text.size();

    // words and syllables over whitespace-delimited tokens containing a letter
    while (i < n) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        bool has_letter = false;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) {
            has_letter = has_letter || is_alpha(text[i]);
            ++i;
        }
        if (has_letter) {
            ++stats.words;
            stats.syllables += count_syllables(text.substr(start, i - start));
        }
    }
    if (stats.words == 0)
        return stats; // sentences and syllables stay 0 for wordless text

    // sentence terminators: runs of . ! ? followed by whitespace or end
    for (i = 0; i < n; ++i) {
        if (text[i] != '.' && text[i] != '!' && text[i] != '?')
            continue;
        std::size_t j = i;
        while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?'))
            ++j;
        if (j == n || std::isspace(static_cast<unsigned char>(text[j])))
            ++stats.sentences;
        i = j - 1;
    }
    if (stats.sentences == 0)
        stats.sentences = 1;
    return stats;
}

} // namespace vocalign
