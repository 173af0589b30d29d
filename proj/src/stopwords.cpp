#include "vocalign/text_norm.hpp"

#include <array>
#include <fstream>

#include "vocalign/common.hpp"

namespace vocalign {

namespace {

// 135 common English function words. Mirrored at data/stopwords.txt; a unit
// test keeps the two in sync.
constexpr std::array<const char*, 135> kBuiltinStopwords = {
    "a",        "about",   "above",    "after",    "again",      "against",  "all",
    "also",     "am",      "an",       "and",      "any",        "are",      "as",
    "at",       "be",      "because",  "been",     "before",     "being",    "below",
    "between",  "both",    "but",      "by",       "can",        "cannot",   "could",
    "did",      "do",      "does",     "doing",    "down",       "during",   "each",
    "few",      "for",     "from",     "further",  "had",        "has",      "have",
    "having",   "he",      "her",      "here",     "hers",       "herself",  "him",
    "himself",  "his",     "how",      "i",        "if",         "in",       "into",
    "is",       "it",      "its",      "itself",   "just",       "me",       "might",
    "more",     "most",    "must",     "my",       "myself",     "no",       "nor",
    "not",      "now",     "of",       "off",      "on",         "once",     "only",
    "or",       "other",   "our",      "ours",     "ourselves",  "out",      "over",
    "own",      "same",    "shall",    "she",      "should",     "so",       "some",
    "such",     "than",    "that",     "the",      "their",      "theirs",   "them",
    "themselves", "then",  "there",    "these",    "they",       "this",     "those",
    "through",  "to",      "too",      "under",    "until",      "up",       "upon",
    "very",     "via",     "was",      "we",       "were",       "what",     "when",
    "where",    "which",   "while",    "who",      "whom",       "why",      "will",
    "with",     "within",  "without",  "would",    "you",        "your",     "yours",
    "yourself", "yourselves",
};

} // namespace

const Stopwords& Stopwords::builtin() {
    static const Stopwords instance = [] {
        Stopwords sw;
        for (const char* w : kBuiltinStopwords)
            sw.words_.insert(w);
        return sw;
    }();
    return instance;
}

Stopwords Stopwords::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw SourceNotFound("cannot open stopword list: " + path.string());
    Stopwords sw;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto start = line.find_first_not_of(" \t");
        if (start == std::string::npos)
            continue;
        const auto end = line.find_last_not_of(" \t");
        std::string word = line.substr(start, end - start + 1);
        if (word.empty() || word.front() == '#')
            continue;
        for (char& c : word)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        sw.words_.insert(std::move(word));
    }
    return sw;
}

bool Stopwords::contains(std::string_view word) const {
    return words_.find(std::string(word)) != words_.end();
}

} // namespace vocalign
