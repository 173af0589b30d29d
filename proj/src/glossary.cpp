#include "vocalign/glossary.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include <json.hpp>

#include "vocalign/csv.hpp"
#include "vocalign/py_lexer.hpp"
#include "vocalign/text_norm.hpp"

namespace vocalign {

namespace {

bool is_lower_token(std::string_view s) {
    if (s.empty())
        return false;
    for (const unsigned char c : s)
        if (std::isupper(c))
            return false;
    return true;
}

TermCategory parse_category(const std::string& name) {
    if (name == "EngineeringWide")
        return TermCategory::EngineeringWide;
    if (name == "DomainSpecific")
        return TermCategory::DomainSpecific;
    throw ParseError("glossary: unknown category '" + name +
                     "' (expected EngineeringWide or DomainSpecific)");
}

// maximal [A-Za-z0-9_]+ runs, lowercased; underscores survive so a comment
// token like usr_id is compared whole
std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || ch == '_') {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty())
        out.push_back(std::move(current));
    return out;
}

struct GlossaryIndex {
    std::map<std::string, std::string> alias_to_term;
    std::set<std::string> terms;

    bool known(const std::string& token) const {
        return terms.count(token) || alias_to_term.count(token);
    }
};

GlossaryIndex build_index(const std::vector<GlossaryEntry>& glossary) {
    GlossaryIndex idx;
    for (const auto& e : glossary)
        idx.terms.insert(e.term);
    for (const auto& e : glossary) {
        for (const auto& a : e.aliases) {
            // cross-entry duplicate aliases resolve to the smallest term so
            // output never depends on glossary file order
            auto it = idx.alias_to_term.find(a);
            if (it == idx.alias_to_term.end() || e.term < it->second)
                idx.alias_to_term[a] = e.term;
        }
    }
    return idx;
}

class Linter {
public:
    Linter(const GlossaryIndex& index, const LintOptions& options,
           std::vector<LintFinding>& findings)
        : index_(index), options_(options), findings_(findings) {}

    void check_token(const std::string& path, int line, const std::string& token,
                     FindingContext context) {
        if (index_.terms.count(token))
            return; // canonical use is never flagged
        const auto alias = index_.alias_to_term.find(token);
        if (alias != index_.alias_to_term.end()) {
            findings_.push_back({path, line, token, alias->second,
                                 FindingKind::DeprecatedAlias, context});
            return;
        }
        if (!options_.near_miss || token.size() < 4)
            return;
        for (const auto& term : index_.terms) {
            if (within_one_edit(token, term)) {
                findings_.push_back(
                    {path, line, token, term, FindingKind::NearMiss, context});
                return; // terms are iterated in order; first hit is canonical
            }
        }
    }

    void lint_code(const CorpusFile& file) {
        const auto lex = lex_python(file.content);
        for (const auto& logical : lex.lines) {
            for (const auto& tok : logical.tokens) {
                if (tok.kind == TokKind::Identifier) {
                    for (const auto& fragment : split_identifier(tok.text))
                        check_token(file.path, tok.line, fragment,
                                    FindingContext::Identifier);
                } else if (tok.kind == TokKind::String && options_.include_strings) {
                    for (const auto& word : word_tokens(tok.value))
                        check_token(file.path, tok.line, word, FindingContext::DocText);
                }
            }
        }
        for (const auto& [line, body] : lex.comments)
            for (const auto& word : word_tokens(body))
                check_token(file.path, line, word, FindingContext::Comment);
    }

    void lint_doc(const CorpusFile& file) {
        int line = 1;
        std::size_t start = 0;
        const std::string& text = file.content;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string::npos)
                end = text.size();
            for (const auto& word : word_tokens(
                     std::string_view(text).substr(start, end - start)))
                check_token(file.path, line, word, FindingContext::DocText);
            start = end + 1;
            ++line;
            if (end == text.size())
                break;
        }
    }

private:
    const GlossaryIndex& index_;
    const LintOptions& options_;
    std::vector<LintFinding>& findings_;
};

} // namespace

std::vector<GlossaryEntry> parse_glossary(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("glossary: ") + e.what());
    }
    if (!doc.is_array())
        throw ParseError("glossary: top level must be a JSON array of entries");

    std::vector<GlossaryEntry> entries;
    for (const auto& item : doc) {
        if (!item.is_object())
            throw ParseError("glossary: entry must be an object");
        GlossaryEntry e;
        if (!item.contains("term") || !item["term"].is_string())
            throw ParseError("glossary: entry missing string field 'term'");
        e.term = item["term"].get<std::string>();
        if (!is_lower_token(e.term))
            throw ParseError("glossary: term '" + e.term +
                             "' must be a non-empty lowercase token");
        if (item.contains("definition")) {
            if (!item["definition"].is_string())
                throw ParseError("glossary: 'definition' must be a string");
            e.definition = item["definition"].get<std::string>();
        }
        if (item.contains("aliases")) {
            if (!item["aliases"].is_array())
                throw ParseError("glossary: 'aliases' must be an array");
            for (const auto& a : item["aliases"]) {
                if (!a.is_string())
                    throw ParseError("glossary: alias must be a string");
                const auto alias = a.get<std::string>();
                if (!is_lower_token(alias))
                    throw ParseError("glossary: alias '" + alias +
                                     "' must be a non-empty lowercase token");
                if (alias == e.term)
                    throw ParseError("glossary: term '" + e.term +
                                     "' lists itself as an alias");
                if (std::find(e.aliases.begin(), e.aliases.end(), alias) !=
                    e.aliases.end())
                    throw ParseError("glossary: duplicate alias '" + alias +
                                     "' in entry '" + e.term + "'");
                e.aliases.push_back(alias);
            }
        }
        if (item.contains("category")) {
            if (!item["category"].is_string())
                throw ParseError("glossary: 'category' must be a string");
            e.category = parse_category(item["category"].get<std::string>());
        }
        entries.push_back(std::move(e));
    }

    std::set<std::string> terms;
    for (const auto& e : entries)
        if (!terms.insert(e.term).second)
            throw DuplicateTerm("glossary: term '" + e.term + "' appears twice");
    for (const auto& e : entries)
        for (const auto& a : e.aliases)
            if (terms.count(a))
                throw AliasCollision("glossary: alias '" + a + "' of '" + e.term +
                                     "' is another entry's term");
    return entries;
}

std::vector<GlossaryEntry> load_glossary(const std::string& path) {
    return parse_glossary(csv::read_file(path));
}

bool within_one_edit(std::string_view a, std::string_view b) {
    if (a == b)
        return false;
    if (a.size() == b.size()) {
        std::size_t i = 0;
        while (a[i] == b[i])
            ++i; // a != b guarantees a mismatch
        if (a.substr(i + 1) == b.substr(i + 1))
            return true; // substitution
        return i + 1 < a.size() && a[i] == b[i + 1] && a[i + 1] == b[i] &&
               a.substr(i + 2) == b.substr(i + 2); // adjacent swap
    }
    const std::string_view shorter = a.size() < b.size() ? a : b;
    const std::string_view longer = a.size() < b.size() ? b : a;
    if (shorter.size() + 1 != longer.size())
        return false;
    std::size_t i = 0;
    while (i < shorter.size() && shorter[i] == longer[i])
        ++i;
    return shorter.substr(i) == longer.substr(i + 1); // one insertion
}

std::vector<LintFinding> lint_corpus(const CorpusManifest& manifest,
                                     const std::vector<GlossaryEntry>& glossary,
                                     const LintOptions& options) {
    if (glossary.empty())
        throw EmptyGlossary("lint: glossary has no entries");
    const GlossaryIndex index = build_index(glossary);

    std::vector<LintFinding> findings;
    Linter linter(index, options, findings);
    for (const auto& f : manifest.files) {
        if (f.kind == FileKind::Code)
            linter.lint_code(f);
        else if (f.kind == FileKind::Doc)
            linter.lint_doc(f);
    }
    std::sort(findings.begin(), findings.end(),
              [](const LintFinding& x, const LintFinding& y) {
                  return std::tie(x.path, x.line, x.found, x.suggested) <
                         std::tie(y.path, y.line, y.found, y.suggested);
              });
    return findings;
}

namespace {

const char* kind_name(FindingKind k) {
    return k == FindingKind::DeprecatedAlias ? "DeprecatedAlias" : "NearMiss";
}

const char* context_name(FindingContext c) {
    switch (c) {
    case FindingContext::Identifier: return "Identifier";
    case FindingContext::Comment: return "Comment";
    default: return "DocText";
    }
}

} // namespace

std::string lint_report(const std::vector<LintFinding>& findings, ReportFormat format) {
    if (format == ReportFormat::Text) {
        std::string out;
        for (const auto& f : findings) {
            out += f.path + ":" + std::to_string(f.line) + ": found '" + f.found +
                   "', suggest '" + f.suggested + "' (" + kind_name(f.kind) + ")\n";
        }
        return out;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
        nlohmann::ordered_json obj;
        obj["path"] = f.path;
        obj["line"] = f.line;
        obj["found"] = f.found;
        obj["suggested"] = f.suggested;
        obj["kind"] = kind_name(f.kind);
        obj["context"] = context_name(f.context);
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

} // namespace vocalign
