#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vocalign/common.hpp"
#include "vocalign/corpus.hpp"

namespace vocalign {

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

class DuplicateTerm : public Error {
public:
    explicit DuplicateTerm(const std::string& what) : Error("DuplicateTerm", what) {}
};

class AliasCollision : public Error {
public:
    explicit AliasCollision(const std::string& what) : Error("AliasCollision", what) {}
};

class EmptyGlossary : public Error {
public:
    explicit EmptyGlossary(const std::string& what) : Error("EmptyGlossary", what) {}
};

enum class TermCategory { EngineeringWide, DomainSpecific };

struct GlossaryEntry {
    std::string term; // canonical, lowercase
    std::string definition;
    std::vector<std::string> aliases; // deprecated spellings
    TermCategory category = TermCategory::EngineeringWide;
};

enum class FindingKind { DeprecatedAlias, NearMiss };
enum class FindingContext { Identifier, Comment, DocText };

struct LintFinding {
    std::string path;
    int line = 1;
    std::string found;
    std::string suggested; // a canonical term
    FindingKind kind = FindingKind::DeprecatedAlias;
    FindingContext context = FindingContext::Identifier;
};

// JSON array of {term, definition?, aliases?, category?}. Throws ParseError
// on malformed JSON or schema/invariant violations, DuplicateTerm when two
// entries share a term, AliasCollision when an alias equals another
// entry's term.
std::vector<GlossaryEntry> parse_glossary(std::string_view json_text);
std::vector<GlossaryEntry> load_glossary(const std::string& path);

// True when the optimal-string-alignment (Damerau-Levenshtein) distance is
// exactly 1: one insertion, deletion, substitution, or adjacent swap.
bool within_one_edit(std::string_view a, std::string_view b);

struct LintOptions {
    bool near_miss = false;       // report 1-edit misspellings of terms
    bool include_strings = false; // also scan string literals in code
};

// Check identifier fragments, comment tokens, and doc-file tokens against
// the glossary. Findings come back sorted by (path, line, found). Throws
// EmptyGlossary.
std::vector<LintFinding> lint_corpus(const CorpusManifest& manifest,
                                     const std::vector<GlossaryEntry>& glossary,
                                     const LintOptions& options = {});

enum class ReportFormat { Text, Json };

// Text: one "path:line: found 'x', suggest 'y' (Kind)" line per finding.
// Json: array of finding objects with a fixed field order.
std::string lint_report(const std::vector<LintFinding>& findings, ReportFormat format);

} // namespace vocalign
