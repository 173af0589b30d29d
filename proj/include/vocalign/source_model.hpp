#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vocalign/common.hpp"
#include "vocalign/corpus.hpp"

namespace vocalign {

struct HalsteadCounts {
    std::uint64_t distinct_operators = 0; // eta1
    std::uint64_t distinct_operands = 0;  // eta2
    std::uint64_t total_operators = 0;    // N1
    std::uint64_t total_operands = 0;     // N2

    // (N1+N2) * log2(eta1+eta2); 0 when eta1+eta2 < 2.
    double volume() const;
};

struct SourceUnit {
    std::string qualified_name; // "outer.inner", "Class.method"
    int start_line = 1;         // def header line
    int end_line = 1;           // last code line of the body
    std::vector<std::string> identifiers; // raw, keywords excluded, source order
    std::optional<std::string> docstring;
    int decision_points = 0; // cyclomatic complexity = decision_points + 1
    HalsteadCounts halstead;
    int sloc = 0; // non-blank non-comment lines in [start_line, end_line]
};

struct FileModel {
    std::string path;
    std::vector<SourceUnit> units;         // source order of def headers
    std::vector<std::string> module_identifiers; // outside any unit
    int comment_lines = 0;
    int total_lines = 0; // non-blank
    int sloc = 0;        // total_lines - comment_lines
    std::string comment_text;   // '#' bodies joined with newlines
    std::string docstring_text; // module + unit docstrings joined with newlines
    HalsteadCounts halstead;    // file-wide
    bool degraded = false;      // tokenization broke block structure
    Diagnostics diagnostics;
};

struct ParseOptions {
    // when false, identifiers inside def-header parameter and return
    // annotations are left out of the identifier multisets
    bool annotation_identifiers = true;
};

// Lexical parse of one Code file. Never throws: a file whose block
// structure cannot be recovered comes back degraded, with identifiers and
// comments still extracted and units empty.
FileModel parse_source(const CorpusFile& file, const ParseOptions& options = {});

// Units in stable source order (parse_source already flattens nesting).
const std::vector<SourceUnit>& extract_units(const FileModel& model);

// JSON rendering for --dump-model.
std::string model_to_json(const FileModel& model);

} // namespace vocalign
