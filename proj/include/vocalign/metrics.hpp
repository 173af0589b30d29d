#pragma once

#include <set>
#include <string>
#include <vector>

#include "vocalign/common.hpp"
#include "vocalign/corpus.hpp"
#include "vocalign/repo_metrics.hpp"
#include "vocalign/source_model.hpp"
#include "vocalign/text_norm.hpp"

namespace vocalign {

enum class SharedVocabMode { FunctionDocstring, GlobalDoc };

struct AnalyzeConfig {
    SharedVocabMode vocab_mode = SharedVocabMode::FunctionDocstring;
    ParseOptions parse;
    const Stopwords* stopwords = nullptr; // null means the built-in list
};

// |A∩B| / |A∪B|; both-empty gives 0 so undocumented units cannot score.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// FunctionDocstring: mean Jaccard between each documented unit's identifier
// tokens and its docstring tokens; 0 with a warning when nothing is
// documented. GlobalDoc: one Jaccard between all code identifier tokens and
// all Doc-file tokens. Throws MetricError("NoCodeFiles") when models is
// empty.
double shared_vocab_score(const std::vector<FileModel>& models,
                          const std::vector<CorpusFile>& docs, SharedVocabMode mode,
                          const Stopwords& stopwords, Diagnostics* diagnostics = nullptr);

// Normalized Shannon entropy of raw identifier frequencies; 0 when only one
// distinct identifier exists. Throws MetricError("NoIdentifiers").
double name_entropy(const std::vector<FileModel>& models);

// Mean (decision_points + 1) over every unit. Throws
// MetricError("NoFunctions").
double avg_cyclomatic(const std::vector<FileModel>& models);

// Σ comment lines / Σ non-blank lines. Throws MetricError("EmptyCorpus")
// when there are no non-blank lines.
double comment_density(const std::vector<FileModel>& models);

// Flesch reading ease of all comment and docstring text. Throws
// MetricError("NoProse") when that text has no words.
double readability(const std::vector<FileModel>& models);

// 0-100 scale: max(0, 100*(171 - 5.2*ln(max(V,1)) - 0.23*CC -
// 16.2*ln(max(L,1)))/171) with V the summed per-file Halstead volume, CC the
// unit mean (0 when no units), L total SLOC. Throws
// MetricError("EmptyCorpus") when total SLOC is 0.
double maintainability_index(const std::vector<FileModel>& models);

struct RepoAnalysis {
    RepoMetrics row;
    Diagnostics diagnostics;
    int code_files = 0;
    int doc_files = 0;
    int units = 0;
    int degraded_files = 0;
};

// One Table-style row for a scanned corpus. A metric that cannot be
// computed becomes a null field plus a diagnostic; only an empty corpus
// (no Code files at all) aborts, with MetricError("NoCodeFiles").
RepoAnalysis analyze_repo(const CorpusManifest& manifest, const AnalyzeConfig& config = {});

// Repo name for report rows: final path component, any ".zip" suffix
// dropped, trailing separators ignored.
std::string repo_basename(const std::string& source);

} // namespace vocalign
