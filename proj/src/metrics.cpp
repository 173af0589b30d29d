#include "vocalign/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

namespace vocalign {

namespace {

void warn(Diagnostics* diagnostics, const std::string& where, const std::string& message) {
    if (diagnostics)
        diagnostics->push_back({Diagnostic::Level::Warning, where, message});
}

} // namespace

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty())
        return 0.0;
    std::size_t both = 0;
    for (const auto& t : a)
        if (b.count(t))
            ++both;
    const std::size_t either = a.size() + b.size() - both;
    return static_cast<double>(both) / static_cast<double>(either);
}

double shared_vocab_score(const std::vector<FileModel>& models,
                          const std::vector<CorpusFile>& docs, SharedVocabMode mode,
                          const Stopwords& stopwords, Diagnostics* diagnostics) {
    if (models.empty())
        throw MetricError("NoCodeFiles", "shared_vocab: no parsed code files");

    if (mode == SharedVocabMode::FunctionDocstring) {
        double sum = 0.0;
        std::size_t documented = 0;
        for (const auto& m : models) {
            for (const auto& u : m.units) {
                if (!u.docstring || u.docstring->empty())
                    continue;
                const auto ids = normalize_identifiers(u.identifiers, stopwords);
                const auto doc = normalize_text(*u.docstring, stopwords);
                sum += jaccard(ids.tokens, doc.tokens);
                ++documented;
            }
        }
        if (documented == 0) {
            warn(diagnostics, "shared_vocab", "no documented unit in corpus; score is 0");
            return 0.0;
        }
        return sum / static_cast<double>(documented);
    }

    std::vector<std::string> all_ids;
    for (const auto& m : models) {
        all_ids.insert(all_ids.end(), m.module_identifiers.begin(),
                       m.module_identifiers.end());
        for (const auto& u : m.units)
            all_ids.insert(all_ids.end(), u.identifiers.begin(), u.identifiers.end());
    }
    const auto code_tokens = normalize_identifiers(all_ids, stopwords);
    std::set<std::string> doc_tokens;
    for (const auto& d : docs) {
        auto ts = normalize_text(d.content, stopwords);
        doc_tokens.insert(ts.tokens.begin(), ts.tokens.end());
    }
    if (doc_tokens.empty())
        warn(diagnostics, "shared_vocab", "no documentation tokens; score is 0");
    return jaccard(code_tokens.tokens, doc_tokens);
}

double name_entropy(const std::vector<FileModel>& models) {
    std::map<std::string, std::uint64_t> freq;
    std::uint64_t total = 0;
    for (const auto& m : models) {
        for (const auto& id : m.module_identifiers) {
            ++freq[id];
            ++total;
        }
        for (const auto& u : m.units) {
            for (const auto& id : u.identifiers) {
                ++freq[id];
                ++total;
            }
        }
    }
    if (total == 0)
        throw MetricError("NoIdentifiers", "name_entropy: no identifier occurrences");
    if (freq.size() <= 1)
        return 0.0;
    double h = 0.0;
    for (const auto& [_, count] : freq) {
        const double p = static_cast<double>(count) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h / std::log2(static_cast<double>(freq.size()));
}

double avg_cyclomatic(const std::vector<FileModel>& models) {
    std::uint64_t units = 0;
    std::uint64_t decisions = 0;
    for (const auto& m : models) {
        for (const auto& u : m.units) {
            ++units;
            decisions += static_cast<std::uint64_t>(u.decision_points);
        }
    }
    if (units == 0)
        throw MetricError("NoFunctions", "avg_cc: no source units");
    return (static_cast<double>(decisions) + static_cast<double>(units)) /
           static_cast<double>(units);
}

double comment_density(const std::vector<FileModel>& models) {
    std::uint64_t comment = 0;
    std::uint64_t total = 0;
    for (const auto& m : models) {
        comment += static_cast<std::uint64_t>(m.comment_lines);
        total += static_cast<std::uint64_t>(m.total_lines);
    }
    if (total == 0)
        throw MetricError("EmptyCorpus", "comment_density: no non-blank lines");
    return static_cast<double>(comment) / static_cast<double>(total);
}

double readability(const std::vector<FileModel>& models) {
    std::string prose;
    for (const auto& m : models) {
        for (const auto* piece : {&m.comment_text, &m.docstring_text}) {
            if (piece->empty())
                continue;
            if (!prose.empty())
                prose += '\n';
            prose += *piece;
        }
    }
    const TextStats st = text_stats(prose);
    if (st.words == 0)
        throw MetricError("NoProse", "readability: no comment or docstring text");
    const double words = static_cast<double>(st.words);
    const double sentences = static_cast<double>(st.sentences);
    const double syllables = static_cast<double>(st.syllables);
    return 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words);
}

double maintainability_index(const std::vector<FileModel>& models) {
    double volume = 0.0;
    std::uint64_t sloc = 0;
    std::uint64_t units = 0;
    std::uint64_t decisions = 0;
    for (const auto& m : models) {
        volume += m.halstead.volume();
        sloc += static_cast<std::uint64_t>(m.sloc);
        for (const auto& u : m.units) {
            ++units;
            decisions += static_cast<std::uint64_t>(u.decision_points);
        }
    }
    if (sloc == 0)
        throw MetricError("EmptyCorpus", "maintainability_index: no source lines");
    const double cc =
        units == 0 ? 0.0
                   : (static_cast<double>(decisions) + static_cast<double>(units)) /
                         static_cast<double>(units);
    const double mi = 100.0 *
                      (171.0 - 5.2 * std::log(std::max(volume, 1.0)) - 0.23 * cc -
                       16.2 * std::log(std::max(static_cast<double>(sloc), 1.0))) /
                      171.0;
    return std::clamp(mi, 0.0, 100.0);
}

std::string repo_basename(const std::string& source) {
    std::string s = source;
    while (s.size() > 1 && (s.back() == '/' || s.back() == '\\'))
        s.pop_back();
    const auto slash = s.find_last_of("/\\");
    if (slash != std::string::npos)
        s = s.substr(slash + 1);
    if (s.size() > 4) {
        std::string tail = s.substr(s.size() - 4);
        std::transform(tail.begin(), tail.end(), tail.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (tail == ".zip")
            s = s.substr(0, s.size() - 4);
    }
    return s.empty() ? "corpus" : s;
}

RepoAnalysis analyze_repo(const CorpusManifest& manifest, const AnalyzeConfig& config) {
    const Stopwords& stopwords =
        config.stopwords ? *config.stopwords : Stopwords::builtin();

    RepoAnalysis out;
    out.row.repo = repo_basename(manifest.root);

    std::vector<FileModel> models;
    std::vector<CorpusFile> docs;
    for (const auto& f : manifest.files) {
        if (f.kind == FileKind::Code) {
            models.push_back(parse_source(f, config.parse));
            const auto& m = models.back();
            out.diagnostics.insert(out.diagnostics.end(), m.diagnostics.begin(),
                                   m.diagnostics.end());
            if (m.degraded)
                ++out.degraded_files;
            out.units += static_cast<int>(m.units.size());
        } else if (f.kind == FileKind::Doc) {
            docs.push_back(f);
        }
    }
    out.code_files = static_cast<int>(models.size());
    out.doc_files = static_cast<int>(docs.size());
    if (models.empty())
        throw MetricError("NoCodeFiles", "analyze: corpus has no code files");

    const auto compute = [&](const char* name, auto fn) -> std::optional<double> {
        try {
            return fn();
        } catch (const MetricError& e) {
            out.diagnostics.push_back({Diagnostic::Level::Warning, name, e.what()});
            return std::nullopt;
        }
    };

    out.row.shared_vocab = compute("shared_vocab", [&] {
        return shared_vocab_score(models, docs, config.vocab_mode, stopwords,
                                  &out.diagnostics);
    });
    out.row.avg_cc = compute("avg_cc", [&] { return avg_cyclomatic(models); });
    out.row.name_entropy = compute("name_entropy", [&] { return name_entropy(models); });
    out.row.comment_density =
        compute("comment_density", [&] { return comment_density(models); });
    out.row.readability_score = compute("readability_score", [&] { return readability(models); });
    out.row.maintainability_index =
        compute("maintainability_index", [&] { return maintainability_index(models); });
    return out;
}

} // namespace vocalign
