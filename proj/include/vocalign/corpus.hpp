#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vocalign {

struct IngestConfig {
    std::set<std::string> code_extensions = {".py"};
    std::set<std::string> doc_extensions = {".md", ".rst", ".txt"};
    std::set<std::string> excluded_dirs = {"node_modules", "venv",   ".venv",      "build",
                                           "dist",         "__pycache__", "site-packages"};
    bool exclude_hidden_dirs = true; // any directory segment starting with '.'
};

enum class FileKind { Code, Doc, Other };

struct CorpusFile {
    std::string path;             // relative, '/' separators
    FileKind kind = FileKind::Other;
    std::string content;          // decoded text for Code/Doc, empty for Other
    std::uint64_t size_bytes = 0; // raw size before decoding
};

struct CorpusManifest {
    std::string root;
    std::vector<CorpusFile> files; // sorted ascending by path
    std::vector<std::pair<std::string, std::string>> skipped; // (path, reason)
};

// Classification by final extension, case-insensitive. A basename whose only
// '.' characters are leading ("Makefile", ".gitignore") has no extension.
FileKind classify_extension(std::string_view path, const IngestConfig& config);

// Replace invalid UTF-8 sequences with U+FFFD; never fails.
std::string decode_utf8_lossy(std::string_view bytes);

// Walk a directory tree or a .zip archive into a deterministic manifest.
// Exclusion rules apply to directory segments of the relative path. A zip
// whose entries all live under a single top-level directory has that
// directory stripped, so zip and directory scans of the same tree agree.
// Symlinks are recorded in `skipped` and not followed.
CorpusManifest scan_corpus(const std::string& source, const IngestConfig& config = {});

} // namespace vocalign
