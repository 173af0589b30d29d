#include "vocalign/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vocalign/common.hpp"
#include "vocalign/zip_reader.hpp"

namespace fs = std::filesystem;

namespace vocalign {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    return out;
}

// Final extension of the basename, lowercased, dot included. Leading dots
// never start an extension.
std::string extension_of(std::string_view path) {
    const std::size_t slash = path.find_last_of('/');
    const std::string_view base =
        slash == std::string_view::npos ? path : path.substr(slash + 1);
    const std::size_t dot = base.find_last_of('.');
    if (dot == std::string_view::npos)
        return {};
    if (base.find_first_not_of('.') >= dot)
        return {};
    return to_lower(base.substr(dot));
}

std::vector<std::string_view> segments_of(std::string_view path) {
    std::vector<std::string_view> segs;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t end = path.find('/', start);
        if (end == std::string_view::npos) {
            if (start < path.size())
                segs.push_back(path.substr(start));
            break;
        }
        if (end > start)
            segs.push_back(path.substr(start, end - start));
        start = end + 1;
    }
    return segs;
}

// True when any directory segment (all but the last unless include_last) is
// excluded.
bool in_excluded_dir(std::string_view rel_path, const IngestConfig& config,
                     bool include_last = false) {
    const auto segs = segments_of(rel_path);
    if (segs.empty())
        return false;
    const std::size_t limit = include_last ? segs.size() : segs.size() - 1;
    for (std::size_t i = 0; i < limit; ++i) {
        const auto& seg = segs[i];
        if (config.exclude_hidden_dirs && !seg.empty() && seg.front() == '.')
            return true;
        if (config.excluded_dirs.count(std::string(seg)))
            return true;
    }
    return false;
}

void append_replacement(std::string& out) {
    out += "\xEF\xBF\xBD"; // U+FFFD
}

bool is_cont(unsigned char c) { return (c & 0xC0) == 0x80; }

void add_file(CorpusManifest& manifest, std::string rel_path, std::string raw_bytes,
              const IngestConfig& config) {
    CorpusFile f;
    f.path = std::move(rel_path);
    f.kind = classify_extension(f.path, config);
    f.size_bytes = raw_bytes.size();
    if (f.kind != FileKind::Other)
        f.content = decode_utf8_lossy(raw_bytes);
    manifest.files.push_back(std::move(f));
}

void finish(CorpusManifest& manifest) {
    std::sort(manifest.files.begin(), manifest.files.end(),
              [](const CorpusFile& a, const CorpusFile& b) { return a.path < b.path; });
    std::sort(manifest.skipped.begin(), manifest.skipped.end());
}

CorpusManifest scan_zip(const std::string& source, const IngestConfig& config) {
    auto entries = zip::read_archive(source);
    CorpusManifest manifest;
    manifest.root = source;

    // Strip a single shared top-level directory (archive-of-a-folder layout).
    std::string shared_prefix;
    bool single_top = !entries.empty();
    for (const auto& e : entries) {
        const std::size_t slash = e.path.find('/');
        if (slash == std::string::npos) { // bare file at archive root
            single_top = false;
            break;
        }
        const std::string top = e.path.substr(0, slash + 1);
        if (shared_prefix.empty())
            shared_prefix = top;
        else if (shared_prefix != top) {
            single_top = false;
            break;
        }
    }
    const std::size_t strip = single_top ? shared_prefix.size() : 0;

    std::set<std::string> seen;
    for (auto& e : entries) {
        if (e.is_dir)
            continue;
        std::string rel = e.path.substr(std::min(strip, e.path.size()));
        if (rel.empty())
            continue;
        if (in_excluded_dir(rel, config))
            continue;
        if (!seen.insert(rel).second) {
            manifest.skipped.emplace_back(rel, "duplicate path in archive");
            continue;
        }
        if (!e.error.empty()) {
            manifest.skipped.emplace_back(rel, e.error);
            continue;
        }
        add_file(manifest, std::move(rel), std::move(e.content), config);
    }
    finish(manifest);
    return manifest;
}

CorpusManifest scan_directory(const std::string& source, const IngestConfig& config) {
    CorpusManifest manifest;
    manifest.root = source;
    const fs::path root(source);

    std::vector<fs::path> pending;
    std::error_code ec;
    fs::recursive_directory_iterator it(root, fs::directory_options::none, ec), end;
    if (ec)
        throw SourceNotFound(source + ": " + ec.message());
    while (it != end) {
        const fs::path& p = it->path();
        const std::string rel = p.lexically_relative(root).generic_string();
        if (it->is_symlink()) {
            if (!in_excluded_dir(rel, config, /*include_last=*/true))
                manifest.skipped.emplace_back(rel, "symlink not followed");
        } else if (it->is_directory()) {
            // prune excluded directories without walking them
            const std::string name = p.filename().generic_string();
            const bool hidden =
                config.exclude_hidden_dirs && !name.empty() && name.front() == '.';
            if (hidden || config.excluded_dirs.count(name))
                it.disable_recursion_pending();
        } else if (it->is_regular_file() && !in_excluded_dir(rel, config)) {
            pending.push_back(p);
        }
        it.increment(ec);
        if (ec)
            throw SourceNotFound(source + ": " + ec.message());
    }

    for (const fs::path& p : pending) {
        const std::string rel = p.lexically_relative(root).generic_string();
        std::ifstream in(p, std::ios::binary);
        if (!in) {
            manifest.skipped.emplace_back(rel, "unreadable");
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        add_file(manifest, rel, std::move(buf).str(), config);
    }
    finish(manifest);
    return manifest;
}

} // namespace

FileKind classify_extension(std::string_view path, const IngestConfig& config) {
    const std::string ext = extension_of(path);
    if (ext.empty())
        return FileKind::Other;
    if (config.code_extensions.count(ext))
        return FileKind::Code;
    if (config.doc_extensions.count(ext))
        return FileKind::Doc;
    return FileKind::Other;
}

std::string decode_utf8_lossy(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(bytes[i]);
        if (c < 0x80) {
            out += static_cast<char>(c);
            ++i;
            continue;
        }
        std::size_t len = 0;
        unsigned char lo = 0x80, hi = 0xBF;
        if (c >= 0xC2 && c <= 0xDF) {
            len = 2;
        } else if (c == 0xE0) {
            len = 3;
            lo = 0xA0;
        } else if (c >= 0xE1 && c <= 0xEC) {
            len = 3;
        } else if (c == 0xED) {
            len = 3;
            hi = 0x9F;
        } else if (c >= 0xEE && c <= 0xEF) {
            len = 3;
        } else if (c == 0xF0) {
            len = 4;
            lo = 0x90;
        } else if (c >= 0xF1 && c <= 0xF3) {
            len = 4;
        } else if (c == 0xF4) {
            len = 4;
            hi = 0x8F;
        } else {
            append_replacement(out);
            ++i;
            continue;
        }
        if (i + len > n) {
            append_replacement(out);
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char cc = static_cast<unsigned char>(bytes[i + k]);
            const unsigned char klo = (k == 1) ? lo : 0x80;
            const unsigned char khi = (k == 1) ? hi : 0xBF;
            if (cc < klo || cc > khi || !is_cont(cc)) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            append_replacement(out);
            ++i;
            continue;
        }
        out.append(bytes.substr(i, len));
        i += len;
    }
    return out;
}

CorpusManifest scan_corpus(const std::string& source, const IngestConfig& config) {
    std::error_code ec;
    const fs::file_status st = fs::status(source, ec);
    if (ec || st.type() == fs::file_type::not_found)
        throw SourceNotFound(source + ": no such file or directory");
    if (fs::is_directory(st))
        return scan_directory(source, config);
    if (fs::is_regular_file(st))
        return scan_zip(source, config);
    throw SourceNotFound(source + ": not a directory or regular file");
}

} // namespace vocalign
