#pragma once

#include <string>
#include <utility>
#include <vector>

namespace vocalign::zip {

struct Entry {
    std::string path;    // as stored in the archive, '/' separators
    bool is_dir = false; // path ends with '/'
    std::string content; // raw decompressed bytes (empty for directories)
    bool crc_ok = true;
    std::string error;   // non-empty when the entry could not be extracted
};

// Extract every central-directory entry. Stored and deflate methods are
// supported; an entry with another method, a bad CRC, or truncated data is
// returned with `error` set instead of aborting the scan. Throws
// ArchiveCorrupt when the archive structure itself is unreadable and
// SourceNotFound when the file cannot be opened. Zip64 archives are
// rejected as corrupt.
std::vector<Entry> read_archive(const std::string& path);

// Minimal archive builder used by tests: all entries stored, fixed
// timestamps, so output is byte-stable. Directory entries are created by
// giving a path ending in '/'.
std::string build_archive(const std::vector<std::pair<std::string, std::string>>& entries);

} // namespace vocalign::zip
