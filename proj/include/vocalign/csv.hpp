#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vocalign/repo_metrics.hpp"

namespace vocalign::csv {

// RFC-4180 parse: quoted fields, doubled quotes, embedded commas and
// newlines, CRLF or LF row ends. Throws SchemaError on an unterminated
// quoted field.
std::vector<std::vector<std::string>> parse(std::string_view text);

// Quote a field when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

// Fields joined with commas, no trailing newline.
std::string join_row(std::span<const std::string> fields);

// Shortest decimal representation that round-trips the value.
std::string format_full(double v);

// Value rounded to at most max_frac fractional digits, trailing zeros
// stripped ("14.0000" -> "14", "-0.0" -> "0").
std::string format_fixed(double v, int max_frac);

// Read a whole file. Throws SourceNotFound when it cannot be opened.
std::string read_file(const std::string& path);

// Metrics table (the batch schema). Header must match kMetricsCsvHeader;
// empty cells become null metrics. Throws SchemaError on a malformed
// header, wrong column count, or a non-numeric cell.
std::vector<RepoMetrics> read_metrics(std::string_view text);
std::string write_metrics(std::span<const RepoMetrics> rows);

} // namespace vocalign::csv
