#include "vocalign/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "vocalign/common.hpp"

namespace vocalign::csv {

std::vector<std::vector<std::string>> parse(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (row.size() != 1 || !row.front().empty()) // skip blank lines
            rows.push_back(std::move(row));
        row.clear();
    };

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                continue;
            }
            field += c;
            ++i;
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            field_started = true;
            ++i;
            break;
        case ',':
            end_field();
            field_started = true; // next field exists even if empty
            ++i;
            break;
        case '\r':
            end_row();
            if (i + 1 < n && text[i + 1] == '\n')
                ++i;
            ++i;
            break;
        case '\n':
            end_row();
            ++i;
            break;
        default:
            field += c;
            field_started = true;
            ++i;
            break;
        }
    }
    if (in_quotes)
        throw SchemaError("csv: unterminated quoted field");
    if (field_started || !field.empty() || !row.empty())
        end_row();
    return rows;
}

std::string escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes)
        return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out += '"';
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join_row(std::span<const std::string> fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out += ',';
        out += escape(fields[i]);
    }
    return out;
}

std::string format_full(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int max_frac) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", max_frac, v);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0')
            s.pop_back();
        if (s.back() == '.')
            s.pop_back();
    }
    if (s == "-0")
        s = "0";
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SourceNotFound("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

namespace {

std::optional<double> parse_cell(const std::string& cell, const std::string& column) {
    if (cell.empty())
        return std::nullopt;
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw SchemaError("metrics csv: non-numeric cell '" + cell + "' in column " + column);
    return value;
}

const std::vector<std::string> kMetricsColumns = {
    "repo",          "shared_vocab",      "avg_cc",
    "name_entropy",  "comment_density",   "readability_score",
    "maintainability_index",
};

} // namespace

std::vector<RepoMetrics> read_metrics(std::string_view text) {
    const auto rows = parse(text);
    if (rows.empty())
        throw SchemaError("metrics csv: empty input");
    if (rows.front() != kMetricsColumns)
        throw SchemaError("metrics csv: header must be '" + std::string(kMetricsCsvHeader) + "'");
    std::vector<RepoMetrics> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != kMetricsColumns.size())
            throw SchemaError("metrics csv: row " + std::to_string(i + 1) + " has " +
                              std::to_string(row.size()) + " cells, expected " +
                              std::to_string(kMetricsColumns.size()));
        RepoMetrics m;
        m.repo = row[0];
        m.shared_vocab = parse_cell(row[1], "shared_vocab");
        m.avg_cc = parse_cell(row[2], "avg_cc");
        m.name_entropy = parse_cell(row[3], "name_entropy");
        m.comment_density = parse_cell(row[4], "comment_density");
        m.readability_score = parse_cell(row[5], "readability_score");
        m.maintainability_index = parse_cell(row[6], "maintainability_index");
        out.push_back(std::move(m));
    }
    return out;
}

std::string write_metrics(std::span<const RepoMetrics> rows) {
    std::string out(kMetricsCsvHeader);
    out += '\n';
    for (const RepoMetrics& m : rows) {
        std::vector<std::string> fields;
        fields.push_back(m.repo);
        for (const char* name : {"shared_vocab", "avg_cc", "name_entropy", "comment_density",
                                 "readability_score", "maintainability_index"}) {
            const auto v = metric_value(m, name);
            fields.push_back(v ? format_full(*v) : std::string());
        }
        out += join_row(fields);
        out += '\n';
    }
    return out;
}

} // namespace vocalign::csv
