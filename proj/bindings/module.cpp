#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vocalign/comm.hpp"
#include "vocalign/common.hpp"
#include "vocalign/corpus.hpp"
#include "vocalign/csv.hpp"
#include "vocalign/glossary.hpp"
#include "vocalign/metrics.hpp"
#include "vocalign/stats.hpp"
#include "vocalign/text_norm.hpp"

namespace py = pybind11;
using namespace vocalign;

namespace {

py::object opt(const std::optional<double>& v) {
    return v ? py::cast(*v) : py::none();
}

py::dict row_dict(const RepoMetrics& row) {
    py::dict d;
    d["repo"] = row.repo;
    d["shared_vocab"] = opt(row.shared_vocab);
    d["avg_cc"] = opt(row.avg_cc);
    d["name_entropy"] = opt(row.name_entropy);
    d["comment_density"] = opt(row.comment_density);
    d["readability_score"] = opt(row.readability_score);
    d["maintainability_index"] = opt(row.maintainability_index);
    return d;
}

SharedVocabMode mode_from(const std::string& mode) {
    if (mode == "global-doc")
        return SharedVocabMode::GlobalDoc;
    if (mode == "function-docstring")
        return SharedVocabMode::FunctionDocstring;
    throw SchemaError("unknown mode '" + mode +
                      "' (expected function-docstring or global-doc)");
}

py::dict py_analyze(const std::string& path, const std::string& mode,
                    bool annotation_identifiers) {
    AnalyzeConfig cfg;
    cfg.vocab_mode = mode_from(mode);
    cfg.parse.annotation_identifiers = annotation_identifiers;
    const auto analysis = analyze_repo(scan_corpus(path), cfg);

    py::dict d = row_dict(analysis.row);
    d["code_files"] = analysis.code_files;
    d["doc_files"] = analysis.doc_files;
    d["units"] = analysis.units;
    d["degraded_files"] = analysis.degraded_files;
    py::list diags;
    for (const auto& diag : analysis.diagnostics)
        diags.append(diag.where + ": " + diag.message);
    d["diagnostics"] = diags;
    return d;
}

py::list py_correlate(const std::string& csv_path) {
    const auto rows = csv::read_metrics(csv::read_file(csv_path));
    py::list out;
    for (const auto& r : stats::correlate_all(rows)) {
        py::dict d;
        d["metric"] = r.metric;
        d["n"] = r.n;
        d["pearson_r"] = opt(r.pearson_r);
        d["pearson_p"] = opt(r.pearson_p);
        d["spearman_rho"] = opt(r.spearman_rho);
        d["spearman_p"] = opt(r.spearman_p);
        d["error"] = r.error;
        out.append(std::move(d));
    }
    return out;
}

py::list py_compare_groups(const std::string& csv_path, int k) {
    const auto rows = csv::read_metrics(csv::read_file(csv_path));
    py::list out;
    for (const auto& r : stats::compare_groups(rows, k)) {
        py::dict d;
        d["metric"] = r.metric;
        d["u"] = opt(r.u_value);
        d["p"] = opt(r.p_value);
        d["group_size"] = r.group_size;
        d["high_group"] = r.high_group;
        d["low_group"] = r.low_group;
        d["error"] = r.error;
        out.append(std::move(d));
    }
    return out;
}

py::list py_comm(const std::string& log_path, int window, bool any_gap) {
    if (window < 1)
        throw SchemaError("window must be at least 1");
    CommOptions options;
    options.window = window;
    options.any_gap = any_gap;
    const auto reports = comm_report(parse_comm_log(csv::read_file(log_path)), options);
    py::list out;
    for (const auto& r : reports) {
        py::dict d;
        d["group"] = r.group;
        d["messages"] = r.messages;
        d["avg_words_per_message"] = r.avg_words_per_message;
        py::dict by_role;
        for (const auto& [role, words] : r.avg_words_by_role)
            by_role[py::cast(role_name(role))] = words;
        d["avg_words_by_role"] = by_role;
        d["avg_response_time_s"] = opt(r.avg_response_time_s);
        d["density_by_turn"] = r.density_by_turn;
        out.append(std::move(d));
    }
    return out;
}

py::list py_lint(const std::string& path, const std::string& glossary_path,
                 bool near_miss, bool include_strings) {
    LintOptions options;
    options.near_miss = near_miss;
    options.include_strings = include_strings;
    const auto findings =
        lint_corpus(scan_corpus(path), load_glossary(glossary_path), options);
    py::list out;
    for (const auto& f : findings) {
        py::dict d;
        d["path"] = f.path;
        d["line"] = f.line;
        d["found"] = f.found;
        d["suggested"] = f.suggested;
        d["kind"] = f.kind == FindingKind::NearMiss ? "NearMiss" : "DeprecatedAlias";
        d["context"] = f.context == FindingContext::Identifier ? "Identifier"
                       : f.context == FindingContext::Comment  ? "Comment"
                                                               : "DocText";
        out.append(std::move(d));
    }
    return out;
}

std::set<std::string> token_set(const std::vector<std::string>& tokens) {
    return {tokens.begin(), tokens.end()};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "shared-vocabulary and code-quality metrics for source corpora";

    py::register_exception<Error>(m, "VocalignError", PyExc_RuntimeError);

    m.def("analyze", &py_analyze, py::arg("path"),
          py::arg("mode") = "function-docstring",
          py::arg("annotation_identifiers") = true,
          "Metrics row for one repository (directory or .zip).");

    m.def("correlate", &py_correlate, py::arg("csv_path"),
          "Correlations of each dependent metric against shared_vocab.");

    m.def("compare_groups", &py_compare_groups, py::arg("csv_path"),
          py::arg("k") = 0,
          "Mann-Whitney tests between the top-k and bottom-k shared-vocab rows.");

    m.def("comm_report", &py_comm, py::arg("log_path"), py::arg("window") = 1,
          py::arg("any_gap") = false, "Communication-log metrics per group.");

    m.def("lint", &py_lint, py::arg("path"), py::arg("glossary"),
          py::arg("near_miss") = false, py::arg("include_strings") = false,
          "Glossary conformance findings for a corpus.");

    m.def(
        "jaccard",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
            return jaccard(token_set(a), token_set(b));
        },
        py::arg("a"), py::arg("b"), "Jaccard similarity of two token collections.");

    m.def("split_identifier", &split_identifier, py::arg("identifier"),
          "Lowercased fragments of one identifier.");

    m.def("adjusted_density", &adjusted_density, py::arg("text"),
          "Length-normalized token entropy in [0, 1].");

    m.def("parse_iso8601", &parse_iso8601, py::arg("text"),
          "Seconds since the epoch for an ISO 8601 timestamp with zone.");

    m.def("within_one_edit", &within_one_edit, py::arg("a"), py::arg("b"),
          "True when the strings are exactly one edit or adjacent swap apart.");

    m.def(
        "pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            const auto c = stats::pearson(x, y);
            return py::make_tuple(c.r, c.p);
        },
        py::arg("x"), py::arg("y"), "(r, two-sided p) for two samples.");

    m.def(
        "spearman",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            const auto c = stats::spearman(x, y);
            return py::make_tuple(c.r, c.p);
        },
        py::arg("x"), py::arg("y"), "(rho, two-sided p) for two samples.");

    m.def(
        "mann_whitney",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const auto r = stats::mann_whitney(a, b);
            return py::make_tuple(r.u, r.p, r.exact);
        },
        py::arg("a"), py::arg("b"), "(U, two-sided p, exact) for two groups.");
}
