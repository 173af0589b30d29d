#include <algorithm>
#include <atomic>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vocalign/comm.hpp"
#include "vocalign/common.hpp"
#include "vocalign/corpus.hpp"
#include "vocalign/csv.hpp"
#include "vocalign/glossary.hpp"
#include "vocalign/metrics.hpp"
#include "vocalign/stats.hpp"
#include "vocalign/text_norm.hpp"

namespace {

using namespace vocalign;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

struct Options {
    std::string format;
    std::string output;
    int jobs = 0;
    std::string config_path;

    std::vector<std::string> paths;
    std::string mode = "function-docstring";
    bool no_annotation_identifiers = false;
    std::string stopwords_path;
    int k = 0;
    int window = 1;
    bool any_gap = false;
    std::string glossary_path;
    bool near_miss = false;
    bool include_strings = false;

    IngestConfig ingest;
};

void add_common(CLI::App* cmd, Options& o, const std::vector<std::string>& formats) {
    o.format = formats.front();
    cmd->add_option("--format", o.format, "output format (default " + formats.front() + ")")
        ->check(CLI::IsMember(formats));
    cmd->add_option("--output", o.output, "write the report to this file");
    cmd->add_option("--jobs", o.jobs, "worker threads (0 = hardware concurrency)");
    cmd->add_option("--config", o.config_path, "JSON file with default option values");
}

std::vector<std::string> string_list(const nlohmann::json& v, const std::string& key) {
    if (!v.is_array())
        throw SchemaError("config: '" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string())
            throw SchemaError("config: '" + key + "' must be an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

// Config values fill in only the options the command line left untouched.
void apply_config(Options& o, const CLI::App& sub) {
    if (o.config_path.empty())
        return;
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(csv::read_file(o.config_path));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("config: " + std::string(e.what()));
    }
    if (!cfg.is_object())
        throw SchemaError("config: top level must be a JSON object");

    const auto untouched = [&sub](const std::string& name) {
        const CLI::Option* opt = sub.get_option_no_throw(name);
        return opt != nullptr && opt->count() == 0;
    };
    try {
        for (const auto& [key, value] : cfg.items()) {
            if (key == "format") {
                if (untouched("--format"))
                    o.format = value.get<std::string>();
            } else if (key == "output") {
                if (untouched("--output"))
                    o.output = value.get<std::string>();
            } else if (key == "jobs") {
                if (untouched("--jobs"))
                    o.jobs = value.get<int>();
            } else if (key == "mode") {
                if (untouched("--mode"))
                    o.mode = value.get<std::string>();
            } else if (key == "annotation_identifiers") {
                if (untouched("--no-annotation-identifiers"))
                    o.no_annotation_identifiers = !value.get<bool>();
            } else if (key == "stopwords") {
                if (untouched("--stopwords"))
                    o.stopwords_path = value.get<std::string>();
            } else if (key == "k") {
                if (untouched("--k"))
                    o.k = value.get<int>();
            } else if (key == "window") {
                if (untouched("--window"))
                    o.window = value.get<int>();
            } else if (key == "any_gap") {
                if (untouched("--any-gap"))
                    o.any_gap = value.get<bool>();
            } else if (key == "glossary") {
                if (untouched("--glossary"))
                    o.glossary_path = value.get<std::string>();
            } else if (key == "near_miss") {
                if (untouched("--near-miss"))
                    o.near_miss = value.get<bool>();
            } else if (key == "include_strings") {
                if (untouched("--include-strings"))
                    o.include_strings = value.get<bool>();
            } else if (key == "code_extensions") {
                const auto lst = string_list(value, key);
                o.ingest.code_extensions = {lst.begin(), lst.end()};
            } else if (key == "doc_extensions") {
                const auto lst = string_list(value, key);
                o.ingest.doc_extensions = {lst.begin(), lst.end()};
            } else if (key == "excluded_dirs") {
                const auto lst = string_list(value, key);
                o.ingest.excluded_dirs = {lst.begin(), lst.end()};
            } else if (key == "exclude_hidden_dirs") {
                o.ingest.exclude_hidden_dirs = value.get<bool>();
            } else {
                throw SchemaError("config: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("config: " + std::string(e.what()));
    }
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out)
        throw SourceNotFound("cannot open output file: " + output_path);
    out << text;
}

void print_diagnostics(const Diagnostics& diags, const std::string& prefix = "") {
    for (const auto& d : diags) {
        const char* level = d.level == Diagnostic::Level::Error     ? "error"
                            : d.level == Diagnostic::Level::Warning ? "warning"
                                                                    : "info";
        std::cerr << prefix << level << " [" << d.where << "] " << d.message << "\n";
    }
}

AnalyzeConfig analyze_config(const Options& o, std::optional<Stopwords>& custom) {
    AnalyzeConfig cfg;
    if (o.mode == "global-doc")
        cfg.vocab_mode = SharedVocabMode::GlobalDoc;
    else if (o.mode == "function-docstring")
        cfg.vocab_mode = SharedVocabMode::FunctionDocstring;
    else
        throw SchemaError("unknown mode '" + o.mode +
                          "' (expected function-docstring or global-doc)");
    cfg.parse.annotation_identifiers = !o.no_annotation_identifiers;
    if (!o.stopwords_path.empty()) {
        custom = Stopwords::load(o.stopwords_path);
        cfg.stopwords = &*custom;
    }
    return cfg;
}

ordered_json row_json(const RepoMetrics& row) {
    ordered_json obj;
    obj["repo"] = row.repo;
    const auto put = [&obj](const char* name, const std::optional<double>& v) {
        if (v)
            obj[name] = *v;
        else
            obj[name] = nullptr;
    };
    put("shared_vocab", row.shared_vocab);
    put("avg_cc", row.avg_cc);
    put("name_entropy", row.name_entropy);
    put("comment_density", row.comment_density);
    put("readability_score", row.readability_score);
    put("maintainability_index", row.maintainability_index);
    return obj;
}

int cmd_analyze(Options& o) {
    std::optional<Stopwords> custom;
    const AnalyzeConfig cfg = analyze_config(o, custom);
    const auto manifest = scan_corpus(o.paths.front(), o.ingest);
    for (const auto& [path, reason] : manifest.skipped)
        std::cerr << "info [" << path << "] skipped: " << reason << "\n";
    const auto analysis = analyze_repo(manifest, cfg);
    print_diagnostics(analysis.diagnostics);

    if (o.format == "csv")
        emit(csv::write_metrics({&analysis.row, 1}), o.output);
    else
        emit(row_json(analysis.row).dump(2) + "\n", o.output);
    return kExitOk;
}

struct BatchItem {
    RepoMetrics row;
    Diagnostics diags;
    bool ok = true;
};

template <typename F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                   : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;)
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

int cmd_batch(Options& o) {
    std::optional<Stopwords> custom;
    const AnalyzeConfig cfg = analyze_config(o, custom);

    std::vector<BatchItem> items(o.paths.size());
    parallel_for(o.paths.size(), o.jobs, [&](std::size_t i) {
        BatchItem& item = items[i];
        try {
            const auto manifest = scan_corpus(o.paths[i], o.ingest);
            auto analysis = analyze_repo(manifest, cfg);
            item.row = std::move(analysis.row);
            item.diags = std::move(analysis.diagnostics);
        } catch (const Error& e) {
            item.ok = false;
            item.row = RepoMetrics{};
            item.row.repo = repo_basename(o.paths[i]);
            item.diags.push_back(
                {Diagnostic::Level::Error, o.paths[i], e.code() + ": " + e.what()});
        }
    });

    std::stable_sort(items.begin(), items.end(),
                     [](const BatchItem& a, const BatchItem& b) {
                         return a.row.repo < b.row.repo;
                     });

    bool any_ok = false;
    std::vector<RepoMetrics> rows;
    rows.reserve(items.size());
    for (const auto& item : items) {
        print_diagnostics(item.diags, item.row.repo + ": ");
        rows.push_back(item.row);
        any_ok = any_ok || item.ok;
    }
    if (!any_ok)
        throw SourceNotFound("batch: every input path failed");

    if (o.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows)
            arr.push_back(row_json(row));
        emit(arr.dump(2) + "\n", o.output);
    } else {
        emit(csv::write_metrics(rows), o.output);
    }
    return kExitOk;
}

std::string na_or_fixed(const std::optional<double>& v) {
    return v ? csv::format_fixed(*v, 4) : "NA";
}

int cmd_correlate(Options& o) {
    const auto rows = csv::read_metrics(csv::read_file(o.paths.front()));
    const auto results = stats::correlate_all(rows);

    for (const auto& r : results) {
        if (!r.error.empty())
            std::cerr << "warning [" << r.metric << "] " << r.error << "\n";
    }
    if (o.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& r : results) {
            ordered_json obj;
            obj["metric"] = r.metric;
            obj["n"] = r.n;
            obj["pearson_r"] = r.pearson_r ? ordered_json(*r.pearson_r) : nullptr;
            obj["pearson_p"] = r.pearson_p ? ordered_json(*r.pearson_p) : nullptr;
            obj["spearman_rho"] = r.spearman_rho ? ordered_json(*r.spearman_rho) : nullptr;
            obj["spearman_p"] = r.spearman_p ? ordered_json(*r.spearman_p) : nullptr;
            obj["error"] = r.error;
            arr.push_back(std::move(obj));
        }
        emit(arr.dump(2) + "\n", o.output);
    } else {
        std::string out = "metric,n,pearson_r,pearson_p,spearman_rho,spearman_p\n";
        for (const auto& r : results) {
            out += csv::escape(r.metric) + "," + std::to_string(r.n) + "," +
                   na_or_fixed(r.pearson_r) + "," + na_or_fixed(r.pearson_p) + "," +
                   na_or_fixed(r.spearman_rho) + "," + na_or_fixed(r.spearman_p) + "\n";
        }
        emit(out, o.output);
    }
    return kExitOk;
}

int cmd_compare_groups(Options& o) {
    const auto rows = csv::read_metrics(csv::read_file(o.paths.front()));
    const auto results = stats::compare_groups(rows, o.k);

    for (const auto& r : results) {
        if (!r.error.empty())
            std::cerr << "warning [" << r.metric << "] " << r.error << "\n";
    }
    if (o.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& r : results) {
            ordered_json obj;
            obj["metric"] = r.metric;
            obj["u"] = r.u_value ? ordered_json(*r.u_value) : nullptr;
            obj["p"] = r.p_value ? ordered_json(*r.p_value) : nullptr;
            obj["group_size"] = r.group_size;
            obj["high_group"] = r.high_group;
            obj["low_group"] = r.low_group;
            obj["error"] = r.error;
            arr.push_back(std::move(obj));
        }
        emit(arr.dump(2) + "\n", o.output);
    } else {
        std::string out = "metric,u,p,group_size\n";
        for (const auto& r : results) {
            out += csv::escape(r.metric) + "," + na_or_fixed(r.u_value) + "," +
                   na_or_fixed(r.p_value) + "," + std::to_string(r.group_size) + "\n";
        }
        emit(out, o.output);
    }
    return kExitOk;
}

int cmd_comm(Options& o) {
    if (o.window < 1)
        throw SchemaError("window must be at least 1");
    const auto log = parse_comm_log(csv::read_file(o.paths.front()));
    CommOptions opts;
    opts.window = o.window;
    opts.any_gap = o.any_gap;
    const auto reports = comm_report(log, opts);
    if (o.format == "csv")
        emit(density_csv(reports), o.output);
    else
        emit(comm_report_json(reports), o.output);
    return kExitOk;
}

int cmd_lint(Options& o) {
    if (o.glossary_path.empty())
        throw SchemaError("lint needs --glossary (or a 'glossary' config key)");
    const auto glossary = load_glossary(o.glossary_path);
    const auto manifest = scan_corpus(o.paths.front(), o.ingest);
    LintOptions opts;
    opts.near_miss = o.near_miss;
    opts.include_strings = o.include_strings;
    const auto findings = lint_corpus(manifest, glossary, opts);
    emit(lint_report(findings,
                     o.format == "json" ? ReportFormat::Json : ReportFormat::Text),
         o.output);
    return findings.empty() ? kExitOk : kExitFindings;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shared-vocabulary and code-quality reports for source corpora"};
    app.require_subcommand(1);

    Options o;
    int (*run)(Options&) = nullptr;

    auto* analyze = app.add_subcommand("analyze", "metrics row for one repository");
    analyze->add_option("path", o.paths, "directory or .zip archive")
        ->required()
        ->expected(1);
    analyze->add_option("--mode", o.mode,
                        "shared-vocab mode: function-docstring|global-doc");
    analyze->add_flag("--no-annotation-identifiers", o.no_annotation_identifiers,
                      "ignore identifiers inside def annotations");
    analyze->add_option("--stopwords", o.stopwords_path, "custom stopword file");
    add_common(analyze, o, {"json", "csv"});
    analyze->callback([&] { run = cmd_analyze; });

    auto* batch = app.add_subcommand("batch", "metrics table for many repositories");
    batch->add_option("paths", o.paths, "directories or .zip archives")->required();
    batch->add_option("--mode", o.mode,
                      "shared-vocab mode: function-docstring|global-doc");
    batch->add_flag("--no-annotation-identifiers", o.no_annotation_identifiers,
                    "ignore identifiers inside def annotations");
    batch->add_option("--stopwords", o.stopwords_path, "custom stopword file");
    add_common(batch, o, {"csv", "json"});
    batch->callback([&] { run = cmd_batch; });

    auto* correlate =
        app.add_subcommand("correlate", "correlations against shared_vocab");
    correlate->add_option("csv", o.paths, "metrics CSV (batch schema)")
        ->required()
        ->expected(1);
    add_common(correlate, o, {"csv", "json"});
    correlate->callback([&] { run = cmd_correlate; });

    auto* compare = app.add_subcommand(
        "compare-groups", "Mann-Whitney tests between high and low shared-vocab groups");
    compare->add_option("csv", o.paths, "metrics CSV (batch schema)")
        ->required()
        ->expected(1);
    compare->add_option("--k", o.k, "group size (default min(5, n/2))");
    add_common(compare, o, {"csv", "json"});
    compare->callback([&] { run = cmd_compare_groups; });

    auto* comm = app.add_subcommand("comm", "communication-log metrics per group");
    comm->add_option("log", o.paths, "message log CSV")->required()->expected(1);
    comm->add_option("--window", o.window, "density smoothing window in turns");
    comm->add_flag("--any-gap", o.any_gap,
                   "response time over all adjacent message gaps");
    add_common(comm, o, {"json", "csv"});
    comm->callback([&] { run = cmd_comm; });

    auto* lint = app.add_subcommand("lint", "glossary conformance check");
    lint->add_option("path", o.paths, "directory or .zip archive")
        ->required()
        ->expected(1);
    lint->add_option("--glossary", o.glossary_path, "glossary JSON file");
    lint->add_flag("--near-miss", o.near_miss,
                   "also report one-edit misspellings of terms");
    lint->add_flag("--include-strings", o.include_strings,
                   "also scan string literals");
    add_common(lint, o, {"text", "json"});
    lint->callback([&] { run = cmd_lint; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        apply_config(o, *app.get_subcommands().front());
        return run(o);
    } catch (const Error& e) {
        std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error " << e.what() << "\n";
        return kExitError;
    }
}
