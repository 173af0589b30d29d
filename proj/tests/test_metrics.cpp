#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "vocalign/corpus.hpp"
#include "vocalign/metrics.hpp"
#include "vocalign/source_model.hpp"

using namespace vocalign;

namespace {

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

FileModel model_of(const std::string& src, const std::string& path = "m.py") {
    CorpusFile f;
    f.path = path;
    f.kind = FileKind::Code;
    f.content = src;
    f.size_bytes = src.size();
    return parse_source(f);
}

CorpusFile doc_of(const std::string& text, const std::string& path = "README.md") {
    CorpusFile f;
    f.path = path;
    f.kind = FileKind::Doc;
    f.content = text;
    f.size_bytes = text.size();
    return f;
}

} // namespace

TEST_CASE("jaccard set conventions") {
    const std::set<std::string> a{"get", "user", "id"};
    const std::set<std::string> b{"returns", "user", "id"};
    CHECK(jaccard(a, b) == 0.5);
    CHECK(jaccard(a, a) == 1.0);
    CHECK(jaccard(a, {"nothing"}) == 0.0);
    CHECK(jaccard({}, {}) == 0.0);
    CHECK(jaccard(a, {}) == 0.0);
}

TEST_CASE("shared vocab: docstring mode averages documented units") {
    const auto m = model_of("def get_user_id(user):\n"
                            "    \"\"\"Returns the user id.\"\"\"\n"
                            "    return user\n");
    Diagnostics diags;
    const double s = shared_vocab_score({m}, {}, SharedVocabMode::FunctionDocstring,
                                        Stopwords::builtin(), &diags);
    // tokens {get, user, id} vs {returns, user, id}
    CHECK(s == 0.5);
    CHECK(diags.empty());
}

TEST_CASE("shared vocab: undocumented corpus scores zero with a warning") {
    const auto m = model_of("def f(x):\n    return x\n");
    Diagnostics diags;
    const double s = shared_vocab_score({m}, {}, SharedVocabMode::FunctionDocstring,
                                        Stopwords::builtin(), &diags);
    CHECK(s == 0.0);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].level == Diagnostic::Level::Warning);
}

TEST_CASE("shared vocab: empty model list is an error") {
    CHECK_THROWS_AS(shared_vocab_score({}, {}, SharedVocabMode::FunctionDocstring,
                                       Stopwords::builtin(), nullptr),
                    MetricError);
}

TEST_CASE("shared vocab: global mode joins code against doc files") {
    const auto m = model_of("def parse_config(path):\n    return path\n");
    const auto d = doc_of("Parse the config file from a path.");
    const double s = shared_vocab_score({m}, {d}, SharedVocabMode::GlobalDoc,
                                        Stopwords::builtin(), nullptr);
    // code {parse, config, path} vs doc {parse, config, file, path}
    CHECK(near(s, 3.0 / 4.0, 1e-12));

    Diagnostics diags;
    const double none = shared_vocab_score({m}, {}, SharedVocabMode::GlobalDoc,
                                           Stopwords::builtin(), &diags);
    CHECK(none == 0.0);
    CHECK(!diags.empty());
}

TEST_CASE("shared vocab is symmetric and duplication-invariant per unit") {
    const auto once = model_of("def alpha_beta(gamma):\n"
                               "    \"\"\"gamma alpha\"\"\"\n"
                               "    return gamma\n");
    const auto dup = model_of("def alpha_beta(gamma):\n"
                              "    \"\"\"gamma alpha gamma alpha gamma\"\"\"\n"
                              "    return gamma + gamma + gamma\n");
    const double a = shared_vocab_score({once}, {}, SharedVocabMode::FunctionDocstring,
                                        Stopwords::builtin(), nullptr);
    const double b = shared_vocab_score({dup}, {}, SharedVocabMode::FunctionDocstring,
                                        Stopwords::builtin(), nullptr);
    CHECK(near(a, b, 1e-15));
}

TEST_CASE("name entropy matches the documented examples") {
    // {foo x2, bar x2} -> uniform
    const auto uniform = model_of("foo = bar\nbar = foo\n");
    CHECK(near(name_entropy({uniform}), 1.0, 1e-12));

    // {foo x4} -> single symbol
    const auto single = model_of("foo = foo * foo + foo\n");
    CHECK(name_entropy({single}) == 0.0);

    // {a x3, b x1}
    const auto skewed = model_of("aa = aa * aa\nbb = 1\n");
    CHECK(near(name_entropy({skewed}), 0.8113, 5e-5));
}

TEST_CASE("name entropy depends only on the frequency histogram") {
    const auto m1 = model_of("red = blue + blue\ngreen = red\n");
    const auto m2 = model_of("xx = yy + yy\nzz = xx\n");
    CHECK(near(name_entropy({m1}), name_entropy({m2}), 1e-15));
    CHECK_THROWS_AS(name_entropy({model_of("# only a comment\n")}), MetricError);
}

TEST_CASE("avg cyclomatic matches the documented examples") {
    const auto flat = model_of("def f():\n    return 1\ndef g():\n    return 2\n");
    CHECK(avg_cyclomatic({flat}) == 1.0);

    const auto mixed = model_of("def f():\n    return 1\n"
                                "def g(a):\n    if a or a > 1:\n        return a\n");
    CHECK(avg_cyclomatic({mixed}) == 2.0); // CC {1, 3}

    const auto ex2 = model_of("def g(a):\n    if a and a > 0:\n        return a\n    return 0\n");
    CHECK(avg_cyclomatic({ex2}) == 3.0);

    CHECK_THROWS_AS(avg_cyclomatic({model_of("x = 1\n")}), MetricError);
}

TEST_CASE("avg cyclomatic ignores whitespace and comments") {
    const auto tight = model_of("def f(a):\n    if a:\n        return a\n    return 0\n");
    const auto airy = model_of("def f(a):\n\n    # check\n    if a:\n\n        return a\n"
                               "\n    return 0\n");
    CHECK(avg_cyclomatic({tight}) == avg_cyclomatic({airy}));
}

TEST_CASE("comment density examples and monotonicity") {
    const auto none = model_of("x = 1\ny = 2\n");
    CHECK(comment_density({none}) == 0.0);

    const auto all = model_of("# one\n# two\n");
    CHECK(comment_density({all}) == 1.0);

    const auto before = model_of("x = 1\ny = 2\nz = 3\n");
    const auto after = model_of("# note\nx = 1\ny = 2\nz = 3\n");
    CHECK(comment_density({after}) > comment_density({before}));

    CHECK_THROWS_AS(comment_density({model_of("\n\n")}), MetricError);
    CHECK_THROWS_AS(comment_density({}), MetricError);
}

TEST_CASE("readability evaluates flesch over comments and docstrings") {
    // "The cat sat." -> 3 words, 1 sentence, 3 syllables
    FileModel m;
    m.comment_text = "The cat sat.";
    CHECK(near(readability({m}), 119.19, 1e-9));

    FileModel empty;
    CHECK_THROWS_AS(readability({empty}), MetricError);
    CHECK_THROWS_AS(readability({model_of("x = 1\n")}), MetricError);
}

TEST_CASE("maintainability index formula cases") {
    // volume 0 (single token), one straight unit, one source line
    FileModel m;
    m.sloc = 1;
    m.units.emplace_back();
    m.units[0].decision_points = 0;
    CHECK(near(maintainability_index({m}), 99.87, 5e-3));
    CHECK(near(maintainability_index({m}), 100.0 * (171.0 - 0.23) / 171.0, 1e-12));

    // huge volume and line count floor at 0
    FileModel big;
    big.sloc = 1000000;
    big.halstead.total_operators = 4000000000ULL;
    big.halstead.total_operands = 4000000000ULL;
    big.halstead.distinct_operators = 1000;
    big.halstead.distinct_operands = 1000000;
    CHECK(maintainability_index({big}) == 0.0);

    CHECK_THROWS_AS(maintainability_index({model_of("# nothing but comments\n")}),
                    MetricError);
}

TEST_CASE("maintainability index is non-increasing in volume and sloc") {
    FileModel a;
    a.sloc = 50;
    a.halstead = {10, 20, 100, 80};
    FileModel more_volume = a;
    more_volume.halstead.total_operators = 200;
    FileModel more_lines = a;
    more_lines.sloc = 80;
    CHECK(maintainability_index({more_volume}) <= maintainability_index({a}));
    CHECK(maintainability_index({more_lines}) <= maintainability_index({a}));
}

TEST_CASE("golden mini-repo row") {
    const auto manifest = scan_corpus("tests/data/minirepo");
    REQUIRE(manifest.files.size() == 3);
    const auto analysis = analyze_repo(manifest);
    const auto& row = analysis.row;

    CHECK(row.repo == "minirepo");
    REQUIRE(row.shared_vocab.has_value());
    REQUIRE(row.avg_cc.has_value());
    REQUIRE(row.name_entropy.has_value());
    REQUIRE(row.comment_density.has_value());
    REQUIRE(row.readability_score.has_value());
    REQUIRE(row.maintainability_index.has_value());

    // frozen from the hand-derived token/line counts of the fixture:
    // per-unit jaccard 3/8, 2/7, 3/5
    CHECK(near(*row.shared_vocab, 353.0 / 840.0, 1e-12));
    CHECK(near(*row.avg_cc, 4.0 / 3.0, 1e-12));
    CHECK(near(*row.name_entropy, 0.9641447495639975, 1e-12));
    CHECK(near(*row.comment_density, 1.0 / 12.0, 1e-12));
    CHECK(near(*row.readability_score, 64.63064102564107, 1e-9));
    CHECK(near(*row.maintainability_index, 61.327613056222745, 1e-9));

    CHECK(analysis.code_files == 2);
    CHECK(analysis.doc_files == 1);
    CHECK(analysis.units == 3);
    CHECK(analysis.degraded_files == 0);
}

TEST_CASE("golden mini-repo row in global mode") {
    const auto manifest = scan_corpus("tests/data/minirepo");
    AnalyzeConfig cfg;
    cfg.vocab_mode = SharedVocabMode::GlobalDoc;
    const auto analysis = analyze_repo(manifest, cfg);
    REQUIRE(analysis.row.shared_vocab.has_value());
    CHECK(near(*analysis.row.shared_vocab, 1.0 / 3.0, 1e-12));
}

TEST_CASE("analyze is deterministic across runs") {
    const auto manifest = scan_corpus("tests/data/minirepo");
    const auto a = analyze_repo(manifest);
    const auto b = analyze_repo(manifest);
    CHECK(a.row.shared_vocab == b.row.shared_vocab);
    CHECK(a.row.avg_cc == b.row.avg_cc);
    CHECK(a.row.name_entropy == b.row.name_entropy);
    CHECK(a.row.comment_density == b.row.comment_density);
    CHECK(a.row.readability_score == b.row.readability_score);
    CHECK(a.row.maintainability_index == b.row.maintainability_index);
}

TEST_CASE("analyze keeps partial rows when a metric cannot be computed") {
    CorpusManifest manifest;
    manifest.root = "/tmp/script-only";
    CorpusFile f;
    f.path = "script.py";
    f.kind = FileKind::Code;
    f.content = "# module script\nvalue = 41 + 1\n";
    manifest.files.push_back(f);

    const auto analysis = analyze_repo(manifest);
    CHECK(!analysis.row.avg_cc.has_value());          // no functions
    CHECK(analysis.row.shared_vocab.has_value());     // 0 with warning
    CHECK(*analysis.row.shared_vocab == 0.0);
    CHECK(analysis.row.name_entropy.has_value());
    CHECK(analysis.row.comment_density.has_value());
    CHECK(analysis.row.maintainability_index.has_value());
    CHECK(!analysis.diagnostics.empty());
}

TEST_CASE("analyze refuses a corpus with no code files") {
    CorpusManifest manifest;
    manifest.root = "docs-only";
    manifest.files.push_back(doc_of("words"));
    CHECK_THROWS_AS(analyze_repo(manifest), MetricError);
}

TEST_CASE("repo basename strips directories and zip suffix") {
    CHECK(repo_basename("/data/repos/pandas-main.zip") == "pandas-main");
    CHECK(repo_basename("/data/repos/flask/") == "flask");
    CHECK(repo_basename("flask.ZIP") == "flask");
    CHECK(repo_basename("tests/data/minirepo") == "minirepo");
    CHECK(repo_basename("plain") == "plain");
}
