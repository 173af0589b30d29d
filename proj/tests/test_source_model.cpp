#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "vocalign/py_lexer.hpp"
#include "vocalign/source_model.hpp"

using namespace vocalign;

namespace {

CorpusFile code_file(std::string content, std::string path = "mod.py") {
    CorpusFile f;
    f.path = std::move(path);
    f.kind = FileKind::Code;
    f.content = std::move(content);
    f.size_bytes = f.content.size();
    return f;
}

std::multiset<std::string> mset(const std::vector<std::string>& v) {
    return {v.begin(), v.end()};
}

} // namespace

TEST_CASE("lexer basics: identifiers, keywords, numbers, operators") {
    const auto r = lex_python("x = foo(1, 0x1f, 2.5e-3) + y_2\n");
    REQUIRE(r.lines.size() == 1);
    const auto& toks = r.lines[0].tokens;
    std::vector<std::string> texts;
    for (const auto& t : toks)
        texts.push_back(t.text);
    CHECK(texts == std::vector<std::string>{"x", "=", "foo", "(", "1", ",", "0x1f", ",",
                                            "2.5e-3", ")", "+", "y_2"});
    CHECK(toks[0].kind == TokKind::Identifier);
    CHECK(toks[1].kind == TokKind::Operator);
    CHECK(toks[4].kind == TokKind::Number);
    CHECK(r.ok);
}

TEST_CASE("lexer strings: prefixes, escapes, triples") {
    const auto r = lex_python("a = 'it\\'s'\nb = r\"raw\\n\"\nc = \"\"\"multi\nline\"\"\"\n");
    REQUIRE(r.lines.size() == 3);
    CHECK(r.lines[0].tokens[2].value == "it's");
    CHECK(r.lines[1].tokens[2].value == "raw\\n");
    CHECK(r.lines[2].tokens[2].value == "multi\nline");
    CHECK(r.lines[2].tokens[2].line == 3);
    CHECK(r.lines[2].end_line == 4);
}

TEST_CASE("lexer: comment inside string is not a comment line") {
    const auto r = lex_python("s = \"\"\"\n# not a comment\n\"\"\"\n# real\n");
    CHECK(r.comment_lines() == 1);
    REQUIRE(r.comments.size() == 1);
    CHECK(r.comments[0].second == "real");
    // every line with content counts as non-blank
    CHECK(r.total_lines() == 4);
}

TEST_CASE("lexer: bracket continuation joins logical lines") {
    const auto r = lex_python("x = f(\n    1,\n    2,\n)\ny = 3\n");
    REQUIRE(r.lines.size() == 2);
    CHECK(r.lines[0].start_line == 1);
    CHECK(r.lines[0].end_line == 4);
    CHECK(r.lines[1].start_line == 5);
}

TEST_CASE("lexer: backslash continuation") {
    const auto r = lex_python("total = 1 + \\\n    2\n");
    REQUIRE(r.lines.size() == 1);
    CHECK(r.lines[0].tokens.size() == 5);
    CHECK(r.lines[0].end_line == 2);
}

TEST_CASE("lexer: anomalies set degraded signal") {
    CHECK(!lex_python("s = 'unterminated\n").ok);
    CHECK(!lex_python("x = (1, 2\n").ok);
    CHECK(!lex_python("s = \"\"\"never closed\n").ok);
    CHECK(lex_python("x = 1\n").ok);
}

TEST_CASE("lexer: tab indentation uses 8-column stops") {
    const auto r = lex_python("if x:\n\ty = 1\n        z = 2\n");
    REQUIRE(r.lines.size() == 3);
    CHECK(r.lines[1].indent == 8);
    CHECK(r.lines[2].indent == 8);
}

TEST_CASE("parse_source: branchless function") {
    const auto m = parse_source(code_file("def f(x):\n    return x + 1\n"));
    REQUIRE(m.units.size() == 1);
    const auto& u = m.units[0];
    CHECK(u.qualified_name == "f");
    CHECK(mset(u.identifiers) == std::multiset<std::string>{"f", "x", "x"});
    CHECK(u.decision_points == 0);
    CHECK(u.start_line == 1);
    CHECK(u.end_line == 2);
    CHECK(u.sloc == 2);
    CHECK(m.module_identifiers.empty());
}

TEST_CASE("parse_source: if plus and gives two decision points") {
    const auto m = parse_source(
        code_file("def g(a):\n    if a and a > 0:\n        return a\n    return 0\n"));
    REQUIRE(m.units.size() == 1);
    CHECK(m.units[0].decision_points == 2);
}

TEST_CASE("parse_source: comment-only model") {
    const auto m = parse_source(code_file("# note\n\nx = 1\n"));
    CHECK(m.units.empty());
    CHECK(m.comment_lines == 1);
    CHECK(m.total_lines == 2);
    CHECK(mset(m.module_identifiers) == std::multiset<std::string>{"x"});
    CHECK(m.comment_text == "note");
}

TEST_CASE("extract_units: methods and nested functions flatten in order") {
    const auto m = parse_source(code_file("class C:\n"
                                          "    def m1(self):\n"
                                          "        pass\n"
                                          "    def m2(self):\n"
                                          "        pass\n"));
    const auto& units = extract_units(m);
    REQUIRE(units.size() == 2);
    CHECK(units[0].qualified_name == "C.m1");
    CHECK(units[1].qualified_name == "C.m2");

    const auto n = parse_source(code_file("def outer():\n"
                                          "    def inner():\n"
                                          "        return 1\n"
                                          "    return inner\n"));
    REQUIRE(n.units.size() == 2);
    CHECK(n.units[0].qualified_name == "outer");
    CHECK(n.units[1].qualified_name == "outer.inner");
    CHECK(n.units[0].end_line == 4);
    CHECK(n.units[1].end_line == 3);
}

TEST_CASE("lambda decision points count toward the enclosing unit") {
    const auto base = parse_source(code_file("def h(xs):\n    f = len\n    return f(xs)\n"));
    const auto with_lambda = parse_source(
        code_file("def h(xs):\n    f = lambda v: v if v else 0\n    return f(xs)\n"));
    REQUIRE(base.units.size() == 1);
    REQUIRE(with_lambda.units.size() == 1);
    CHECK(base.units[0].decision_points == 0);
    // ternary if counts 1; no unit is created for the lambda
    CHECK(with_lambda.units[0].decision_points == 1);
}

TEST_CASE("docstring detection: block, one-liner, module") {
    const auto m = parse_source(code_file("\"\"\"Module doc.\"\"\"\n"
                                          "def f():\n"
                                          "    \"\"\"F doc.\"\"\"\n"
                                          "    return 1\n"
                                          "def g(): \"G doc.\"\n"
                                          "def h():\n"
                                          "    return 2\n"));
    REQUIRE(m.units.size() == 3);
    CHECK(m.units[0].docstring == "F doc.");
    CHECK(m.units[1].docstring == "G doc.");
    CHECK(!m.units[2].docstring.has_value());
    CHECK(m.docstring_text == "Module doc.\nF doc.\nG doc.");
}

TEST_CASE("a later bare string is not a docstring") {
    const auto m = parse_source(code_file("def f():\n"
                                          "    x = 1\n"
                                          "    \"not a docstring\"\n"
                                          "    return x\n"));
    REQUIRE(m.units.size() == 1);
    CHECK(!m.units[0].docstring.has_value());
    CHECK(m.docstring_text.empty());
}

TEST_CASE("identifier multisets partition between units and module") {
    const std::string src = "top = 1\n"
                            "def f(a):\n"
                            "    return a + top_helper(a)\n"
                            "class C:\n"
                            "    attr = 2\n"
                            "    def m(self):\n"
                            "        return self.attr\n"
                            "bottom = f(3)\n";
    const auto m = parse_source(code_file(src));
    std::multiset<std::string> all_units;
    for (const auto& u : m.units)
        for (const auto& id : u.identifiers)
            all_units.insert(id);
    // module: top, C(class name), attr, bottom, f
    CHECK(mset(m.module_identifiers) ==
          std::multiset<std::string>{"top", "C", "attr", "bottom", "f"});
    CHECK(all_units == std::multiset<std::string>{"f", "a", "a", "top_helper", "a", "m",
                                                  "self", "self", "attr"});
}

TEST_CASE("parser locality: concatenating files unions their units") {
    const std::string a = "def f(x):\n    return x\n";
    const std::string b = "def g(y):\n    if y:\n        return y\n    return 0\n";
    const auto ma = parse_source(code_file(a));
    const auto mb = parse_source(code_file(b));
    const auto mc = parse_source(code_file(a + b));
    REQUIRE(mc.units.size() == ma.units.size() + mb.units.size());
    CHECK(mc.units[0].qualified_name == "f");
    CHECK(mc.units[1].qualified_name == "g");
    CHECK(mc.units[0].decision_points == ma.units[0].decision_points);
    CHECK(mc.units[1].decision_points == mb.units[0].decision_points);
    CHECK(mset(mc.units[1].identifiers) == mset(mb.units[0].identifiers));
}

TEST_CASE("halstead counting follows the documented classification") {
    // x = f(1) + 1  ->  operands: x, f, 1, 1 ; operators: =, (, ), +
    const auto m = parse_source(code_file("x = f(1) + 1\n"));
    CHECK(m.halstead.total_operands == 4);
    CHECK(m.halstead.distinct_operands == 3);
    CHECK(m.halstead.total_operators == 4);
    CHECK(m.halstead.distinct_operators == 4);

    // declaration keywords vanish; flow keywords are operators
    const auto n = parse_source(code_file("import os\n"));
    CHECK(n.halstead.total_operators == 0);
    CHECK(n.halstead.total_operands == 1);

    const auto k = parse_source(code_file("return x\n"));
    CHECK(k.halstead.total_operators == 1);
    CHECK(k.halstead.total_operands == 1);
}

TEST_CASE("halstead invariants and volume convention") {
    const auto m = parse_source(code_file("def f(a, b):\n    return a * b + a\n"));
    const auto& h = m.halstead;
    CHECK(h.distinct_operators <= h.total_operators);
    CHECK(h.distinct_operands <= h.total_operands);
    CHECK(h.volume() > 0.0);

    CHECK(parse_source(code_file("")).halstead.volume() == 0.0);
    CHECK(parse_source(code_file("x\n")).halstead.volume() == 0.0); // vocabulary of 1
}

TEST_CASE("degraded file falls back to lexical extraction") {
    const auto m = parse_source(code_file("def broken(:\n    x = 'unterminated\n"));
    CHECK(m.degraded);
    CHECK(m.units.empty());
    CHECK(!m.module_identifiers.empty());
    CHECK(!m.diagnostics.empty());
}

TEST_CASE("annotation identifiers obey the parse option") {
    const std::string src = "def f(a: WidgetType, b=DEFAULT) -> ResultType:\n    return a\n";
    const auto with_ann = parse_source(code_file(src));
    ParseOptions opts;
    opts.annotation_identifiers = false;
    const auto without = parse_source(code_file(src), opts);
    REQUIRE(with_ann.units.size() == 1);
    REQUIRE(without.units.size() == 1);
    CHECK(mset(with_ann.units[0].identifiers) ==
          std::multiset<std::string>{"f", "a", "WidgetType", "b", "DEFAULT", "ResultType",
                                     "a"});
    CHECK(mset(without.units[0].identifiers) ==
          std::multiset<std::string>{"f", "a", "b", "DEFAULT", "a"});
}

TEST_CASE("async def forms a unit") {
    const auto m = parse_source(code_file("async def fetch(url):\n    return url\n"));
    REQUIRE(m.units.size() == 1);
    CHECK(m.units[0].qualified_name == "fetch");
}

TEST_CASE("decision points: comprehension clauses and except") {
    const auto m = parse_source(code_file("def f(xs):\n"
                                          "    ys = [x for x in xs if x]\n"
                                          "    try:\n"
                                          "        return ys\n"
                                          "    except ValueError:\n"
                                          "        return []\n"
                                          "    except KeyError:\n"
                                          "        return []\n"));
    REQUIRE(m.units.size() == 1);
    // for(1) + if(1) + except(2)
    CHECK(m.units[0].decision_points == 4);
}

TEST_CASE("model json dump carries the core fields") {
    const auto m = parse_source(code_file("def f():\n    \"\"\"Doc.\"\"\"\n    return 1\n"));
    const std::string js = model_to_json(m);
    CHECK(js.find("\"qualified_name\": \"f\"") != std::string::npos);
    CHECK(js.find("\"cyclomatic_complexity\": 1") != std::string::npos);
    CHECK(js.find("\"docstring\": \"Doc.\"") != std::string::npos);
}

TEST_CASE("deterministic: same bytes give identical model dump") {
    const std::string src = "def f(x):\n    # c\n    return x\n";
    const auto a = model_to_json(parse_source(code_file(src)));
    const auto b = model_to_json(parse_source(code_file(src)));
    CHECK(a == b);
}
