#include "vocalign/source_model.hpp"

#include <cmath>
#include <set>
#include <string>

#include <json.hpp>

#include "vocalign/py_lexer.hpp"

namespace vocalign {

double HalsteadCounts::volume() const {
    const std::uint64_t vocab = distinct_operators + distinct_operands;
    if (vocab < 2)
        return 0.0;
    return static_cast<double>(total_operators + total_operands) *
           std::log2(static_cast<double>(vocab));
}

namespace {

const std::set<std::string, std::less<>> kDeclarationKeywords = {
    "def", "class", "import", "from", "global", "nonlocal", "pass",
};

const std::set<std::string, std::less<>> kDecisionKeywords = {
    "if", "elif", "for", "while", "except", "and", "or", "assert",
};

struct HalsteadBuilder {
    std::set<std::string> operators;
    std::set<std::string> operands;
    HalsteadCounts counts;

    void add_operator(const std::string& text) {
        operators.insert(text);
        ++counts.total_operators;
    }
    void add_operand(const std::string& text) {
        operands.insert(text);
        ++counts.total_operands;
    }
    HalsteadCounts finish() {
        counts.distinct_operators = operators.size();
        counts.distinct_operands = operands.size();
        return counts;
    }
};

struct UnitBuilder {
    SourceUnit unit;
    HalsteadBuilder halstead;
    bool awaiting_docstring = false;
};

// scope stack entry: a def (owning a unit) or a class (name only)
struct Scope {
    bool is_unit = false;
    std::string name;
    int header_indent = 0;
    std::size_t unit_index = 0; // into builders, valid when is_unit
};

class ModelBuilder {
public:
    ModelBuilder(const CorpusFile& file, const ParseOptions& options)
        : options_(options) {
        model_.path = file.path;
        lex_ = lex_python(file.content);
    }

    FileModel build() {
        model_.comment_lines = lex_.comment_lines();
        model_.total_lines = lex_.total_lines();
        model_.sloc = model_.total_lines - model_.comment_lines;
        for (const auto& [line, body] : lex_.comments) {
            if (!model_.comment_text.empty())
                model_.comment_text += '\n';
            model_.comment_text += body;
        }
        for (const std::string& a : lex_.anomalies)
            model_.diagnostics.push_back(
                {Diagnostic::Level::Warning, model_.path, a});

        if (!lex_.ok) {
            degraded_pass();
            return std::move(model_);
        }

        for (const LogicalLine& line : lex_.lines)
            process_line(line);
        while (!scopes_.empty())
            close_scope();
        finish();
        return std::move(model_);
    }

private:
    ParseOptions options_;
    LexResult lex_;
    FileModel model_;
    std::vector<UnitBuilder> builders_;
    std::vector<Scope> scopes_;
    HalsteadBuilder file_halstead_;
    bool module_docstring_pending_ = true;
    int last_code_line_ = 1;

    void degraded_pass() {
        model_.degraded = true;
        model_.diagnostics.push_back({Diagnostic::Level::Warning, model_.path,
                                      "block structure unrecoverable; lexical model only"});
        for (const LogicalLine& line : lex_.lines)
            for (const Token& t : line.tokens) {
                if (t.kind == TokKind::Identifier)
                    model_.module_identifiers.push_back(t.text);
                add_halstead_file(t);
            }
        model_.halstead = file_halstead_.finish();
    }

    UnitBuilder* innermost_unit() {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
            if (it->is_unit)
                return &builders_[it->unit_index];
        return nullptr;
    }

    std::string qualified(const std::string& name) const {
        std::string q;
        for (const Scope& s : scopes_) {
            q += s.name;
            q += '.';
        }
        q += name;
        return q;
    }

    void close_scope() {
        Scope s = scopes_.back();
        scopes_.pop_back();
        if (!s.is_unit)
            return;
        UnitBuilder& b = builders_[s.unit_index];
        b.unit.end_line = std::max(b.unit.start_line, last_code_line_);
        b.unit.halstead = b.halstead.finish();
    }

    void add_halstead_file(const Token& t) { add_halstead(t, file_halstead_); }

    void add_halstead(const Token& t, HalsteadBuilder& hb) {
        switch (t.kind) {
        case TokKind::Identifier:
        case TokKind::Number:
        case TokKind::String:
            hb.add_operand(t.text);
            break;
        case TokKind::Operator:
            hb.add_operator(t.text);
            break;
        case TokKind::Keyword:
            if (kDeclarationKeywords.find(t.text) == kDeclarationKeywords.end())
                hb.add_operator(t.text);
            break;
        }
    }

    // index of the first ':' operator at bracket depth 0, or npos
    static std::size_t header_colon(const std::vector<Token>& toks) {
        int depth = 0;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const Token& t = toks[i];
            if (t.kind != TokKind::Operator)
                continue;
            if (t.text == "(" || t.text == "[" || t.text == "{")
                ++depth;
            else if (t.text == ")" || t.text == "]" || t.text == "}")
                --depth;
            else if (t.text == ":" && depth == 0)
                return i;
        }
        return std::string::npos;
    }

    // marks tokens of a def header that belong to parameter or return
    // annotations
    static std::vector<bool> annotation_mask(const std::vector<Token>& toks,
                                             std::size_t colon) {
        std::vector<bool> mask(toks.size(), false);
        int depth = 0;
        bool in_param_annotation = false;
        bool in_return_annotation = false;
        for (std::size_t i = 0; i < std::min(colon, toks.size()); ++i) {
            const Token& t = toks[i];
            if (t.kind == TokKind::Operator) {
                if (t.text == "(" || t.text == "[" || t.text == "{") {
                    ++depth;
                    if (depth == 1)
                        continue; // opening the parameter list
                } else if (t.text == ")" || t.text == "]" || t.text == "}") {
                    --depth;
                    if (depth == 0)
                        in_param_annotation = false;
                } else if (t.text == ":" && depth == 1) {
                    in_param_annotation = true;
                    continue;
                } else if ((t.text == "," && depth == 1) ||
                           (t.text == "=" && depth == 1)) {
                    in_param_annotation = false;
                } else if (t.text == "->" && depth == 0) {
                    in_return_annotation = true;
                    continue;
                }
            }
            if (in_param_annotation || in_return_annotation)
                mask[i] = true;
        }
        return mask;
    }

    void attribute_tokens(const LogicalLine& line, UnitBuilder* target,
                          const std::vector<bool>* annotation) {
        for (std::size_t i = 0; i < line.tokens.size(); ++i) {
            const Token& t = line.tokens[i];
            add_halstead_file(t);
            if (target)
                add_halstead(t, target->halstead);
            if (t.kind == TokKind::Identifier) {
                const bool skip = annotation && (*annotation)[i] &&
                                  !options_.annotation_identifiers;
                if (!skip) {
                    if (target)
                        target->unit.identifiers.push_back(t.text);
                    else
                        model_.module_identifiers.push_back(t.text);
                }
            }
            if (t.kind == TokKind::Keyword &&
                kDecisionKeywords.find(t.text) != kDecisionKeywords.end()) {
                if (target)
                    ++target->unit.decision_points;
            }
        }
    }

    void process_line(const LogicalLine& line) {
        while (!scopes_.empty() && line.indent <= scopes_.back().header_indent)
            close_scope();

        const std::vector<Token>& toks = line.tokens;
        std::size_t kw = 0; // position of def/class keyword, if any
        if (!toks.empty() && toks[0].kind == TokKind::Keyword && toks[0].text == "async" &&
            toks.size() > 1)
            kw = 1;
        const bool is_def = toks.size() > kw && toks[kw].kind == TokKind::Keyword &&
                            toks[kw].text == "def";
        const bool is_class = toks.size() > kw && toks[kw].kind == TokKind::Keyword &&
                              toks[kw].text == "class";

        UnitBuilder* enclosing = innermost_unit();

        if (is_def && toks.size() > kw + 1 && toks[kw + 1].kind == TokKind::Identifier) {
            const std::string name = toks[kw + 1].text;
            UnitBuilder b;
            b.unit.qualified_name = qualified(name);
            b.unit.start_line = line.start_line;
            b.unit.end_line = line.end_line;
            b.awaiting_docstring = true;
            builders_.push_back(std::move(b));
            const std::size_t idx = builders_.size() - 1;
            scopes_.push_back({true, name, line.indent, idx});

            UnitBuilder* unit = &builders_[idx];
            const std::size_t colon = header_colon(toks);
            const auto mask = annotation_mask(toks, colon == std::string::npos
                                                        ? toks.size()
                                                        : colon);
            attribute_tokens(line, unit, &mask);

            // one-line body: "def f(): return x" or a docstring one-liner
            if (colon != std::string::npos && colon + 1 < toks.size()) {
                unit->awaiting_docstring = false;
                if (colon + 2 == toks.size() && toks[colon + 1].kind == TokKind::String)
                    set_docstring(*unit, toks[colon + 1].value);
            }
            module_docstring_pending_ = false;
            last_code_line_ = line.end_line;
            return;
        }

        if (is_class && toks.size() > kw + 1 && toks[kw + 1].kind == TokKind::Identifier) {
            attribute_tokens(line, enclosing, nullptr);
            scopes_.push_back({false, toks[kw + 1].text, line.indent, 0});
            module_docstring_pending_ = false;
            last_code_line_ = line.end_line;
            return;
        }

        attribute_tokens(line, enclosing, nullptr);

        const bool lone_string = toks.size() == 1 && toks[0].kind == TokKind::String;
        if (enclosing && enclosing->awaiting_docstring) {
            if (lone_string)
                set_docstring(*enclosing, toks[0].value);
            enclosing->awaiting_docstring = false;
        } else if (module_docstring_pending_) {
            if (lone_string)
                append_docstring_text(toks[0].value);
        }
        module_docstring_pending_ = false;
        last_code_line_ = line.end_line;
    }

    void set_docstring(UnitBuilder& b, const std::string& text) {
        b.unit.docstring = text;
        append_docstring_text(text);
    }

    void append_docstring_text(const std::string& text) {
        if (!model_.docstring_text.empty())
            model_.docstring_text += '\n';
        model_.docstring_text += text;
    }

    int count_sloc(int start, int end) const {
        int n = 0;
        for (int ln = start; ln <= end && ln <= static_cast<int>(lex_.line_flags.size());
             ++ln) {
            const auto f = lex_.line_flags[ln - 1];
            if ((f & kLineNonBlank) && !(f & kLineComment))
                ++n;
        }
        return n;
    }

    void finish() {
        model_.halstead = file_halstead_.finish();
        for (UnitBuilder& b : builders_) {
            b.unit.sloc = count_sloc(b.unit.start_line, b.unit.end_line);
            model_.units.push_back(std::move(b.unit));
        }
    }
};

} // namespace

FileModel parse_source(const CorpusFile& file, const ParseOptions& options) {
    return ModelBuilder(file, options).build();
}

const std::vector<SourceUnit>& extract_units(const FileModel& model) { return model.units; }

std::string model_to_json(const FileModel& model) {
    using nlohmann::json;
    auto halstead_json = [](const HalsteadCounts& h) {
        return json{{"distinct_operators", h.distinct_operators},
                    {"distinct_operands", h.distinct_operands},
                    {"total_operators", h.total_operators},
                    {"total_operands", h.total_operands},
                    {"volume", h.volume()}};
    };
    json units = json::array();
    for (const SourceUnit& u : model.units) {
        json ju{{"qualified_name", u.qualified_name},
                {"start_line", u.start_line},
                {"end_line", u.end_line},
                {"identifiers", u.identifiers},
                {"decision_points", u.decision_points},
                {"cyclomatic_complexity", u.decision_points + 1},
                {"sloc", u.sloc},
                {"halstead", halstead_json(u.halstead)}};
        ju["docstring"] = u.docstring ? json(*u.docstring) : json(nullptr);
        units.push_back(std::move(ju));
    }
    json diags = json::array();
    for (const Diagnostic& d : model.diagnostics)
        diags.push_back({{"where", d.where}, {"message", d.message}});
    const json j{{"path", model.path},
                 {"degraded", model.degraded},
                 {"units", units},
                 {"module_identifiers", model.module_identifiers},
                 {"comment_lines", model.comment_lines},
                 {"total_lines", model.total_lines},
                 {"sloc", model.sloc},
                 {"comment_text", model.comment_text},
                 {"docstring_text", model.docstring_text},
                 {"halstead", halstead_json(model.halstead)},
                 {"diagnostics", diags}};
    return j.dump(2);
}

} // namespace vocalign
