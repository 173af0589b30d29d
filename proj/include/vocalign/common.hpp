#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vocalign {

// Base for all library errors. `code()` is a stable machine-readable name;
// `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Operational failures. The CLI maps these to exit code 2.
class SourceNotFound : public Error {
public:
    explicit SourceNotFound(const std::string& what) : Error("SourceNotFound", what) {}
};

class ArchiveCorrupt : public Error {
public:
    explicit ArchiveCorrupt(const std::string& what) : Error("ArchiveCorrupt", what) {}
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error("SchemaError", what) {}
};

// Per-metric failures (NoCodeFiles, NoIdentifiers, NoFunctions, EmptyCorpus,
// NoProse). analyze_repo catches these and records a null metric instead of
// aborting the row.
class MetricError : public Error {
public:
    MetricError(std::string code, const std::string& what) : Error(std::move(code), what) {}
};

class DegenerateInput : public Error {
public:
    explicit DegenerateInput(const std::string& what) : Error("DegenerateInput", what) {}
};

class EmptyGroup : public Error {
public:
    explicit EmptyGroup(const std::string& what) : Error("EmptyGroup", what) {}
};

class InsufficientRows : public Error {
public:
    explicit InsufficientRows(const std::string& what) : Error("InsufficientRows", what) {}
};

class EmptyLog : public Error {
public:
    explicit EmptyLog(const std::string& what) : Error("EmptyLog", what) {}
};

class NoPairs : public Error {
public:
    explicit NoPairs(const std::string& what) : Error("NoPairs", what) {}
};

struct Diagnostic {
    enum class Level { Info, Warning, Error };
    Level level = Level::Warning;
    std::string where;    // file path or metric name
    std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

} // namespace vocalign
