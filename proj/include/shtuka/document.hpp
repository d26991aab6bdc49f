#pragma once

#include "shtuka/anderson.hpp"

#include <iosfwd>

namespace shtuka {

struct Options {
    std::size_t precision = 16;
    std::size_t dmax = 8;
    long emax = -1; // -1: precision - nu
    std::uint64_t seed = 1;
};

struct SyntaxError { std::string what; };
struct SchemaError { std::string what; };
struct UnresolvedReference { std::string name; };

// Parsed problem document: one base ring, named objects, ordered commands.
struct ProblemDocument {
    AlgebraPtr ring;
    Options options;
    std::map<std::string, FiniteShtuka> finite_objects;
    std::map<std::string, LocalShtuka> local_objects;
    std::map<std::string, TestAlgebra> test_algebras;
    std::vector<std::string> command_json; // each a serialized JSON object
    std::string source_json;               // normalized document
};

// Command-line overrides applied before objects are built.
struct OptionOverrides {
    std::optional<std::size_t> precision, dmax;
    std::optional<long> emax;
    std::optional<std::uint64_t> seed;
};

// Throws SyntaxError / SchemaError / UnresolvedReference.
ProblemDocument parse_document(const std::string& text, const OptionOverrides& o = {});

struct CommandResult {
    std::string op;
    bool ok = false;
    std::string error;
    std::string data_json;   // structured payload
    double seconds = 0.0;    // human output only; not part of structured form
};

struct Report {
    std::uint64_t seed = 0;
    Options options;
    std::vector<CommandResult> results;
    std::size_t failures = 0;
};

Report run_document(const ProblemDocument& doc);

enum class ReportFormat { Human, Structured };
std::string emit_report(const Report& report, ReportFormat format);
// Round-trip of the structured format; throws SchemaError on malformed input.
Report parse_report(const std::string& structured);

// Series expression parser over a ring: integers, 'z', 'zeta', basis names,
// + - * ^ and parentheses; used for matrix entries in documents.
ZSeries parse_series(const AlgebraPtr& ring, const std::string& text, std::size_t precision);
AlgElem parse_element(const AlgebraPtr& ring, const std::string& text);

} // namespace shtuka
