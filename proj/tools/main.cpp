// Batch driver: parse problem documents, dispatch operations, run the
// verification suites, emit reports. Exit codes: 0 success, 1 command
// failure, 2 parse/schema failure.
#include "shtuka/document.hpp"
#include "shtuka/suites.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// env overrides mirror the flags with the SHTUKA_ prefix
template <typename T>
void env_override(const char* name, T& value) {
    if (const char* v = std::getenv(name)) {
        std::istringstream is(v);
        is >> value;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toolkit for finite F_q-shtukas, local shtukas and "
                 "divisible local Anderson modules"};
    app.require_subcommand(1);

    std::string format = "human";
    long precision = -1, dmax = -1, emax = -2;
    long long seed = -1;
    app.add_option("--format", format, "report format: human or structured")
        ->check(CLI::IsMember({"human", "structured"}));
    app.add_option("--precision", precision, "working precision in z");
    app.add_option("--dmax", dmax, "search bound for the omega annihilation exponent");
    app.add_option("--emax", emax, "search bound for det = unit (z-zeta)^e");
    app.add_option("--seed", seed, "seed for randomized suites");

    std::string input = "-";
    auto* run = app.add_subcommand("run", "run a problem document (file or '-' for stdin)");
    run->add_option("document", input, "path to the JSON document");
    run->fallthrough(); // allow the global flags after the subcommand

    auto* verify = app.add_subcommand("verify-paper", "run the full acceptance battery");
    std::string suite;
    verify->add_option("--suite", suite, "run a single criterion (1..13)");
    verify->fallthrough();

    auto* schema = app.add_subcommand("schema", "print a minimal example document");

    CLI11_PARSE(app, argc, argv);

    env_override("SHTUKA_FORMAT", format);
    env_override("SHTUKA_PRECISION", precision);
    env_override("SHTUKA_DMAX", dmax);
    env_override("SHTUKA_EMAX", emax);
    env_override("SHTUKA_SEED", seed);

    using namespace shtuka;
    ReportFormat fmt = format == "structured" ? ReportFormat::Structured : ReportFormat::Human;

    if (schema->parsed()) {
        std::cout << R"({
  "schema_version": 1,
  "ring": {"preset": "truncated", "q": 2, "n": 2, "zeta": "zero"},
  "options": {"precision": 16, "dmax": 8, "seed": 1},
  "objects": {
    "sh": {"type": "local", "matrix": [["z", "0"], ["0", "z - u"]]},
    "T":  {"type": "test_algebra", "kind": "eps", "n": 2}
  },
  "commands": [
    {"op": "tower", "object": "sh", "n_max": 2},
    {"op": "boundedness", "object": "sh", "d": 2},
    {"op": "points", "object": "sh", "n": 1, "test": "T"}
  ]
}
)";
        return 0;
    }

    if (verify->parsed()) {
        std::uint64_t s = seed < 0 ? 1 : std::uint64_t(seed);
        std::vector<AcceptanceResult> results;
        if (!suite.empty()) {
            results.push_back(run_acceptance_criterion(std::size_t(std::stoul(suite)), s));
        } else {
            results = run_acceptance_suite(s);
        }
        int failures = 0;
        for (const auto& r : results) {
            std::cout << "[" << (r.pass ? "PASS" : "FAIL") << "] criterion " << r.index << ": "
                      << r.name << " (" << r.detail << ")\n";
            if (!r.pass) ++failures;
        }
        std::cout << "verify-paper: " << results.size() << " criteria, " << failures
                  << " failed (seed " << s << ")\n";
        return failures == 0 ? 0 : 1;
    }

    // run subcommand
    try {
        std::string text = read_input(input);
        OptionOverrides over;
        if (precision >= 1) over.precision = std::size_t(precision);
        if (dmax >= 0) over.dmax = std::size_t(dmax);
        if (emax >= -1) over.emax = emax;
        if (seed >= 0) over.seed = std::uint64_t(seed);
        auto doc = parse_document(text, over);
        auto report = run_document(doc);
        std::cout << emit_report(report, fmt);
        return report.failures == 0 ? 0 : 1;
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error: " << e.what << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what << "\n";
        return 2;
    } catch (const UnresolvedReference& e) {
        std::cerr << "unresolved reference: " << e.name << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
