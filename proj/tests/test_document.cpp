#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "shtuka/document.hpp"

using namespace shtuka;

TEST_CASE("series expression parser") {
    auto R = FdAlgebra::truncated_polynomial(FqField::with_q(2), 2, true);
    SUBCASE("z - zeta") {
        auto s = parse_series(R, "z - zeta", 4);
        CHECK(s.coeff(0) == R->neg(R->zeta()));
        CHECK(s.coeff(1) == R->one());
    }
    SUBCASE("powers and products") {
        auto s = parse_series(R, "(1 + z)^2", 4);
        CHECK(s.coeff(0) == R->one());
        CHECK(R->is_zero(s.coeff(1))); // char 2
        CHECK(s.coeff(2) == R->one());
        auto t = parse_series(R, "u * z", 4); // u = zeta here
        CHECK(t.coeff(1) == R->zeta());
    }
    SUBCASE("errors are typed") {
        CHECK_THROWS_AS(parse_series(R, "z +", 4), SyntaxError);
        CHECK_THROWS_AS(parse_series(R, "w", 4), SyntaxError);
        CHECK_THROWS_AS(parse_element(R, "z"), SyntaxError);
    }
}

TEST_CASE("document parsing") {
    SUBCASE("minimal document") {
        auto doc = parse_document(R"({
            "ring": {"preset": "Fq", "q": 2},
            "objects": {"sh": {"type": "local", "matrix": [["z"]]}},
            "commands": [{"op": "tower", "object": "sh", "n_max": 2}]
        })");
        CHECK(doc.ring->dim() == 1);
        CHECK(doc.command_json.size() == 1);
        CHECK(doc.local_objects.count("sh") == 1);
    }
    SUBCASE("dangling reference") {
        CHECK_THROWS_AS(parse_document(R"({
            "ring": {"preset": "Fq", "q": 2},
            "objects": {},
            "commands": [{"op": "tower", "object": "missing", "n_max": 2}]
        })"),
                        UnresolvedReference);
    }
    SUBCASE("non-nilpotent zeta fails ring validation before commands") {
        CHECK_THROWS(parse_document(R"({
            "ring": {"struct_consts": [1], "dim": 1, "p": 2, "zeta": [1]},
            "commands": []
        })"));
    }
    SUBCASE("syntax errors are typed") {
        CHECK_THROWS_AS(parse_document("{not json"), SyntaxError);
        CHECK_THROWS_AS(parse_document(R"({"no_ring": 1})"), SchemaError);
    }
}

TEST_CASE("run and emit") {
    auto doc = parse_document(R"({
        "ring": {"preset": "Fq", "q": 2},
        "options": {"precision": 12, "seed": 7},
        "objects": {"sh": {"type": "local", "matrix": [["z"]]}},
        "commands": [
            {"op": "tower", "object": "sh", "n_max": 2},
            {"op": "boundedness", "object": "sh", "d": 1},
            {"op": "colie", "object": "sh"}
        ]
    })");
    auto report = run_document(doc);
    CHECK(report.failures == 0);
    REQUIRE(report.results.size() == 3);
    CHECK(report.results[0].data_json.find("\"orders\":[2,4]") != std::string::npos);

    SUBCASE("structured emit round trips") {
        auto text = emit_report(report, ReportFormat::Structured);
        auto back = parse_report(text);
        CHECK(emit_report(back, ReportFormat::Structured) == text);
    }
    SUBCASE("determinism: identical documents give identical structured reports") {
        auto report2 = run_document(doc);
        CHECK(emit_report(report, ReportFormat::Structured) ==
              emit_report(report2, ReportFormat::Structured));
    }
    SUBCASE("human format is line oriented") {
        auto text = emit_report(report, ReportFormat::Human);
        CHECK(text.find("tower: ok") != std::string::npos);
        CHECK(text.find("summary: 3 commands, 0 failed") != std::string::npos);
    }
}

TEST_CASE("paper example commands") {
    SUBCASE("boundedness d=2 on the eps-example is false with a witness") {
        auto doc = parse_document(R"({
            "ring": {"preset": "truncated", "q": 2, "n": 2, "zeta": "zero"},
            "options": {"precision": 12},
            "objects": {"sh": {"type": "local", "matrix": [["z", "0"], ["0", "z - u"]]}},
            "commands": [{"op": "boundedness", "object": "sh", "d": 2}]
        })");
        auto report = run_document(doc);
        REQUIRE(report.failures == 0);
        CHECK(report.results[0].data_json.find("\"bounded\":false") != std::string::npos);
        CHECK(report.results[0].data_json.find("not-divisible") != std::string::npos);
    }
    SUBCASE("strictness alpha_p with q = 4: not strict") {
        auto doc = parse_document(R"({
            "ring": {"preset": "Fq", "q": 4},
            "commands": [{"op": "strictness", "preset": "alpha_p", "q": 4}]
        })");
        auto report = run_document(doc);
        REQUIRE(report.failures == 0);
        CHECK(report.results[0].data_json.find("\"strict\":false") != std::string::npos);
    }
    SUBCASE("errors are embedded in the report") {
        auto doc = parse_document(R"({
            "ring": {"preset": "Fq", "q": 2},
            "objects": {"sh": {"type": "local", "matrix": [["z"]]}},
            "commands": [{"op": "divide", "series": "z - 1", "d": 1},
                         {"op": "no-such-op"}]
        })");
        auto report = run_document(doc);
        CHECK(report.failures == 1); // divide reports NotDivisible as data, bad op fails
        CHECK(report.results[0].ok);
        CHECK(report.results[0].data_json.find("not_divisible") != std::string::npos);
        CHECK_FALSE(report.results[1].ok);
    }
}

TEST_CASE("monoidal and stored objects through documents") {
    auto doc = parse_document(R"({
        "ring": {"preset": "truncated", "q": 2, "n": 2, "zeta": "zero"},
        "options": {"precision": 10},
        "objects": {
            "t1": {"type": "tate", "n": 1},
            "sh": {"type": "local", "matrix": [["z"]]},
            "T":  {"type": "test_algebra", "kind": "eps", "n": 2}
        },
        "commands": [
            {"op": "monoidal", "kind": "tensor", "a": "t1", "b": "t1", "store": "t2"},
            {"op": "boundedness", "object": "t2", "d": 2},
            {"op": "monoidal", "kind": "dual", "a": "t1"},
            {"op": "points", "object": "sh", "n": 1, "test": "T"}
        ]
    })");
    auto report = run_document(doc);
    CHECK(report.failures == 0);
    CHECK(report.results[1].data_json.find("\"bounded\":true") != std::string::npos);
    CHECK(report.results[2].data_json.find("\"twist\":-1") != std::string::npos);
    // alpha_2 over R = F_2[u]/(u^2): points over R[eps] are span{u, eps, u*eps}
    CHECK(report.results[3].data_json.find("\"count\":8") != std::string::npos);
}
