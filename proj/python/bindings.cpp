#include "shtuka/document.hpp"
#include "shtuka/suites.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace shtuka;

namespace {

struct PyAlgebra {
    AlgebraPtr ptr;
    std::string to_string(const AlgElem& x) const { return ptr->to_string(x); }
};

struct PyTestAlgebra {
    TestAlgebra t;
};

struct PyFinite {
    FiniteShtuka sh;
};

struct PyLocal {
    LocalShtuka sh;
};

PyAlgebra make_ring(const std::string& preset, std::uint32_t q, std::size_t n, std::size_t m,
                    const std::string& zeta) {
    auto F = FqField::with_q(q);
    if (preset == "base") return {FdAlgebra::base_field(F)};
    if (preset == "truncated") return {FdAlgebra::truncated_polynomial(F, n, zeta == "u")};
    if (preset == "extension") return {FdAlgebra::field_extension(F, m)};
    if (preset == "plane") {
        int zi = zeta == "u" ? 1 : (zeta == "v" ? int(n) : -1);
        return {FdAlgebra::plane_quotient(F, n, m, zi)};
    }
    throw std::invalid_argument("unknown preset '" + preset + "'");
}

PyFinite make_finite(const PyAlgebra& R, const std::vector<std::vector<std::string>>& matrix) {
    std::vector<AlgVec> rows;
    for (const auto& row : matrix) {
        AlgVec r;
        for (const auto& e : row) r.push_back(parse_element(R.ptr, e));
        rows.push_back(std::move(r));
    }
    return {FiniteShtuka::make(R.ptr, std::move(rows))};
}

PyLocal make_local(const PyAlgebra& R, const std::vector<std::vector<std::string>>& matrix,
                   std::size_t precision, long twist) {
    std::size_t rank = matrix.size();
    ZMatrix mat(R.ptr, rank, rank, precision);
    for (std::size_t i = 0; i < rank; ++i) {
        if (matrix[i].size() != rank) throw std::invalid_argument("matrix not square");
        for (std::size_t j = 0; j < rank; ++j)
            mat.set(i, j, parse_series(R.ptr, matrix[i][j], precision));
    }
    return {LocalShtuka::make(std::move(mat), twist)};
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "exact arithmetic for finite F_q-shtukas, local shtukas and "
                "divisible local Anderson modules";

    py::class_<PyAlgebra>(mod, "Ring")
        .def_property_readonly("dim", [](const PyAlgebra& a) { return a.ptr->dim(); })
        .def_property_readonly("q", [](const PyAlgebra& a) { return a.ptr->field()->q(); })
        .def_property_readonly("zeta_nilindex",
                               [](const PyAlgebra& a) { return a.ptr->zeta_nilindex(); })
        .def_property_readonly("is_field", [](const PyAlgebra& a) { return a.ptr->is_field(); })
        .def_property_readonly("nilradical_dim",
                               [](const PyAlgebra& a) { return a.ptr->nilradical_dim(); })
        .def_property_readonly("residue_degree",
                               [](const PyAlgebra& a) { return a.ptr->residue_degree(); })
        .def_property_readonly("basis_names",
                               [](const PyAlgebra& a) { return a.ptr->basis_names(); })
        .def("frobenius",
             [](const PyAlgebra& a, const std::string& x) {
                 return a.ptr->to_string(a.ptr->frobenius(parse_element(a.ptr, x)));
             })
        .def("invert",
             [](const PyAlgebra& a, const std::string& x) -> py::object {
                 auto inv = a.ptr->invert(parse_element(a.ptr, x));
                 if (!inv) return py::none();
                 return py::str(a.ptr->to_string(*inv));
             })
        .def("is_nilpotent",
             [](const PyAlgebra& a, const std::string& x) {
                 return a.ptr->is_nilpotent(parse_element(a.ptr, x));
             })
        .def("mul",
             [](const PyAlgebra& a, const std::string& x, const std::string& y) {
                 return a.ptr->to_string(
                     a.ptr->mul(parse_element(a.ptr, x), parse_element(a.ptr, y)));
             })
        .def("__repr__", [](const PyAlgebra& a) {
            return "<Ring dim " + std::to_string(a.ptr->dim()) + " over F_" +
                   std::to_string(a.ptr->field()->q()) + ">";
        });

    mod.def("ring", &make_ring, py::arg("preset"), py::arg("q"), py::arg("n") = 2,
            py::arg("m") = 2, py::arg("zeta") = "zero",
            "presets: base, truncated (n, zeta in {u, zero}), extension (m), plane (n=a, m=b)");

    py::class_<PyTestAlgebra>(mod, "TestAlgebra")
        .def_property_readonly("name", [](const PyTestAlgebra& t) { return t.t.name; })
        .def_property_readonly("dim",
                               [](const PyTestAlgebra& t) { return t.t.carrier->dim(); });

    mod.def("catalog",
            [](const PyAlgebra& R) {
                std::vector<PyTestAlgebra> out;
                for (auto& t : catalog(R.ptr)) out.push_back({t});
                return out;
            },
            "default test-algebra catalog over a base ring");
    mod.def("field_extension_test",
            [](const PyAlgebra& R, std::size_t degree) {
                auto fields = catalog_fields(R.ptr, {degree});
                return PyTestAlgebra{fields[0]};
            },
            "residue-field extension of the given degree as a test algebra");

    py::class_<PyFinite>(mod, "FiniteShtuka")
        .def_property_readonly("rank", [](const PyFinite& s) { return s.sh.rank; })
        .def("order",
             [](const PyFinite& s) { return DrinfeldPresentation::from_shtuka(s.sh).order(); })
        .def("colie_dims",
             [](const PyFinite& s) {
                 auto c = colie(s.sh);
                 return py::make_tuple(c.omega_dim, c.kernel_dim);
             },
             "(dim coker F_M, dim ker F_M) over F_q")
        .def("is_etale", [](const PyFinite& s) { return nilpotence_checks(s.sh).is_etale; })
        .def("is_nilpotent",
             [](const PyFinite& s) { return nilpotence_checks(s.sh).is_nilpotent; })
        .def("is_radicial", [](const PyFinite& s) { return radicial_check(s.sh).radicial; })
        .def("decompose_ranks",
             [](const PyFinite& s) {
                 auto dec = decompose_etale_nilpotent(s.sh);
                 return py::make_tuple(dec.etale.rank, dec.nilpotent.rank);
             })
        .def("points_count",
             [](const PyFinite& s, const PyTestAlgebra& T) { return points(s.sh, T.t).count(); })
        .def("mq_roundtrip_ok", [](const PyFinite& s) { return mq_roundtrip(s.sh).ok; })
        .def("balanced",
             [](const PyFinite& s) {
                 auto res = balanced_check(DrinfeldPresentation::from_shtuka(s.sh));
                 if (std::holds_alternative<BudgetExceeded>(res))
                     throw std::runtime_error(std::get<BudgetExceeded>(res).what);
                 return std::get<BalancedReport>(res).balanced;
             });

    mod.def("finite_shtuka", &make_finite, py::arg("ring"), py::arg("matrix"),
            "finite F_q-shtuka from a matrix of ring-element expressions");

    py::class_<PyLocal>(mod, "LocalShtuka")
        .def_property_readonly("rank", [](const PyLocal& s) { return s.sh.rank(); })
        .def_property_readonly("precision", [](const PyLocal& s) { return s.sh.precision(); })
        .def_property_readonly("twist", [](const PyLocal& s) { return s.sh.twist(); })
        .def_property_readonly("effective", [](const PyLocal& s) { return s.sh.effective(); })
        .def("det", [](const PyLocal& s) { return s.sh.folded_matrix().det().to_string(); })
        .def("boundedness",
             [](const PyLocal& s, std::size_t d) {
                 auto res = boundedness_check(s.sh, d);
                 if (std::holds_alternative<InsufficientPrecision>(res))
                     throw std::runtime_error(std::get<InsufficientPrecision>(res).what);
                 auto& cert = std::get<BoundednessCertificate>(res);
                 return py::make_tuple(cert.bounded, cert.reason, cert.witness.to_string());
             },
             "whether det = unit * (z-zeta)^d, with the certificate")
        .def("omega_annihilation_exponent",
             [](const PyLocal& s, std::size_t bound) -> py::object {
                 auto lc = local_colie(s.sh, bound);
                 if (!lc.nilpotence_order) return py::none();
                 return py::int_(*lc.nilpotence_order);
             },
             py::arg("bound") = 8)
        .def("has_verschiebung",
             [](const PyLocal& s, std::size_t d) {
                 return std::holds_alternative<ZMatrix>(verschiebung(s.sh, d));
             })
        .def("is_topologically_nilpotent",
             [](const PyLocal& s) {
                 return nilpotence_checks(s.sh).is_topologically_nilpotent;
             })
        .def("tensor",
             [](const PyLocal& a, const PyLocal& b) {
                 auto res = monoidal(a.sh, b.sh, MonoidalOp::Tensor);
                 if (std::holds_alternative<PrecisionExhausted>(res))
                     throw std::runtime_error(std::get<PrecisionExhausted>(res).what);
                 return PyLocal{std::get<LocalShtuka>(res)};
             })
        .def("dual",
             [](const PyLocal& a) {
                 auto res = dual(a.sh);
                 if (std::holds_alternative<PrecisionExhausted>(res))
                     throw std::runtime_error(std::get<PrecisionExhausted>(res).what);
                 return PyLocal{std::get<LocalShtuka>(res)};
             })
        .def("tate_twist", [](const PyLocal& a, long n) { return PyLocal{a.sh.tate_twist(n)}; })
        .def("truncate_level",
             [](const PyLocal& a, std::size_t n) { return PyFinite{truncate(a.sh, n).base}; })
        .def("tower_orders",
             [](const PyLocal& a, std::size_t n_max) {
                 auto res = build_tower(a.sh, n_max);
                 if (std::holds_alternative<NotAndersonDivisible>(res))
                     throw std::runtime_error(std::get<NotAndersonDivisible>(res).what);
                 if (std::holds_alternative<InsufficientPrecision>(res))
                     throw std::runtime_error(std::get<InsufficientPrecision>(res).what);
                 return std::get<AndersonTower>(res).orders;
             })
        .def("level_points_count",
             [](const PyLocal& a, std::size_t n, const PyTestAlgebra& T) {
                 return points(truncate(a.sh, n), T.t).count();
             })
        .def("hodge_dims",
             [](const PyLocal& a, std::size_t d) {
                 auto res = hodge_filtration(a.sh, d);
                 if (std::holds_alternative<NotAnnihilated>(res))
                     throw std::runtime_error(std::get<NotAnnihilated>(res).what);
                 auto& h = std::get<HodgeData>(res);
                 return py::make_tuple(h.fil.dim(), h.coker_f_dim, h.coker_v_dim, h.exact);
             });

    mod.def("local_shtuka", &make_local, py::arg("ring"), py::arg("matrix"),
            py::arg("precision") = 16, py::arg("twist") = 0,
            "local shtuka from a matrix of series expressions like 'z - zeta'");
    mod.def("tate",
            [](const PyAlgebra& R, long n, std::size_t precision) {
                return PyLocal{LocalShtuka::tate(R.ptr, n, precision)};
            },
            py::arg("ring"), py::arg("n"), py::arg("precision") = 16);

    mod.def("run_document",
            [](const std::string& text, const std::string& format) {
                auto doc = parse_document(text);
                auto report = run_document(doc);
                return py::make_tuple(
                    emit_report(report, format == "structured" ? ReportFormat::Structured
                                                               : ReportFormat::Human),
                    report.failures);
            },
            py::arg("text"), py::arg("format") = "structured",
            "run a JSON problem document; returns (report_text, failures)");

    mod.def("verify_paper",
            [](std::uint64_t seed, int criterion) {
                std::vector<AcceptanceResult> results;
                if (criterion > 0)
                    results.push_back(run_acceptance_criterion(std::size_t(criterion), seed));
                else results = run_acceptance_suite(seed);
                py::list out;
                for (auto& r : results)
                    out.append(py::make_tuple(r.index, r.name, r.pass, r.detail));
                return out;
            },
            py::arg("seed") = 1, py::arg("criterion") = 0,
            "run the acceptance battery; returns [(index, name, pass, detail)]");

    mod.def("strictness_verdicts", []() {
        py::dict out;
        auto F4 = FdAlgebra::base_field(FqField::with_q(4));
        auto check = [&](UnivariatePresentation pres) {
            auto res = strictness_check(DeformationPair::canonical(std::move(pres)));
            return std::get<StrictnessVerdict>(res).strict;
        };
        out["alpha_q"] = check(UnivariatePresentation::additive_power(F4, 4));
        out["alpha_p"] = check(UnivariatePresentation::additive_power(F4, 2));
        out["constant_fq"] = check(UnivariatePresentation::constant_fq(F4));
        out["mu_p_obstructed"] = mu_p_obstruction(2).obstructed;
        return out;
    });
}
