#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "shtuka/algebra.hpp"

using namespace shtuka;

namespace {

AlgebraPtr dual_numbers_f2() {
    return FdAlgebra::truncated_polynomial(FqField::with_q(2), 2, false); // zeta = 0
}

} // namespace

TEST_CASE("F_2[eps]/(eps^2) validates with empty report") {
    auto R = dual_numbers_f2();
    CHECK(R->dim() == 2);
    CHECK(R->zeta_nilindex() == 1); // zeta = 0
    auto eps = R->basis_elem(1);
    CHECK(R->is_zero(R->mul(eps, eps)));
    CHECK(R->is_nilpotent(eps));
    CHECK_FALSE(R->is_unit(eps));
}

TEST_CASE("F_2 x F_2 fails locality with an idempotent witness") {
    auto F = FqField::with_q(2);
    // basis 1, e with e^2 = e (so R = F_2 x F_2 via e, 1-e)
    std::vector<fq_t> sc = {
        1, 0, /* 1*1 */ 0, 1, /* 1*e */
        0, 1, /* e*1 */ 0, 1  /* e*e */
    };
    auto report = FdAlgebra::validate(F, 2, sc, AlgElem{0, 0});
    REQUIRE(report.size() == 1);
    CHECK(report[0].axiom == "locality");
    CHECK_THROWS(FdAlgebra::make(F, 2, sc, AlgElem{0, 0}));
}

TEST_CASE("F_3[zeta]/(zeta^3) preset: nilpotency index 3") {
    auto R = FdAlgebra::truncated_polynomial(FqField::with_q(3), 3, true);
    CHECK(R->zeta_nilindex() == 3);
    CHECK(R->is_nilpotent(R->zeta()));
    CHECK(R->nilradical_dim() == 2);
}

TEST_CASE("frobenius_q examples") {
    SUBCASE("(1+eps)^2 = 1 over F_2[eps]") {
        auto R = dual_numbers_f2();
        auto x = R->add(R->one(), R->basis_elem(1));
        CHECK(R->frobenius(x) == R->one());
    }
    SUBCASE("omega^2 = omega+1 in F_4 as F_2-algebra, q = 2") {
        auto R = FdAlgebra::field_extension(FqField::with_q(2), 2);
        auto w = R->basis_elem(1);
        CHECK(R->frobenius(w) == R->add(w, R->one()));
    }
    SUBCASE("zeta -> 0 over F_3[zeta]/(zeta^2), q = 3") {
        auto R = FdAlgebra::truncated_polynomial(FqField::with_q(3), 2, true);
        CHECK(R->is_zero(R->frobenius(R->zeta())));
    }
    SUBCASE("additive and F_q-linear") {
        auto R = FdAlgebra::truncated_polynomial(FqField::with_q(9), 2, true);
        for (fq_t a = 0; a < 9; ++a)
            for (fq_t b = 0; b < 9; ++b) {
                AlgElem x{a, b}, y{b, a};
                CHECK(R->frobenius(R->add(x, y)) == R->add(R->frobenius(x), R->frobenius(y)));
                CHECK(R->frobenius(R->scale(a, y)) == R->scale(a, R->frobenius(y)));
            }
    }
}

TEST_CASE("invert examples") {
    auto R = dual_numbers_f2();
    auto eps = R->basis_elem(1);
    auto x = R->add(R->one(), eps);
    auto inv = R->invert(x);
    REQUIRE(inv.has_value());
    CHECK(*inv == x); // (1+eps)^2 = 1
    CHECK_FALSE(R->invert(eps).has_value());

    auto R3 = FdAlgebra::truncated_polynomial(FqField::with_q(3), 2, true);
    auto y = R3->add(R3->one(), R3->zeta());
    auto inv3 = R3->invert(y);
    REQUIRE(inv3.has_value());
    CHECK(*inv3 == AlgElem{1, 2}); // 1 + 2*zeta
    CHECK(R3->mul(y, *inv3) == R3->one());
}

TEST_CASE("nilradical and residue field") {
    SUBCASE("dual numbers: nilradical = span(eps), residue F_2") {
        auto rd = residue_data(dual_numbers_f2());
        CHECK(rd.nilradical.size() == 1);
        CHECK(rd.m == 1);
        CHECK(rd.quotient.verify());
    }
    SUBCASE("F_4 over F_2: a field") {
        auto rd = residue_data(FdAlgebra::field_extension(FqField::with_q(2), 2));
        CHECK(rd.nilradical.empty());
        CHECK(rd.m == 2);
        REQUIRE(rd.residue_field != nullptr);
        CHECK(rd.residue_field->q() == 4);
    }
    SUBCASE("plane quotient F_2[u,v]/(u^2,v^2,uv)") {
        auto R = FdAlgebra::plane_quotient(FqField::with_q(2), 2, 2, 1);
        CHECK(R->dim() == 3);
        auto rd = residue_data(R);
        CHECK(rd.nilradical.size() == 2);
        CHECK(rd.m == 1);
        auto u = R->basis_elem(1), v = R->basis_elem(2);
        CHECK(R->is_zero(R->mul(u, v)));
    }
}

TEST_CASE("solve_linear over the algebra") {
    auto R = dual_numbers_f2();
    auto eps = R->basis_elem(1);
    SUBCASE("[eps] x = 0: kernel basis {eps}") {
        auto res = solve_linear(*R, {{eps}}, {R->zero()});
        REQUIRE(res.consistent);
        // kernel of multiplication by eps is eps*R = {0, eps}: F_q-dim 1
        CHECK(res.kernel.size() == 1);
        CHECK(res.kernel[0][0] == eps);
    }
    SUBCASE("[1+eps] x = 1") {
        auto u = R->add(R->one(), eps);
        auto res = solve_linear(*R, {{u}}, {R->one()});
        REQUIRE(res.consistent);
        CHECK(R->mul(u, res.particular[0]) == R->one());
        CHECK(res.kernel.empty());
    }
    SUBCASE("[eps] x = 1 has no solution") {
        auto res = solve_linear(*R, {{eps}}, {R->one()});
        CHECK_FALSE(res.consistent);
    }
    SUBCASE("kernel vectors are F_q-independent and re-substitute to zero") {
        auto R9 = FdAlgebra::truncated_polynomial(FqField::with_q(3), 3, true);
        auto z = R9->zeta();
        auto z2 = R9->mul(z, z);
        auto res = solve_linear(*R9, {{z2, z}, {R9->zero(), z2}}, {R9->zero(), R9->zero()});
        REQUIRE(res.consistent);
        RowSpace span(R9->field(), 2 * R9->dim());
        for (auto& kv : res.kernel) {
            AlgVec out(2, R9->zero());
            out[0] = R9->add(R9->mul(z2, kv[0]), R9->mul(z, kv[1]));
            out[1] = R9->mul(z2, kv[1]);
            CHECK(R9->is_zero(out[0]));
            CHECK(R9->is_zero(out[1]));
            CHECK(span.insert(flatten(*R9, kv))); // independence
        }
    }
}

TEST_CASE("field extension towers") {
    auto base = FdAlgebra::field_extension(FqField::with_q(2), 2); // F_4
    auto ext = extend_field(base, 3);                              // F_64
    CHECK(ext.ext->dim() == 6);
    CHECK(ext.ext->is_field());
    CHECK(ext.inclusion.verify());

    auto eps2 = extend_by_eps(base, 2); // F_4[eps]/(eps^2)
    CHECK(eps2.ext->dim() == 4);
    CHECK(eps2.ext->nilradical_dim() == 2);
    CHECK(eps2.inclusion.verify());
}
