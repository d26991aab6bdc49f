#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "shtuka/fq.hpp"
#include "shtuka/linalg.hpp"

using namespace shtuka;

TEST_CASE("prime field arithmetic") {
    auto F = FqField::with_q(5);
    CHECK(F->q() == 5);
    CHECK(F->add(3, 4) == 2);
    CHECK(F->mul(3, 4) == 2);
    CHECK(F->mul(F->inv(3), 3) == 1);
    CHECK(F->neg(2) == 3);
    CHECK(F->frob(4) == 4); // x^p = x on the prime field
}

TEST_CASE("F_4 via x^2+x+1") {
    auto F = FqField::with_q(4);
    fq_t w = F->gen(); // omega
    CHECK(w == 2);
    CHECK(F->mul(w, w) == F->add(w, 1)); // w^2 = w+1
    CHECK(F->pow(w, 3) == 1);
    CHECK(F->frob(w) == F->mul(w, w));
    // F_q-linearity of x -> x^q needs lambda^q = lambda for lambda in F_q
    for (fq_t a = 0; a < 4; ++a) CHECK(F->pow(a, 4) == a);
}

TEST_CASE("F_8 and F_9 builtins") {
    auto F8 = FqField::with_q(8);
    CHECK(F8->p() == 2);
    CHECK(F8->e() == 3);
    for (fq_t a = 1; a < 8; ++a) CHECK(F8->mul(a, F8->inv(a)) == 1);
    auto F9 = FqField::with_q(9);
    CHECK(F9->p() == 3);
    for (fq_t a = 1; a < 9; ++a) CHECK(F9->mul(a, F9->inv(a)) == 1);
}

TEST_CASE("irreducibility testing") {
    CHECK(is_irreducible_mod_p(2, {1, 1, 1}));        // x^2+x+1
    CHECK_FALSE(is_irreducible_mod_p(2, {1, 0, 1}));  // x^2+1 = (x+1)^2
    CHECK(is_irreducible_mod_p(3, {1, 0, 1}));        // x^2+1 over F_3
    CHECK_FALSE(is_irreducible_mod_p(2, {0, 1, 1}));  // x^2+x = x(x+1)
    auto m = find_irreducible(2, 4);
    CHECK(m.size() == 5);
    CHECK(is_irreducible_mod_p(2, m));
    CHECK_THROWS(FqField::make(2, 2, {1, 0, 1}));
}

TEST_CASE("gaussian elimination over F_q") {
    auto F = FqField::with_q(3);
    FqMat A(F, 2, 2);
    A.at(0, 0) = 1; A.at(0, 1) = 2;
    A.at(1, 0) = 2; A.at(1, 1) = 2;
    auto inv = inverse(A);
    REQUIRE(inv.has_value());
    CHECK(A.mul(*inv) == FqMat::identity(F, 2));

    // singular system with kernel
    FqMat B(F, 2, 2);
    B.at(0, 0) = 1; B.at(0, 1) = 2;
    B.at(1, 0) = 2; B.at(1, 1) = 1; // row2 = 2*row1
    CHECK(rank(B) == 1);
    auto ker = kernel_basis(B);
    REQUIRE(ker.size() == 1);
    CHECK(B.apply(ker[0]) == std::vector<fq_t>{0, 0});

    auto res = solve(B, {1, 2});
    CHECK(res.consistent);
    CHECK(B.apply(res.particular) == std::vector<fq_t>{1, 2});
    auto bad = solve(B, {1, 1});
    CHECK_FALSE(bad.consistent);
}

TEST_CASE("row spaces and quotient coordinates") {
    auto F = FqField::with_q(2);
    RowSpace S(F, 3);
    CHECK(S.insert({1, 1, 0}));
    CHECK(S.insert({0, 1, 1}));
    CHECK_FALSE(S.insert({1, 0, 1})); // dependent
    CHECK(S.dim() == 2);
    CHECK(S.contains({1, 0, 1}));
    auto comp = S.complement_positions();
    REQUIRE(comp.size() == 1);
    auto qc = S.quotient_coords({0, 0, 1});
    CHECK(qc.size() == 1);
    CHECK(qc[0] == 1);
}
