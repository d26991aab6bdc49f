#pragma once

#include "shtuka/drinfeld.hpp"

namespace shtuka {

// The module of F_q-equivariant additive functions on the presented group
// scheme: solutions of Delta(x) = x(x)1 + 1(x)x and [a](x) = ax, with the
// matrix of composition with the q-power map in a free R-basis.
struct HopfData {
    DrinfeldPresentation pres;
    std::vector<MPoly> primitive_basis;       // free R-basis
    std::vector<std::vector<fq_t>> solution_fq_basis; // flattened F_q-basis
    std::vector<AlgVec> frobenius_matrix;     // column j = coords of basis[j]^q
};

struct BudgetExceeded { std::string what; };
struct NotFree { std::string what; };

std::variant<HopfData, BudgetExceeded, NotFree>
primitives(const DrinfeldPresentation& pres, std::size_t budget = 1u << 15);

struct RoundTripCertificate {
    bool ok = false;
    std::vector<AlgVec> coordinate_change;  // U with X_i = sum_j U_ji w_j
    std::vector<AlgVec> recovered_matrix;   // frobenius matrix in the w-basis
    std::string failure;
};

// Executable form of M = M_q(Dr_q(M)): recovers the structure matrix up to
// the invertible change of coordinates U (semilinear conjugation).
RoundTripCertificate mq_roundtrip(const FiniteShtuka& sh, std::size_t budget = 1u << 15);

struct BalancedReport {
    bool balanced = false;
    std::vector<std::size_t> eigenspace_dims; // F_q-dimensions, i = 0..e-1
    std::vector<bool> bijective;              // p-power map S_i -> S_{i+1}, i = 0..e-2
};

// Poguntke's criterion: composition with the p-Frobenius must map the
// F_q-eigenspaces of additive primitives isomorphically for i = 0..e-2.
std::variant<BalancedReport, BudgetExceeded>
balanced_check(const DrinfeldPresentation& pres, std::size_t budget = 1u << 15);

// ---------------------------------------------------------------------------
// univariate presentations and strictness

using UPoly = std::vector<AlgElem>; // univariate polynomial over R, ascending

struct UnivariatePresentation {
    AlgebraPtr base;
    UPoly relation;              // monic f with f(0) = 0; A = R[X]/(f)
    MPoly comultiplication;      // Delta(X) in variables Y = X(x)1, Z = 1(x)X
    std::vector<UPoly> actions;  // [a](X) indexed by the F_q-element a

    // alpha-power kernels Spec R[X]/(X^power) with [a](X) = aX
    static UnivariatePresentation additive_power(AlgebraPtr base, std::uint32_t power);
    // the constant scheme Spec R[X]/(X^q - X) with [a](X) = aX
    static UnivariatePresentation constant_fq(AlgebraPtr base);
    // mu_p after the shift Y = X-1: f = Y^p, Delta(Y) = Y(x)1 + 1(x)Y + Y(x)Y,
    // F_p-action forced by the group law
    static UnivariatePresentation mu_p_shifted(AlgebraPtr base);

    bool verify_hopf_axioms() const;
};

// Deformation A-flat = R[X]/(f*X) with N = R*fbar, t* = R*Xbar and
// differential fbar -> (linear coefficient of f) * Xbar.
struct DeformationPair {
    UnivariatePresentation pres;
    UPoly flat_relation;     // f * X
    AlgElem differential;    // linear coefficient of f

    static DeformationPair canonical(UnivariatePresentation pres);
};

struct StrictnessWitness {
    fq_t a;
    AlgElem n_action;   // factor on N = R*fbar
    AlgElem t_action;   // linear coefficient of the lift
};

struct StrictnessVerdict {
    bool strict = false;
    // the lifts assemble to a ring homomorphism F_q -> End of the deformation:
    // [a+b] = m o ([a] (x) [b]) o Delta-flat and [ab] = [a] o [b], exactly
    bool action_homomorphism = false;
    std::vector<StrictnessWitness> witnesses;
};

struct NotALift { std::string what; };

// The lifts supply [a]-flat(X) for every a (indexed by F_q-element); the
// checker verifies the lift reduces to [a] on A, preserves the ideal (f*X)
// and the augmentation, then compares the induced actions on N and t* with
// the scalar a.
std::variant<StrictnessVerdict, NotALift>
strictness_check(const DeformationPair& pair, const std::vector<UPoly>& lifts);

// Canonical lifts [a]-flat(X) = [a](X).
std::variant<StrictnessVerdict, NotALift> strictness_check(const DeformationPair& pair);

// The canonical multivariate Drinfeld deformation with [a]-flat(X_i) = a X_i:
// verifies the identity (a X_j)^q - sum t_ij (a X_i) = a * (X_j^q - sum t_ij X_i)
// coefficientwise in the symmetric algebra (the scalar action on N and t*).
StrictnessVerdict canonical_strictness(const DrinfeldPresentation& pres);

struct MuPObstruction {
    std::uint32_t p = 0;
    bool obstructed = false;
    UPoly forced_p_action;   // [p]-flat(Y) forced by the group law, mod Y^{p+1}
    UPoly identity_action;   // [1]-flat(Y), sanity
};

// Example (d): the multiplicative group law forces [p](Y) = (1+Y)^p - 1 =
// Y^p != 0 on the deformation R[Y]/(Y^{p+1}), so no strict F_p-structure
// exists for it.
MuPObstruction mu_p_obstruction(std::uint32_t p);

// univariate helpers shared with tests
UPoly upoly_mul(const FdAlgebra& A, const UPoly& a, const UPoly& b);
UPoly upoly_mod(const FdAlgebra& A, UPoly a, const UPoly& monic);
UPoly upoly_compose(const FdAlgebra& A, const UPoly& f, const UPoly& g);

} // namespace shtuka
