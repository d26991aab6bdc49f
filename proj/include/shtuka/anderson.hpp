#pragma once

#include "shtuka/hopf.hpp"

namespace shtuka {

// The truncation tower G[z^n] = Dr_q(M/z^n M) of an effective local shtuka,
// together with the per-level presentations and the co-Lie annihilation data.
struct AndersonTower {
    LocalShtuka source;
    std::size_t height = 0;                       // h = rank of the source
    std::size_t nilpotence_order = 0;             // least d with (z-zeta)^d omega = 0
    std::vector<TruncatedShtuka> levels;          // n = 1..n_max
    std::vector<DrinfeldPresentation> presentations;
    std::vector<std::uint64_t> orders;            // q^(n h), certified

    AndersonTower(LocalShtuka src) : source(std::move(src)) {}
};

struct NotAndersonDivisible {
    std::string what;
    AlgVec witness; // an omega class not killed within the bound
};

std::variant<AndersonTower, NotAndersonDivisible, InsufficientPrecision>
build_tower(const LocalShtuka& sh, std::size_t n_max, std::size_t d_bound = 8);

struct OmegaStabilization {
    std::vector<std::size_t> omega_dims;   // F_q-dims per level
    std::vector<bool> transition_bijective;// omega_{n+1} -> omega_n
    std::size_t n_stab = 0;                // least level from which all transitions are bijective
    std::size_t p_power_bound = 0;         // smallest p-power >= max(d, nu)
    bool within_bound = false;
};

OmegaStabilization omega_stabilization(const AndersonTower& tower);

struct ZetaNotZero { std::string what; };

struct FrobeniusKernelReport {
    std::size_t level = 0;                 // the level the points were computed at
    std::uint64_t frobenius_kernel_count = 0;
    std::uint64_t z_kernel_count = 0;      // |G[z^{i d}](T)|
    bool contained = false;                // G[F_q^i](T) inside G[z^{i d}](T)
};

std::variant<FrobeniusKernelReport, ZetaNotZero>
frobenius_kernel_check(const AndersonTower& tower, std::size_t i, const TestAlgebra& T);

struct ZdVerschiebungReport {
    bool fv_identity = false;       // T S = z^d Id
    bool vf_identity = false;       // S T = z^d Id
    bool twisted_square = false;    // T^(q) S^(q) = z^d Id
};

std::variant<ZdVerschiebungReport, ZetaNotZero, NotAnnihilated>
zd_verschiebung_check(const LocalShtuka& sh, std::size_t d);

// H(G) = sigma*M/(z-zeta)^d sigma*M as an R-module of rank r*d (z-degree
// major coordinates), with the z-action matrix and the Hodge filtration
// fil = image of V_M(M) in H.
struct HodgeData {
    std::size_t d = 0;
    std::size_t rank = 0;              // of the shtuka
    std::vector<AlgVec> z_action;      // (r d) x (r d) over R
    std::vector<std::vector<fq_t>> fil_generators; // flattened module vectors
    RowSpace fil;                      // F_q-span of the R[z]-module fil
    std::size_t coker_f_dim = 0;       // dim_Fq coker F_M, = dim fil (exactness)
    std::size_t coker_v_dim = 0;       // dim_Fq coker V_M = dim H - dim fil
    bool exact = false;

    HodgeData() : fil(nullptr, 0) {}
};

std::variant<HodgeData, NotAnnihilated> hodge_filtration(const LocalShtuka& sh, std::size_t d);

// Deformation problem over R with ideal I (I^q = 0): a shtuka over R/I plus
// a candidate filtration of H(G')_S = j*M'/(z-zeta)^d whose quotient is free
// and whose reduction is the Hodge filtration of the small shtuka.
struct DeformationProblem {
    AlgebraPtr big_ring;                  // R
    std::vector<AlgElem> ideal_basis;     // F_q-basis of I
    AlgebraPtr small_ring;                // R/I
    AlgebraHom quotient;                  // R -> R/I
    LocalShtuka shtuka_small;             // over R/I
    std::size_t d = 0;
    std::vector<std::vector<fq_t>> fil_generators; // flattened vectors in H_S coords
};

struct NotAFiltration { std::string what; };
struct NoLift { std::string what; };

struct DeformationLift {
    LocalShtuka lifted;
    std::vector<std::vector<ZSeries>> embedding; // columns: basis of M inside j*M'
};

std::variant<DeformationLift, NotAFiltration, NoLift> deform_lift(const DeformationProblem& prob);

// Transport of the Hodge filtration of a shtuka over R to the H(G')_S
// coordinates of its reduction (used to state the equivalence round trips).
std::variant<DeformationProblem, NotAnnihilated>
restriction_data(const LocalShtuka& sh, const AlgebraPtr& big, const AlgebraHom& quotient,
                 const std::vector<AlgElem>& ideal_basis, std::size_t d);

// Certificate that a deformation lift recovers the original shtuka: the
// canonical map g (coordinates of the Verschiebung embedding in the lift
// basis) is an isomorphism of shtukas g T = T_new g^(q).
struct RoundTripIso {
    bool ok = false;
    std::string failure;
};
RoundTripIso deformation_roundtrip_certificate(const LocalShtuka& original,
                                               const DeformationLift& lift, std::size_t d);

// point-module flatness utilities for the tower laws (the truncated-module
// criterion ker(z^{n-i}) = im(z^i) <=> flat over F_q[z]/(z^n))
struct PointFlatnessReport {
    std::size_t level = 0;
    bool flat = false;                 // dim ker(z) * n == dim B
    bool ker_im_all = false;           // ker(z^{n-i}) = im(z^i) for all i
    bool equivalence_holds = false;    // flat <=> ker_im_all (the Lemma)
    bool containments = false;         // im(z^i) inside ker(z^{n-i}) always
    bool level_kernel_identity = false;// ker(z^j) matches the level-j points
};

PointFlatnessReport point_flatness(const AndersonTower& tower, std::size_t level,
                                   const TestAlgebra& T);

} // namespace shtuka
