#pragma once

#include "shtuka/shtuka.hpp"

#include <cstdint>
#include <map>

namespace shtuka {

// Group-scheme presentation cut out of the vector bundle of M by the
// relations X_j^power = sum_i t_ij X_i, with comultiplication
// Delta(X_i) = X_i (x) 1 + 1 (x) X_i and action [a](X_i) = a X_i.
// power = q for Drinfeld presentations; alpha_p-type presentations over a
// larger F_q use power = p.
struct DrinfeldPresentation {
    AlgebraPtr base;
    std::size_t rank = 0;
    std::vector<AlgVec> relations; // matrix T, column j gives X_j^power
    std::uint32_t power = 0;

    static DrinfeldPresentation from_shtuka(const FiniteShtuka& sh);
    std::uint64_t order() const; // power^rank... the group scheme order q^rank
    std::size_t coordinate_dim() const; // power^rank monomials
};

// Multivariate polynomial over the base ring, keyed by exponent vectors.
struct MPoly {
    std::map<std::vector<std::uint16_t>, AlgElem> terms;

    static MPoly variable(const FdAlgebra& A, std::size_t nvars, std::size_t i);
    static MPoly constant(const FdAlgebra& A, std::size_t nvars, const AlgElem& c);
    bool is_zero(const FdAlgebra& A) const;
};

MPoly mp_add(const FdAlgebra& A, const MPoly& a, const MPoly& b);
MPoly mp_sub(const FdAlgebra& A, const MPoly& a, const MPoly& b);
MPoly mp_mul(const FdAlgebra& A, const MPoly& a, const MPoly& b);
MPoly mp_scale(const FdAlgebra& A, const AlgElem& c, const MPoly& a);

// Rewrite X_j^power -> sum_i t_ij X_i until all exponents are < power.
// nvars may be a multiple of rank (relations act blockwise, for tensor
// squares with block-diagonal relations).
MPoly normal_form(const DrinfeldPresentation& pres, MPoly p, std::size_t nvars);

// Delta extended multiplicatively and reduced in the tensor-square basis
// (variables Y_i = X_i (x) 1 at index i, Z_i = 1 (x) X_i at index rank + i).
MPoly comult(const DrinfeldPresentation& pres, const MPoly& p);

// Enumerated monomial basis (all exponents < power), lexicographic.
std::vector<std::vector<std::uint16_t>> monomial_basis(std::size_t nvars, std::uint32_t power);

// Coordinates of a reduced polynomial in the monomial basis, flattened over F_q.
std::vector<fq_t> mp_flatten(const FdAlgebra& A, const MPoly& p,
                             const std::vector<std::vector<std::uint16_t>>& basis);

struct TestAlgebra {
    std::string name;
    AlgebraPtr carrier;
    AlgebraHom structure_map; // base -> carrier
};

struct PointModule {
    AlgebraPtr carrier;
    std::size_t ambient_rank = 0;
    std::vector<AlgVec> fq_basis;     // point tuples in carrier^rank
    std::size_t dim = 0;              // F_q-dimension; |points| = q^dim
    std::optional<FqMat> z_action;    // on fq_basis coordinates, for truncated sources
    std::uint64_t count() const;
};

PointModule points(const FiniteShtuka& sh, const TestAlgebra& T);
PointModule points(const TruncatedShtuka& sh, const TestAlgebra& T);
PointModule points(const DrinfeldPresentation& pres, const TestAlgebra& T);

// Morphism f: (M,T_M) -> (M',T_M') induces pts(M') -> pts(M), h -> h o f.
AlgVec pullback_point(const std::vector<AlgVec>& f_matrix, const AlgebraHom& structure_map,
                      const AlgVec& point);

// radicial over the base <=> F_M nilpotent; cross-validated by triviality of
// points over residue-field extensions of degree 1..max_degree.
struct RadicialReport {
    bool radicial = false;
    bool points_trivial = false; // over all tested fields
    bool consistent = false;
};
RadicialReport radicial_check(const FiniteShtuka& sh, std::size_t max_degree = 8);

// Default test-algebra catalog over a base ring: the ring itself, its
// eps-extension, and a quadratic extension of the residue field.
std::vector<TestAlgebra> catalog(const AlgebraPtr& base);
// Residue-field extensions of the listed degrees, as test algebras.
std::vector<TestAlgebra> catalog_fields(const AlgebraPtr& base,
                                        const std::vector<std::size_t>& degrees);

} // namespace shtuka
