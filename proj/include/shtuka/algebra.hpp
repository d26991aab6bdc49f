#pragma once

#include "shtuka/linalg.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace shtuka {

class FdAlgebra;
using AlgebraPtr = std::shared_ptr<const FdAlgebra>;

// Element of an FdAlgebra: coordinate vector of length dim over F_q.
using AlgElem = std::vector<fq_t>;

struct ValidationIssue {
    std::string axiom;   // "commutativity", "associativity", "unit", "zeta-nilpotent", "locality"
    std::string witness; // offending basis tuple or element
};
using ValidationReport = std::vector<ValidationIssue>;

struct NotAUnit {};

// A finite-dimensional commutative F_q-algebra given by structure constants,
// with a designated nilpotent element zeta. Validated local at construction:
// the non-units form the (nilpotent) maximal ideal and the residue ring is a
// field F_{q^m}. Immutable after construction.
class FdAlgebra : public std::enable_shared_from_this<FdAlgebra> {
public:
    // struct_consts[(i*k+j)*k+l] = coefficient of b_l in b_i * b_j; basis[0]
    // must be the unit.
    static AlgebraPtr make(FieldPtr field, std::size_t dim,
                           std::vector<fq_t> struct_consts, AlgElem zeta,
                           std::vector<std::string> basis_names = {});
    // Like make() but returns issues instead of throwing on axiom failures.
    static ValidationReport validate(const FieldPtr& field, std::size_t dim,
                                     const std::vector<fq_t>& struct_consts,
                                     const AlgElem& zeta);

    // Presets. zeta_index: -1 designates zeta = 0, otherwise zeta = basis[zeta_index].
    static AlgebraPtr base_field(FieldPtr f);                                  // R = F_q
    static AlgebraPtr truncated_polynomial(FieldPtr f, std::size_t n, bool zeta_is_u);
    static AlgebraPtr plane_quotient(FieldPtr f, std::size_t a, std::size_t b, int zeta_index);
    // F_{q^m} as an F_q-algebra (zeta = 0), via the first irreducible of degree m.
    static AlgebraPtr field_extension(FieldPtr f, std::size_t m);

    const FieldPtr& field() const { return field_; }
    std::size_t dim() const { return k_; }
    const std::vector<std::string>& basis_names() const { return names_; }
    const AlgElem& zeta() const { return zeta_; }
    std::size_t zeta_nilindex() const { return nu_; } // smallest n with zeta^n = 0
    bool is_field() const { return nilradical_dim() == 0; }

    AlgElem zero() const { return AlgElem(k_, 0); }
    AlgElem one() const;
    AlgElem basis_elem(std::size_t i) const;
    AlgElem from_scalar(fq_t c) const;

    AlgElem add(const AlgElem& x, const AlgElem& y) const;
    AlgElem sub(const AlgElem& x, const AlgElem& y) const;
    AlgElem neg(const AlgElem& x) const;
    AlgElem scale(fq_t c, const AlgElem& x) const;
    AlgElem mul(const AlgElem& x, const AlgElem& y) const;
    AlgElem pow(const AlgElem& x, std::uint64_t n) const;
    AlgElem frobenius(const AlgElem& x) const; // x^q
    bool is_zero(const AlgElem& x) const;
    bool is_nilpotent(const AlgElem& x) const;
    bool is_unit(const AlgElem& x) const;
    std::optional<AlgElem> invert(const AlgElem& x) const; // nullopt = NotAUnit
    std::string to_string(const AlgElem& x) const;

    // k x k matrix over F_q of multiplication by x.
    FqMat mult_matrix(const AlgElem& x) const;
    const FqMat& frobenius_matrix() const { return frob_mat_; }

    // Nilradical as an F_q-subspace (echelon basis rows).
    const std::vector<AlgElem>& nilradical_basis() const { return nil_basis_; }
    std::size_t nilradical_dim() const { return nil_basis_.size(); }
    std::size_t residue_degree() const { return residue_m_; } // residue field is F_{q^m}

    // structural equality: same field, structure constants and zeta
    bool same(const FdAlgebra& o) const {
        return this == &o || (*field_ == *o.field_ && k_ == o.k_ && sc_ == o.sc_ &&
                              zeta_ == o.zeta_);
    }

private:
    FdAlgebra(FieldPtr field, std::size_t dim, std::vector<fq_t> sc, AlgElem zeta,
              std::vector<std::string> names);
    friend struct FdAlgebraAccess;

    FieldPtr field_;
    std::size_t k_;
    std::vector<fq_t> sc_;
    AlgElem zeta_;
    std::vector<std::string> names_;

    FqMat frob_mat_;
    std::vector<AlgElem> nil_basis_;
    RowSpace nil_space_{nullptr, 0};
    std::size_t residue_m_ = 1;
    std::size_t nu_ = 1;
};

// Unital F_q-algebra homomorphism between validated algebras; columns of
// `matrix` are the images of the source basis in target coordinates.
struct AlgebraHom {
    AlgebraPtr source, target;
    FqMat matrix;

    AlgElem apply(const AlgElem& x) const { return matrix.apply(x); }
    bool verify(bool require_zeta = false) const;
    static AlgebraHom identity(const AlgebraPtr& a);
};

struct ResidueData {
    std::vector<AlgElem> nilradical;  // F_q-basis
    std::size_t m;                    // residue field is F_{q^m}
    AlgebraPtr residue;               // F_{q^m} as an FdAlgebra over F_q
    AlgebraHom quotient;              // R -> residue
    FieldPtr residue_field;           // F_{p^{e*m}} with a deterministic modulus
};

ResidueData residue_data(const AlgebraPtr& alg);

// Free-module helpers: vectors over an algebra, flattened to F_q.
using AlgVec = std::vector<AlgElem>;

std::vector<fq_t> flatten(const FdAlgebra& A, const AlgVec& v);
AlgVec unflatten(const FdAlgebra& A, const std::vector<fq_t>& v, std::size_t len);

// F_q-matrix of the R-linear map given by an r' x r matrix over R
// (entry (i,j) multiplies coordinate j into coordinate i).
FqMat flatten_linear(const FdAlgebra& A, const std::vector<AlgVec>& rows);

// Result of R-linear solving, per the solve_linear contract.
struct AlgSolveResult {
    bool consistent = false;
    AlgVec particular;
    std::vector<AlgVec> kernel; // F_q-basis of the kernel, as vectors over R
};
AlgSolveResult solve_linear(const FdAlgebra& A, const std::vector<AlgVec>& mat_rows,
                            const AlgVec& rhs);

// Field-extension tower: given a validated algebra that is a field, produce
// a degree-m extension T (again an FdAlgebra over the same F_q) together
// with the inclusion hom. Used for the test-algebra catalog.
struct ExtensionData {
    AlgebraPtr ext;
    AlgebraHom inclusion;
};
ExtensionData extend_field(const AlgebraPtr& base_field_algebra, std::size_t m);

// T = R[eps]/(eps^n) with the inclusion R -> T; keeps R's zeta alive.
ExtensionData extend_by_eps(const AlgebraPtr& base, std::size_t n);

} // namespace shtuka
