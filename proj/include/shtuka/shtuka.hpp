#pragma once

#include "shtuka/zseries.hpp"

namespace shtuka {

// Finite F_q-shtuka over R: free module of rank r with a Frobenius-semilinear
// structure map v -> T * v^(q). Column j of T is the image of the twisted
// basis vector sigma*e_j.
struct FiniteShtuka {
    AlgebraPtr algebra;
    std::size_t rank = 0;
    std::vector<AlgVec> matrix; // rank rows of length rank over R

    static FiniteShtuka make(AlgebraPtr alg, std::vector<AlgVec> matrix);
    AlgVec column(std::size_t j) const;
    // matrix of F^n = T * T^(q) * ... * T^(q^{n-1}); n = 0 gives the identity
    std::vector<AlgVec> iterate_frobenius(std::size_t n) const;
    std::vector<AlgVec> matrix_frobenius(std::size_t times = 1) const; // entrywise
};

std::vector<AlgVec> mat_mul(const FdAlgebra& A, const std::vector<AlgVec>& x,
                            const std::vector<AlgVec>& y);
std::vector<AlgVec> mat_identity(const FdAlgebra& A, std::size_t n);
bool mat_is_zero(const FdAlgebra& A, const std::vector<AlgVec>& m);

// Effective-or-twisted local shtuka over R[[z]]: the structure map is
// (z - zeta)^twist * matrix. Effective iff twist >= 0; analysis operations
// fold the twist into the matrix first.
class LocalShtuka {
public:
    LocalShtuka() : twist_(0) {} // empty rank-0 placeholder
    static LocalShtuka make(ZMatrix matrix, long twist = 0);
    static LocalShtuka tate(AlgebraPtr alg, long n, std::size_t precision);

    const AlgebraPtr& algebra() const { return mat_.algebra(); }
    std::size_t rank() const { return mat_.rows(); }
    std::size_t precision() const { return mat_.precision(); }
    long twist() const { return twist_; }
    const ZMatrix& matrix() const { return mat_; }
    bool effective() const { return twist_ >= 0; }

    // matrix with any nonnegative twist folded in; throws if twist < 0
    ZMatrix folded_matrix() const;
    LocalShtuka tate_twist(long n) const;
    // z-order of det modulo the nilradical: the exponent e with
    // det = unit * (z-zeta)^e over the residue field. nullopt if det vanishes
    // identically mod nilpotents at this precision (not a local shtuka).
    std::optional<std::size_t> det_order_residue() const;

private:
    LocalShtuka(ZMatrix m, long t) : mat_(std::move(m)), twist_(t) {}
    ZMatrix mat_;
    long twist_;
};

// Restriction of scalars of M/z^n M: finite shtuka of rank r*n over R with
// the nilpotent z-action in the basis {e_i z^j}, flat index i + j*r.
struct TruncatedShtuka {
    FiniteShtuka base;
    std::vector<AlgVec> z_action;
    std::size_t level = 0;
    std::size_t source_rank = 0;
};

// R-linear kernel and cokernel of the structure map F_M (the co-Lie data of
// the associated module scheme: omega = coker F_M, n = ker F_M).
struct CoLieData {
    std::size_t omega_dim = 0;                 // dim over F_q
    std::size_t kernel_dim = 0;                // dim over F_q
    std::vector<AlgVec> omega_reps;            // representatives in M of a coker basis
    std::vector<AlgVec> kernel_basis;          // vectors in sigma*M coordinates
    std::vector<FqMat> omega_action;           // action of each R-basis element on coker
    // reduction of an arbitrary element of M to cokernel coordinates
    std::vector<fq_t> omega_coords(const FdAlgebra& A, const AlgVec& v) const;
    RowSpace image_space;                      // flattened image of F_M

    CoLieData() : image_space(nullptr, 0) {}
};

CoLieData colie(const FiniteShtuka& sh);

struct EtaleNilDecomposition {
    FiniteShtuka etale, nilpotent;
    std::vector<AlgVec> basis_change;  // columns = new basis (etale part first)
    std::size_t etale_rank = 0;
};

// Requires the base to be a field (finite fields are perfect, so the
// extension splits and the basis change block-diagonalizes T).
EtaleNilDecomposition decompose_etale_nilpotent(const FiniteShtuka& sh);

struct NilpotenceReport {
    bool is_etale = false;
    bool is_nilpotent = false;               // finite shtukas
    bool is_topologically_nilpotent = false; // local shtukas (matrix mod z nilpotent)
    std::size_t certified_bound = 0;         // iterate length that vanished, if nilpotent
};

NilpotenceReport nilpotence_checks(const FiniteShtuka& sh);
NilpotenceReport nilpotence_checks(const LocalShtuka& sh);

struct NotAnnihilated {
    std::string what;
    std::vector<fq_t> witness_flat; // a cokernel class not killed, flattened
};

// Local/truncated form: solve T*S = (z-zeta)^d Id and verify S*T likewise.
std::variant<ZMatrix, NotAnnihilated> verschiebung(const LocalShtuka& sh, std::size_t d);
// Finite form: T*S = c*Id for a caller-supplied scalar c in R.
std::variant<std::vector<AlgVec>, NotAnnihilated> verschiebung_finite(const FiniteShtuka& sh,
                                                                      const AlgElem& c);

enum class MonoidalOp { Tensor, Dual, Hom };

struct PrecisionExhausted { std::string what; };

std::variant<LocalShtuka, PrecisionExhausted> monoidal(const LocalShtuka& a,
                                                       const LocalShtuka& b, MonoidalOp op);
std::variant<LocalShtuka, PrecisionExhausted> dual(const LocalShtuka& a);

// Structure maps compared after folding twists: (z-zeta)^{t1} M1 == (z-zeta)^{t2} M2.
bool equivalent(const LocalShtuka& a, const LocalShtuka& b);

struct BoundednessCertificate {
    bool bounded = false;
    ZSeries witness;        // the unit quotient, or the residual/non-unit witness
    std::string reason;     // "unit-quotient", "not-divisible", "quotient-not-unit"
};

std::variant<BoundednessCertificate, InsufficientPrecision>
boundedness_check(const LocalShtuka& sh, std::size_t d);

TruncatedShtuka truncate(const LocalShtuka& sh, std::size_t n);

struct SequenceReport {
    bool exact = false;
    bool commutes = false;
    std::size_t rank_left = 0, rank_middle = 0, rank_right = 0; // r*n, r*(n+m), r*m
};

// 0 -> M/z^m -> M/z^{n+m} -> M/z^n -> 0 with multiplication by z^n and the
// projection, flattened over F_q.
SequenceReport sequence_check(const LocalShtuka& sh, std::size_t n, std::size_t m);

// (z-zeta)-annihilation exponent of coker F_M on M/z^{precision}:
// smallest d <= bound with (z-zeta)^d * coker = 0.
struct LocalCoLie {
    std::size_t omega_dim = 0;                    // dim_Fq of coker at the precision
    std::optional<std::size_t> nilpotence_order;  // d, if found within bound
    AlgVec witness;                               // unkilled class if not found
    std::size_t witness_level = 0;
};

LocalCoLie local_colie(const LocalShtuka& sh, std::size_t d_bound);

} // namespace shtuka
