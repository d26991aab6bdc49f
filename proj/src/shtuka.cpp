#include "shtuka/shtuka.hpp"

#include <algorithm>
#include <cassert>

namespace shtuka {

std::vector<AlgVec> mat_identity(const FdAlgebra& A, std::size_t n) {
    std::vector<AlgVec> m(n, AlgVec(n, A.zero()));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = A.one();
    return m;
}

std::vector<AlgVec> mat_mul(const FdAlgebra& A, const std::vector<AlgVec>& x,
                            const std::vector<AlgVec>& y) {
    std::size_t r = x.size(), mid = y.size(), c = mid == 0 ? 0 : y[0].size();
    std::vector<AlgVec> out(r, AlgVec(c, A.zero()));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < mid; ++k) {
            if (A.is_zero(x[i][k])) continue;
            for (std::size_t j = 0; j < c; ++j)
                out[i][j] = A.add(out[i][j], A.mul(x[i][k], y[k][j]));
        }
    return out;
}

bool mat_is_zero(const FdAlgebra& A, const std::vector<AlgVec>& m) {
    for (const auto& row : m)
        for (const auto& e : row)
            if (!A.is_zero(e)) return false;
    return true;
}

FiniteShtuka FiniteShtuka::make(AlgebraPtr alg, std::vector<AlgVec> matrix) {
    FiniteShtuka sh;
    sh.algebra = std::move(alg);
    sh.rank = matrix.size();
    for (auto& row : matrix)
        if (row.size() != sh.rank) throw std::invalid_argument("FiniteShtuka: matrix not square");
    sh.matrix = std::move(matrix);
    return sh;
}

AlgVec FiniteShtuka::column(std::size_t j) const {
    AlgVec c(rank);
    for (std::size_t i = 0; i < rank; ++i) c[i] = matrix[i][j];
    return c;
}

std::vector<AlgVec> FiniteShtuka::matrix_frobenius(std::size_t times) const {
    std::vector<AlgVec> m = matrix;
    for (auto& row : m)
        for (auto& e : row)
            for (std::size_t t = 0; t < times; ++t) e = algebra->frobenius(e);
    return m;
}

std::vector<AlgVec> FiniteShtuka::iterate_frobenius(std::size_t n) const {
    // F^n = T * (F^{n-1} matrix with entries raised to q)
    std::vector<AlgVec> acc = mat_identity(*algebra, rank);
    for (std::size_t s = 0; s < n; ++s) {
        for (auto& row : acc)
            for (auto& e : row) e = algebra->frobenius(e);
        acc = mat_mul(*algebra, matrix, acc);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// flattening helpers

namespace {

// F_q matrix of the R-linear left multiplication by an r' x r matrix over R
FqMat flatten_R_linear(const FdAlgebra& A, const std::vector<AlgVec>& m) {
    return flatten_linear(A, m);
}

// Flat index of b_l e_i z^t in (R[z]/z^N)^r is (t*r + i)*k + l.
FqMat flatten_series_linear(const ZMatrix& T) {
    const FdAlgebra& A = *T.algebra();
    std::size_t r2 = T.rows(), r = T.cols(), N = T.precision(), k = A.dim();
    FqMat out(A.field(), r2 * N * k, r * N * k);
    for (std::size_t i2 = 0; i2 < r2; ++i2)
        for (std::size_t i = 0; i < r; ++i) {
            const ZSeries& s = T.at(i2, i);
            for (std::size_t dt = 0; dt < N; ++dt) {
                if (A.is_zero(s.coeff(dt))) continue;
                FqMat mm = A.mult_matrix(s.coeff(dt));
                for (std::size_t t = 0; t + dt < N; ++t) {
                    std::size_t t2 = t + dt;
                    for (std::size_t a = 0; a < k; ++a)
                        for (std::size_t b = 0; b < k; ++b) {
                            fq_t v = mm.at(a, b);
                            if (v == 0) continue;
                            std::size_t row = (t2 * r2 + i2) * k + a;
                            std::size_t col = (t * r + i) * k + b;
                            out.at(row, col) = A.field()->add(out.at(row, col), v);
                        }
                }
            }
        }
    return out;
}

std::vector<fq_t> flatten_series_vec(const std::vector<ZSeries>& v) {
    const FdAlgebra& A = *v.front().algebra();
    std::size_t r = v.size(), N = v.front().precision(), k = A.dim();
    std::vector<fq_t> out(r * N * k, 0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < N; ++t)
            for (std::size_t l = 0; l < k; ++l) out[(t * r + i) * k + l] = v[i].coeff(t)[l];
    return out;
}

std::vector<ZSeries> unflatten_series_vec(const AlgebraPtr& A, const std::vector<fq_t>& flat,
                                          std::size_t r, std::size_t N) {
    std::size_t k = A->dim();
    std::vector<ZSeries> v(r, ZSeries(A, N));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < N; ++t)
            for (std::size_t l = 0; l < k; ++l) v[i].coeff(t)[l] = flat[(t * r + i) * k + l];
    return v;
}

std::vector<ZSeries> zmatrix_column(const ZMatrix& m, std::size_t j) {
    std::vector<ZSeries> v;
    v.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v.push_back(m.at(i, j));
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// co-Lie data (R-linear kernel and cokernel of F_M)

std::vector<fq_t> CoLieData::omega_coords(const FdAlgebra& A, const AlgVec& v) const {
    return image_space.quotient_coords(flatten(A, v));
}

CoLieData colie(const FiniteShtuka& sh) {
    const FdAlgebra& A = *sh.algebra;
    std::size_t r = sh.rank, k = A.dim();
    CoLieData out;
    FqMat flat = flatten_R_linear(A, sh.matrix);
    out.image_space = RowSpace(A.field(), r * k);
    for (std::size_t j = 0; j < flat.cols(); ++j) out.image_space.insert(flat.col(j));
    for (auto& kv : kernel_basis(flat)) out.kernel_basis.push_back(unflatten(A, kv, r));
    out.kernel_dim = out.kernel_basis.size();
    auto comp = out.image_space.complement_positions();
    out.omega_dim = comp.size();
    for (auto c : comp) {
        AlgVec rep(r, A.zero());
        rep[c / k][c % k] = 1;
        out.omega_reps.push_back(std::move(rep));
    }
    // R-action on the cokernel, one matrix per algebra basis element
    for (std::size_t l = 0; l < k; ++l) {
        FqMat act(A.field(), out.omega_dim, out.omega_dim);
        AlgElem bl = A.basis_elem(l);
        for (std::size_t j = 0; j < out.omega_dim; ++j) {
            AlgVec scaled(r);
            for (std::size_t i = 0; i < r; ++i) scaled[i] = A.mul(bl, out.omega_reps[j][i]);
            act.set_col(j, out.image_space.quotient_coords(flatten(A, scaled)));
        }
        out.omega_action.push_back(std::move(act));
    }
    return out;
}

// ---------------------------------------------------------------------------
// etale / nilpotent decomposition over a field

namespace {

// Greedy R-basis of the R-span of the given vectors (R a field).
std::vector<AlgVec> r_basis_of_span(const FdAlgebra& A, const std::vector<AlgVec>& gens,
                                    RowSpace& span_out) {
    std::size_t k = A.dim();
    std::vector<AlgVec> basis;
    for (const auto& g : gens) {
        if (span_out.contains(flatten(A, g))) continue;
        basis.push_back(g);
        for (std::size_t l = 0; l < k; ++l) {
            AlgVec scaled(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) scaled[i] = A.mul(A.basis_elem(l), g[i]);
            span_out.insert(flatten(A, scaled));
        }
    }
    return basis;
}

// Express v as an R-combination of the given basis vectors inside R^r.
AlgVec coords_in_basis(const FdAlgebra& A, const std::vector<AlgVec>& basis, const AlgVec& v) {
    std::size_t r = v.size();
    // rows of the R-matrix whose columns are the basis vectors
    std::vector<AlgVec> rows(r, AlgVec(basis.size(), A.zero()));
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < r; ++i) rows[i][j] = basis[j][i];
    auto res = solve_linear(A, rows, v);
    if (!res.consistent) throw std::logic_error("coords_in_basis: inconsistent");
    return res.particular;
}

} // namespace

EtaleNilDecomposition decompose_etale_nilpotent(const FiniteShtuka& sh) {
    const FdAlgebra& A = *sh.algebra;
    if (!A.is_field()) throw std::invalid_argument("decompose: base algebra is not a field");
    std::size_t r = sh.rank, k = A.dim();

    auto Nr = sh.iterate_frobenius(r);
    std::vector<AlgVec> cols;
    for (std::size_t j = 0; j < r; ++j) {
        AlgVec c(r);
        for (std::size_t i = 0; i < r; ++i) c[i] = Nr[i][j];
        cols.push_back(std::move(c));
    }
    RowSpace im_span(A.field(), r * k);
    auto et_basis = r_basis_of_span(A, cols, im_span);

    // kernel of v -> Nr * v^(q^r), an R-subspace since the base is a perfect field
    FqMat flatNr = flatten_R_linear(A, Nr);
    FqMat frob_r = FqMat::identity(A.field(), k);
    for (std::size_t t = 0; t < r; ++t) frob_r = A.frobenius_matrix().mul(frob_r);
    FqMat twist(A.field(), r * k, r * k);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) twist.at(i * k + a, i * k + b) = frob_r.at(a, b);
    FqMat semi = flatNr.mul(twist);
    std::vector<AlgVec> ker_vecs;
    for (auto& kv : kernel_basis(semi)) ker_vecs.push_back(unflatten(A, kv, r));
    RowSpace ker_span(A.field(), r * k);
    auto nil_basis = r_basis_of_span(A, ker_vecs, ker_span);

    if (et_basis.size() + nil_basis.size() != r)
        throw std::logic_error("decompose: rank accounting failed");
    RowSpace direct(A.field(), r * k);
    for (const auto& v : im_span.basis()) direct.insert(v);
    for (const auto& v : ker_span.basis()) direct.insert(v);
    if (direct.dim() != r * k) throw std::logic_error("decompose: sum not direct");

    EtaleNilDecomposition out;
    out.etale_rank = et_basis.size();
    std::vector<AlgVec> full = et_basis;
    full.insert(full.end(), nil_basis.begin(), nil_basis.end());
    // basis_change as a matrix with columns = new basis vectors
    out.basis_change.assign(r, AlgVec(r, A.zero()));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i) out.basis_change[i][j] = full[j][i];

    // T restricted to the etale part: solve in the etale basis
    auto restrict_to = [&](const std::vector<AlgVec>& basis) {
        std::size_t n = basis.size();
        std::vector<AlgVec> m(n, AlgVec(n, A.zero()));
        for (std::size_t j = 0; j < n; ++j) {
            AlgVec twisted(r);
            for (std::size_t i = 0; i < r; ++i) twisted[i] = A.frobenius(basis[j][i]);
            AlgVec img(r, A.zero());
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t l = 0; l < r; ++l)
                    img[i] = A.add(img[i], A.mul(sh.matrix[i][l], twisted[l]));
            AlgVec c = coords_in_basis(A, basis, img);
            for (std::size_t i = 0; i < n; ++i) m[i][j] = c[i];
        }
        return m;
    };
    out.etale = FiniteShtuka::make(sh.algebra, restrict_to(et_basis));
    // quotient map on the nil part: express image modulo the etale part
    {
        std::size_t n = nil_basis.size();
        std::vector<AlgVec> m(n, AlgVec(n, A.zero()));
        std::vector<AlgVec> mixed = et_basis;
        mixed.insert(mixed.end(), nil_basis.begin(), nil_basis.end());
        for (std::size_t j = 0; j < n; ++j) {
            AlgVec twisted(r);
            for (std::size_t i = 0; i < r; ++i) twisted[i] = A.frobenius(nil_basis[j][i]);
            AlgVec img(r, A.zero());
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t l = 0; l < r; ++l)
                    img[i] = A.add(img[i], A.mul(sh.matrix[i][l], twisted[l]));
            AlgVec c = coords_in_basis(A, mixed, img);
            for (std::size_t i = 0; i < n; ++i) m[i][j] = c[et_basis.size() + i];
        }
        out.nilpotent = FiniteShtuka::make(sh.algebra, m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// nilpotence checks

namespace {

ZSeries det_over_R(const FiniteShtuka& sh) {
    ZMatrix m(sh.algebra, sh.rank, sh.rank, 1);
    for (std::size_t i = 0; i < sh.rank; ++i)
        for (std::size_t j = 0; j < sh.rank; ++j)
            m.set(i, j, ZSeries::constant(sh.algebra, sh.matrix[i][j], 1));
    return m.det();
}

} // namespace

NilpotenceReport nilpotence_checks(const FiniteShtuka& sh) {
    const FdAlgebra& A = *sh.algebra;
    NilpotenceReport rep;
    rep.is_etale = sh.rank == 0 || A.is_unit(det_over_R(sh).coeff(0));

    auto Fr = sh.iterate_frobenius(sh.rank);
    bool residue_nil = true;
    for (auto& row : Fr)
        for (auto& e : row)
            if (!A.is_nilpotent(e)) { residue_nil = false; break; }
    rep.is_nilpotent = residue_nil;
    if (residue_nil) {
        // certified vanishing at r*(n+1) with q^n >= dim R (paper's bound)
        std::size_t n = 0;
        std::uint64_t qn = 1;
        while (qn < A.dim()) { qn *= A.field()->q(); ++n; }
        std::size_t bound = sh.rank * (n + 1);
        auto it = sh.iterate_frobenius(bound);
        if (!mat_is_zero(A, it)) throw std::logic_error("nilpotence bound violated");
        std::size_t first = bound;
        for (std::size_t m = 1; m <= bound; ++m)
            if (mat_is_zero(A, sh.iterate_frobenius(m))) { first = m; break; }
        rep.certified_bound = first;
    }
    return rep;
}

NilpotenceReport nilpotence_checks(const LocalShtuka& sh) {
    NilpotenceReport rep;
    ZMatrix folded = sh.folded_matrix();
    FiniteShtuka mod_z = FiniteShtuka::make(sh.algebra(), folded.constant_rows());
    auto finite = nilpotence_checks(mod_z);
    rep.is_topologically_nilpotent = finite.is_nilpotent;
    rep.certified_bound = finite.certified_bound;
    rep.is_etale = sh.rank() == 0 ||
                   (sh.twist() == 0 && sh.algebra()->is_unit(folded.det().coeff(0)));
    return rep;
}

// ---------------------------------------------------------------------------
// LocalShtuka

LocalShtuka LocalShtuka::make(ZMatrix matrix, long twist) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("LocalShtuka: matrix not square");
    LocalShtuka sh(std::move(matrix), twist);
    if (sh.rank() > 0 && !sh.det_order_residue())
        throw std::invalid_argument(
            "LocalShtuka: det vanishes modulo nilpotents at this precision; "
            "F is not invertible after inverting (z-zeta)");
    return sh;
}

LocalShtuka LocalShtuka::tate(AlgebraPtr alg, long n, std::size_t precision) {
    ZMatrix m(alg, 1, 1, precision);
    if (n >= 0) {
        m.set(0, 0, ZSeries::z_minus_zeta_pow(alg, std::size_t(n), precision));
        return make(std::move(m), 0);
    }
    m.set(0, 0, ZSeries::constant(alg, alg->one(), precision));
    return make(std::move(m), n);
}

ZMatrix LocalShtuka::folded_matrix() const {
    if (twist_ < 0) throw std::invalid_argument("local shtuka is not effective");
    if (twist_ == 0) return mat_;
    ZSeries f = ZSeries::z_minus_zeta_pow(mat_.algebra(), std::size_t(twist_), mat_.precision());
    return mat_.scale(f);
}

LocalShtuka LocalShtuka::tate_twist(long n) const { return LocalShtuka(mat_, twist_ + n); }

std::optional<std::size_t> LocalShtuka::det_order_residue() const {
    const FdAlgebra& A = *algebra();
    ZSeries d = mat_.det();
    for (std::size_t i = 0; i < d.precision(); ++i)
        if (!A.is_nilpotent(d.coeff(i))) return i;
    return std::nullopt;
}

bool equivalent(const LocalShtuka& a, const LocalShtuka& b) {
    if (a.rank() != b.rank()) return false;
    if (!a.algebra()->same(*b.algebra())) return false;
    const LocalShtuka& lo = a.twist() <= b.twist() ? a : b;
    const LocalShtuka& hi = a.twist() <= b.twist() ? b : a;
    std::size_t diff = std::size_t(hi.twist() - lo.twist());
    ZSeries f = ZSeries::z_minus_zeta_pow(a.algebra(), diff, a.precision());
    return hi.matrix().scale(f).equal(lo.matrix());
}

// ---------------------------------------------------------------------------
// Verschiebung

std::variant<ZMatrix, NotAnnihilated> verschiebung(const LocalShtuka& sh, std::size_t d) {
    const AlgebraPtr& A = sh.algebra();
    const FqField& F = *A->field();
    ZMatrix T = sh.folded_matrix();
    std::size_t r = sh.rank(), N = sh.precision(), k = A->dim();
    ZSeries zzd = ZSeries::z_minus_zeta_pow(A, d, N);
    ZMatrix target = ZMatrix::identity(A, r, N).scale(zzd);

    // Solve T S = (z-zeta)^d Id and S T = (z-zeta)^d Id as one linear system:
    // a particular solution of the left identity alone can differ from V by
    // truncation-kernel junk that breaks the right identity.
    // Unknowns: S entry (i,j), z-coefficient t, coordinate l.
    std::size_t per_entry = N * k;
    std::size_t unknowns = r * r * per_entry;
    auto uidx = [&](std::size_t i, std::size_t j, std::size_t t, std::size_t l) {
        return ((i * r + j) * N + t) * k + l;
    };
    FqMat sys(A->field(), 2 * r * r * per_entry, unknowns);
    std::vector<fq_t> rhs(2 * r * r * per_entry, 0);
    // left: (T S)_{a j, t', :} = sum_i sum_{dt} T_{a i, dt} * s_{i j, t'-dt}
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t i = 0; i < r; ++i) {
            const ZSeries& tai = T.at(a, i);
            for (std::size_t dt = 0; dt < N; ++dt) {
                if (A->is_zero(tai.coeff(dt))) continue;
                FqMat mm = A->mult_matrix(tai.coeff(dt));
                for (std::size_t j = 0; j < r; ++j)
                    for (std::size_t t = 0; t + dt < N; ++t)
                        for (std::size_t x = 0; x < k; ++x)
                            for (std::size_t y = 0; y < k; ++y) {
                                if (mm.at(x, y) == 0) continue;
                                std::size_t row = ((a * r + j) * N + (t + dt)) * k + x;
                                std::size_t col = uidx(i, j, t, y);
                                sys.at(row, col) = F.add(sys.at(row, col), mm.at(x, y));
                            }
            }
        }
    // right: (S T)_{a j} = sum_i s_{a i} T_{i j}, rows offset by r*r*per_entry
    std::size_t off = r * r * per_entry;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const ZSeries& tij = T.at(i, j);
            for (std::size_t dt = 0; dt < N; ++dt) {
                if (A->is_zero(tij.coeff(dt))) continue;
                FqMat mm = A->mult_matrix(tij.coeff(dt));
                for (std::size_t a = 0; a < r; ++a)
                    for (std::size_t t = 0; t + dt < N; ++t)
                        for (std::size_t x = 0; x < k; ++x)
                            for (std::size_t y = 0; y < k; ++y) {
                                if (mm.at(x, y) == 0) continue;
                                std::size_t row = off + ((a * r + j) * N + (t + dt)) * k + x;
                                std::size_t col = uidx(a, i, t, y);
                                sys.at(row, col) = F.add(sys.at(row, col), mm.at(x, y));
                            }
            }
        }
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t t = 0; t < N; ++t)
                for (std::size_t x = 0; x < k; ++x) {
                    fq_t v = target.at(a, j).coeff(t)[x];
                    rhs[((a * r + j) * N + t) * k + x] = v;
                    rhs[off + ((a * r + j) * N + t) * k + x] = v;
                }
    auto res = solve(sys, rhs);
    if (!res.consistent) {
        // witness: a cokernel class of some (z-zeta)^d e_j under left multiplication
        FqMat flatT = flatten_series_linear(T);
        RowSpace im(A->field(), flatT.rows());
        for (std::size_t c = 0; c < flatT.cols(); ++c) im.insert(flatT.col(c));
        NotAnnihilated err;
        err.what = "(z-zeta)^" + std::to_string(d) + " does not kill coker F_M";
        for (std::size_t j = 0; j < r; ++j) {
            auto red = im.reduce(flatten_series_vec(zmatrix_column(target, j)));
            bool nonzero = std::any_of(red.begin(), red.end(), [](fq_t x) { return x != 0; });
            if (nonzero || j + 1 == r) {
                err.witness_flat = std::move(red);
                break;
            }
        }
        return err;
    }
    ZMatrix S(A, r, r, N);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            ZSeries s(A, N);
            for (std::size_t t = 0; t < N; ++t)
                for (std::size_t l = 0; l < k; ++l) s.coeff(t)[l] = res.particular[uidx(i, j, t, l)];
            S.set(i, j, std::move(s));
        }
    if (!T.mul(S).equal(target) || !S.mul(T).equal(target))
        throw std::logic_error("verschiebung: verification failed");
    return S;
}

std::variant<std::vector<AlgVec>, NotAnnihilated> verschiebung_finite(const FiniteShtuka& sh,
                                                                      const AlgElem& c) {
    const FdAlgebra& A = *sh.algebra;
    std::size_t r = sh.rank;
    FqMat flatT = flatten_R_linear(A, sh.matrix);
    std::vector<AlgVec> S(r, AlgVec(r, A.zero()));
    for (std::size_t j = 0; j < r; ++j) {
        AlgVec rhs(r, A.zero());
        rhs[j] = c;
        auto res = solve(flatT, flatten(A, rhs));
        if (!res.consistent) {
            RowSpace im(A.field(), flatT.rows());
            for (std::size_t cc = 0; cc < flatT.cols(); ++cc) im.insert(flatT.col(cc));
            NotAnnihilated err;
            err.what = "scalar does not kill coker F_M";
            err.witness_flat = im.reduce(flatten(A, rhs));
            return err;
        }
        AlgVec col = unflatten(A, res.particular, r);
        for (std::size_t i = 0; i < r; ++i) S[i][j] = col[i];
    }
    // verify both products
    std::vector<AlgVec> scaled = mat_identity(A, r);
    for (std::size_t i = 0; i < r; ++i) scaled[i][i] = c;
    if (mat_mul(A, sh.matrix, S) != scaled || mat_mul(A, S, sh.matrix) != scaled)
        throw std::logic_error("verschiebung_finite: verification failed");
    return S;
}

// ---------------------------------------------------------------------------
// monoidal structure

std::variant<LocalShtuka, PrecisionExhausted> dual(const LocalShtuka& a) {
    const AlgebraPtr& A = a.algebra();
    std::size_t N = a.precision();
    std::size_t nu = A->zeta_nilindex();
    if (a.rank() == 0) return LocalShtuka::make(ZMatrix(A, 0, 0, N), -a.twist());

    ZSeries d = a.matrix().det();
    // find minimal e with det * w = (z-zeta)^e solvable; then
    // matrix^{-1} = adj * w * (z-zeta)^{-e}
    std::size_t emax = N > nu ? N - nu : 0;
    ZMatrix det_as_mat(A, 1, 1, N);
    det_as_mat.set(0, 0, d);
    FqMat flat = flatten_series_linear(det_as_mat);
    for (std::size_t e = 0; e <= emax; ++e) {
        ZSeries target = ZSeries::z_minus_zeta_pow(A, e, N);
        auto res = solve(flat, flatten_series_vec({target}));
        if (!res.consistent) continue;
        ZSeries w = unflatten_series_vec(A, res.particular, 1, N)[0];
        ZMatrix m = a.matrix().adjugate().scale(w).transpose();
        return LocalShtuka::make(std::move(m), -long(e) - a.twist());
    }
    return PrecisionExhausted{"dual: no exponent e <= " + std::to_string(emax) +
                              " with det | (z-zeta)^e at this precision"};
}

std::variant<LocalShtuka, PrecisionExhausted> monoidal(const LocalShtuka& a,
                                                       const LocalShtuka& b, MonoidalOp op) {
    if (!a.algebra()->same(*b.algebra()))
        throw std::invalid_argument("monoidal: algebra mismatch");
    const AlgebraPtr& A = a.algebra();
    switch (op) {
    case MonoidalOp::Tensor: {
        std::size_t N = std::min(a.precision(), b.precision());
        std::size_t ra = a.rank(), rb = b.rank();
        ZMatrix m(A, ra * rb, ra * rb, N);
        for (std::size_t i = 0; i < ra; ++i)
            for (std::size_t j = 0; j < ra; ++j)
                for (std::size_t i2 = 0; i2 < rb; ++i2)
                    for (std::size_t j2 = 0; j2 < rb; ++j2)
                        m.set(i * rb + i2, j * rb + j2,
                              a.matrix().at(i, j).truncate(N).mul(b.matrix().at(i2, j2).truncate(N)));
        return LocalShtuka::make(std::move(m), a.twist() + b.twist());
    }
    case MonoidalOp::Dual:
        return dual(a);
    case MonoidalOp::Hom: {
        auto da = dual(a);
        if (std::holds_alternative<PrecisionExhausted>(da))
            return std::get<PrecisionExhausted>(da);
        return monoidal(std::get<LocalShtuka>(da), b, MonoidalOp::Tensor);
    }
    }
    throw std::logic_error("monoidal: unreachable");
}

// ---------------------------------------------------------------------------
// boundedness

std::variant<BoundednessCertificate, InsufficientPrecision>
boundedness_check(const LocalShtuka& sh, std::size_t d) {
    const AlgebraPtr& A = sh.algebra();
    ZSeries det = sh.folded_matrix().det();
    auto div = divide_by_z_minus_zeta(det, d);
    if (std::holds_alternative<InsufficientPrecision>(div))
        return std::get<InsufficientPrecision>(div);
    if (std::holds_alternative<NotDivisible>(div)) {
        auto& nd = std::get<NotDivisible>(div);
        BoundednessCertificate cert;
        cert.bounded = false;
        cert.reason = "not-divisible";
        cert.witness = ZSeries::constant(A, nd.witness, 1);
        return cert;
    }
    ZSeries q = std::get<ZSeries>(div);
    BoundednessCertificate cert;
    cert.bounded = q.is_unit();
    cert.witness = q;
    cert.reason = cert.bounded ? "unit-quotient" : "quotient-not-unit";
    return cert;
}

// ---------------------------------------------------------------------------
// truncation and level sequences

TruncatedShtuka truncate(const LocalShtuka& sh, std::size_t n) {
    if (n < 1) throw std::invalid_argument("truncate: level must be >= 1");
    if (sh.precision() < n)
        throw std::invalid_argument("truncate: insufficient precision");
    const AlgebraPtr& A = sh.algebra();
    ZMatrix T = sh.folded_matrix();
    std::size_t r = sh.rank();
    std::size_t R = r * n;
    auto idx = [&](std::size_t i, std::size_t j) { return j * r + i; }; // e_i z^j
    std::vector<AlgVec> B(R, AlgVec(R, A->zero()));
    std::vector<AlgVec> Z(R, AlgVec(R, A->zero()));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i2 = 0; i2 < r; ++i2)
                for (std::size_t j2 = j; j2 < n; ++j2)
                    B[idx(i2, j2)][idx(i, j)] = T.at(i2, i).coeff(j2 - j);
            if (j + 1 < n) Z[idx(i, j + 1)][idx(i, j)] = A->one();
        }
    TruncatedShtuka out;
    out.base = FiniteShtuka::make(A, std::move(B));
    out.z_action = std::move(Z);
    out.level = n;
    out.source_rank = r;
    // invariants: z^n = 0 and commutation with the structure map
    std::vector<AlgVec> zp = mat_identity(*A, R);
    for (std::size_t t = 0; t < n; ++t) zp = mat_mul(*A, out.z_action, zp);
    if (!mat_is_zero(*A, zp)) throw std::logic_error("truncate: z-action not nilpotent");
    if (mat_mul(*A, out.z_action, out.base.matrix) !=
        mat_mul(*A, out.base.matrix, out.z_action))
        throw std::logic_error("truncate: z-action does not commute with F");
    return out;
}

SequenceReport sequence_check(const LocalShtuka& sh, std::size_t n, std::size_t m) {
    const AlgebraPtr& Ap = sh.algebra();
    const FdAlgebra& A = *Ap;
    if (sh.precision() < n + m)
        throw std::invalid_argument("sequence_check: insufficient precision");
    std::size_t r = sh.rank(), k = A.dim();
    SequenceReport rep;
    rep.rank_left = r * n;
    rep.rank_middle = r * (n + m);
    rep.rank_right = r * m;
    if (n == 0 || m == 0) { rep.exact = true; rep.commutes = true; return rep; }

    auto mid = truncate(sh, n + m);
    auto left = truncate(sh, m);   // maps into the middle via *z^n
    auto right = truncate(sh, n);  // quotient of the middle

    auto idx = [&](std::size_t i, std::size_t j) { return j * r + i; };
    // f = multiplication by z^n : M/z^m -> M/z^{n+m}
    std::vector<AlgVec> f(r * (n + m), AlgVec(r * m, A.zero()));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m; ++j) f[idx(i, j + n)][idx(i, j)] = A.one();
    // g = projection : M/z^{n+m} -> M/z^n
    std::vector<AlgVec> g(r * n, AlgVec(r * (n + m), A.zero()));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j) g[idx(i, j)][idx(i, j)] = A.one();

    rep.commutes = (mat_mul(A, mid.base.matrix, f) == mat_mul(A, f, left.base.matrix)) &&
                   (mat_mul(A, right.base.matrix, g) == mat_mul(A, g, mid.base.matrix));

    FqMat ff = flatten_linear(A, f), gg = flatten_linear(A, g);
    bool inj = rank(ff) == r * m * k;
    bool surj = rank(gg) == r * n * k;
    RowSpace im_f(A.field(), ff.rows());
    for (std::size_t c = 0; c < ff.cols(); ++c) im_f.insert(ff.col(c));
    bool middle = true;
    for (auto& kv : kernel_basis(gg))
        if (!im_f.contains(kv)) { middle = false; break; }
    middle = middle && im_f.dim() == r * (n + m) * k - rank(gg);
    rep.exact = inj && surj && middle;
    return rep;
}

// ---------------------------------------------------------------------------
// co-Lie data of a local shtuka at its precision

LocalCoLie local_colie(const LocalShtuka& sh, std::size_t d_bound) {
    const AlgebraPtr& A = sh.algebra();
    ZMatrix T = sh.folded_matrix();
    std::size_t r = sh.rank(), N = sh.precision();
    FqMat flatT = flatten_series_linear(T);
    RowSpace im(A->field(), flatT.rows());
    for (std::size_t c = 0; c < flatT.cols(); ++c) im.insert(flatT.col(c));
    LocalCoLie out;
    auto comp = im.complement_positions();
    out.omega_dim = comp.size();
    // multiplication by (z - zeta) on the flattened series module
    ZMatrix zz(A, r, r, N);
    for (std::size_t i = 0; i < r; ++i)
        zz.set(i, i, ZSeries::z_minus_zeta_pow(A, 1, N));
    FqMat mz = flatten_series_linear(zz);
    // iterate on cokernel representatives
    std::vector<std::vector<fq_t>> reps;
    for (auto c : comp) {
        std::vector<fq_t> v(flatT.rows(), 0);
        v[c] = 1;
        reps.push_back(std::move(v));
    }
    for (std::size_t d = 0; d <= d_bound; ++d) {
        bool killed = true;
        std::size_t bad = 0;
        for (std::size_t j = 0; j < reps.size(); ++j) {
            auto red = im.reduce(reps[j]);
            if (!std::all_of(red.begin(), red.end(), [](fq_t x) { return x == 0; })) {
                killed = false;
                bad = j;
                break;
            }
        }
        if (killed) {
            out.nilpotence_order = d;
            return out;
        }
        if (d == d_bound) {
            out.witness = unflatten(*A, im.reduce(reps[bad]), r * N);
            out.witness_level = d;
            return out;
        }
        for (auto& rep : reps) rep = mz.apply(rep);
    }
    return out;
}

} // namespace shtuka
