#include "shtuka/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace shtuka {

namespace {

std::string tuple_str(std::initializer_list<std::size_t> idx) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (auto i : idx) { if (!first) os << ","; os << "b" << i; first = false; }
    os << ")";
    return os.str();
}

} // namespace

struct FdAlgebraAccess {
    static AlgebraPtr build(FieldPtr f, std::size_t k, std::vector<fq_t> sc, AlgElem zeta,
                            std::vector<std::string> names) {
        return AlgebraPtr(new FdAlgebra(std::move(f), k, std::move(sc), std::move(zeta),
                                        std::move(names)));
    }
};

ValidationReport FdAlgebra::validate(const FieldPtr& field, std::size_t k,
                                     const std::vector<fq_t>& sc, const AlgElem& zeta) {
    ValidationReport report;
    if (sc.size() != k * k * k)
        throw std::invalid_argument("struct_consts tensor must have shape k x k x k");
    if (zeta.size() != k)
        throw std::invalid_argument("zeta must have length k");
    const FqField& F = *field;
    auto prod = [&](const AlgElem& x, const AlgElem& y) {
        AlgElem z(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < k; ++j) {
                if (y[j] == 0) continue;
                fq_t c = F.mul(x[i], y[j]);
                for (std::size_t l = 0; l < k; ++l)
                    z[l] = F.add(z[l], F.mul(c, sc[(i * k + j) * k + l]));
            }
        }
        return z;
    };
    auto unit_vec = [&]() { AlgElem u(k, 0); u[0] = 1; return u; };

    // unit
    for (std::size_t i = 0; i < k; ++i) {
        AlgElem b(k, 0); b[i] = 1;
        if (prod(unit_vec(), b) != b || prod(b, unit_vec()) != b) {
            report.push_back({"unit", tuple_str({0, i})});
            break;
        }
    }
    // commutativity
    for (std::size_t i = 0; i < k && report.size() < 32; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            AlgElem bi(k, 0), bj(k, 0); bi[i] = 1; bj[j] = 1;
            if (prod(bi, bj) != prod(bj, bi)) { report.push_back({"commutativity", tuple_str({i, j})}); goto after_comm; }
        }
after_comm:
    // associativity, exhaustively over the basis
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l) {
                AlgElem bi(k, 0), bj(k, 0), bl(k, 0); bi[i] = 1; bj[j] = 1; bl[l] = 1;
                if (prod(prod(bi, bj), bl) != prod(bi, prod(bj, bl))) {
                    report.push_back({"associativity", tuple_str({i, j, l})});
                    goto after_assoc;
                }
            }
after_assoc:
    if (!report.empty()) return report; // ring axioms first; the rest assumes them

    // zeta nilpotent: zeta^k = 0
    {
        AlgElem z = unit_vec();
        for (std::size_t n = 0; n < k; ++n) z = prod(z, zeta);
        if (std::any_of(z.begin(), z.end(), [](fq_t c) { return c != 0; }))
            report.push_back({"zeta-nilpotent", "zeta"});
    }

    // locality: fixed points of x -> x^q must be exactly the scalars
    {
        FqMat frob(field, k, k);
        for (std::size_t j = 0; j < k; ++j) {
            AlgElem b(k, 0); b[j] = 1;
            AlgElem bq = b;
            for (std::uint32_t t = 1; t < field->q(); ++t) bq = prod(bq, b);
            frob.set_col(j, bq);
        }
        FqMat fm1 = frob;
        for (std::size_t i = 0; i < k; ++i) fm1.at(i, i) = F.sub(fm1.at(i, i), 1);
        auto ker = kernel_basis(fm1);
        if (ker.size() != 1) {
            // witness: a Frobenius-fixed element independent from the scalars
            RowSpace scalars(field, k);
            AlgElem u(k, 0); u[0] = 1;
            scalars.insert(u);
            std::string w = "?";
            for (auto& v : ker)
                if (!scalars.contains(v)) {
                    std::ostringstream os;
                    os << "[";
                    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
                    os << "]";
                    w = os.str();
                    break;
                }
            report.push_back({"locality", w});
        }
    }
    return report;
}

FdAlgebra::FdAlgebra(FieldPtr field, std::size_t k, std::vector<fq_t> sc, AlgElem zeta,
                     std::vector<std::string> names)
    : field_(std::move(field)), k_(k), sc_(std::move(sc)), zeta_(std::move(zeta)),
      names_(std::move(names)), frob_mat_(field_, k, k), nil_space_(field_, k) {
    if (names_.empty()) {
        names_.resize(k_);
        names_[0] = "1";
        for (std::size_t i = 1; i < k_; ++i) names_[i] = "b" + std::to_string(i);
    }
    // frobenius matrix x -> x^q, columns = basis images
    for (std::size_t j = 0; j < k_; ++j) {
        AlgElem b(k_, 0); b[j] = 1;
        frob_mat_.set_col(j, pow(b, field_->q()));
    }
    // nilradical = ker(x -> x^{q^s}) with q^s >= k
    std::size_t s = 0;
    std::uint64_t qs = 1;
    while (qs < k_) { qs *= field_->q(); ++s; }
    FqMat phi = FqMat::identity(field_, k_);
    for (std::size_t t = 0; t < std::max<std::size_t>(s, 1); ++t) phi = frob_mat_.mul(phi);
    if (k_ == 1) phi = FqMat(field_, 1, 1); // F_q itself: only 0 is nilpotent... x^q = x
    if (k_ == 1) phi.at(0, 0) = 1;
    auto ker = kernel_basis(phi);
    if (k_ == 1) ker.clear();
    for (auto& v : ker) nil_space_.insert(v);
    for (const auto& row : nil_space_.basis()) nil_basis_.push_back(row);
    residue_m_ = (k_ - nil_basis_.size());
    // zeta nilpotency index
    nu_ = 1;
    AlgElem zp = zeta_;
    while (!is_zero(zp)) { zp = mul(zp, zeta_); ++nu_; }
}

AlgebraPtr FdAlgebra::make(FieldPtr field, std::size_t dim, std::vector<fq_t> sc,
                           AlgElem zeta, std::vector<std::string> names) {
    auto report = validate(field, dim, sc, zeta);
    if (!report.empty()) {
        std::string msg = "FdAlgebra axiom failures:";
        for (auto& r : report) msg += " " + r.axiom + "@" + r.witness;
        throw std::invalid_argument(msg);
    }
    return FdAlgebraAccess::build(std::move(field), dim, std::move(sc), std::move(zeta),
                                  std::move(names));
}

AlgElem FdAlgebra::one() const { AlgElem u(k_, 0); u[0] = 1; return u; }

AlgElem FdAlgebra::basis_elem(std::size_t i) const {
    AlgElem b(k_, 0);
    b.at(i) = 1;
    return b;
}

AlgElem FdAlgebra::from_scalar(fq_t c) const { AlgElem u(k_, 0); u[0] = c; return u; }

AlgElem FdAlgebra::add(const AlgElem& x, const AlgElem& y) const {
    AlgElem z(k_);
    for (std::size_t i = 0; i < k_; ++i) z[i] = field_->add(x[i], y[i]);
    return z;
}

AlgElem FdAlgebra::sub(const AlgElem& x, const AlgElem& y) const {
    AlgElem z(k_);
    for (std::size_t i = 0; i < k_; ++i) z[i] = field_->sub(x[i], y[i]);
    return z;
}

AlgElem FdAlgebra::neg(const AlgElem& x) const {
    AlgElem z(k_);
    for (std::size_t i = 0; i < k_; ++i) z[i] = field_->neg(x[i]);
    return z;
}

AlgElem FdAlgebra::scale(fq_t c, const AlgElem& x) const {
    AlgElem z(k_);
    for (std::size_t i = 0; i < k_; ++i) z[i] = field_->mul(c, x[i]);
    return z;
}

AlgElem FdAlgebra::mul(const AlgElem& x, const AlgElem& y) const {
    const FqField& F = *field_;
    AlgElem z(k_, 0);
    for (std::size_t i = 0; i < k_; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < k_; ++j) {
            if (y[j] == 0) continue;
            fq_t c = F.mul(x[i], y[j]);
            const fq_t* row = &sc_[(i * k_ + j) * k_];
            for (std::size_t l = 0; l < k_; ++l)
                if (row[l] != 0) z[l] = F.add(z[l], F.mul(c, row[l]));
        }
    }
    return z;
}

AlgElem FdAlgebra::pow(const AlgElem& x, std::uint64_t n) const {
    AlgElem r = one(), base = x;
    while (n) {
        if (n & 1) r = mul(r, base);
        base = mul(base, base);
        n >>= 1;
    }
    return r;
}

AlgElem FdAlgebra::frobenius(const AlgElem& x) const { return frob_mat_.apply(x); }

bool FdAlgebra::is_zero(const AlgElem& x) const {
    return std::all_of(x.begin(), x.end(), [](fq_t c) { return c == 0; });
}

bool FdAlgebra::is_nilpotent(const AlgElem& x) const { return nil_space_.contains(x); }

bool FdAlgebra::is_unit(const AlgElem& x) const { return !is_nilpotent(x) && !is_zero(x); }

std::optional<AlgElem> FdAlgebra::invert(const AlgElem& x) const {
    if (is_nilpotent(x)) return std::nullopt;
    auto res = solve(mult_matrix(x), one());
    if (!res.consistent) return std::nullopt;
    return res.particular;
}

FqMat FdAlgebra::mult_matrix(const AlgElem& x) const {
    FqMat m(field_, k_, k_);
    for (std::size_t j = 0; j < k_; ++j) {
        AlgElem b(k_, 0); b[j] = 1;
        m.set_col(j, mul(x, b));
    }
    return m;
}

std::string FdAlgebra::to_string(const AlgElem& x) const {
    std::string s;
    for (std::size_t i = 0; i < k_; ++i) {
        if (x[i] == 0) continue;
        if (!s.empty()) s += " + ";
        bool unit_coeff = (x[i] == 1);
        if (!unit_coeff || i == 0) s += field_->to_string(x[i]);
        if (i > 0) {
            if (!unit_coeff) s += "*";
            s += names_[i];
        }
    }
    return s.empty() ? "0" : s;
}

AlgebraPtr FdAlgebra::base_field(FieldPtr f) {
    std::vector<fq_t> sc{1};
    return make(std::move(f), 1, sc, AlgElem{0}, {"1"});
}

AlgebraPtr FdAlgebra::truncated_polynomial(FieldPtr f, std::size_t n, bool zeta_is_u) {
    std::size_t k = n;
    std::vector<fq_t> sc(k * k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i + j < k) sc[(i * k + j) * k + (i + j)] = 1;
    AlgElem zeta(k, 0);
    if (zeta_is_u && k > 1) zeta[1] = 1;
    std::vector<std::string> names(k);
    names[0] = "1";
    for (std::size_t i = 1; i < k; ++i)
        names[i] = i == 1 ? "u" : "u^" + std::to_string(i);
    return make(std::move(f), k, std::move(sc), std::move(zeta), std::move(names));
}

AlgebraPtr FdAlgebra::plane_quotient(FieldPtr f, std::size_t a, std::size_t b, int zeta_index) {
    // F_q[u,v]/(u^a, v^b, uv): basis 1, u..u^{a-1}, v..v^{b-1}
    std::size_t k = 1 + (a - 1) + (b - 1);
    auto uidx = [&](std::size_t i) { return i; };              // u^i at index i (i>=1)
    auto vidx = [&](std::size_t j) { return (a - 1) + j; };    // v^j at index a-1+j (j>=1)
    std::vector<fq_t> sc(k * k * k, 0);
    auto set = [&](std::size_t i, std::size_t j, std::size_t l) { sc[(i * k + j) * k + l] = 1; };
    for (std::size_t i = 0; i < k; ++i) { set(0, i, i); if (i) set(i, 0, i); }
    for (std::size_t i = 1; i < a; ++i)
        for (std::size_t j = 1; j < a; ++j)
            if (i + j < a) set(uidx(i), uidx(j), uidx(i + j));
    for (std::size_t i = 1; i < b; ++i)
        for (std::size_t j = 1; j < b; ++j)
            if (i + j < b) set(vidx(i), vidx(j), vidx(i + j));
    AlgElem zeta(k, 0);
    if (zeta_index >= 0) zeta[std::size_t(zeta_index)] = 1;
    std::vector<std::string> names(k);
    names[0] = "1";
    for (std::size_t i = 1; i < a; ++i) names[uidx(i)] = i == 1 ? "u" : "u^" + std::to_string(i);
    for (std::size_t j = 1; j < b; ++j) names[vidx(j)] = j == 1 ? "v" : "v^" + std::to_string(j);
    return make(std::move(f), k, std::move(sc), std::move(zeta), std::move(names));
}

AlgebraPtr FdAlgebra::field_extension(FieldPtr f, std::size_t m) {
    auto base = base_field(f);
    if (m == 1) return base;
    return extend_field(base, m).ext;
}

bool AlgebraHom::verify(bool require_zeta) const {
    const FdAlgebra& S = *source;
    const FdAlgebra& T = *target;
    if (apply(S.one()) != T.one()) return false;
    for (std::size_t i = 0; i < S.dim(); ++i)
        for (std::size_t j = i; j < S.dim(); ++j) {
            AlgElem bi = S.zero(), bj = S.zero();
            bi[i] = 1; bj[j] = 1;
            if (apply(S.mul(bi, bj)) != T.mul(apply(bi), apply(bj))) return false;
        }
    if (require_zeta && apply(S.zeta()) != T.zeta()) return false;
    return true;
}

AlgebraHom AlgebraHom::identity(const AlgebraPtr& a) {
    return AlgebraHom{a, a, FqMat::identity(a->field(), a->dim())};
}

ResidueData residue_data(const AlgebraPtr& alg) {
    const FdAlgebra& A = *alg;
    const FieldPtr& F = A.field();
    std::size_t k = A.dim();
    RowSpace nil(F, k);
    for (const auto& v : A.nilradical_basis()) nil.insert(v);
    std::size_t m = k - nil.dim();

    // Section of the quotient: representatives starting with 1.
    std::vector<AlgElem> reps;
    RowSpace span(F, k);
    for (const auto& v : A.nilradical_basis()) span.insert(v);
    auto try_add = [&](const AlgElem& x) {
        if (span.insert(x)) reps.push_back(x);
    };
    try_add(A.one());
    for (std::size_t i = 0; i < k && reps.size() < m; ++i) try_add(A.basis_elem(i));
    assert(reps.size() == m);

    // coordinates of (x mod N) in the representative basis
    FqMat repmat(F, k, m);
    for (std::size_t j = 0; j < m; ++j) repmat.set_col(j, reps[j]);
    auto coords = [&](const AlgElem& x) {
        // solve reps * c = x modulo N: augment with nilradical basis
        FqMat aug(F, k, m + nil.dim());
        for (std::size_t j = 0; j < m; ++j) aug.set_col(j, reps[j]);
        for (std::size_t j = 0; j < nil.dim(); ++j) aug.set_col(m + j, nil.basis()[j]);
        auto res = solve(aug, x);
        assert(res.consistent);
        return std::vector<fq_t>(res.particular.begin(), res.particular.begin() + m);
    };

    std::vector<fq_t> sc(m * m * m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            auto c = coords(A.mul(reps[i], reps[j]));
            for (std::size_t l = 0; l < m; ++l) sc[(i * m + j) * m + l] = c[l];
        }
    auto residue = FdAlgebra::make(F, m, std::move(sc), AlgElem(m, 0));

    FqMat qmat(F, m, k);
    for (std::size_t j = 0; j < k; ++j) qmat.set_col(j, coords(A.basis_elem(j)));
    AlgebraHom quot{alg, residue, qmat};

    FieldPtr rf = nullptr;
    std::uint64_t qm = 1;
    bool fits = true;
    for (std::size_t i = 0; i < F->e() * m; ++i) {
        qm *= F->p();
        if (qm > (1u << 16)) { fits = false; break; }
    }
    if (fits)
        rf = FqField::make(F->p(), std::uint32_t(F->e() * m),
                           find_irreducible(F->p(), std::uint32_t(F->e() * m)));

    return ResidueData{A.nilradical_basis(), m, residue, quot, rf};
}

std::vector<fq_t> flatten(const FdAlgebra& A, const AlgVec& v) {
    std::vector<fq_t> out;
    out.reserve(v.size() * A.dim());
    for (const auto& x : v) {
        assert(x.size() == A.dim());
        out.insert(out.end(), x.begin(), x.end());
    }
    return out;
}

AlgVec unflatten(const FdAlgebra& A, const std::vector<fq_t>& v, std::size_t len) {
    assert(v.size() == len * A.dim());
    AlgVec out(len);
    for (std::size_t i = 0; i < len; ++i)
        out[i] = AlgElem(v.begin() + i * A.dim(), v.begin() + (i + 1) * A.dim());
    return out;
}

FqMat flatten_linear(const FdAlgebra& A, const std::vector<AlgVec>& rows) {
    std::size_t k = A.dim();
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows[0].size();
    FqMat out(A.field(), r * k, c * k);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            if (A.is_zero(rows[i][j])) continue;
            FqMat mm = A.mult_matrix(rows[i][j]);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b)
                    out.at(i * k + a, j * k + b) = mm.at(a, b);
        }
    return out;
}

AlgSolveResult solve_linear(const FdAlgebra& A, const std::vector<AlgVec>& mat_rows,
                            const AlgVec& rhs) {
    FqMat M = flatten_linear(A, mat_rows);
    auto res = solve(M, flatten(A, rhs));
    AlgSolveResult out;
    out.consistent = res.consistent;
    if (!res.consistent) return out;
    std::size_t cols = mat_rows.empty() ? 0 : mat_rows[0].size();
    out.particular = unflatten(A, res.particular, cols);
    for (auto& kv : res.kernel) out.kernel.push_back(unflatten(A, kv, cols));
    return out;
}

namespace {

// polynomial arithmetic over an FdAlgebra that is a field
using LPoly = std::vector<AlgElem>; // coefficient list, may have zero tail

void ltrim(const FdAlgebra& L, LPoly& f) {
    while (!f.empty() && L.is_zero(f.back())) f.pop_back();
}

// remainder modulo monic divisor
LPoly lrem(const FdAlgebra& L, LPoly a, const LPoly& m) {
    ltrim(L, a);
    std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        AlgElem lead = a.back();
        std::size_t shift = a.size() - 1 - dm;
        if (!L.is_zero(lead))
            for (std::size_t i = 0; i <= dm; ++i)
                a[i + shift] = L.sub(a[i + shift], L.mul(lead, m[i]));
        a.pop_back();
        ltrim(L, a);
    }
    return a;
}

bool lirreducible(const FdAlgebra& L, const LPoly& f) {
    std::size_t deg = f.size() - 1;
    if (deg == 1) return true;
    std::size_t k = L.dim();
    std::uint64_t sz = 1;
    for (std::size_t i = 0; i < k; ++i) sz *= L.field()->q();
    // enumerate monic divisor candidates of degree <= deg/2
    for (std::size_t d = 1; 2 * d <= deg; ++d) {
        std::vector<std::uint64_t> idx(d, 0);
        while (true) {
            LPoly g(d + 1, L.zero());
            g[d] = L.one();
            for (std::size_t i = 0; i < d; ++i) {
                std::uint64_t t = idx[i];
                for (std::size_t c = 0; c < k; ++c) { g[i][c] = fq_t(t % L.field()->q()); t /= L.field()->q(); }
            }
            auto r = lrem(L, f, g);
            if (r.empty()) return false;
            std::size_t pos = 0;
            while (pos < d && ++idx[pos] == sz) { idx[pos] = 0; ++pos; }
            if (pos == d) break;
        }
    }
    return true;
}

} // namespace

ExtensionData extend_field(const AlgebraPtr& base, std::size_t m) {
    const FdAlgebra& L = *base;
    if (!L.is_field()) throw std::invalid_argument("extend_field: base is not a field");
    if (m < 1) throw std::invalid_argument("extend_field: degree must be >= 1");
    if (m == 1) return {base, AlgebraHom::identity(base)};
    std::size_t s = L.dim();
    const FieldPtr& F = L.field();

    // deterministic seeded scan for a monic irreducible of degree m over L
    std::uint64_t state = 0x9e3779b97f4a7c15ull ^ (std::uint64_t(F->q()) << 32) ^
                          (std::uint64_t(s) << 16) ^ m;
    auto next = [&]() {
        state ^= state << 13; state ^= state >> 7; state ^= state << 17;
        return state;
    };
    LPoly g;
    for (int tries = 0; tries < 4096; ++tries) {
        g.assign(m + 1, L.zero());
        g[m] = L.one();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < s; ++c) g[i][c] = fq_t(next() % F->q());
        if (L.is_zero(g[0])) g[0] = L.one(); // constant term nonzero
        if (lirreducible(L, g)) break;
        g.clear();
    }
    if (g.empty()) throw std::runtime_error("extend_field: no irreducible found");

    // basis b_i * u^j, index i + j*s
    std::size_t k = s * m;
    // u^t mod g for t < 2m-1
    std::vector<LPoly> upow(2 * m - 1);
    for (std::size_t t = 0; t < 2 * m - 1; ++t) {
        LPoly xt(t + 1, L.zero());
        xt[t] = L.one();
        auto r = lrem(L, xt, g);
        r.resize(m, L.zero());
        upow[t] = r;
    }
    std::vector<fq_t> sc(k * k * k, 0);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i2 = 0; i2 < s; ++i2)
                for (std::size_t j2 = 0; j2 < m; ++j2) {
                    AlgElem bb = L.mul(L.basis_elem(i), L.basis_elem(i2));
                    // bb * u^{j+j2} reduced
                    const LPoly& red = upow[j + j2];
                    std::size_t row = (i + j * s) * k + (i2 + j2 * s);
                    for (std::size_t jt = 0; jt < m; ++jt) {
                        AlgElem coeff = L.mul(bb, red[jt]);
                        for (std::size_t it = 0; it < s; ++it)
                            sc[row * k + (it + jt * s)] = coeff[it];
                    }
                }
    AlgElem zeta(k, 0); // a field: zeta = 0
    std::vector<std::string> names(k);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            std::string n = (i == 0) ? "" : L.basis_names()[i];
            if (j > 0) {
                if (!n.empty()) n += "*";
                n += (j == 1 ? "t" : "t^" + std::to_string(j));
            }
            names[i + j * s] = n.empty() ? "1" : n;
        }
    auto ext = FdAlgebra::make(F, k, std::move(sc), std::move(zeta), std::move(names));
    FqMat inc(F, k, s);
    for (std::size_t i = 0; i < s; ++i) inc.at(i, i) = 1;
    return {ext, AlgebraHom{base, ext, inc}};
}

ExtensionData extend_by_eps(const AlgebraPtr& base, std::size_t n) {
    const FdAlgebra& R = *base;
    const FieldPtr& F = R.field();
    std::size_t s = R.dim();
    std::size_t k = s * n; // basis b_i eps^j at i + j*s
    std::vector<fq_t> sc(k * k * k, 0);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i2 = 0; i2 < s; ++i2)
                for (std::size_t j2 = 0; j2 < n; ++j2) {
                    if (j + j2 >= n) continue;
                    AlgElem bb = R.mul(R.basis_elem(i), R.basis_elem(i2));
                    std::size_t row = (i + j * s) * k + (i2 + j2 * s);
                    for (std::size_t it = 0; it < s; ++it)
                        sc[row * k + (it + (j + j2) * s)] = bb[it];
                }
    AlgElem zeta(k, 0);
    for (std::size_t i = 0; i < s; ++i) zeta[i] = R.zeta()[i];
    std::vector<std::string> names(k);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::string nm = (i == 0) ? "" : R.basis_names()[i];
            if (j > 0) {
                if (!nm.empty()) nm += "*";
                nm += (j == 1 ? "eps" : "eps^" + std::to_string(j));
            }
            names[i + j * s] = nm.empty() ? "1" : nm;
        }
    auto ext = FdAlgebra::make(F, k, std::move(sc), std::move(zeta), std::move(names));
    FqMat inc(F, k, s);
    for (std::size_t i = 0; i < s; ++i) inc.at(i, i) = 1;
    return {ext, AlgebraHom{base, ext, inc}};
}

} // namespace shtuka
