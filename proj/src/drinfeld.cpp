#include "shtuka/drinfeld.hpp"

#include <algorithm>
#include <cassert>

namespace shtuka {

DrinfeldPresentation DrinfeldPresentation::from_shtuka(const FiniteShtuka& sh) {
    DrinfeldPresentation p;
    p.base = sh.algebra;
    p.rank = sh.rank;
    p.relations = sh.matrix;
    p.power = sh.algebra->field()->q();
    return p;
}

std::uint64_t DrinfeldPresentation::order() const {
    std::uint64_t o = 1;
    for (std::size_t i = 0; i < rank; ++i) {
        if (o > UINT64_MAX / power) throw std::overflow_error("order overflow");
        o *= power;
    }
    return o;
}

std::size_t DrinfeldPresentation::coordinate_dim() const { return std::size_t(order()); }

MPoly MPoly::variable(const FdAlgebra& A, std::size_t nvars, std::size_t i) {
    MPoly p;
    std::vector<std::uint16_t> m(nvars, 0);
    m[i] = 1;
    p.terms[m] = A.one();
    return p;
}

MPoly MPoly::constant(const FdAlgebra& A, std::size_t nvars, const AlgElem& c) {
    MPoly p;
    if (!A.is_zero(c)) p.terms[std::vector<std::uint16_t>(nvars, 0)] = c;
    return p;
}

bool MPoly::is_zero(const FdAlgebra& A) const {
    for (auto& [m, c] : terms)
        if (!A.is_zero(c)) return false;
    return true;
}

namespace {

void mp_accumulate(const FdAlgebra& A, MPoly& into, const std::vector<std::uint16_t>& m,
                   const AlgElem& c) {
    if (A.is_zero(c)) return;
    auto it = into.terms.find(m);
    if (it == into.terms.end()) {
        into.terms.emplace(m, c);
        return;
    }
    it->second = A.add(it->second, c);
    if (A.is_zero(it->second)) into.terms.erase(it);
}

} // namespace

MPoly mp_add(const FdAlgebra& A, const MPoly& a, const MPoly& b) {
    MPoly r = a;
    for (auto& [m, c] : b.terms) mp_accumulate(A, r, m, c);
    return r;
}

MPoly mp_sub(const FdAlgebra& A, const MPoly& a, const MPoly& b) {
    MPoly r = a;
    for (auto& [m, c] : b.terms) mp_accumulate(A, r, m, A.neg(c));
    return r;
}

MPoly mp_mul(const FdAlgebra& A, const MPoly& a, const MPoly& b) {
    MPoly r;
    for (auto& [ma, ca] : a.terms)
        for (auto& [mb, cb] : b.terms) {
            std::vector<std::uint16_t> m(ma.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::uint16_t(ma[i] + mb[i]);
            mp_accumulate(A, r, m, A.mul(ca, cb));
        }
    return r;
}

MPoly mp_scale(const FdAlgebra& A, const AlgElem& c, const MPoly& a) {
    MPoly r;
    for (auto& [m, cc] : a.terms) mp_accumulate(A, r, m, A.mul(c, cc));
    return r;
}

MPoly normal_form(const DrinfeldPresentation& pres, MPoly p, std::size_t nvars) {
    const FdAlgebra& A = *pres.base;
    std::size_t r = pres.rank;
    assert(r == 0 || nvars % r == 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = p.terms.begin(); it != p.terms.end(); ++it) {
            const auto& m = it->first;
            std::size_t var = nvars;
            for (std::size_t v = 0; v < nvars; ++v)
                if (m[v] >= pres.power) { var = v; break; }
            if (var == nvars) continue;
            // rewrite X_var^power -> sum_i t_ij X_i within the variable block
            AlgElem coeff = it->second;
            std::vector<std::uint16_t> rest = m;
            rest[var] = std::uint16_t(rest[var] - pres.power);
            std::size_t block = (var / r) * r;
            std::size_t j = var % r;
            p.terms.erase(it);
            for (std::size_t i = 0; i < r; ++i) {
                const AlgElem& tij = pres.relations[i][j];
                if (A.is_zero(tij)) continue;
                std::vector<std::uint16_t> mm = rest;
                mm[block + i] = std::uint16_t(mm[block + i] + 1);
                mp_accumulate(A, p, mm, A.mul(coeff, tij));
            }
            changed = true;
            break;
        }
    }
    return p;
}

MPoly comult(const DrinfeldPresentation& pres, const MPoly& p) {
    const FdAlgebra& A = *pres.base;
    std::size_t r = pres.rank;
    MPoly out;
    for (auto& [m, c] : p.terms) {
        MPoly term = MPoly::constant(A, 2 * r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (m[i] == 0) continue;
            MPoly yz = mp_add(A, MPoly::variable(A, 2 * r, i), MPoly::variable(A, 2 * r, r + i));
            for (std::uint16_t t = 0; t < m[i]; ++t) term = mp_mul(A, term, yz);
        }
        out = mp_add(A, out, term);
    }
    return normal_form(pres, std::move(out), 2 * r);
}

std::vector<std::vector<std::uint16_t>> monomial_basis(std::size_t nvars, std::uint32_t power) {
    std::vector<std::vector<std::uint16_t>> basis;
    std::vector<std::uint16_t> cur(nvars, 0);
    while (true) {
        basis.push_back(cur);
        std::size_t pos = 0;
        while (pos < nvars && ++cur[pos] == power) { cur[pos] = 0; ++pos; }
        if (pos == nvars) break;
    }
    return basis;
}

std::vector<fq_t> mp_flatten(const FdAlgebra& A, const MPoly& p,
                             const std::vector<std::vector<std::uint16_t>>& basis) {
    std::size_t k = A.dim();
    std::vector<fq_t> out(basis.size() * k, 0);
    std::map<std::vector<std::uint16_t>, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    for (auto& [m, c] : p.terms) {
        auto it = index.find(m);
        if (it == index.end()) throw std::logic_error("mp_flatten: polynomial not reduced");
        for (std::size_t l = 0; l < k; ++l) out[it->second * k + l] = c[l];
    }
    return out;
}

std::uint64_t PointModule::count() const {
    std::uint64_t q = carrier->field()->q();
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        if (c > UINT64_MAX / q) throw std::overflow_error("point count overflow");
        c *= q;
    }
    return c;
}

namespace {

// Point module of the semilinear system h_j^q = sum_i phi(t_ij) h_i over the
// carrier of T, with optional z-action pulled back through phi.
PointModule points_impl(const AlgebraPtr& base, const std::vector<AlgVec>& relations,
                        const std::vector<AlgVec>* z_action, const TestAlgebra& T) {
    if (!T.structure_map.source->same(*base))
        throw std::invalid_argument("points: structure map source mismatch");
    const FdAlgebra& C = *T.carrier;
    std::size_t r = relations.size(), kc = C.dim();

    // Phi(h)_j = h_j^q - sum_i phi(t_ij) h_i, F_q-linear on carrier^r
    std::vector<AlgVec> lin(r, AlgVec(r, C.zero()));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i) lin[j][i] = T.structure_map.apply(relations[i][j]);
    FqMat frob_block(C.field(), r * kc, r * kc);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t a = 0; a < kc; ++a)
            for (std::size_t b = 0; b < kc; ++b)
                frob_block.at(j * kc + a, j * kc + b) = C.frobenius_matrix().at(a, b);
    FqMat phi = frob_block;
    FqMat linflat = flatten_linear(C, lin);
    for (std::size_t i = 0; i < phi.rows(); ++i)
        for (std::size_t j = 0; j < phi.cols(); ++j)
            phi.at(i, j) = C.field()->sub(phi.at(i, j), linflat.at(i, j));

    PointModule out;
    out.carrier = T.carrier;
    out.ambient_rank = r;
    for (auto& kv : kernel_basis(phi)) out.fq_basis.push_back(unflatten(C, kv, r));
    out.dim = out.fq_basis.size();

    if (z_action) {
        // (z.h)_j = sum_i phi(Z_ij) h_i on point tuples; express in basis coords
        std::vector<AlgVec> zl(r, AlgVec(r, C.zero()));
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t i = 0; i < r; ++i) zl[j][i] = T.structure_map.apply((*z_action)[i][j]);
        FqMat zflat = flatten_linear(C, zl);
        FqMat basis_mat(C.field(), r * kc, out.dim);
        for (std::size_t j = 0; j < out.dim; ++j) basis_mat.set_col(j, flatten(C, out.fq_basis[j]));
        FqMat zmat(C.field(), out.dim, out.dim);
        for (std::size_t j = 0; j < out.dim; ++j) {
            auto img = zflat.apply(flatten(C, out.fq_basis[j]));
            auto res = solve(basis_mat, img);
            if (!res.consistent)
                throw std::logic_error("points: z-action does not preserve the point module");
            zmat.set_col(j, res.particular);
        }
        out.z_action = std::move(zmat);
    }

    // sampled closure re-verification: sums of basis points are points
    if (out.dim >= 2) {
        const FdAlgebra& B = C;
        AlgVec s(r, B.zero());
        for (std::size_t i = 0; i < r; ++i)
            s[i] = B.add(out.fq_basis[0][i], out.fq_basis[1][i]);
        for (std::size_t j = 0; j < r; ++j) {
            AlgElem lhs = B.frobenius(s[j]);
            AlgElem rhs = B.zero();
            for (std::size_t i = 0; i < r; ++i)
                rhs = B.add(rhs, B.mul(lin[j][i], s[i]));
            if (lhs != rhs) throw std::logic_error("points: closure check failed");
        }
    }
    return out;
}

} // namespace

PointModule points(const FiniteShtuka& sh, const TestAlgebra& T) {
    return points_impl(sh.algebra, sh.matrix, nullptr, T);
}

PointModule points(const TruncatedShtuka& sh, const TestAlgebra& T) {
    return points_impl(sh.base.algebra, sh.base.matrix, &sh.z_action, T);
}

PointModule points(const DrinfeldPresentation& pres, const TestAlgebra& T) {
    if (pres.power != pres.base->field()->q())
        throw std::invalid_argument("points: presentation power differs from q");
    return points_impl(pres.base, pres.relations, nullptr, T);
}

AlgVec pullback_point(const std::vector<AlgVec>& f_matrix, const AlgebraHom& structure_map,
                      const AlgVec& point) {
    const FdAlgebra& C = *structure_map.target;
    std::size_t rows = f_matrix.size();
    std::size_t cols = rows == 0 ? 0 : f_matrix[0].size();
    assert(point.size() == rows);
    AlgVec out(cols, C.zero());
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i)
            out[j] = C.add(out[j], C.mul(structure_map.apply(f_matrix[i][j]), point[i]));
    return out;
}

RadicialReport radicial_check(const FiniteShtuka& sh, std::size_t max_degree) {
    RadicialReport rep;
    rep.radicial = nilpotence_checks(sh).is_nilpotent;
    rep.points_trivial = true;
    std::vector<std::size_t> degrees;
    for (std::size_t d = 1; d <= max_degree; ++d) degrees.push_back(d);
    for (auto& T : catalog_fields(sh.algebra, degrees)) {
        if (points(sh, T).dim != 0) { rep.points_trivial = false; break; }
    }
    // nilpotent implies trivial points over every field; the converse holds
    // at desk scale because the tested degrees exhaust the Frobenius orbits
    rep.consistent = (rep.radicial == rep.points_trivial);
    return rep;
}

std::vector<TestAlgebra> catalog(const AlgebraPtr& base) {
    std::vector<TestAlgebra> out;
    out.push_back({"self", base, AlgebraHom::identity(base)});
    auto eps = extend_by_eps(base, 2);
    out.push_back({"self[eps]/(eps^2)", eps.ext, eps.inclusion});
    auto rd = residue_data(base);
    auto ext = extend_field(rd.residue, 2);
    // base -> residue -> quadratic extension
    FqMat comp = ext.inclusion.matrix.mul(rd.quotient.matrix);
    out.push_back({"residue-ext-2", ext.ext, AlgebraHom{base, ext.ext, comp}});
    return out;
}

std::vector<TestAlgebra> catalog_fields(const AlgebraPtr& base,
                                        const std::vector<std::size_t>& degrees) {
    std::vector<TestAlgebra> out;
    auto rd = residue_data(base);
    for (auto d : degrees) {
        if (d == 1) {
            out.push_back({"residue", rd.residue, rd.quotient});
            continue;
        }
        auto ext = extend_field(rd.residue, d);
        FqMat comp = ext.inclusion.matrix.mul(rd.quotient.matrix);
        out.push_back({"residue-ext-" + std::to_string(d), ext.ext,
                       AlgebraHom{base, ext.ext, comp}});
    }
    return out;
}

} // namespace shtuka
