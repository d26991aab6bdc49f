#include "shtuka/zseries.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace shtuka {

ZSeries::ZSeries(AlgebraPtr alg, std::size_t precision)
    : alg_(std::move(alg)), c_(precision, alg_->zero()) {
    assert(precision >= 1);
}

ZSeries::ZSeries(AlgebraPtr alg, std::vector<AlgElem> coeffs)
    : alg_(std::move(alg)), c_(std::move(coeffs)) {
    assert(!c_.empty());
}

ZSeries ZSeries::constant(AlgebraPtr alg, AlgElem c, std::size_t precision) {
    ZSeries s(alg, precision);
    s.c_[0] = std::move(c);
    return s;
}

ZSeries ZSeries::z(AlgebraPtr alg, std::size_t precision) {
    assert(precision >= 2);
    ZSeries s(alg, precision);
    s.c_[1] = alg->one();
    return s;
}

ZSeries ZSeries::z_minus_zeta_pow(AlgebraPtr alg, std::size_t n, std::size_t precision) {
    ZSeries r = constant(alg, alg->one(), precision);
    if (n == 0) return r;
    std::vector<AlgElem> lin{alg->neg(alg->zeta()), alg->one()};
    for (std::size_t i = 0; i < n; ++i) r = r.mul_poly(lin);
    return r;
}

ZSeries ZSeries::truncate(std::size_t n) const {
    assert(n >= 1 && n <= c_.size());
    return ZSeries(alg_, std::vector<AlgElem>(c_.begin(), c_.begin() + n));
}

ZSeries ZSeries::add(const ZSeries& o) const {
    if (!alg_->same(*o.alg_)) throw std::invalid_argument("ZSeries: algebra mismatch");
    std::size_t n = std::min(precision(), o.precision());
    ZSeries r(alg_, n);
    for (std::size_t i = 0; i < n; ++i) r.c_[i] = alg_->add(c_[i], o.c_[i]);
    return r;
}

ZSeries ZSeries::sub(const ZSeries& o) const { return add(o.neg()); }

ZSeries ZSeries::neg() const {
    ZSeries r(alg_, precision());
    for (std::size_t i = 0; i < precision(); ++i) r.c_[i] = alg_->neg(c_[i]);
    return r;
}

ZSeries ZSeries::mul(const ZSeries& o) const {
    if (!alg_->same(*o.alg_)) throw std::invalid_argument("ZSeries: algebra mismatch");
    std::size_t n = std::min(precision(), o.precision());
    ZSeries r(alg_, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n && j < o.precision(); ++j)
            r.c_[i + j] = alg_->add(r.c_[i + j], alg_->mul(c_[i], o.c_[j]));
    return r;
}

ZSeries ZSeries::scale(const AlgElem& c) const {
    ZSeries r(alg_, precision());
    for (std::size_t i = 0; i < precision(); ++i) r.c_[i] = alg_->mul(c, c_[i]);
    return r;
}

ZSeries ZSeries::mul_poly(const std::vector<AlgElem>& poly) const {
    ZSeries r(alg_, precision());
    for (std::size_t j = 0; j < poly.size(); ++j) {
        if (alg_->is_zero(poly[j])) continue;
        for (std::size_t i = 0; i + j < precision(); ++i)
            r.c_[i + j] = alg_->add(r.c_[i + j], alg_->mul(c_[i], poly[j]));
    }
    return r;
}

ZSeries ZSeries::frobenius() const {
    ZSeries r(alg_, precision());
    for (std::size_t i = 0; i < precision(); ++i) r.c_[i] = alg_->frobenius(c_[i]);
    return r;
}

ZSeries ZSeries::shift(std::size_t n) const {
    ZSeries r(alg_, precision());
    for (std::size_t i = 0; i + n < precision(); ++i) r.c_[i + n] = c_[i];
    return r;
}

bool ZSeries::is_zero() const {
    return std::all_of(c_.begin(), c_.end(),
                       [&](const AlgElem& x) { return alg_->is_zero(x); });
}

bool ZSeries::equal(const ZSeries& o) const {
    std::size_t n = std::min(precision(), o.precision());
    for (std::size_t i = 0; i < n; ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

AlgElem ZSeries::evaluate_at_zeta() const {
    AlgElem acc = alg_->zero();
    AlgElem zp = alg_->one();
    std::size_t nu = alg_->zeta_nilindex();
    for (std::size_t i = 0; i < precision() && i < nu; ++i) {
        acc = alg_->add(acc, alg_->mul(zp, c_[i]));
        zp = alg_->mul(zp, alg_->zeta());
    }
    return acc;
}

bool ZSeries::is_unit() const { return alg_->is_unit(c_[0]); }

std::optional<ZSeries> ZSeries::invert() const {
    auto c0 = alg_->invert(c_[0]);
    if (!c0) return std::nullopt;
    ZSeries r(alg_, precision());
    r.c_[0] = *c0;
    for (std::size_t n = 1; n < precision(); ++n) {
        AlgElem acc = alg_->zero();
        for (std::size_t i = 1; i <= n; ++i)
            acc = alg_->add(acc, alg_->mul(c_[i], r.c_[n - i]));
        r.c_[n] = alg_->neg(alg_->mul(*c0, acc));
    }
    return r;
}

std::string ZSeries::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < precision(); ++i) {
        if (alg_->is_zero(c_[i])) continue;
        if (!s.empty()) s += " + ";
        std::string cs = alg_->to_string(c_[i]);
        bool is_one = (c_[i] == alg_->one());
        if (i == 0) s += cs;
        else {
            if (!is_one) s += "(" + cs + ")*";
            s += i == 1 ? "z" : "z^" + std::to_string(i);
        }
    }
    if (s.empty()) s = "0";
    return s + " + O(z^" + std::to_string(precision()) + ")";
}

DivisionResult divide_by_z_minus_zeta(const ZSeries& y, std::size_t times) {
    const AlgebraPtr& A = y.algebra();
    std::size_t nu = A->zeta_nilindex();
    if (y.precision() < times * nu + 1)
        return InsufficientPrecision{"need precision >= 1 + d*nu, have " +
                                     std::to_string(y.precision())};
    ZSeries cur = y;
    for (std::size_t step = 0; step < times; ++step) {
        // divisibility by (z - zeta) is evaluation at zeta being zero
        AlgElem res = cur.evaluate_at_zeta();
        if (!A->is_zero(res)) return NotDivisible{step, res, cur};
        std::size_t out_prec = cur.precision() - nu;
        ZSeries x(A, out_prec);
        for (std::size_t i = 0; i < out_prec; ++i) {
            AlgElem acc = A->zero();
            AlgElem zp = A->one();
            for (std::size_t j = 0; j < nu && i + 1 + j < cur.precision(); ++j) {
                acc = A->add(acc, A->mul(zp, cur.coeff(i + 1 + j)));
                zp = A->mul(zp, A->zeta());
            }
            x.coeff(i) = acc;
        }
        // verify by back-multiplication at the output precision
        std::vector<AlgElem> lin{A->neg(A->zeta()), A->one()};
        ZSeries back = x.mul_poly(lin);
        for (std::size_t i = 0; i < out_prec; ++i)
            if (back.coeff(i) != cur.coeff(i))
                return NotDivisible{step, A->sub(cur.coeff(i), back.coeff(i)), cur};
        cur = x;
    }
    return cur;
}

ZMatrix::ZMatrix(AlgebraPtr alg, std::size_t rows, std::size_t cols, std::size_t precision)
    : alg_(std::move(alg)), rows_(rows), cols_(cols), prec_(precision) {
    a_.assign(rows_ * cols_, ZSeries(alg_, prec_));
}

void ZMatrix::set(std::size_t i, std::size_t j, ZSeries s) {
    if (!s.algebra()->same(*alg_)) throw std::invalid_argument("ZMatrix: algebra mismatch");
    assert(s.precision() >= prec_);
    a_[i * cols_ + j] = s.precision() == prec_ ? std::move(s) : s.truncate(prec_);
}

ZMatrix ZMatrix::identity(AlgebraPtr alg, std::size_t n, std::size_t precision) {
    ZMatrix m(alg, n, n, precision);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, ZSeries::constant(alg, alg->one(), precision));
    return m;
}

ZMatrix ZMatrix::mul(const ZMatrix& o) const {
    assert(cols_ == o.rows_);
    std::size_t p = std::min(prec_, o.prec_);
    ZMatrix r(alg_, rows_, o.cols_, p);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < o.cols_; ++j) {
            ZSeries acc(alg_, p);
            for (std::size_t k = 0; k < cols_; ++k)
                acc = acc.add(at(i, k).mul(o.at(k, j)));
            r.set(i, j, std::move(acc));
        }
    return r;
}

ZMatrix ZMatrix::add(const ZMatrix& o) const {
    std::size_t p = std::min(prec_, o.prec_);
    ZMatrix r(alg_, rows_, cols_, p);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j).add(o.at(i, j)));
    return r;
}

ZMatrix ZMatrix::sub(const ZMatrix& o) const {
    std::size_t p = std::min(prec_, o.prec_);
    ZMatrix r(alg_, rows_, cols_, p);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j).sub(o.at(i, j)));
    return r;
}

ZMatrix ZMatrix::scale(const ZSeries& s) const {
    std::size_t p = std::min(prec_, s.precision());
    ZMatrix r(alg_, rows_, cols_, p);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j).mul(s));
    return r;
}

ZMatrix ZMatrix::frobenius() const {
    ZMatrix r(alg_, rows_, cols_, prec_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j).frobenius());
    return r;
}

ZMatrix ZMatrix::transpose() const {
    ZMatrix r(alg_, cols_, rows_, prec_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
    return r;
}

ZMatrix ZMatrix::truncate(std::size_t n) const {
    assert(n <= prec_);
    ZMatrix r(alg_, rows_, cols_, n);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j).truncate(n));
    return r;
}

ZMatrix ZMatrix::constant_term() const { return truncate(1); }

std::vector<AlgVec> ZMatrix::constant_rows() const {
    std::vector<AlgVec> rows(rows_, AlgVec(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) rows[i][j] = at(i, j).coeff(0);
    return rows;
}

bool ZMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const ZSeries& s) { return s.is_zero(); });
}

bool ZMatrix::equal(const ZMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (!at(i, j).equal(o.at(i, j))) return false;
    return true;
}

ZMatrix ZMatrix::minor_matrix(std::size_t di, std::size_t dj) const {
    ZMatrix r(alg_, rows_ - 1, cols_ - 1, prec_);
    for (std::size_t i = 0, ri = 0; i < rows_; ++i) {
        if (i == di) continue;
        for (std::size_t j = 0, rj = 0; j < cols_; ++j) {
            if (j == dj) continue;
            r.set(ri, rj, at(i, j));
            ++rj;
        }
        ++ri;
    }
    return r;
}

// Cofactor expansion; exact over non-reduced rings where pivoting division
// is ill-defined. r <= 4 throughout the suites.
ZSeries ZMatrix::det() const {
    assert(rows_ == cols_);
    if (rows_ == 0) return ZSeries::constant(alg_, alg_->one(), prec_);
    if (rows_ == 1) return at(0, 0);
    ZSeries acc(alg_, prec_);
    for (std::size_t j = 0; j < cols_; ++j) {
        if (at(0, j).is_zero()) continue;
        ZSeries term = at(0, j).mul(minor_matrix(0, j).det());
        acc = (j % 2 == 0) ? acc.add(term) : acc.sub(term);
    }
    return acc;
}

ZMatrix ZMatrix::adjugate() const {
    assert(rows_ == cols_);
    ZMatrix r(alg_, rows_, cols_, prec_);
    if (rows_ == 1) {
        r.set(0, 0, ZSeries::constant(alg_, alg_->one(), prec_));
        return r;
    }
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            ZSeries c = minor_matrix(i, j).det();
            if ((i + j) % 2 == 1) c = c.neg();
            r.set(j, i, std::move(c));
        }
    return r;
}

} // namespace shtuka
