#include "shtuka/linalg.hpp"

#include <algorithm>
#include <cassert>

namespace shtuka {

FqMat FqMat::identity(FieldPtr f, std::size_t n) {
    FqMat m(std::move(f), n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FqMat FqMat::mul(const FqMat& o) const {
    assert(cols_ == o.rows_);
    const FqField& F = *field_;
    FqMat r(field_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            fq_t aik = at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) = F.add(r.at(i, j), F.mul(aik, o.at(k, j)));
        }
    return r;
}

FqMat FqMat::add(const FqMat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    FqMat r(field_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_->add(a_[i], o.a_[i]);
    return r;
}

FqMat FqMat::scale(fq_t c) const {
    FqMat r(field_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_->mul(a_[i], c);
    return r;
}

FqMat FqMat::transpose() const {
    FqMat r(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

FqMat FqMat::apply_frobenius() const {
    FqMat r(field_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_->frob(a_[i]);
    return r;
}

std::vector<fq_t> FqMat::apply(const std::vector<fq_t>& v) const {
    assert(v.size() == cols_);
    const FqField& F = *field_;
    std::vector<fq_t> r(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != 0) r[i] = F.add(r[i], F.mul(at(i, j), v[j]));
    return r;
}

bool FqMat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](fq_t x) { return x == 0; });
}

std::vector<fq_t> FqMat::row(std::size_t i) const {
    return std::vector<fq_t>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

std::vector<fq_t> FqMat::col(std::size_t j) const {
    std::vector<fq_t> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
}

void FqMat::set_col(std::size_t j, const std::vector<fq_t>& v) {
    assert(v.size() == rows_);
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
}

namespace {

// Reduced row echelon form of [A | b...]; returns pivot column per row.
std::vector<std::size_t> rref(FqMat& m) {
    const FqField& F = *m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m.at(sel, c) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(r, j));
        fq_t piv = F.inv(m.at(r, c));
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(r, j) = F.mul(m.at(r, j), piv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            fq_t f = m.at(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

SolveResult solve(const FqMat& A, const std::vector<fq_t>& b) {
    assert(b.size() == A.rows());
    const FqField& F = *A.field();
    FqMat aug(A.field(), A.rows(), A.cols() + 1);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols()) = b[i];
    }
    auto pivots = rref(aug);
    SolveResult res;
    if (!pivots.empty() && pivots.back() == A.cols()) return res; // inconsistent
    res.consistent = true;
    res.particular.assign(A.cols(), 0);
    for (std::size_t r = 0; r < pivots.size(); ++r)
        res.particular[pivots[r]] = aug.at(r, A.cols());

    std::vector<bool> is_pivot(A.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t free_c = 0; free_c < A.cols(); ++free_c) {
        if (is_pivot[free_c]) continue;
        std::vector<fq_t> v(A.cols(), 0);
        v[free_c] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = F.neg(aug.at(r, free_c));
        res.kernel.push_back(std::move(v));
    }
    return res;
}

std::vector<std::vector<fq_t>> kernel_basis(const FqMat& A) {
    return solve(A, std::vector<fq_t>(A.rows(), 0)).kernel;
}

std::size_t rank(const FqMat& A) {
    FqMat m = A;
    return rref(m).size();
}

std::optional<FqMat> inverse(const FqMat& A) {
    if (A.rows() != A.cols()) return std::nullopt;
    std::size_t n = A.rows();
    FqMat aug(A.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, n + i) = 1;
    }
    auto pivots = rref(aug);
    if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
    FqMat inv(A.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

bool RowSpace::insert(std::vector<fq_t> v) {
    const FqField& F = *field_;
    v = reduce(std::move(v));
    std::size_t p = 0;
    while (p < width_ && v[p] == 0) ++p;
    if (p == width_) return false;
    fq_t piv = F.inv(v[p]);
    for (auto& x : v) x = F.mul(x, piv);
    // back-substitute into existing rows
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        fq_t f = rows_[r][p];
        if (f == 0) continue;
        for (std::size_t j = 0; j < width_; ++j)
            rows_[r][j] = F.sub(rows_[r][j], F.mul(f, v[j]));
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p);
    std::size_t idx = std::size_t(pos - pivots_.begin());
    pivots_.insert(pos, p);
    rows_.insert(rows_.begin() + idx, std::move(v));
    return true;
}

void RowSpace::insert_rows(const FqMat& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) insert(m.row(i));
}

std::vector<fq_t> RowSpace::reduce(std::vector<fq_t> v) const {
    const FqField& F = *field_;
    assert(v.size() == width_);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        fq_t f = v[pivots_[r]];
        if (f == 0) continue;
        for (std::size_t j = 0; j < width_; ++j)
            v[j] = F.sub(v[j], F.mul(f, rows_[r][j]));
    }
    return v;
}

bool RowSpace::contains(const std::vector<fq_t>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](fq_t x) { return x == 0; });
}

std::vector<std::size_t> RowSpace::complement_positions() const {
    std::vector<std::size_t> out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < width_; ++c) {
        if (r < pivots_.size() && pivots_[r] == c) { ++r; continue; }
        out.push_back(c);
    }
    return out;
}

std::vector<fq_t> RowSpace::quotient_coords(const std::vector<fq_t>& v) const {
    auto red = reduce(v);
    std::vector<fq_t> out;
    for (auto c : complement_positions()) out.push_back(red[c]);
    return out;
}

bool RowSpace::same_space(const RowSpace& o) const {
    if (dim() != o.dim()) return false;
    for (const auto& r : rows_)
        if (!o.contains(r)) return false;
    return true;
}

} // namespace shtuka
