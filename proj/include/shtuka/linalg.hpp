#pragma once

#include "shtuka/fq.hpp"

#include <optional>
#include <vector>

namespace shtuka {

// Dense matrix over F_q. Every higher module flattens its linear algebra
// to Gaussian elimination on these.
class FqMat {
public:
    FqMat() : field_(nullptr), rows_(0), cols_(0) {}
    FqMat(FieldPtr f, std::size_t rows, std::size_t cols)
        : field_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static FqMat identity(FieldPtr f, std::size_t n);

    const FieldPtr& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    fq_t& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    fq_t at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    FqMat mul(const FqMat& o) const;
    FqMat add(const FqMat& o) const;
    FqMat scale(fq_t c) const;
    FqMat transpose() const;
    FqMat apply_frobenius() const; // entrywise p-power Frobenius
    std::vector<fq_t> apply(const std::vector<fq_t>& v) const;

    bool is_zero() const;
    bool operator==(const FqMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    std::vector<fq_t> row(std::size_t i) const;
    std::vector<fq_t> col(std::size_t j) const;
    void set_col(std::size_t j, const std::vector<fq_t>& v);

private:
    FieldPtr field_;
    std::size_t rows_, cols_;
    std::vector<fq_t> a_;
};

struct SolveResult {
    bool consistent = false;
    std::vector<fq_t> particular;            // one solution, empty if inconsistent
    std::vector<std::vector<fq_t>> kernel;   // F_q-basis of the null space
};

// Solve A x = b exactly over F_q.
SolveResult solve(const FqMat& A, const std::vector<fq_t>& b);
std::vector<std::vector<fq_t>> kernel_basis(const FqMat& A);
std::size_t rank(const FqMat& A);
std::optional<FqMat> inverse(const FqMat& A);

// Row space in reduced echelon form, supporting membership tests,
// canonical reduction and quotient-space coordinates.
class RowSpace {
public:
    explicit RowSpace(FieldPtr f, std::size_t width)
        : field_(std::move(f)), width_(width) {}

    // returns true if v was independent (and got inserted)
    bool insert(std::vector<fq_t> v);
    void insert_rows(const FqMat& m); // rows of m
    bool contains(const std::vector<fq_t>& v) const;
    std::vector<fq_t> reduce(std::vector<fq_t> v) const;
    std::size_t dim() const { return rows_.size(); }
    std::size_t width() const { return width_; }

    // Coordinates of (v mod this subspace) in the complement basis made of
    // the non-pivot unit vectors; used for cokernel presentations.
    std::vector<std::size_t> complement_positions() const;
    std::vector<fq_t> quotient_coords(const std::vector<fq_t>& v) const;

    const std::vector<std::vector<fq_t>>& basis() const { return rows_; }
    bool same_space(const RowSpace& o) const;

private:
    FieldPtr field_;
    std::size_t width_;
    std::vector<std::vector<fq_t>> rows_; // reduced echelon, sorted by pivot
    std::vector<std::size_t> pivots_;
};

} // namespace shtuka
