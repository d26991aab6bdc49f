#pragma once

#include "shtuka/algebra.hpp"

#include <variant>

namespace shtuka {

// Element of R[z]/(z^N): truncated power series with explicit precision.
// Arithmetic between operands takes the minimum precision.
class ZSeries {
public:
    ZSeries() = default;
    ZSeries(AlgebraPtr alg, std::size_t precision);
    ZSeries(AlgebraPtr alg, std::vector<AlgElem> coeffs);

    static ZSeries constant(AlgebraPtr alg, AlgElem c, std::size_t precision);
    static ZSeries z(AlgebraPtr alg, std::size_t precision);
    // (z - zeta)^n at the given precision
    static ZSeries z_minus_zeta_pow(AlgebraPtr alg, std::size_t n, std::size_t precision);

    const AlgebraPtr& algebra() const { return alg_; }
    std::size_t precision() const { return c_.size(); }
    const AlgElem& coeff(std::size_t i) const { return c_[i]; }
    AlgElem& coeff(std::size_t i) { return c_[i]; }
    const std::vector<AlgElem>& coeffs() const { return c_; }

    ZSeries truncate(std::size_t n) const;
    ZSeries add(const ZSeries& o) const;
    ZSeries sub(const ZSeries& o) const;
    ZSeries neg() const;
    ZSeries mul(const ZSeries& o) const;
    ZSeries scale(const AlgElem& c) const;
    // multiplication by a polynomial keeps the precision
    ZSeries mul_poly(const std::vector<AlgElem>& poly) const;
    ZSeries frobenius() const; // coefficientwise x -> x^q, z fixed
    ZSeries shift(std::size_t n) const; // multiply by z^n

    bool is_zero() const;
    bool equal(const ZSeries& o) const; // compared at the common precision
    AlgElem evaluate_at_zeta() const;   // z -> zeta (finite sum, zeta nilpotent)
    bool is_unit() const;               // constant term a unit in R
    std::optional<ZSeries> invert() const;

    std::string to_string() const;

private:
    AlgebraPtr alg_;
    std::vector<AlgElem> c_;
};

struct NotDivisible {
    std::size_t stage;   // number of successful division steps before failure
    AlgElem witness;     // nonzero residual constant = evaluation at zeta
    ZSeries partial;     // quotient after `stage` steps
};
struct InsufficientPrecision {
    std::string what;
};

using DivisionResult = std::variant<ZSeries, NotDivisible, InsufficientPrecision>;

// Divide y by (z - zeta)^times, consuming times * nu coefficients of
// precision (nu = nilpotency index of zeta). Verifies by back-multiplication.
DivisionResult divide_by_z_minus_zeta(const ZSeries& y, std::size_t times);

// Matrix over R[z]/(z^N) with uniform algebra and precision.
class ZMatrix {
public:
    ZMatrix() : rows_(0), cols_(0) {}
    ZMatrix(AlgebraPtr alg, std::size_t rows, std::size_t cols, std::size_t precision);

    const AlgebraPtr& algebra() const { return alg_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t precision() const { return prec_; }

    const ZSeries& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, ZSeries s);

    static ZMatrix identity(AlgebraPtr alg, std::size_t n, std::size_t precision);
    ZMatrix mul(const ZMatrix& o) const;
    ZMatrix add(const ZMatrix& o) const;
    ZMatrix sub(const ZMatrix& o) const;
    ZMatrix scale(const ZSeries& s) const;
    ZMatrix frobenius() const;            // entrywise coefficient Frobenius
    ZMatrix transpose() const;
    ZMatrix truncate(std::size_t n) const;
    ZMatrix constant_term() const;        // still a ZMatrix of precision 1
    FqMat constant_matrix_flat() const;   // not flattened; see shtuka.cpp helpers
    std::vector<AlgVec> constant_rows() const; // matrix of z^0 coefficients over R

    bool is_zero() const;
    bool equal(const ZMatrix& o) const;

    ZSeries det() const;                  // exact, cofactor expansion
    ZMatrix adjugate() const;
    ZMatrix minor_matrix(std::size_t di, std::size_t dj) const;

private:
    AlgebraPtr alg_;
    std::size_t rows_, cols_, prec_;
    std::vector<ZSeries> a_;
};

} // namespace shtuka
