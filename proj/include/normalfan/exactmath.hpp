#pragma once

// Exact rational scalars, vectors and matrices, plus the handful of
// linear-algebra kernels (row reduction, kernels, complements, affine
// projection) that the polyhedral code is built on. Nothing here rounds.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace normalfan {

/// Arbitrary-precision rational; gmpxx keeps it canonical after every operation.
using Rational = mpq_class;
using RVector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q". Throws ParseError on anything else or q == 0.
Rational parse_rational(std::string_view text);
/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const RVector& v);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
Rational norm2(std::span<const Rational> v);
RVector add(const RVector& a, const RVector& b);
RVector sub(const RVector& a, const RVector& b);
RVector scale(const RVector& a, const Rational& s);
/// a += s * b
void axpy(RVector& a, const Rational& s, const RVector& b);
RVector zeros(std::size_t n);
RVector unit_vector(std::size_t n, std::size_t i);
bool is_zero(std::span<const Rational> v);

/// Positive multiple of v with coprime integer entries whose first nonzero
/// entry is positive. The zero vector is returned unchanged.
RVector canonical_direction(const RVector& v);
/// Positive multiple of v with coprime integer entries (sign preserved).
RVector primitive_positive_multiple(const RVector& v);

class RMatrix {
public:
    RMatrix() = default;
    RMatrix(std::size_t rows, std::size_t cols);

    /// Stacks the rows; every row must have `cols` entries.
    static RMatrix from_rows(const std::vector<RVector>& rows, std::size_t cols);
    static RMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    RVector row_vector(std::size_t r) const;
    std::vector<RVector> row_vectors() const;

    RVector apply(std::span<const Rational> x) const;            // M x
    RVector apply_transpose(std::span<const Rational> y) const;  // M^T y
    RMatrix transpose() const;
    RMatrix multiply(const RMatrix& other) const;
    RMatrix select_rows(std::span<const std::size_t> which) const;

    friend bool operator==(const RMatrix&, const RMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// A list of linearly independent vectors of a common ambient dimension.
struct SubspaceBasis {
    std::size_t ambient_dim = 0;
    std::vector<RVector> vectors;

    std::size_t dim() const { return vectors.size(); }
    RMatrix as_rows() const { return RMatrix::from_rows(vectors, ambient_dim); }
};

/// Reduced row echelon form. Pivots are chosen as the first nonzero entry
/// scanning columns left to right and rows top to bottom, so results are
/// deterministic.
struct Echelon {
    RMatrix reduced;
    std::vector<std::size_t> pivot_cols;
};

Echelon row_reduce(RMatrix m);
std::size_t rank(const RMatrix& m);

/// Basis of {x : Mx = 0}, one vector per free column, in canonical form.
SubspaceBasis kernel_basis(const RMatrix& m);
/// Canonical basis of the span of the given vectors (rows of the RREF).
SubspaceBasis span_basis(const std::vector<RVector>& vectors, std::size_t ambient_dim);
SubspaceBasis orth_complement(const SubspaceBasis& b);
bool in_span(const SubspaceBasis& b, std::span<const Rational> v);
bool same_span(const SubspaceBasis& a, const SubspaceBasis& b);
/// Indices of a maximal linearly independent subset of rows, chosen greedily in order.
std::vector<std::size_t> independent_rows(const RMatrix& m);

/// Some x with eq * x = c (free variables set to zero), or nullopt if inconsistent.
std::optional<RVector> solve_affine(const RMatrix& eq, const RVector& c);
std::optional<RMatrix> inverse(const RMatrix& m);

/// Euclidean projection onto the flat {y : eq * y = c}, precomputed once
/// and applied many times. Throws InconsistentSystem for an empty flat.
class AffineProjector {
public:
    AffineProjector() = default;
    AffineProjector(const RMatrix& eq, const RVector& c);

    std::size_t ambient_dim() const { return dim_; }
    RVector project(std::span<const Rational> x) const;

private:
    std::size_t dim_ = 0;
    RMatrix rows_;       // independent rows of eq
    RVector rhs_;
    RMatrix correction_; // rows^T (rows rows^T)^{-1}
};

/// Nearest point of {y : eq * y = c} to x via the normal equations.
RVector project_affine(const RVector& x, const RMatrix& eq, const RVector& c);

} // namespace normalfan
