#include "normalfan/exactmath.hpp"

#include "normalfan/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

namespace normalfan {

namespace {

bool valid_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+'))
        s.remove_prefix(1);
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : s.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den) || den.front() == '-' || den.front() == '+')
        throw ParseError("not a rational: '" + std::string(text) + "'");
    std::string n(num.front() == '+' ? num.substr(1) : num);
    mpz_class p(n, 10), q(std::string(den), 10);
    if (q == 0)
        throw ParseError("zero denominator: '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const RVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    assert(a.size() == b.size());
    Rational s = 0;
    Rational t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0 || sgn(b[i]) == 0)
            continue;
        mpq_mul(t.get_mpq_t(), a[i].get_mpq_t(), b[i].get_mpq_t());
        s += t;
    }
    return s;
}

Rational norm2(std::span<const Rational> v) { return dot(v, v); }

RVector add(const RVector& a, const RVector& b) {
    assert(a.size() == b.size());
    RVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

RVector sub(const RVector& a, const RVector& b) {
    assert(a.size() == b.size());
    RVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

RVector scale(const RVector& a, const Rational& s) {
    RVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] * s;
    return r;
}

void axpy(RVector& a, const Rational& s, const RVector& b) {
    assert(a.size() == b.size());
    if (sgn(s) == 0)
        return;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(b[i]) != 0)
            a[i] += s * b[i];
}

RVector zeros(std::size_t n) { return RVector(n, Rational(0)); }

RVector unit_vector(std::size_t n, std::size_t i) {
    RVector e = zeros(n);
    e[i] = 1;
    return e;
}

bool is_zero(std::span<const Rational> v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

RVector primitive_positive_multiple(const RVector& v) {
    if (is_zero(v))
        return v;
    mpz_class den = 1, num = 0;
    for (const auto& q : v) {
        if (sgn(q) == 0)
            continue;
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    }
    std::vector<mpz_class> ints;
    ints.reserve(v.size());
    for (const auto& q : v) {
        mpz_class z = q.get_num() * (den / q.get_den());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), z.get_mpz_t());
        ints.push_back(std::move(z));
    }
    RVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = Rational(ints[i] / num);
    return out;
}

RVector canonical_direction(const RVector& v) {
    RVector out = primitive_positive_multiple(v);
    auto lead = std::find_if(out.begin(), out.end(), [](const Rational& q) { return sgn(q) != 0; });
    if (lead != out.end() && sgn(*lead) < 0)
        for (auto& q : out)
            q = -q;
    return out;
}

// ---------------------------------------------------------------------------
// RMatrix

RMatrix::RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

RMatrix RMatrix::from_rows(const std::vector<RVector>& rows, std::size_t cols) {
    RMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw DimensionMismatch("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                    " entries, expected " + std::to_string(cols));
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

RMatrix RMatrix::identity(std::size_t n) {
    RMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

RVector RMatrix::row_vector(std::size_t r) const {
    auto s = row(r);
    return RVector(s.begin(), s.end());
}

std::vector<RVector> RMatrix::row_vectors() const {
    std::vector<RVector> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        out.push_back(row_vector(r));
    return out;
}

RVector RMatrix::apply(std::span<const Rational> x) const {
    assert(x.size() == cols_);
    RVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        y[r] = dot(row(r), x);
    return y;
}

RVector RMatrix::apply_transpose(std::span<const Rational> y) const {
    assert(y.size() == rows_);
    RVector x = zeros(cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        if (sgn(y[r]) == 0)
            continue;
        for (std::size_t c = 0; c < cols_; ++c)
            if (sgn((*this)(r, c)) != 0)
                x[c] += y[r] * (*this)(r, c);
    }
    return x;
}

RMatrix RMatrix::transpose() const {
    RMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

RMatrix RMatrix::multiply(const RMatrix& other) const {
    assert(cols_ == other.rows_);
    RMatrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(r, k);
            if (sgn(a) == 0)
                continue;
            for (std::size_t c = 0; c < other.cols_; ++c)
                if (sgn(other(k, c)) != 0)
                    out(r, c) += a * other(k, c);
        }
    return out;
}

RMatrix RMatrix::select_rows(std::span<const std::size_t> which) const {
    RMatrix out(which.size(), cols_);
    for (std::size_t i = 0; i < which.size(); ++i) {
        auto src = row(which[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Elimination

Echelon row_reduce(RMatrix m) {
    Echelon e;
    std::size_t pivot_row = 0;
    Rational factor;
    for (std::size_t c = 0; c < m.cols() && pivot_row < m.rows(); ++c) {
        std::size_t r = pivot_row;
        while (r < m.rows() && sgn(m(r, c)) == 0)
            ++r;
        if (r == m.rows())
            continue;
        if (r != pivot_row)
            for (std::size_t k = 0; k < m.cols(); ++k)
                swap(m(r, k), m(pivot_row, k));
        Rational inv = 1 / m(pivot_row, c);
        for (std::size_t k = c; k < m.cols(); ++k)
            if (sgn(m(pivot_row, k)) != 0)
                m(pivot_row, k) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == pivot_row || sgn(m(i, c)) == 0)
                continue;
            factor = m(i, c);
            for (std::size_t k = c; k < m.cols(); ++k)
                if (sgn(m(pivot_row, k)) != 0)
                    m(i, k) -= factor * m(pivot_row, k);
        }
        e.pivot_cols.push_back(c);
        ++pivot_row;
    }
    e.reduced = std::move(m);
    return e;
}

std::size_t rank(const RMatrix& m) { return row_reduce(m).pivot_cols.size(); }

SubspaceBasis kernel_basis(const RMatrix& m) {
    Echelon e = row_reduce(m);
    SubspaceBasis basis{m.cols(), {}};
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivot_cols)
        is_pivot[c] = true;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        RVector v = zeros(m.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < e.pivot_cols.size(); ++i)
            v[e.pivot_cols[i]] = -e.reduced(i, free);
        basis.vectors.push_back(canonical_direction(v));
    }
    return basis;
}

SubspaceBasis span_basis(const std::vector<RVector>& vectors, std::size_t ambient_dim) {
    SubspaceBasis basis{ambient_dim, {}};
    if (vectors.empty())
        return basis;
    Echelon e = row_reduce(RMatrix::from_rows(vectors, ambient_dim));
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i)
        basis.vectors.push_back(canonical_direction(e.reduced.row_vector(i)));
    return basis;
}

SubspaceBasis orth_complement(const SubspaceBasis& b) {
    if (b.vectors.empty()) {
        SubspaceBasis full{b.ambient_dim, {}};
        for (std::size_t i = 0; i < b.ambient_dim; ++i)
            full.vectors.push_back(unit_vector(b.ambient_dim, i));
        return full;
    }
    return kernel_basis(b.as_rows());
}

bool in_span(const SubspaceBasis& b, std::span<const Rational> v) {
    if (is_zero(v))
        return true;
    std::vector<RVector> rows = b.vectors;
    rows.emplace_back(v.begin(), v.end());
    return rank(RMatrix::from_rows(rows, b.ambient_dim)) == b.dim();
}

bool same_span(const SubspaceBasis& a, const SubspaceBasis& b) {
    if (a.ambient_dim != b.ambient_dim || a.dim() != b.dim())
        return false;
    return std::all_of(b.vectors.begin(), b.vectors.end(), [&](const RVector& v) { return in_span(a, v); });
}

std::vector<std::size_t> independent_rows(const RMatrix& m) {
    // Row-reduce the transpose: pivot columns there are independent rows here.
    return row_reduce(m.transpose()).pivot_cols;
}

std::optional<RVector> solve_affine(const RMatrix& eq, const RVector& c) {
    if (eq.rows() != c.size())
        throw DimensionMismatch("solve_affine: matrix has " + std::to_string(eq.rows()) + " rows, rhs has " +
                                std::to_string(c.size()));
    RMatrix aug(eq.rows(), eq.cols() + 1);
    for (std::size_t r = 0; r < eq.rows(); ++r) {
        for (std::size_t k = 0; k < eq.cols(); ++k)
            aug(r, k) = eq(r, k);
        aug(r, eq.cols()) = c[r];
    }
    Echelon e = row_reduce(std::move(aug));
    if (!e.pivot_cols.empty() && e.pivot_cols.back() == eq.cols())
        return std::nullopt;
    RVector x = zeros(eq.cols());
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i)
        x[e.pivot_cols[i]] = e.reduced(i, eq.cols());
    return x;
}

std::optional<RMatrix> inverse(const RMatrix& m) {
    assert(m.rows() == m.cols());
    const std::size_t n = m.rows();
    RMatrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k)
            aug(r, k) = m(r, k);
        aug(r, n + r) = 1;
    }
    Echelon e = row_reduce(std::move(aug));
    if (e.pivot_cols.size() < n || (n > 0 && e.pivot_cols[n - 1] != n - 1))
        return std::nullopt;
    RMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k)
            inv(r, k) = e.reduced(r, n + k);
    return inv;
}

// ---------------------------------------------------------------------------
// Projection

AffineProjector::AffineProjector(const RMatrix& eq, const RVector& c) : dim_(eq.cols()) {
    if (!solve_affine(eq, c))
        throw InconsistentSystem("affine system has no solution");
    std::vector<std::size_t> keep = independent_rows(eq);
    rows_ = eq.select_rows(keep);
    for (auto i : keep)
        rhs_.push_back(c[i]);
    RMatrix gram = rows_.multiply(rows_.transpose());
    auto gram_inv = inverse(gram);
    assert(gram_inv);
    correction_ = rows_.transpose().multiply(*gram_inv);
}

RVector AffineProjector::project(std::span<const Rational> x) const {
    RVector out(x.begin(), x.end());
    if (rows_.rows() == 0)
        return out;
    RVector residual = rows_.apply(x);
    for (std::size_t i = 0; i < residual.size(); ++i)
        residual[i] -= rhs_[i];
    RVector shift = correction_.apply(residual);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] -= shift[i];
    return out;
}

RVector project_affine(const RVector& x, const RMatrix& eq, const RVector& c) {
    if (x.size() != eq.cols())
        throw DimensionMismatch("project_affine: point has " + std::to_string(x.size()) + " coordinates, expected " +
                                std::to_string(eq.cols()));
    return AffineProjector(eq, c).project(x);
}

} // namespace normalfan
