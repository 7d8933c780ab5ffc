#include "normalfan/polyhedron.hpp"

#include "normalfan/errors.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

namespace normalfan {

namespace {

std::size_t rank_of_rows(const RMatrix& A, const std::vector<std::size_t>& rows) {
    if (rows.empty())
        return 0;
    return rank(A.select_rows(rows));
}

// P's rows with the `tight` rows turned into equalities. Rows listed in
// `tight` are left out of the inequality part so they never show up as
// implicit, which keeps the common-slack LP in analyze() decisive.
LinearSystem tightened(const HPolyhedron& P, const std::vector<std::size_t>& tight,
                       std::vector<std::size_t>& ineq_origin) {
    LinearSystem s(P.ambient_dim());
    ineq_origin.clear();
    std::size_t t = 0;
    for (std::size_t i = 0; i < P.num_rows(); ++i) {
        if (t < tight.size() && tight[t] == i) {
            s.add_equality(P.row(i), P.b()[i]);
            ++t;
        } else {
            s.add_inequality(P.row(i), P.b()[i]);
            ineq_origin.push_back(i);
        }
    }
    return s;
}

// Closure of a tight set: the face it cuts out, or nullopt if that is empty.
std::optional<Face> close_face(const HPolyhedron& P, const std::vector<std::size_t>& tight) {
    std::vector<std::size_t> origin;
    auto a = analyze(tightened(P, tight, origin));
    if (!a)
        return std::nullopt;
    Face f;
    f.active = tight;
    for (auto k : a->implicit)
        f.active.push_back(origin[k]);
    std::sort(f.active.begin(), f.active.end());
    f.dim = P.ambient_dim() - rank_of_rows(P.A(), f.active);
    f.witness = std::move(a->relint_point);
    return f;
}

LinearSystem coefficient_system(const VCone& C, const RVector& v) {
    if (v.size() != C.ambient_dim)
        throw DimensionMismatch("cone test: vector has " + std::to_string(v.size()) + " entries, expected " +
                                std::to_string(C.ambient_dim));
    const std::size_t k = C.generators.size();
    const std::size_t l = C.lineality.dim();
    LinearSystem s(k + l);
    for (std::size_t r = 0; r < C.ambient_dim; ++r) {
        RVector row(k + l);
        for (std::size_t i = 0; i < k; ++i)
            row[i] = C.generators[i][r];
        for (std::size_t j = 0; j < l; ++j)
            row[k + j] = C.lineality.vectors[j][r];
        s.add_equality(std::move(row), v[r]);
    }
    for (std::size_t i = 0; i < k; ++i)
        s.add_inequality(scale(unit_vector(k + l, i), -1), 0);
    return s;
}

} // namespace

bool HPolyhedron::contains(const RVector& x) const {
    if (x.size() != d_)
        throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, expected " +
                                std::to_string(d_));
    for (std::size_t i = 0; i < A_.rows(); ++i)
        if (dot(A_.row(i), x) > b_[i])
            return false;
    return true;
}

HPolyhedron make_polyhedron(const RMatrix& A, const RVector& b) {
    if (A.rows() != b.size())
        throw DimensionMismatch("A has " + std::to_string(A.rows()) + " rows but b has " +
                                std::to_string(b.size()) + " entries");
    HPolyhedron P;
    P.d_ = A.cols();
    std::vector<RVector> rows;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        if (is_zero(A.row(i))) {
            if (sgn(b[i]) < 0)
                throw EmptyPolyhedron();
            continue;
        }
        rows.push_back(A.row_vector(i));
        P.b_.push_back(b[i]);
    }
    P.A_ = RMatrix::from_rows(rows, P.d_);
    P.system_ = LinearSystem(P.d_);
    for (std::size_t i = 0; i < rows.size(); ++i)
        P.system_.add_inequality(rows[i], P.b_[i]);

    auto a = analyze(P.system_);
    if (!a)
        throw EmptyPolyhedron();
    P.implicit_ = a->implicit;
    P.implicit_mask_.assign(rows.size(), false);
    for (auto i : P.implicit_)
        P.implicit_mask_[i] = true;
    P.relint_ = std::move(a->relint_point);
    P.dim_ = P.d_ - rank_of_rows(P.A_, P.implicit_);
    P.lineality_ = kernel_basis(P.A_);
    return P;
}

HPolyhedron make_polyhedron(const RMatrix& A, const RVector& b, const RMatrix& Eq, const RVector& e) {
    if (Eq.rows() != e.size())
        throw DimensionMismatch("equality block has " + std::to_string(Eq.rows()) + " rows but " +
                                std::to_string(e.size()) + " right-hand sides");
    if (Eq.rows() > 0 && Eq.cols() != A.cols())
        throw DimensionMismatch("equality block has " + std::to_string(Eq.cols()) + " columns, expected " +
                                std::to_string(A.cols()));
    std::vector<RVector> rows = A.row_vectors();
    RVector rhs = b;
    for (std::size_t j = 0; j < Eq.rows(); ++j) {
        rows.push_back(Eq.row_vector(j));
        rhs.push_back(e[j]);
        rows.push_back(scale(Eq.row_vector(j), -1));
        rhs.push_back(-e[j]);
    }
    return make_polyhedron(RMatrix::from_rows(rows, A.cols()), rhs);
}

FaceLattice::FaceLattice(std::vector<Face> faces) : faces_(std::move(faces)) {
    std::sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
        if (a.dim != b.dim)
            return a.dim < b.dim;
        return a.active < b.active;
    });
    for (std::size_t i = 0; i < faces_.size(); ++i)
        if (faces_[i].is_whole)
            whole_ = i;
}

std::optional<std::size_t> FaceLattice::find(const std::vector<std::size_t>& active) const {
    for (std::size_t i = 0; i < faces_.size(); ++i)
        if (faces_[i].active == active)
            return i;
    return std::nullopt;
}

bool FaceLattice::is_subface(std::size_t g, std::size_t h) const {
    const auto& ig = faces_[g].active;
    const auto& ih = faces_[h].active;
    return std::includes(ig.begin(), ig.end(), ih.begin(), ih.end());
}

FaceLattice enumerate_faces(const HPolyhedron& P) {
    std::vector<Face> found;
    std::set<std::vector<std::size_t>> known;  // canonical active sets
    std::set<std::vector<std::size_t>> tried;  // candidate tight sets

    Face whole;
    whole.active = P.implicit_rows();
    whole.dim = P.dim();
    whole.witness = P.relint_point();
    whole.is_whole = true;
    known.insert(whole.active);
    found.push_back(whole);

    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t cur = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < P.num_rows(); ++i) {
            const auto& act = found[cur].active;
            if (std::binary_search(act.begin(), act.end(), i))
                continue;
            std::vector<std::size_t> cand = act;
            cand.insert(std::upper_bound(cand.begin(), cand.end(), i), i);
            if (!tried.insert(cand).second)
                continue;
            auto f = close_face(P, cand);
            if (!f || !known.insert(f->active).second)
                continue;
            found.push_back(std::move(*f));
            queue.push_back(found.size() - 1);
        }
    }
    return FaceLattice(std::move(found));
}

std::vector<std::size_t> face_interval(const FaceLattice& lattice, std::size_t g, std::size_t h) {
    if (!lattice.is_subface(g, h))
        throw NotComparable("face " + std::to_string(g) + " is not contained in face " + std::to_string(h));
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < lattice.size(); ++f)
        if (lattice.is_subface(g, f) && lattice.is_subface(f, h))
            out.push_back(f);
    return out;
}

VCone normal_cone(const HPolyhedron& P, const Face& F) {
    VCone c;
    c.ambient_dim = P.ambient_dim();
    std::vector<RVector> implicit;
    for (auto i : F.active) {
        if (P.is_implicit(i))
            implicit.push_back(P.row(i));
        else
            c.generators.push_back(P.row(i));
    }
    c.lineality = span_basis(implicit, c.ambient_dim);
    return c;
}

bool cone_contains(const VCone& C, const RVector& v) {
    return feasible(coefficient_system(C, v)).status == LPStatus::optimal;
}

bool cone_relint_contains(const VCone& C, const RVector& v) {
    auto a = analyze(coefficient_system(C, v));
    // every lambda_i >= 0 row must be strict somewhere, i.e. none is implicit
    return a && a->implicit.empty();
}

HPolyhedron polar_cone(const VCone& C) {
    std::vector<RVector> rows = C.generators;
    for (const auto& w : C.lineality.vectors) {
        rows.push_back(w);
        rows.push_back(scale(w, -1));
    }
    return make_polyhedron(RMatrix::from_rows(rows, C.ambient_dim), zeros(rows.size()));
}

bool cone_is_subspace(const VCone& C) {
    return std::all_of(C.generators.begin(), C.generators.end(),
                       [&](const RVector& g) { return cone_contains(C, scale(g, -1)); });
}

SubspaceBasis lineality_basis(const HPolyhedron& P) { return P.lineality(); }

HPolyhedron recession_cone(const HPolyhedron& P) { return make_polyhedron(P.A(), zeros(P.num_rows())); }

bool is_bounded(const HPolyhedron& P) {
    const std::size_t d = P.ambient_dim();
    LinearSystem boxed(d);
    for (std::size_t i = 0; i < P.num_rows(); ++i)
        boxed.add_inequality(P.row(i), 0);
    for (std::size_t k = 0; k < d; ++k) {
        boxed.add_inequality(unit_vector(d, k), 1);
        boxed.add_inequality(scale(unit_vector(d, k), -1), 1);
    }
    for (std::size_t k = 0; k < d; ++k)
        for (int sign : {1, -1}) {
            auto r = optimize(scale(unit_vector(d, k), sign), boxed);
            assert(r.status == LPStatus::optimal);
            if (sgn(*r.value) != 0)
                return false;
        }
    return true;
}

LinealityDecomposition decompose(const HPolyhedron& P) {
    LinealityDecomposition out;
    out.U_basis = lineality_basis(P);
    std::vector<RVector> rows = P.A().row_vectors();
    RVector rhs = P.b();
    for (const auto& u : out.U_basis.vectors) {
        rows.push_back(u);
        rhs.push_back(0);
        rows.push_back(scale(u, -1));
        rhs.push_back(0);
    }
    out.P0 = make_polyhedron(RMatrix::from_rows(rows, P.ambient_dim()), rhs);
    out.p0_bounded = is_bounded(out.P0);
    out.predicted_phi = out.p0_bounded ? (out.U_basis.dim() % 2 == 0 ? 1 : -1) : 0;
    return out;
}

CellSystem cell_system(const HPolyhedron& P, const Face& F) {
    CellSystem cs;
    cs.d = P.ambient_dim();
    cs.cone = normal_cone(P, F);
    const std::size_t n = cs.d + cs.cone.generators.size() + cs.cone.lineality.dim();
    cs.base = LinearSystem(n);
    auto widen = [&](RVector v) {
        v.resize(n, Rational(0));
        return v;
    };
    for (std::size_t i = 0; i < P.num_rows(); ++i) {
        if (std::binary_search(F.active.begin(), F.active.end(), i))
            cs.base.add_equality(widen(P.row(i)), P.b()[i]);
        else
            cs.base.add_inequality(widen(P.row(i)), P.b()[i]);
    }
    for (std::size_t k = 0; k < cs.cone.generators.size(); ++k)
        cs.base.add_inequality(scale(unit_vector(n, cs.d + k), -1), 0);
    return cs;
}

namespace {

// Row r of  f - sum lambda_i u_i - sum mu_j w_j  over the (f, lambda, mu) block.
RVector coupling_row(const CellSystem& cs, std::size_t r, std::size_t n, std::size_t offset) {
    RVector row(n);
    row[offset + r] = 1;
    std::size_t col = offset + cs.d;
    for (const auto& g : cs.cone.generators)
        row[col++] = -g[r];
    for (const auto& w : cs.cone.lineality.vectors)
        row[col++] = -w[r];
    return row;
}

} // namespace

LinearSystem CellSystem::at(const RVector& x) const {
    if (x.size() != d)
        throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, expected " +
                                std::to_string(d));
    LinearSystem s = base;
    for (std::size_t r = 0; r < d; ++r)
        s.add_equality(coupling_row(*this, r, base.dim(), 0), x[r]);
    return s;
}

LinearSystem CellSystem::joint() const {
    const std::size_t n = d + base.dim();
    LinearSystem s(n);
    auto shift = [&](const RVector& v) {
        RVector out(n);
        std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(d));
        return out;
    };
    for (const auto& c : base.inequalities())
        s.add_inequality(shift(c.normal), c.rhs);
    for (const auto& c : base.equalities())
        s.add_equality(shift(c.normal), c.rhs);
    for (std::size_t r = 0; r < d; ++r) {
        RVector row = coupling_row(*this, r, n, d);
        row[r] = -1;
        s.add_equality(std::move(row), 0);
    }
    return s;
}

} // namespace normalfan
