#include "normalfan/identity.hpp"

#include "normalfan/harness.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace normalfan {

namespace {

int sign_of_dim(std::size_t dim) { return dim % 2 == 0 ? 1 : -1; }

bool contains_index(const std::vector<std::size_t>& sorted, std::size_t i) {
    return std::binary_search(sorted.begin(), sorted.end(), i);
}

RMatrix rows_of(const HPolyhedron& P, const std::vector<std::size_t>& which) {
    if (which.empty())
        return RMatrix(0, P.ambient_dim());
    return P.A().select_rows(which);
}

} // namespace

// ---------------------------------------------------------------- NormalFan

NormalFan::NormalFan(HPolyhedron P) : P_(std::move(P)) {
    lattice_ = enumerate_faces(P_);
    prepare();
}

NormalFan::NormalFan(HPolyhedron P, FaceLattice lattice) : P_(std::move(P)), lattice_(std::move(lattice)) {
    prepare();
}

void NormalFan::prepare() {
    const std::size_t d = P_.ambient_dim();
    data_.clear();
    data_.reserve(lattice_.size());
    for (const auto& F : lattice_.faces()) {
        FaceData fd;
        fd.cone = normal_cone(P_, F);
        RVector rhs;
        for (auto i : F.active)
            rhs.push_back(P_.b()[i]);
        fd.projector = AffineProjector(rows_of(P_, F.active), rhs);
        fd.active_mask.assign(P_.num_rows(), false);
        for (auto i : F.active)
            fd.active_mask[i] = true;

        std::vector<RVector> stacked = fd.cone.generators;
        stacked.insert(stacked.end(), fd.cone.lineality.vectors.begin(), fd.cone.lineality.vectors.end());
        fd.stacked = RMatrix::from_rows(stacked, d);
        if (independent_rows(fd.stacked).size() == stacked.size()) {
            fd.unique_coefficients = true;
            auto gram_inv = inverse(fd.stacked.multiply(fd.stacked.transpose()));
            fd.solver = stacked.empty() ? RMatrix(0, d) : gram_inv->multiply(fd.stacked);
        }
        data_.push_back(std::move(fd));
    }
}

RVector NormalFan::project(std::size_t f, const RVector& x) const { return data_[f].projector.project(x); }

bool NormalFan::face_contains(std::size_t f, const RVector& y) const {
    const auto& mask = data_[f].active_mask;
    for (std::size_t i = 0; i < P_.num_rows(); ++i)
        if (!mask[i] && sgn(P_.slack(i, y)) < 0)
            return false;
    return true;
}

bool NormalFan::face_relint_contains(std::size_t f, const RVector& y) const {
    const auto& mask = data_[f].active_mask;
    for (std::size_t i = 0; i < P_.num_rows(); ++i)
        if (!mask[i] && sgn(P_.slack(i, y)) <= 0)
            return false;
    return true;
}

// Unique coefficients of v in the stacked generators, or nullopt when v is
// outside their span. Only valid when unique_coefficients is set.
std::optional<RVector> NormalFan::coefficients(std::size_t f, const RVector& v) const {
    const auto& fd = data_[f];
    RVector coef = fd.solver.apply(v);
    if (fd.stacked.apply_transpose(coef) != v)
        return std::nullopt;
    return coef;
}

bool NormalFan::cone_contains(std::size_t f, const RVector& v) const {
    const auto& fd = data_[f];
    if (!fd.unique_coefficients)
        return normalfan::cone_contains(fd.cone, v);
    auto coef = coefficients(f, v);
    if (!coef)
        return false;
    for (std::size_t k = 0; k < fd.cone.generators.size(); ++k)
        if (sgn((*coef)[k]) < 0)
            return false;
    return true;
}

bool NormalFan::cone_relint_contains(std::size_t f, const RVector& v) const {
    const auto& fd = data_[f];
    if (!fd.unique_coefficients)
        return normalfan::cone_relint_contains(fd.cone, v);
    auto coef = coefficients(f, v);
    if (!coef)
        return false;
    for (std::size_t k = 0; k < fd.cone.generators.size(); ++k)
        if (sgn((*coef)[k]) <= 0)
            return false;
    return true;
}

void check_dimension(const NormalFan& fan, const RVector& x) {
    if (x.size() != fan.ambient_dim())
        throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, expected " +
                                std::to_string(fan.ambient_dim()));
}

// ------------------------------------------------------------------- cells

bool cell_contains(const NormalFan& fan, std::size_t f, const RVector& x) {
    RVector y = fan.project(f, x);
    return fan.face_contains(f, y) && fan.cone_contains(f, sub(y, x));
}

bool cell_contains_lp(const HPolyhedron& P, const Face& F, const RVector& x) {
    return feasible(cell_system(P, F).at(x)).status == LPStatus::optimal;
}

bool open_cell_contains(const NormalFan& fan, std::size_t f, const RVector& x) {
    RVector y = fan.project(f, x);
    return fan.face_relint_contains(f, y) && fan.cone_relint_contains(f, sub(y, x));
}

PhiReport phi_at(const NormalFan& fan, const RVector& x) {
    check_dimension(fan, x);
    PhiReport r;
    r.point = x;
    for (std::size_t f = 0; f < fan.size(); ++f) {
        PhiTerm t{f, fan.face(f).dim, cell_contains(fan, f, x)};
        if (t.member)
            r.phi += sign_of_dim(t.dim);
        r.terms.push_back(t);
    }
    return r;
}

PhiReport phi_at(const HPolyhedron& P, const RVector& x) { return phi_at(NormalFan(P), x); }

// ------------------------------------------------------------------- euler

bool is_cone(const HPolyhedron& P) {
    if (!P.contains(zeros(P.ambient_dim())))
        return false;
    for (std::size_t i = 0; i < P.num_rows(); ++i) {
        if (sgn(P.b()[i]) == 0)
            continue;
        auto r = optimize(P.row(i), P.system());
        if (r.status != LPStatus::optimal || sgn(*r.value) > 0)
            return false;
    }
    return true;
}

int euler_sum(const NormalFan& fan) {
    if (!is_cone(fan.polyhedron()))
        throw NotACone();
    int sum = 0;
    for (const auto& F : fan.lattice().faces())
        sum += sign_of_dim(F.dim);
    return sum;
}

// ---------------------------------------------------------- covering / Psi

CoverWitness covering_witness(const NormalFan& fan, const RVector& y) {
    check_dimension(fan, y);
    std::vector<CoverWitness> hits;
    for (std::size_t f = 0; f < fan.size(); ++f) {
        RVector x = fan.project(f, y);
        if (!fan.face_relint_contains(f, x))
            continue;
        RVector u = sub(y, x);
        if (fan.cone_contains(f, u))
            hits.push_back({f, std::move(x), std::move(u)});
    }
    if (hits.size() != 1)
        throw CoverViolation(std::to_string(hits.size()) + " faces cover the point " + to_string(y));
    return std::move(hits.front());
}

RVector project_onto(const NormalFan& fan, const RVector& y) { return covering_witness(fan, y).x; }

RVector psi(const NormalFan& fan, const RVector& y) {
    auto w = covering_witness(fan, y);
    return sub(w.x, w.u);
}

std::optional<int> degree_at(const NormalFan& fan, const RVector& z) {
    check_dimension(fan, z);
    const std::size_t d = fan.ambient_dim();
    int degree = 0;
    int phi = 0;
    for (std::size_t f = 0; f < fan.size(); ++f) {
        bool member = cell_contains(fan, f, z);
        bool open = open_cell_contains(fan, f, z);
        if (member != open)
            return std::nullopt;  // on the boundary of this cell
        if (open) {
            degree += sign_of_dim(d - fan.face(f).dim);
            phi += sign_of_dim(fan.face(f).dim);
        }
    }
    if (degree != sign_of_dim(d) * phi)
        throw std::logic_error("degree_at: degree and phi disagree");
    return degree;
}

// ------------------------------------------------------------------ strata

bool in_stratum(const NormalFan& fan, std::size_t g, std::size_t h, const RVector& x) {
    RVector y = fan.project(g, x);
    return fan.face_relint_contains(g, y) && fan.cone_relint_contains(h, sub(y, x));
}

bool in_stratum_lp(const HPolyhedron& P, const Face& G, const Face& H, const RVector& x) {
    const std::size_t d = P.ambient_dim();
    VCone cone = normal_cone(P, H);
    const std::size_t k = cone.generators.size();
    const std::size_t n = d + k + cone.lineality.dim();
    LinearSystem s(n);
    auto widen = [&](RVector v) {
        v.resize(n, Rational(0));
        return v;
    };
    for (std::size_t i = 0; i < P.num_rows(); ++i) {
        if (contains_index(G.active, i))
            s.add_equality(widen(P.row(i)), P.b()[i]);
        else
            s.add_inequality(widen(P.row(i)), P.b()[i]);
    }
    for (std::size_t j = 0; j < k; ++j)
        s.add_inequality(scale(unit_vector(n, d + j), -1), 0);
    for (std::size_t r = 0; r < d; ++r) {
        RVector row(n);
        row[r] = 1;
        for (std::size_t j = 0; j < k; ++j)
            row[d + j] = -cone.generators[j][r];
        for (std::size_t j = 0; j < cone.lineality.dim(); ++j)
            row[d + k + j] = -cone.lineality.vectors[j][r];
        s.add_equality(std::move(row), x[r]);
    }
    // every inequality (non-tight face rows and lambda >= 0) has to be strict
    auto a = analyze(s);
    return a && a->implicit.empty();
}

std::vector<Stratum> strata_at(const NormalFan& fan, const RVector& x) {
    check_dimension(fan, x);
    const auto& L = fan.lattice();
    std::vector<Stratum> out;
    for (std::size_t g = 0; g < fan.size(); ++g) {
        RVector y = fan.project(g, x);
        if (!fan.face_relint_contains(g, y))
            continue;
        RVector v = sub(y, x);
        for (std::size_t h = 0; h < fan.size(); ++h)
            if (h != g && L.is_subface(g, h) && fan.cone_relint_contains(h, v))
                out.push_back({g, h});
    }
    return out;
}

int interval_phi(const NormalFan& fan, std::size_t g, std::size_t h, const RVector& y) {
    int sum = 0;
    for (auto f : face_interval(fan.lattice(), g, h))
        if (cell_contains(fan, f, y))
            sum += sign_of_dim(fan.face(f).dim);
    return sum;
}

bool check_interval_disjoint(const NormalFan& fan, const RVector& x) {
    return check_interval_disjoint(fan, strata_at(fan, x));
}

bool check_interval_disjoint(const NormalFan& fan, const std::vector<Stratum>& strata) {
    std::vector<int> owner(fan.size(), -1);
    for (std::size_t s = 0; s < strata.size(); ++s)
        for (auto f : face_interval(fan.lattice(), strata[s].g, strata[s].h)) {
            if (owner[f] >= 0)
                return false;
            owner[f] = static_cast<int>(s);
        }
    return true;
}

bool split_identity_check(const NormalFan& fan, const RVector& x, const RVector& y) {
    return split_identity_check(fan, strata_at(fan, x), y);
}

bool split_identity_check(const NormalFan& fan, const std::vector<Stratum>& strata, const RVector& y) {
    check_dimension(fan, y);
    std::vector<bool> covered(fan.size(), false);
    int rhs = 0;
    for (const auto& s : strata) {
        rhs += interval_phi(fan, s.g, s.h, y);
        for (auto f : face_interval(fan.lattice(), s.g, s.h))
            covered[f] = true;
    }
    for (std::size_t f = 0; f < fan.size(); ++f)
        if (!covered[f] && cell_contains(fan, f, y))
            rhs += sign_of_dim(fan.face(f).dim);
    return phi_at(fan, y).phi == rhs;
}

// ------------------------------------------------------------ localization

std::size_t LocalCone::star_of(std::size_t f) const {
    for (const auto& [from, to] : face_map)
        if (from == f)
            return to;
    throw NotComparable("face " + std::to_string(f) + " is not in the localized interval");
}

LocalCone localize(const NormalFan& fan, std::size_t g, std::size_t h) {
    const auto& L = fan.lattice();
    if (g == h || !L.is_subface(g, h))
        throw NotComparable("localize needs a proper pair G within H, got " + std::to_string(g) + ", " +
                            std::to_string(h));
    const HPolyhedron& P = fan.polyhedron();
    const std::size_t d = P.ambient_dim();
    const Face& G = L[g];
    const Face& H = L[h];

    LocalCone lc;
    lc.g = g;
    lc.h = h;
    lc.base_point = G.witness;

    SubspaceBasis LG = kernel_basis(rows_of(P, G.active));
    std::vector<RVector> rows;
    for (auto j : G.active)
        if (!contains_index(H.active, j)) {
            rows.push_back(P.row(j));
            lc.row_origin.push_back(static_cast<long>(j));
        }
    std::vector<RVector> subspace_eqs;
    for (auto i : H.active)
        subspace_eqs.push_back(P.row(i));
    subspace_eqs.insert(subspace_eqs.end(), LG.vectors.begin(), LG.vectors.end());
    for (const auto& e : subspace_eqs) {
        rows.push_back(e);
        rows.push_back(scale(e, -1));
        lc.row_origin.push_back(-1);
        lc.row_origin.push_back(-1);
    }
    lc.L3 = kernel_basis(RMatrix::from_rows(subspace_eqs, d));
    if (lc.L3.dim() != H.dim - G.dim)
        throw std::logic_error("localize: dim L3 differs from dim H - dim G");
    HPolyhedron star = make_polyhedron(RMatrix::from_rows(rows, d), zeros(rows.size()));
    if (star.num_rows() != rows.size())
        throw std::logic_error("localize: unexpected zero row in H*");
    lc.star = NormalFan(std::move(star));

    auto interval = face_interval(L, g, h);
    if (interval.size() != lc.star.size())
        throw std::logic_error("localize: H* has " + std::to_string(lc.star.size()) + " faces, interval has " +
                               std::to_string(interval.size()));
    for (auto f : interval) {
        std::vector<std::size_t> active;
        for (std::size_t r = 0; r < lc.row_origin.size(); ++r) {
            long o = lc.row_origin[r];
            if (o < 0 || contains_index(L[f].active, static_cast<std::size_t>(o)))
                active.push_back(r);
        }
        auto id = lc.star.lattice().find(active);
        if (!id)
            throw std::logic_error("localize: F* is not a face of H*");
        if (lc.star.face(*id).dim != L[f].dim - G.dim)
            throw std::logic_error("localize: dim F* differs from dim F - dim G");
        lc.face_map.emplace_back(f, *id);
    }
    return lc;
}

namespace {

// Extreme rays of the pointed cone {r : A_j r <= 0, j in active} within the
// span of those rows, by brute force over (k-1)-subsets, k = rank.
std::vector<RVector> extreme_rays(const HPolyhedron& P, const std::vector<std::size_t>& active) {
    const std::size_t d = P.ambient_dim();
    std::vector<RVector> rows;
    for (auto i : active)
        rows.push_back(P.row(i));
    SubspaceBasis B = span_basis(rows, d);
    const std::size_t k = B.dim();
    std::vector<RVector> out;
    if (k == 0)
        return out;
    RMatrix Bm = B.as_rows();
    std::vector<RVector> local;  // rows in the coordinates of B
    for (const auto& r : rows)
        local.push_back(Bm.apply(r));

    std::vector<std::size_t> pick(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i)
        pick[i] = i;
    const std::size_t m = local.size();
    if (k - 1 > m)
        return out;
    for (;;) {
        std::vector<RVector> sel;
        for (auto i : pick)
            sel.push_back(local[i]);
        SubspaceBasis ker = kernel_basis(RMatrix::from_rows(sel, k));
        if (ker.dim() == 1) {
            for (int sign : {1, -1}) {
                RVector y = scale(ker.vectors[0], sign);
                bool ok = std::all_of(local.begin(), local.end(), [&](const RVector& a) { return sgn(dot(a, y)) <= 0; });
                if (ok)
                    out.push_back(Bm.apply_transpose(y));
            }
        }
        // next combination
        std::size_t pos = pick.size();
        while (pos > 0 && pick[pos - 1] == m - (pick.size() - pos) - 1)
            --pos;
        if (pos == 0)
            break;
        ++pick[pos - 1];
        for (std::size_t j = pos; j < pick.size(); ++j)
            pick[j] = pick[j - 1] + 1;
    }
    return out;
}

void update_min(std::optional<Rational>& best, const Rational& v) {
    if (!best || v < *best)
        best = v;
}

} // namespace

Lemma2Checker::Lemma2Checker(const NormalFan& fan, std::size_t g, std::size_t h, const RVector& x)
    : fan_(&fan), local_(localize(fan, g, h)) {
    init(fan, x);
}

Lemma2Checker::Lemma2Checker(const NormalFan& fan, LocalCone local, const RVector& x)
    : fan_(&fan), local_(std::move(local)) {
    init(fan, x);
}

void Lemma2Checker::init(const NormalFan& fan, const RVector& x) {
    check_dimension(fan, x);
    const std::size_t g = local_.g;
    const std::size_t h = local_.h;
    if (!in_stratum(fan, g, h, x))
        throw StratumMismatch("point " + to_string(x) + " is not in the stratum (" + std::to_string(g) + ", " +
                              std::to_string(h) + ")");
    x_ = x;
    const HPolyhedron& P = fan.polyhedron();
    const Face& G = fan.face(g);
    RVector x1 = fan.project(g, x);
    RVector x2 = sub(x1, x);

    // Rows slack at x1 must stay slack.
    for (std::size_t l = 0; l < P.num_rows(); ++l)
        if (!contains_index(G.active, l)) {
            Rational s = P.slack(l, x1);
            update_min(radius_sq_, s * s / norm2(P.A().row(l)));
        }
    // x2 must stay inside each N(P,F): distance to the facets it is off.
    for (auto f : face_interval(fan.lattice(), g, h))
        for (const auto& r : extreme_rays(P, fan.face(f).active)) {
            Rational vr = dot(x2, r);
            if (sgn(vr) < 0)
                update_min(radius_sq_, vr * vr / norm2(r));
        }
    eps_ = 1;
    while (radius_sq_ && 4 * eps_ * eps_ > *radius_sq_)
        eps_ /= 2;
}

bool Lemma2Checker::check(const RVector& w, const Rational& eps) const {
    check_dimension(*fan_, w);
    const HPolyhedron& P = fan_->polyhedron();
    const Face& G = fan_->face(local_.g);
    const Face& H = fan_->face(local_.h);
    for (auto i : H.active)
        if (sgn(dot(P.A().row(i), w)) != 0)
            throw StratumMismatch("w is not in L(H)");
    for (const auto& l : kernel_basis(rows_of(P, G.active)).vectors)
        if (sgn(dot(l, w)) != 0)
            throw StratumMismatch("w is not orthogonal to L(G)");
    if (norm2(w) > eps * eps)
        throw StratumMismatch("w is longer than eps");

    RVector y = add(x_, w);
    bool ok = true;
    for (const auto& [f, fstar] : local_.face_map)
        ok = ok && cell_contains(*fan_, f, y) == cell_contains(local_.star, fstar, w);
    int lhs = interval_phi(*fan_, local_.g, local_.h, y);
    int rhs = sign_of_dim(G.dim) * phi_at(local_.star, w).phi;
    return ok && lhs == rhs;
}

std::vector<RVector> Lemma2Checker::sample(std::size_t count, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<RVector> out;
    const std::size_t d = fan_->ambient_dim();
    while (out.size() < count) {
        RVector w = zeros(d);
        for (const auto& b : local_.L3.vectors)
            axpy(w, Rational(uniform_int(rng, -3, 3)), b);
        if (is_zero(w))
            continue;
        Rational l1 = 0;
        for (const auto& c : w)
            l1 += abs(c);
        long den = uniform_int(rng, 1, 4);
        Rational s(uniform_int(rng, 1, den), den);
        s.canonicalize();
        out.push_back(scale(w, eps_ * s / l1));
    }
    return out;
}

bool lemma2_check(const NormalFan& fan, std::size_t g, std::size_t h, const RVector& x, const RVector& w,
                  const Rational& eps) {
    return Lemma2Checker(fan, g, h, x).check(w, eps);
}

// ------------------------------------------------------------------ verify

VerifyReport verify_theorem(const NormalFan& fan, const VerifyOptions& options) {
    const std::size_t d = fan.ambient_dim();
    VerifyReport report;
    report.predicted = decompose(fan.polyhedron()).predicted_phi;

    auto evaluate = [&](const RVector& x) {
        ++report.samples;
        PhiReport r = phi_at(fan, x);
        if (r.phi == report.predicted)
            return;
        Violation v{x, std::move(r)};
        if (options.throw_on_violation)
            throw TheoremViolation(v);
        report.violations.push_back(std::move(v));
    };

    evaluate(zeros(d));
    for (const auto& F : fan.lattice().faces())
        evaluate(F.witness);
    for (const auto& x : random_points(d, options.random_samples, sample_window(fan), options.seed))
        evaluate(x);
    auto boundary = boundary_samples(fan, options.boundary_per_pair, options.seed);
    report.boundary_samples = boundary.size();
    for (const auto& x : boundary)
        evaluate(x);
    return report;
}

} // namespace normalfan
