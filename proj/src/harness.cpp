#include "normalfan/harness.hpp"

#include "normalfan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace normalfan {

namespace {

constexpr int max_attempts = 100;

RVector random_row(std::mt19937_64& rng, std::size_t d, long bound) {
    RVector a(d);
    do {
        for (auto& v : a)
            v = uniform_int(rng, -bound, bound);
    } while (is_zero(a));
    return a;
}

// Rows a with <a, c> < 0 for one random direction c, so c is interior to
// the cone {Ax <= 0} and a recession direction of {Ax <= b} for any b.
std::vector<RVector> cone_rows(std::mt19937_64& rng, std::size_t d, std::size_t m, long bound) {
    RVector c = random_row(rng, d, bound);
    std::vector<RVector> rows;
    while (rows.size() < m) {
        RVector a = random_row(rng, d, bound);
        int s = sgn(dot(a, c));
        if (s == 0)
            continue;
        rows.push_back(s > 0 ? scale(a, -1) : a);
    }
    return rows;
}

RVector random_rhs(std::mt19937_64& rng, std::size_t m, long bound) {
    RVector b(m);
    for (auto& v : b)
        v = uniform_int(rng, 1, bound);
    return b;
}

HPolyhedron gen_line_free(std::mt19937_64& rng, const GenSpec& spec) {
    const std::size_t d = spec.dim;
    const long B = spec.coefficient_bound;
    switch (spec.kind) {
    case InstanceKind::polytope: {
        std::vector<RVector> rows;
        for (std::size_t i = 0; i < spec.n_constraints; ++i)
            rows.push_back(random_row(rng, d, B));
        RVector b = random_rhs(rng, rows.size(), B);
        HPolyhedron P = make_polyhedron(RMatrix::from_rows(rows, d), b);
        if (is_bounded(P))
            return P;
        for (std::size_t k = 0; k < d; ++k) {
            rows.push_back(unit_vector(d, k));
            rows.push_back(scale(unit_vector(d, k), -1));
            b.push_back(B);
            b.push_back(B);
        }
        return make_polyhedron(RMatrix::from_rows(rows, d), b);
    }
    case InstanceKind::cone: {
        auto rows = cone_rows(rng, d, spec.n_constraints, B);
        return make_polyhedron(RMatrix::from_rows(rows, d), zeros(rows.size()));
    }
    case InstanceKind::line_free_unbounded:
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            auto rows = cone_rows(rng, d, spec.n_constraints, B);
            RMatrix A = RMatrix::from_rows(rows, d);
            if (rank(A) < d)
                continue;
            return make_polyhedron(A, random_rhs(rng, rows.size(), B));
        }
        throw GenerationError("no line-free unbounded instance after " + std::to_string(max_attempts) +
                              " draws (d=" + std::to_string(d) + ", m=" + std::to_string(spec.n_constraints) + ")");
    case InstanceKind::with_lineality:
        break;
    }
    throw GenerationError("with_lineality cannot be nested");
}

} // namespace

std::string to_string(InstanceKind k) {
    switch (k) {
    case InstanceKind::polytope: return "polytope";
    case InstanceKind::cone: return "cone";
    case InstanceKind::line_free_unbounded: return "line_free_unbounded";
    case InstanceKind::with_lineality: return "with_lineality";
    }
    return "?";
}

InstanceKind parse_instance_kind(const std::string& name) {
    for (auto k : {InstanceKind::polytope, InstanceKind::cone, InstanceKind::line_free_unbounded,
                   InstanceKind::with_lineality})
        if (name == to_string(k))
            return k;
    throw ParseError("unknown instance kind '" + name + "'");
}

long uniform_int(std::mt19937_64& rng, long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(rng() % span);
}

Rational uniform_rational(std::mt19937_64& rng, long bound, long max_den) {
    long q = uniform_int(rng, 1, max_den);
    Rational r(uniform_int(rng, -bound * q, bound * q), q);
    r.canonicalize();
    return r;
}

HPolyhedron gen_instance(const GenSpec& spec) {
    if (spec.dim < 1 || spec.n_constraints < 1)
        throw GenerationError("gen_instance needs dim >= 1 and at least one constraint");
    if (spec.coefficient_bound < 1)
        throw GenerationError("coefficient bound must be positive");
    std::mt19937_64 rng(spec.seed);
    if (spec.kind != InstanceKind::with_lineality)
        return gen_line_free(rng, spec);

    const std::size_t d = spec.dim;
    const std::size_t k = spec.lineality;
    if (k > d)
        throw GenerationError("lineality " + std::to_string(k) + " exceeds dim " + std::to_string(d));
    std::vector<RVector> rows;
    RVector b;
    if (k < d) {
        GenSpec inner = spec;
        inner.dim = d - k;
        inner.kind = spec.base;
        HPolyhedron base = gen_line_free(rng, inner);
        rows = base.A().row_vectors();
        b = base.b();
    }
    // pad with k zero columns, then a random signed permutation
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = d; i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(i) - 1))]);
    std::vector<int> sign(d);
    for (auto& s : sign)
        s = uniform_int(rng, 0, 1) == 0 ? 1 : -1;
    for (auto& r : rows) {
        r.resize(d, Rational(0));
        RVector mapped(d);
        for (std::size_t j = 0; j < d; ++j)
            mapped[perm[j]] = sign[j] * r[j];
        r = std::move(mapped);
    }
    return make_polyhedron(RMatrix::from_rows(rows, d), b);
}

std::vector<RVector> boundary_samples(const NormalFan& fan, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto& L = fan.lattice();
    std::vector<RVector> out;
    for (const auto& F : L.faces())
        if (!F.is_whole)
            out.push_back(F.witness);
    for (std::size_t g = 0; g < fan.size(); ++g)
        for (std::size_t h = 0; h < fan.size(); ++h) {
            if (g == h || !L.is_subface(g, h))
                continue;
            const VCone& N = fan.cone(h);
            for (std::size_t c = 0; c < count; ++c) {
                RVector v = zeros(fan.ambient_dim());
                for (const auto& u : N.generators) {
                    long den = uniform_int(rng, 1, 3);
                    Rational lambda(uniform_int(rng, 1, 3 * den), den);
                    lambda.canonicalize();
                    axpy(v, lambda, u);
                }
                for (const auto& w : N.lineality.vectors)
                    axpy(v, uniform_rational(rng, 2, 2), w);
                out.push_back(sub(L[g].witness, v));
            }
        }
    return out;
}

std::vector<RVector> random_points(std::size_t d, std::size_t count, long window, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<RVector> out(count, RVector(d));
    for (auto& x : out)
        for (auto& c : x)
            c = uniform_rational(rng, window, 4);
    return out;
}

long sample_window(const NormalFan& fan) {
    Rational m = 0;
    for (const auto& F : fan.lattice().faces())
        for (const auto& c : F.witness)
            m = std::max(m, Rational(abs(c)));
    mpz_class ceil_m = m.get_num() / m.get_den() + 1;
    return ceil_m.get_si() + 2;
}

std::vector<CellHRep> oracle_cell_hreps(const HPolyhedron& P, const FaceLattice& lattice) {
    const std::size_t d = P.ambient_dim();
    std::vector<CellHRep> out;
    for (std::size_t f = 0; f < lattice.size(); ++f) {
        LinearSystem joint = cell_system(P, lattice[f]).joint();
        std::vector<std::size_t> drop;
        for (std::size_t v = d; v < joint.dim(); ++v)
            drop.push_back(v);
        out.push_back({f, fm_eliminate(joint, drop)});
    }
    return out;
}

int oracle_phi(const std::vector<CellHRep>& cells, const FaceLattice& lattice, const RVector& x) {
    int phi = 0;
    for (const auto& c : cells)
        if (c.cell.satisfies(x))
            phi += lattice[c.face].dim % 2 == 0 ? 1 : -1;
    return phi;
}

int oracle_phi(const HPolyhedron& P, const RVector& x) {
    FaceLattice L = enumerate_faces(P);
    return oracle_phi(oracle_cell_hreps(P, L), L, x);
}

} // namespace normalfan
