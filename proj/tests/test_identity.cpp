#include "doctest.h"
#include "fixtures.hpp"
#include "normalfan/errors.hpp"
#include "normalfan/harness.hpp"
#include "normalfan/identity.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace normalfan;
using testing_support::q;
using testing_support::vec;

namespace {

std::size_t id(const NormalFan& fan, std::vector<std::size_t> active) {
    auto f = fan.lattice().find(active);
    REQUIRE(f);
    return *f;
}

// unit square faces by name
struct Square {
    NormalFan fan{fixtures::unit_square()};
    std::size_t right = id(fan, {0}), left = id(fan, {1}), top = id(fan, {2}), bottom = id(fan, {3});
    std::size_t v00 = id(fan, {1, 3}), v01 = id(fan, {1, 2}), v10 = id(fan, {0, 3}), v11 = id(fan, {0, 2});
    std::size_t whole = fan.lattice().whole();
};

std::vector<std::size_t> members(const PhiReport& r) {
    std::vector<std::size_t> out;
    for (const auto& t : r.terms)
        if (t.member)
            out.push_back(t.face);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

NormalFan random_fan(std::uint64_t seed, std::size_t d, InstanceKind kind, std::size_t lineality = 0) {
    GenSpec spec;
    spec.seed = seed;
    spec.dim = d;
    spec.n_constraints = std::max<std::size_t>(d + 1, 4);
    spec.kind = kind;
    if (kind == InstanceKind::with_lineality) {
        spec.lineality = lineality;
        spec.base = seed % 2 ? InstanceKind::polytope : InstanceKind::line_free_unbounded;
        spec.n_constraints = std::max<std::size_t>(d - lineality + 1, 3);
    }
    return NormalFan(gen_instance(spec));
}

} // namespace

TEST_CASE("cell_contains") {
    Square s;
    CHECK(cell_contains(s.fan, s.left, vec({2, q(1, 2)})));
    CHECK_FALSE(cell_contains(s.fan, s.right, vec({2, q(1, 2)})));
    for (std::size_t f = 0; f < s.fan.size(); ++f) {
        CHECK(cell_contains(s.fan, f, s.fan.face(f).witness));
        CHECK(cell_contains_lp(s.fan.polyhedron(), s.fan.face(f), s.fan.face(f).witness));
    }
    CHECK(cell_contains_lp(s.fan.polyhedron(), s.fan.face(s.left), vec({2, q(1, 2)})));
    CHECK_FALSE(cell_contains_lp(s.fan.polyhedron(), s.fan.face(s.right), vec({2, q(1, 2)})));
}

TEST_CASE("phi_at worked values") {
    Square s;
    auto r = phi_at(s.fan, vec({2, q(1, 2)}));
    CHECK(r.phi == 1);
    CHECK(members(r) == sorted({s.left, s.v00, s.v01}));
    CHECK(r.terms.size() == 9);

    auto boundary = phi_at(s.fan, vec({2, 0}));
    CHECK(boundary.phi == 1);
    CHECK(members(boundary) == sorted({s.left, s.v00, s.v01}));

    NormalFan quad(fixtures::quadrant());
    auto rq = phi_at(quad, vec({1, 1}));
    CHECK(rq.phi == 0);
    CHECK(members(rq).size() == 4);

    NormalFan plane(fixtures::whole_plane());
    CHECK(phi_at(plane, vec({q(-7, 3), 5})).phi == 1);

    CHECK_THROWS_AS(phi_at(s.fan, vec({1, 2, 3})), DimensionMismatch);
}

TEST_CASE("euler_sum") {
    CHECK(euler_sum(NormalFan(fixtures::half_line())) == 0);
    CHECK(euler_sum(NormalFan(fixtures::quadrant())) == 0);
    CHECK(euler_sum(NormalFan(make_polyhedron(RMatrix(0, 1), RVector{}))) == -1);
    CHECK(euler_sum(NormalFan(fixtures::line())) == -1);
    CHECK_THROWS_AS(euler_sum(NormalFan(fixtures::unit_square())), NotACone);
    // redundant positive right-hand side is still a cone
    CHECK(euler_sum(NormalFan(fixtures::poly(1, {{-1}, {-1}}, {0, 3}))) == 0);
    CHECK_THROWS_AS(euler_sum(NormalFan(fixtures::poly(1, {{-1}}, {-1}))), NotACone);
}

TEST_CASE("covering_witness, project_onto, psi") {
    Square s;
    auto w = covering_witness(s.fan, vec({2, q(1, 2)}));
    CHECK(w.face == s.right);
    CHECK(w.x == vec({1, q(1, 2)}));
    CHECK(w.u == vec({1, 0}));

    auto inside = covering_witness(s.fan, vec({q(1, 3), q(2, 3)}));
    CHECK(inside.face == s.whole);
    CHECK(is_zero(inside.u));

    auto corner = covering_witness(s.fan, vec({2, 2}));
    CHECK(corner.face == s.v11);
    CHECK(corner.x == vec({1, 1}));
    CHECK(corner.u == vec({1, 1}));

    CHECK(psi(s.fan, vec({q(1, 3), q(2, 3)})) == vec({q(1, 3), q(2, 3)}));
    CHECK(project_onto(s.fan, vec({2, q(1, 2)})) == vec({1, q(1, 2)}));
    CHECK(psi(s.fan, vec({2, q(1, 2)})) == vec({0, q(1, 2)}));
    CHECK(psi(s.fan, vec({2, 2})) == vec({0, 0}));
}

TEST_CASE("degree_at") {
    Square s;
    CHECK(degree_at(s.fan, vec({2, q(1, 2)})) == 1);
    CHECK_FALSE(degree_at(s.fan, vec({2, 0})));
    CHECK(degree_at(NormalFan(fixtures::quadrant()), vec({1, 1})) == 0);
}

TEST_CASE("strata_at") {
    Square s;
    CHECK(strata_at(s.fan, vec({2, 0})) == std::vector<Stratum>{{s.v00, s.left}});
    CHECK(strata_at(s.fan, vec({2, q(1, 2)})).empty());
    // (1/2, 0) is also g - v for the vertices (0,0) and (1,0) with v along
    // the outer normals of the left and right edges.
    auto mid = strata_at(s.fan, vec({q(1, 2), 0}));
    CHECK(mid.size() == 3);
    CHECK(std::count(mid.begin(), mid.end(), Stratum{s.bottom, s.whole}) == 1);
    CHECK(std::count(mid.begin(), mid.end(), Stratum{s.v00, s.left}) == 1);
    CHECK(std::count(mid.begin(), mid.end(), Stratum{s.v10, s.right}) == 1);
    for (const auto& st : mid)
        CHECK(in_stratum_lp(s.fan.polyhedron(), s.fan.face(st.g), s.fan.face(st.h), vec({q(1, 2), 0})));
    CHECK(in_stratum_lp(s.fan.polyhedron(), s.fan.face(s.v00), s.fan.face(s.left), vec({2, 0})));
    CHECK_FALSE(in_stratum_lp(s.fan.polyhedron(), s.fan.face(s.v00), s.fan.face(s.bottom), vec({2, 0})));
}

TEST_CASE("interval_phi, disjointness, split identity") {
    Square s;
    CHECK(interval_phi(s.fan, s.v00, s.left, vec({2, 0})) == 0);
    CHECK(interval_phi(s.fan, s.whole, s.whole, vec({q(1, 2), q(1, 2)})) == 1);
    CHECK(interval_phi(s.fan, s.v00, s.left, vec({-5, -5})) == 0);
    CHECK_THROWS_AS(interval_phi(s.fan, s.left, s.v00, vec({0, 0})), NotComparable);

    CHECK(check_interval_disjoint(s.fan, vec({2, 0})));
    CHECK(check_interval_disjoint(s.fan, vec({2, q(1, 2)})));

    RVector x = vec({2, 0});
    CHECK(split_identity_check(s.fan, x, x));
    for (long i = -2; i <= 2; ++i)
        for (long j = -2; j <= 2; ++j)
            CHECK(split_identity_check(s.fan, x, add(x, vec({q(i, 16), q(j, 16)}))));
}

TEST_CASE("localize") {
    Square s;
    auto lc = localize(s.fan, s.v00, s.bottom);
    CHECK(lc.L3.dim() == 1);
    CHECK(lc.L3.vectors[0] == vec({1, 0}));
    CHECK(lc.star.size() == 2);
    CHECK(lc.star.polyhedron().contains(vec({3, 0})));
    CHECK_FALSE(lc.star.polyhedron().contains(vec({-1, 0})));
    CHECK_FALSE(lc.star.polyhedron().contains(vec({1, 1})));
    CHECK(lc.star.face(lc.star_of(s.v00)).dim == 0);
    CHECK(lc.star.face(lc.star_of(s.bottom)).dim == 1);

    NormalFan quad(fixtures::quadrant());
    auto lq = localize(quad, 0, quad.lattice().whole());
    CHECK(lq.star.size() == 4);
    CHECK(lq.L3.dim() == 2);
    for (long i = -2; i <= 2; ++i)
        for (long j = -2; j <= 2; ++j)
            CHECK(lq.star.polyhedron().contains(vec({i, j})) == quad.polyhedron().contains(vec({i, j})));

    NormalFan cube(fixtures::unit_cube());
    auto v = id(cube, {1, 3, 5});
    auto facet = id(cube, {5});
    auto lcube = localize(cube, v, facet);
    CHECK(lcube.L3.dim() == 2);
    CHECK(lcube.star.polyhedron().dim() == 2);
    CHECK(lcube.star.size() == 4);
    CHECK(lcube.star.polyhedron().contains(vec({1, 2, 0})));
    CHECK_FALSE(lcube.star.polyhedron().contains(vec({1, -2, 0})));

    CHECK_THROWS_AS(localize(s.fan, s.left, s.v00), NotComparable);
    CHECK_THROWS_AS(localize(s.fan, s.left, s.left), NotComparable);
}

TEST_CASE("lemma2_check") {
    Square s;
    RVector x = vec({2, 0});
    Lemma2Checker chk(s.fan, s.v00, s.left, x);
    CHECK(chk.local().L3.vectors[0] == vec({0, 1}));
    CHECK(chk.check(vec({0, 0})));
    for (long k = -4; k <= 4; ++k)
        CHECK(chk.check(scale(vec({0, 1}), chk.eps() * q(k, 4))));
    for (const auto& w : chk.sample(10, 1))
        CHECK(lemma2_check(s.fan, s.v00, s.left, x, w, chk.eps()));
    CHECK_THROWS_AS(chk.check(vec({q(1, 8), 0})), StratumMismatch);
    CHECK_THROWS_AS(Lemma2Checker(s.fan, s.v00, s.left, vec({2, q(1, 2)})), StratumMismatch);
}

TEST_CASE("verify_theorem on the worked examples") {
    struct Case {
        HPolyhedron P;
        int expected;
    };
    std::vector<Case> cases{{fixtures::unit_square(), 1}, {fixtures::unit_cube(), 1}, {fixtures::quadrant(), 0},
                            {fixtures::half_plane(), 0},  {fixtures::line(), -1},     {fixtures::whole_plane(), 1},
                            {fixtures::segment(), 1},     {fixtures::half_line(), 0}};
    for (const auto& c : cases) {
        NormalFan fan(c.P);
        VerifyOptions opt;
        opt.random_samples = 40;
        opt.seed = 7;
        auto rep = verify_theorem(fan, opt);
        CHECK(rep.predicted == c.expected);
        CHECK(rep.violations.empty());
        CHECK(rep.samples >= 40);
    }
}

TEST_CASE("property: fast predicates agree with their LP formulations") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        InstanceKind kind = seed % 3 == 0   ? InstanceKind::line_free_unbounded
                            : seed % 3 == 1 ? InstanceKind::polytope
                                            : InstanceKind::with_lineality;
        auto fan = random_fan(seed, 2 + seed % 2, kind, 1);
        const auto& P = fan.polyhedron();
        auto pts = boundary_samples(fan, 1, seed);
        for (const auto& x : random_points(P.ambient_dim(), 10, sample_window(fan), seed))
            pts.push_back(x);
        if (pts.size() > 40)
            pts.resize(40);
        for (const auto& x : pts) {
            for (std::size_t f = 0; f < fan.size(); ++f)
                CHECK(cell_contains(fan, f, x) == cell_contains_lp(P, fan.face(f), x));
            for (std::size_t g = 0; g < fan.size(); ++g)
                for (std::size_t h = 0; h < fan.size(); ++h)
                    if (g != h && fan.lattice().is_subface(g, h))
                        CHECK(in_stratum(fan, g, h, x) == in_stratum_lp(P, fan.face(g), fan.face(h), x));
        }
    }
}

TEST_CASE("property: open cells are interiors and strata are boundaries") {
    for (std::uint64_t seed = 20; seed < 28; ++seed) {
        auto fan = random_fan(seed, 2, seed % 2 ? InstanceKind::polytope : InstanceKind::line_free_unbounded);
        const auto& P = fan.polyhedron();
        auto cells = oracle_cell_hreps(P, fan.lattice());
        auto pts = boundary_samples(fan, 2, seed);
        for (const auto& x : random_points(2, 30, sample_window(fan), seed))
            pts.push_back(x);
        for (const auto& x : pts) {
            auto strata = strata_at(fan, x);
            for (const auto& c : cells) {
                bool interior = c.cell.satisfies(x);
                for (const auto& row : c.cell.inequalities())
                    interior = interior && dot(row.normal, x) < row.rhs;
                CHECK(c.cell.equalities().empty());
                CHECK(open_cell_contains(fan, c.face, x) == interior);
                // the cell minus its open part is the union of its boundary strata
                bool on_boundary = false;
                for (const auto& s : strata)
                    on_boundary = on_boundary || (fan.lattice().is_subface(s.g, c.face) &&
                                                  fan.lattice().is_subface(c.face, s.h));
                CHECK(on_boundary == (c.cell.satisfies(x) && !interior));
            }
        }
    }
}

TEST_CASE("property: oracle, covering, Psi, degree, lemmas") {
    for (std::uint64_t seed = 40; seed < 52; ++seed) {
        InstanceKind kind = seed % 3 == 0   ? InstanceKind::line_free_unbounded
                            : seed % 3 == 1 ? InstanceKind::polytope
                                            : InstanceKind::with_lineality;
        const std::size_t d = 2 + seed % 2;
        auto fan = random_fan(seed, d, kind, 1);
        const auto& P = fan.polyhedron();
        const int predicted = decompose(P).predicted_phi;
        auto cells = oracle_cell_hreps(P, fan.lattice());
        auto pts = boundary_samples(fan, 1, seed);
        auto rnd = random_points(d, 30, sample_window(fan), seed);
        pts.insert(pts.end(), rnd.begin(), rnd.end());
        for (const auto& x : pts) {
            auto r = phi_at(fan, x);
            CHECK(r.phi == predicted);
            CHECK(r.phi == oracle_phi(cells, fan.lattice(), x));
            auto cw = covering_witness(fan, x);
            CHECK(add(cw.x, cw.u) == x);
            RVector y = psi(fan, x);
            if (P.contains(x))
                CHECK(y == x);
            auto deg = degree_at(fan, x);
            CHECK(deg.has_value() == strata_at(fan, x).empty());
            if (deg)
                CHECK(*deg == (d % 2 == 0 ? 1 : -1) * r.phi);
            CHECK(check_interval_disjoint(fan, x));
        }
        // nearest point: no face witness is closer than the projection
        for (const auto& y : rnd) {
            RVector p = project_onto(fan, y);
            for (const auto& F : fan.lattice().faces())
                CHECK(norm2(sub(y, p)) <= norm2(sub(y, F.witness)));
        }
        // Lemma 2 on the boundary samples of the first few strata
        std::size_t checked = 0;
        for (const auto& x : pts) {
            for (const auto& st : strata_at(fan, x)) {
                if (checked >= 25)
                    break;
                ++checked;
                Lemma2Checker chk(fan, st.g, st.h, x);
                CHECK(chk.check(zeros(d)));
                for (const auto& w : chk.sample(5, seed + checked)) {
                    CHECK(chk.check(w));
                    CHECK(split_identity_check(fan, x, add(x, w)));
                }
            }
        }
    }
}
