#include "doctest.h"
#include "fixtures.hpp"
#include "normalfan/errors.hpp"
#include "normalfan/harness.hpp"
#include "normalfan/serialize.hpp"
#include "test_support.hpp"

using namespace normalfan;
using testing_support::q;
using testing_support::vec;

namespace {

GenSpec spec(InstanceKind kind, std::size_t d, std::uint64_t seed, std::size_t n = 5) {
    GenSpec s;
    s.kind = kind;
    s.dim = d;
    s.seed = seed;
    s.n_constraints = n;
    return s;
}

bool same(const HPolyhedron& a, const HPolyhedron& b) {
    return a.ambient_dim() == b.ambient_dim() && a.A().row_vectors() == b.A().row_vectors() && a.b() == b.b();
}

} // namespace

TEST_CASE("instance kind names round-trip") {
    for (auto k : {InstanceKind::polytope, InstanceKind::cone, InstanceKind::line_free_unbounded,
                   InstanceKind::with_lineality})
        CHECK(parse_instance_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_instance_kind("simplex"), ParseError);
}

TEST_CASE("uniform_int stays in range and is reproducible") {
    std::mt19937_64 a(5), b(5);
    for (int i = 0; i < 500; ++i) {
        long x = uniform_int(a, -3, 4);
        CHECK(x >= -3);
        CHECK(x <= 4);
        CHECK(x == uniform_int(b, -3, 4));
    }
    std::mt19937_64 r(9);
    for (int i = 0; i < 200; ++i) {
        Rational x = uniform_rational(r, 2, 3);
        CHECK(abs(x) <= 2);
        CHECK(x.get_den() <= 3);
    }
}

TEST_CASE("same spec, same instance") {
    for (auto k : {InstanceKind::polytope, InstanceKind::cone, InstanceKind::line_free_unbounded})
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto s = spec(k, 3, seed);
            CHECK(same(gen_instance(s), gen_instance(s)));
        }
    CHECK_FALSE(same(gen_instance(spec(InstanceKind::polytope, 3, 1)), gen_instance(spec(InstanceKind::polytope, 3, 2))));
}

TEST_CASE("generated instances belong to their class") {
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        for (std::size_t d = 1; d <= 4; ++d) {
            CAPTURE(seed);
            CAPTURE(d);
            HPolyhedron P = gen_instance(spec(InstanceKind::polytope, d, seed));
            CHECK(is_bounded(P));
            CHECK(lineality_basis(P).dim() == 0);

            HPolyhedron C = gen_instance(spec(InstanceKind::cone, d, seed));
            CHECK(is_cone(C));
            CHECK(lineality_basis(C).dim() == 0);
            // a cone is its own recession cone
            CHECK(C.A().row_vectors() == recession_cone(C).A().row_vectors());

            HPolyhedron U = gen_instance(spec(InstanceKind::line_free_unbounded, d, seed));
            CHECK_FALSE(is_bounded(U));
            CHECK(lineality_basis(U).dim() == 0);
        }
}

TEST_CASE("with_lineality pads exactly k lines") {
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        for (std::size_t k = 1; k <= 2; ++k)
            for (auto base : {InstanceKind::polytope, InstanceKind::line_free_unbounded}) {
                GenSpec s = spec(InstanceKind::with_lineality, 3, seed, 4);
                s.lineality = k;
                s.base = base;
                HPolyhedron P = gen_instance(s);
                auto dec = decompose(P);
                CHECK(dec.U_basis.dim() == k);
                CHECK(dec.p0_bounded == (base == InstanceKind::polytope));
            }
}

TEST_CASE("unsatisfiable generator specs") {
    GenSpec s = spec(InstanceKind::line_free_unbounded, 3, 1, 2);  // two rows never reach rank 3
    CHECK_THROWS_AS(gen_instance(s), GenerationError);
    GenSpec t = spec(InstanceKind::with_lineality, 2, 1);
    t.lineality = 3;
    CHECK_THROWS_AS(gen_instance(t), GenerationError);
}

TEST_CASE("boundary_samples") {
    NormalFan sq(fixtures::unit_square());
    auto pts = boundary_samples(sq, 2, 3);
    // 8 proper-face witnesses, 2 samples for each of the 8 + 4 + 4 proper pairs
    CHECK(pts.size() == 8 + 2 * 16);
    for (const auto& x : pts)
        CHECK_FALSE(strata_at(sq, x).empty());

    NormalFan cone(fixtures::quadrant());
    auto cpts = boundary_samples(cone, 1, 0);
    CHECK(std::find(cpts.begin(), cpts.end(), vec({0, 0})) != cpts.end());

    CHECK(boundary_samples(NormalFan(fixtures::whole_plane()), 3, 0).empty());
    CHECK(boundary_samples(sq, 2, 3) == pts);
}

TEST_CASE("random_points and sample_window") {
    auto a = random_points(3, 40, 5, 11);
    CHECK(a.size() == 40);
    CHECK(a == random_points(3, 40, 5, 11));
    for (const auto& x : a)
        for (const auto& c : x) {
            CHECK(abs(c) <= 5);
            CHECK(c.get_den() <= 4);
        }
    CHECK(sample_window(NormalFan(fixtures::unit_square())) >= 3);
    CHECK(sample_window(NormalFan(fixtures::unit_cube())) == sample_window(NormalFan(fixtures::unit_square())));
}

TEST_CASE("oracle cells on named shapes") {
    NormalFan sq(fixtures::unit_square());
    auto cells = oracle_cell_hreps(sq.polyhedron(), sq.lattice());
    REQUIRE(cells.size() == 9);
    // left edge cell is [0, inf) x [0, 1]
    const auto& left = cells[*sq.lattice().find({1})].cell;
    CHECK(left.satisfies(vec({5, 1})));
    CHECK(left.satisfies(vec({0, 0})));
    CHECK_FALSE(left.satisfies(vec({-1, q(1, 2)})));
    CHECK_FALSE(left.satisfies(vec({3, q(3, 2)})));
    CHECK(oracle_phi(cells, sq.lattice(), vec({2, q(1, 2)})) == 1);
    CHECK(oracle_phi(fixtures::quadrant(), vec({1, 1})) == 0);
    CHECK(oracle_phi(fixtures::whole_plane(), vec({-4, 9})) == 1);
    // segment [0,1], F = {0}: N = (-inf, 0], so the cell {0} - N is {x >= 0}
    NormalFan seg(fixtures::segment());
    auto scells = oracle_cell_hreps(seg.polyhedron(), seg.lattice());
    const auto& zero = scells[*seg.lattice().find({1})].cell;
    CHECK(zero.satisfies(vec({7})));
    CHECK(zero.satisfies(vec({0})));
    CHECK_FALSE(zero.satisfies(vec({q(-1, 3)})));
}

TEST_CASE("json round trips") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        HPolyhedron P = gen_instance(spec(InstanceKind::polytope, 3, seed));
        CHECK(same(polyhedron_from_json(parse_json(to_json(P).dump())), P));
    }
    GenSpec s = spec(InstanceKind::with_lineality, 4, 77, 6);
    s.lineality = 2;
    s.base = InstanceKind::cone;
    GenSpec back = genspec_from_json(to_json(s));
    CHECK(back.seed == s.seed);
    CHECK(back.dim == s.dim);
    CHECK(back.n_constraints == s.n_constraints);
    CHECK(back.kind == s.kind);
    CHECK(back.lineality == s.lineality);
    CHECK(back.base == s.base);
    CHECK(to_json(q(-3, 6)) == "-1/2");
}

TEST_CASE("json input errors") {
    CHECK_THROWS_AS(parse_json("{\"d\": 2,"), ParseError);
    CHECK_THROWS_AS(polyhedron_from_json(parse_json(R"({"A": [], "b": []})")), ParseError);
    CHECK_THROWS_AS(polyhedron_from_json(parse_json(R"({"d": 2, "A": [[1]], "b": [0]})")), DimensionMismatch);
    CHECK_THROWS_AS(polyhedron_from_json(parse_json(R"({"d": 1, "A": [[1], [-1]], "b": [-1, 0]})")),
                    EmptyPolyhedron);
    CHECK_THROWS_AS(polyhedron_from_json(parse_json(R"({"d": 1, "A": [["x"]], "b": [0]})")), ParseError);
    CHECK(polyhedron_from_json(parse_json(R"({"d": 1, "A": [["1/2"]], "b": [3]})")).contains(vec({6})));
}

TEST_CASE("parse_point") {
    CHECK(parse_point("2,1/2") == vec({2, q(1, 2)}));
    CHECK(parse_point("-3") == vec({-3}));
    CHECK_THROWS_AS(parse_point(""), ParseError);
    CHECK_THROWS_AS(parse_point("1,"), ParseError);
    CHECK_THROWS_AS(parse_point("1,,2"), ParseError);
    CHECK_THROWS_AS(parse_point("1/0"), ParseError);
}
