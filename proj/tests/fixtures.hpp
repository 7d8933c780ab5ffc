#pragma once

// Small named polyhedra shared by the unit tests.

#include "normalfan/polyhedron.hpp"
#include "test_support.hpp"

#include <vector>

namespace fixtures {

using normalfan::HPolyhedron;
using normalfan::RMatrix;
using normalfan::RVector;

inline RVector ints(const std::vector<long>& xs) {
    RVector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

inline HPolyhedron poly(std::size_t d, std::vector<std::vector<long>> rows, std::vector<long> rhs) {
    std::vector<RVector> r;
    for (const auto& row : rows)
        r.push_back(ints(row));
    return normalfan::make_polyhedron(RMatrix::from_rows(r, d), ints(rhs));
}

// rows: x1 <= 1, -x1 <= 0, x2 <= 1, -x2 <= 0
inline HPolyhedron unit_square() { return poly(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {1, 0, 1, 0}); }

inline HPolyhedron unit_cube() {
    return poly(3, {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}, {1, 0, 1, 0, 1, 0});
}

inline HPolyhedron quadrant() { return poly(2, {{-1, 0}, {0, -1}}, {0, 0}); }
inline HPolyhedron half_line() { return poly(1, {{-1}}, {0}); }
inline HPolyhedron half_plane() { return poly(2, {{0, 1}}, {0}); }
// {x2 = 0} in R^2 as two inequalities
inline HPolyhedron line() { return poly(2, {{0, 1}, {0, -1}}, {0, 0}); }
inline HPolyhedron whole_plane() { return normalfan::make_polyhedron(RMatrix(0, 2), RVector{}); }
inline HPolyhedron segment() { return poly(1, {{1}, {-1}}, {1, 0}); }

} // namespace fixtures
