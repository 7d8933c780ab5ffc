#pragma once

// Seeded instance generation and brute-force oracles for differential tests.

#include "normalfan/identity.hpp"
#include "normalfan/polyhedron.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace normalfan {

enum class InstanceKind { polytope, cone, line_free_unbounded, with_lineality };

std::string to_string(InstanceKind k);
/// Accepts the names printed by to_string; throws ParseError otherwise.
InstanceKind parse_instance_kind(const std::string& name);

struct GenSpec {
    std::uint64_t seed = 0;
    std::size_t dim = 2;
    /// Random rows drawn. Polytopes get the box [-B,B]^d on top when the
    /// random rows alone leave them unbounded.
    std::size_t n_constraints = 4;
    InstanceKind kind = InstanceKind::polytope;
    /// with_lineality only: dim U_P and the kind of the line-free part
    std::size_t lineality = 0;
    InstanceKind base = InstanceKind::polytope;
    int coefficient_bound = 8;
};

/// Same spec, same instance. Throws GenerationError after 100 rejected draws.
HPolyhedron gen_instance(const GenSpec& spec);

/// Integer in [lo, hi] from the raw generator output; stable across standard libraries.
long uniform_int(std::mt19937_64& rng, long lo, long hi);
/// p/q with |p/q| <= bound and 1 <= q <= max_den.
Rational uniform_rational(std::mt19937_64& rng, long bound, long max_den);

/// Points g - v with g a relint point of G and v a strictly positive
/// combination of N(P,H)'s generators plus a lineality shift, `count` per
/// pair G within H, G != H; the witnesses of the proper faces are included
/// too. Empty when P is an affine subspace.
std::vector<RVector> boundary_samples(const NormalFan& fan, std::size_t count, std::uint64_t seed);

/// Uniform rationals in [-window, window]^d with denominators up to 4.
std::vector<RVector> random_points(std::size_t d, std::size_t count, long window, std::uint64_t seed);
/// Half-width of a box holding every face witness, plus a margin of 2.
long sample_window(const NormalFan& fan);

struct CellHRep {
    std::size_t face = 0;
    LinearSystem cell;  // over R^d
};

/// Explicit H-rep of every cell F - N(P,F), by eliminating the auxiliary
/// variables of cell_system with Fourier-Motzkin.
std::vector<CellHRep> oracle_cell_hreps(const HPolyhedron& P, const FaceLattice& lattice);
int oracle_phi(const std::vector<CellHRep>& cells, const FaceLattice& lattice, const RVector& x);
int oracle_phi(const HPolyhedron& P, const RVector& x);

} // namespace normalfan
