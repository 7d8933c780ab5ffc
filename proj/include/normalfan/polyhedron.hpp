#pragma once

// H-polyhedra {x : Ax <= b}, their face lattices, normal cones and the
// lineality decomposition P = P0 + U_P.
//
// Row indices are stable: the active set of a face refers to rows of A as
// stored in the HPolyhedron (zero rows are removed at construction).

#include "normalfan/exactmath.hpp"
#include "normalfan/lp.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace normalfan {

class HPolyhedron {
public:
    HPolyhedron() = default;

    std::size_t ambient_dim() const { return d_; }
    std::size_t num_rows() const { return A_.rows(); }
    const RMatrix& A() const { return A_; }
    const RVector& b() const { return b_; }
    RVector row(std::size_t i) const { return A_.row_vector(i); }
    const LinearSystem& system() const { return system_; }

    /// Rows tight on all of P, sorted.
    const std::vector<std::size_t>& implicit_rows() const { return implicit_; }
    bool is_implicit(std::size_t i) const { return implicit_mask_[i]; }
    std::size_t dim() const { return dim_; }
    /// kernel of A
    const SubspaceBasis& lineality() const { return lineality_; }
    const RVector& relint_point() const { return relint_; }

    bool contains(const RVector& x) const;
    Rational slack(std::size_t i, const RVector& x) const { return b_[i] - dot(A_.row(i), x); }

private:
    friend HPolyhedron make_polyhedron(const RMatrix& A, const RVector& b);

    std::size_t d_ = 0;
    RMatrix A_;
    RVector b_;
    LinearSystem system_;
    std::vector<std::size_t> implicit_;
    std::vector<bool> implicit_mask_;
    std::size_t dim_ = 0;
    SubspaceBasis lineality_;
    RVector relint_;
};

/// Throws DimensionMismatch if rows of A and entries of b disagree, and
/// EmptyPolyhedron if the system has no solution.
HPolyhedron make_polyhedron(const RMatrix& A, const RVector& b);
/// Equalities Eq x = e are appended as inequality pairs after the rows of A.
HPolyhedron make_polyhedron(const RMatrix& A, const RVector& b, const RMatrix& Eq, const RVector& e);

struct Face {
    std::vector<std::size_t> active;  // sorted; closed under implied tightness
    std::size_t dim = 0;
    RVector witness;                  // relative-interior point
    bool is_whole = false;
};

/// All nonempty faces, sorted by (dim, active set). A face's id is its index.
class FaceLattice {
public:
    FaceLattice() = default;
    explicit FaceLattice(std::vector<Face> faces);

    std::size_t size() const { return faces_.size(); }
    const Face& operator[](std::size_t id) const { return faces_[id]; }
    const std::vector<Face>& faces() const { return faces_; }
    std::size_t whole() const { return whole_; }

    std::optional<std::size_t> find(const std::vector<std::size_t>& active) const;
    /// G is a subface of H (I_H within I_G).
    bool is_subface(std::size_t g, std::size_t h) const;

private:
    std::vector<Face> faces_;
    std::size_t whole_ = 0;
};

/// Breadth-first from P: tighten one more row, close the active set under
/// implied equalities, deduplicate.
FaceLattice enumerate_faces(const HPolyhedron& P);

/// Faces F with G within F within H, as sorted ids. Throws NotComparable.
std::vector<std::size_t> face_interval(const FaceLattice& lattice, std::size_t g, std::size_t h);

/// pos(generators) + span(lineality)
struct VCone {
    std::size_t ambient_dim = 0;
    std::vector<RVector> generators;
    SubspaceBasis lineality;
};

VCone normal_cone(const HPolyhedron& P, const Face& F);
bool cone_contains(const VCone& C, const RVector& v);
/// v is a strictly positive combination of the generators plus a lineality vector.
bool cone_relint_contains(const VCone& C, const RVector& v);
HPolyhedron polar_cone(const VCone& C);
bool cone_is_subspace(const VCone& C);

SubspaceBasis lineality_basis(const HPolyhedron& P);
HPolyhedron recession_cone(const HPolyhedron& P);
bool is_bounded(const HPolyhedron& P);

struct LinealityDecomposition {
    SubspaceBasis U_basis;
    HPolyhedron P0;  // P intersected with the orthogonal complement of U_P
    bool p0_bounded = false;
    int predicted_phi = 0;
};

LinealityDecomposition decompose(const HPolyhedron& P);

/// Membership system for the cell F - N(P,F). Variables are ordered
/// (f, lambda, mu): f in F, lambda >= 0 per generator, mu per lineality
/// vector, with f - sum lambda_i u_i - sum mu_j w_j = x.
struct CellSystem {
    std::size_t d = 0;
    VCone cone;
    LinearSystem base;  // rows on (f, lambda, mu) without the coupling equalities

    /// The system with the query point substituted.
    LinearSystem at(const RVector& x) const;
    /// The same constraints over (x, f, lambda, mu) with x free; eliminating
    /// everything past the first d coordinates yields an H-rep of the cell.
    LinearSystem joint() const;
};

CellSystem cell_system(const HPolyhedron& P, const Face& F);

} // namespace normalfan
