#pragma once

// Evaluation of phi_P = sum_F (-1)^{dim F} 1[F - N(P,F)] and the checks built
// around it: strata, intervals, localization cones, the Psi map.
//
// Membership tests use the fact that every normal cone N(P,F) lies in the
// orthogonal complement of L(F). So x = f - u with f in aff F forces f to be
// the orthogonal projection of x onto aff F, and each test reduces to one
// projection plus a cone-membership test on f - x. When the cone generators
// are linearly independent the coefficients are unique and the cone test is
// a sign check; otherwise it falls back to an LP.

#include "normalfan/errors.hpp"
#include "normalfan/polyhedron.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace normalfan {

/// A polyhedron with its face lattice and per-face projection/cone data.
class NormalFan {
public:
    NormalFan() = default;
    explicit NormalFan(HPolyhedron P);
    NormalFan(HPolyhedron P, FaceLattice lattice);

    const HPolyhedron& polyhedron() const { return P_; }
    const FaceLattice& lattice() const { return lattice_; }
    std::size_t size() const { return lattice_.size(); }
    std::size_t ambient_dim() const { return P_.ambient_dim(); }
    const Face& face(std::size_t f) const { return lattice_[f]; }
    const VCone& cone(std::size_t f) const { return data_[f].cone; }

    /// Orthogonal projection onto aff F.
    RVector project(std::size_t f, const RVector& x) const;
    /// y in aff F; checks the remaining rows (strictly for the relint).
    bool face_contains(std::size_t f, const RVector& y) const;
    bool face_relint_contains(std::size_t f, const RVector& y) const;
    bool cone_contains(std::size_t f, const RVector& v) const;
    bool cone_relint_contains(std::size_t f, const RVector& v) const;

private:
    struct FaceData {
        VCone cone;
        AffineProjector projector;
        std::vector<bool> active_mask;
        // rows: generators then lineality; set when they are independent
        bool unique_coefficients = false;
        RMatrix stacked;
        RMatrix solver;  // (C C^T)^{-1} C
    };

    void prepare();
    std::optional<RVector> coefficients(std::size_t f, const RVector& v) const;

    HPolyhedron P_;
    FaceLattice lattice_;
    std::vector<FaceData> data_;
};

void check_dimension(const NormalFan& fan, const RVector& x);

/// x in F - N(P,F)
bool cell_contains(const NormalFan& fan, std::size_t f, const RVector& x);
/// The same predicate by one LP on cell_system(P,F).
bool cell_contains_lp(const HPolyhedron& P, const Face& F, const RVector& x);
/// x in relint F - relint N(P,F)
bool open_cell_contains(const NormalFan& fan, std::size_t f, const RVector& x);

struct PhiTerm {
    std::size_t face = 0;
    std::size_t dim = 0;
    bool member = false;
};

struct PhiReport {
    RVector point;
    int phi = 0;
    std::vector<PhiTerm> terms;
};

PhiReport phi_at(const NormalFan& fan, const RVector& x);
PhiReport phi_at(const HPolyhedron& P, const RVector& x);

/// sum_F (-1)^{dim F} over the faces of a cone. Throws NotACone.
int euler_sum(const NormalFan& fan);
bool is_cone(const HPolyhedron& P);

struct CoverWitness {
    std::size_t face = 0;
    RVector x;  // in relint F
    RVector u;  // in N(P,F), y = x + u
};

/// The unique face with y in relint F + N(P,F). Throws CoverViolation if
/// zero or several faces match.
CoverWitness covering_witness(const NormalFan& fan, const RVector& y);
RVector project_onto(const NormalFan& fan, const RVector& y);
/// x - u where y = x + u is the covering split; the identity on P.
RVector psi(const NormalFan& fan, const RVector& y);
/// Sum of (-1)^{d - dim F} over open cells containing z, or nullopt when z
/// lies on the boundary of some cell.
std::optional<int> degree_at(const NormalFan& fan, const RVector& z);

struct Stratum {
    std::size_t g = 0;
    std::size_t h = 0;
    friend bool operator==(const Stratum&, const Stratum&) = default;
};

/// x in relint G - relint N(P,H)
bool in_stratum(const NormalFan& fan, std::size_t g, std::size_t h, const RVector& x);
/// The same predicate from one strict-feasibility LP over (g, lambda, mu).
bool in_stratum_lp(const HPolyhedron& P, const Face& G, const Face& H, const RVector& x);
/// All pairs G within H, G != H, containing x. Sorted by (g, h).
std::vector<Stratum> strata_at(const NormalFan& fan, const RVector& x);

/// Partial sum of phi over the faces between G and H. Throws NotComparable.
int interval_phi(const NormalFan& fan, std::size_t g, std::size_t h, const RVector& y);
bool check_interval_disjoint(const NormalFan& fan, const RVector& x);
bool check_interval_disjoint(const NormalFan& fan, const std::vector<Stratum>& strata);
/// phi(y) equals the strata interval sums at x plus the remaining faces.
bool split_identity_check(const NormalFan& fan, const RVector& x, const RVector& y);
/// The same with strata_at(x) already computed.
bool split_identity_check(const NormalFan& fan, const std::vector<Stratum>& strata, const RVector& y);

/// Localization of P around G inside H. H* lives in the ambient space:
/// it is the cone cut out by rows j in I_G \ I_H with zero right-hand side,
/// intersected with L(H) and the orthogonal complement of L(G), both written
/// as inequality pairs.
struct LocalCone {
    std::size_t g = 0;
    std::size_t h = 0;
    RVector base_point;  // x1, a relint point of G
    SubspaceBasis L3;
    NormalFan star;      // H* with its lattice
    /// origin of each H* row: a row of P, or -1 for the subspace equalities
    std::vector<long> row_origin;
    /// (F, F*) for every F between G and H
    std::vector<std::pair<std::size_t, std::size_t>> face_map;

    std::size_t star_of(std::size_t f) const;
};

LocalCone localize(const NormalFan& fan, std::size_t g, std::size_t h);

/// Checks the localization equivalence for one stratum at one point:
/// for w in L3 inside the safe radius and every F between G and H,
///   x + w in F - N(P,F)  iff  w in F* - N(H*,F*),
/// and interval_phi(x + w) = (-1)^{dim G} phi_{H*}(w).
class Lemma2Checker {
public:
    /// Throws StratumMismatch if x is not in the stratum (G,H).
    Lemma2Checker(const NormalFan& fan, std::size_t g, std::size_t h, const RVector& x);
    Lemma2Checker(const NormalFan& fan, LocalCone local, const RVector& x);

    const LocalCone& local() const { return local_; }
    /// Squared radius below which the equivalence is guaranteed; nullopt if unbounded.
    const std::optional<Rational>& safe_radius_sq() const { return radius_sq_; }
    /// A power of 1/2 with 4 eps^2 <= safe radius squared.
    const Rational& eps() const { return eps_; }

    /// Throws StratumMismatch if w is outside L3 or longer than eps.
    bool check(const RVector& w, const Rational& eps) const;
    bool check(const RVector& w) const { return check(w, eps_); }
    /// Random w in L3 with |w|_1 <= eps.
    std::vector<RVector> sample(std::size_t count, std::uint64_t seed) const;

private:
    void init(const NormalFan& fan, const RVector& x);

    const NormalFan* fan_;
    LocalCone local_;
    RVector x_;
    std::optional<Rational> radius_sq_;
    Rational eps_;
};

bool lemma2_check(const NormalFan& fan, std::size_t g, std::size_t h, const RVector& x, const RVector& w,
                  const Rational& eps);

struct VerifyOptions {
    std::size_t random_samples = 50;
    std::uint64_t seed = 0;
    std::size_t boundary_per_pair = 2;
    bool throw_on_violation = false;
};

struct Violation {
    RVector point;
    PhiReport report;
};

struct VerifyReport {
    int predicted = 0;
    std::size_t samples = 0;
    std::size_t boundary_samples = 0;
    std::vector<Violation> violations;
};

class TheoremViolation : public Error {
public:
    explicit TheoremViolation(Violation v)
        : Error("phi differs from its predicted value at " + to_string(v.point)), violation(std::move(v)) {}
    Violation violation;
};

/// Evaluates phi on face witnesses and the origin, on random points of a
/// window around P, and on constructed boundary-stratum points; every value
/// must equal the constant predicted by the lineality decomposition.
VerifyReport verify_theorem(const NormalFan& fan, const VerifyOptions& options);

} // namespace normalfan
