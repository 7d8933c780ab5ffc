#pragma once

// Exact linear feasibility and optimization over the rationals.
//
// Every answer carries a certificate that is re-checked before it is
// returned: a feasible witness, an improving ray, or a Farkas multiplier
// vector proving infeasibility.

#include "normalfan/exactmath.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace normalfan {

/// <normal, x> (<= or =) rhs
struct Constraint {
    RVector normal;
    Rational rhs;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Inequalities <a_i, x> <= b_i and equalities <c_j, x> = e_j in R^dim.
///
/// Rows with a zero normal are folded at insertion: trivially true rows are
/// dropped, contradictory ones are kept and mark the system infeasible.
class LinearSystem {
public:
    explicit LinearSystem(std::size_t dim = 0) : dim_(dim) {}

    void add_inequality(RVector normal, Rational rhs);
    void add_equality(RVector normal, Rational rhs);

    std::size_t dim() const { return dim_; }
    const std::vector<Constraint>& inequalities() const { return ineqs_; }
    const std::vector<Constraint>& equalities() const { return eqs_; }
    bool trivially_infeasible() const { return trivially_infeasible_; }

    bool satisfies(const RVector& x) const;

private:
    std::size_t dim_;
    std::vector<Constraint> ineqs_;
    std::vector<Constraint> eqs_;
    bool trivially_infeasible_ = false;
};

enum class LPStatus { optimal, unbounded, infeasible };

/// y >= 0 on inequalities, z free on equalities, with
/// y^T A + z^T E = 0 and y^T b + z^T e < 0.
struct FarkasCertificate {
    RVector ineq_multipliers;
    RVector eq_multipliers;
};

struct LPOutcome {
    LPStatus status = LPStatus::infeasible;
    std::optional<RVector> witness;
    std::optional<Rational> value;
    std::optional<RVector> ray;
    std::optional<FarkasCertificate> farkas;
};

bool check_farkas(const LinearSystem& s, const FarkasCertificate& cert);

/// Phase-1 simplex only: a feasible point or a Farkas certificate.
LPOutcome feasible(const LinearSystem& s);
/// max <c, x> over s, Bland's rule throughout.
LPOutcome optimize(const RVector& c, const LinearSystem& s);

/// Implicit-equality rows together with a relative-interior point.
struct SystemAnalysis {
    std::vector<std::size_t> implicit;  // sorted inequality indices
    RVector relint_point;
};

/// nullopt iff s is infeasible.
std::optional<SystemAnalysis> analyze(const LinearSystem& s);

/// Inequality rows that hold with equality on the whole solution set.
/// Throws InconsistentSystem if s is infeasible.
std::vector<std::size_t> implicit_equalities(const LinearSystem& s);

/// A point with implicit rows tight and every other inequality strict,
/// found by maximizing a common slack t <= 1. nullopt iff s is infeasible.
std::optional<RVector> strict_interior(const LinearSystem& s);

bool relint_contains(const LinearSystem& s, const RVector& x);

/// Fourier-Motzkin projection onto the coordinates not in `drop`
/// (kept coordinates retain their relative order). Equalities are used for
/// substitution whenever one involves the variable being removed.
LinearSystem fm_eliminate(const LinearSystem& s, const std::vector<std::size_t>& drop);

/// Fixes the first values.size() variables, returning a system in the rest.
LinearSystem fix_leading_variables(const LinearSystem& s, const RVector& values);

} // namespace normalfan
