#include "normalfan/lp.hpp"

#include "normalfan/errors.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace normalfan {

void LinearSystem::add_inequality(RVector normal, Rational rhs) {
    if (normal.size() != dim_)
        throw DimensionMismatch("inequality has " + std::to_string(normal.size()) + " coefficients, expected " +
                                std::to_string(dim_));
    if (is_zero(normal)) {
        if (sgn(rhs) >= 0)
            return;
        trivially_infeasible_ = true;
    }
    ineqs_.push_back({std::move(normal), std::move(rhs)});
}

void LinearSystem::add_equality(RVector normal, Rational rhs) {
    if (normal.size() != dim_)
        throw DimensionMismatch("equality has " + std::to_string(normal.size()) + " coefficients, expected " +
                                std::to_string(dim_));
    if (is_zero(normal)) {
        if (sgn(rhs) == 0)
            return;
        trivially_infeasible_ = true;
    }
    eqs_.push_back({std::move(normal), std::move(rhs)});
}

bool LinearSystem::satisfies(const RVector& x) const {
    if (x.size() != dim_)
        throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, expected " +
                                std::to_string(dim_));
    for (const auto& c : ineqs_)
        if (dot(c.normal, x) > c.rhs)
            return false;
    for (const auto& c : eqs_)
        if (dot(c.normal, x) != c.rhs)
            return false;
    return true;
}

bool check_farkas(const LinearSystem& s, const FarkasCertificate& cert) {
    const auto& ineqs = s.inequalities();
    const auto& eqs = s.equalities();
    if (cert.ineq_multipliers.size() != ineqs.size() || cert.eq_multipliers.size() != eqs.size())
        return false;
    RVector combo = zeros(s.dim());
    Rational rhs = 0;
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
        if (sgn(cert.ineq_multipliers[i]) < 0)
            return false;
        axpy(combo, cert.ineq_multipliers[i], ineqs[i].normal);
        rhs += cert.ineq_multipliers[i] * ineqs[i].rhs;
    }
    for (std::size_t j = 0; j < eqs.size(); ++j) {
        axpy(combo, cert.eq_multipliers[j], eqs[j].normal);
        rhs += cert.eq_multipliers[j] * eqs[j].rhs;
    }
    return is_zero(combo) && sgn(rhs) < 0;
}

namespace {

// x = origin + sum_j z_j * directions[j] parametrizes the equality flat.
struct EqualityReduction {
    RVector origin;
    std::vector<RVector> directions;
};

// Returns nullopt and fills `certificate` (z with z^T E = 0, z^T e < 0)
// when the equalities are inconsistent.
std::optional<EqualityReduction> reduce_equalities(const LinearSystem& s, RVector& certificate) {
    const std::size_t d = s.dim();
    const auto& eqs = s.equalities();
    EqualityReduction red;
    if (eqs.empty()) {
        red.origin = zeros(d);
        for (std::size_t i = 0; i < d; ++i)
            red.directions.push_back(unit_vector(d, i));
        return red;
    }
    const std::size_t q = eqs.size();
    RMatrix aug(q, d + 1 + q);
    for (std::size_t r = 0; r < q; ++r) {
        for (std::size_t c = 0; c < d; ++c)
            aug(r, c) = eqs[r].normal[c];
        aug(r, d) = eqs[r].rhs;
        aug(r, d + 1 + r) = 1;
    }
    Echelon e = row_reduce(std::move(aug));
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) {
        if (e.pivot_cols[i] == d) {
            certificate.assign(q, Rational(0));
            for (std::size_t r = 0; r < q; ++r)
                certificate[r] = -e.reduced(i, d + 1 + r);
            return std::nullopt;
        }
    }
    std::vector<std::size_t> pivots;
    for (auto c : e.pivot_cols)
        if (c < d)
            pivots.push_back(c);
    std::vector<bool> is_pivot(d, false);
    red.origin = zeros(d);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        is_pivot[pivots[i]] = true;
        red.origin[pivots[i]] = e.reduced(i, d);
    }
    for (std::size_t f = 0; f < d; ++f) {
        if (is_pivot[f])
            continue;
        RVector v = zeros(d);
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -e.reduced(i, f);
        red.directions.push_back(std::move(v));
    }
    return red;
}

// Dense tableau for  max c^T w  s.t.  D w = h, w >= 0, with the objective
// row stored as reduced costs (z_j - c_j) and the current value last.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : cols_(cols), allowed_(cols), t_(rows, RVector(cols + 1, Rational(0))), basis_(rows, 0),
          obj_(cols + 1, Rational(0)) {}

    std::size_t rows() const { return t_.size(); }
    Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return t_[r][c]; }
    Rational& rhs(std::size_t r) { return t_[r][cols_]; }
    const Rational& rhs(std::size_t r) const { return t_[r][cols_]; }
    std::size_t& basic(std::size_t r) { return basis_[r]; }
    std::size_t basic(std::size_t r) const { return basis_[r]; }
    const Rational& reduced_cost(std::size_t c) const { return obj_[c]; }
    const Rational& value() const { return obj_[cols_]; }
    void restrict_entering(std::size_t allowed) { allowed_ = allowed; }

    void set_objective(const RVector& c) {
        cost_ = c;
        for (std::size_t j = 0; j <= cols_; ++j) {
            Rational z = 0;
            for (std::size_t r = 0; r < rows(); ++r)
                if (sgn(cost_[basis_[r]]) != 0 && sgn(t_[r][j]) != 0)
                    z += cost_[basis_[r]] * t_[r][j];
            obj_[j] = j < cols_ ? z - cost_[j] : z;
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        std::vector<std::size_t> nz;
        Rational inv = 1 / t_[r][c];
        for (std::size_t j = 0; j <= cols_; ++j)
            if (sgn(t_[r][j]) != 0) {
                t_[r][j] *= inv;
                nz.push_back(j);
            }
        Rational f;
        auto eliminate = [&](RVector& row) {
            if (sgn(row[c]) == 0)
                return;
            f = row[c];
            for (auto j : nz)
                row[j] -= f * t_[r][j];
        };
        for (std::size_t i = 0; i < rows(); ++i)
            if (i != r)
                eliminate(t_[i]);
        eliminate(obj_);
        basis_[r] = c;
    }

    // Bland's rule. Returns the unbounded column, or nullopt at optimality.
    std::optional<std::size_t> run() {
        for (;;) {
            std::size_t enter = allowed_;
            for (std::size_t j = 0; j < allowed_; ++j)
                if (sgn(obj_[j]) < 0) {
                    enter = j;
                    break;
                }
            if (enter == allowed_)
                return std::nullopt;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t i = 0; i < rows(); ++i) {
                if (sgn(t_[i][enter]) <= 0)
                    continue;
                Rational ratio = t_[i][cols_] / t_[i][enter];
                if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave)
                return enter;
            pivot(*leave, enter);
        }
    }

    void erase_row(std::size_t r) {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

    RVector basic_solution() const {
        RVector w = zeros(cols_);
        for (std::size_t r = 0; r < rows(); ++r)
            w[basis_[r]] = t_[r][cols_];
        return w;
    }

private:
    std::size_t cols_;
    std::size_t allowed_;
    std::vector<RVector> t_;
    std::vector<std::size_t> basis_;
    RVector obj_;
    RVector cost_;
};

[[noreturn]] void certification_failure(const char* what) {
    throw std::logic_error(std::string("LP certificate check failed: ") + what);
}

LPOutcome infeasible_outcome(const LinearSystem& s, FarkasCertificate cert) {
    if (!check_farkas(s, cert))
        certification_failure("Farkas certificate");
    LPOutcome out;
    out.status = LPStatus::infeasible;
    out.farkas = std::move(cert);
    return out;
}

LPOutcome solve(const LinearSystem& s, const RVector* objective) {
    const std::size_t d = s.dim();
    const auto& ineqs = s.inequalities();
    const auto& eqs = s.equalities();
    const std::size_t m = ineqs.size();

    if (s.trivially_infeasible()) {
        FarkasCertificate cert{zeros(m), zeros(eqs.size())};
        for (std::size_t i = 0; i < m; ++i)
            if (is_zero(ineqs[i].normal) && sgn(ineqs[i].rhs) < 0) {
                cert.ineq_multipliers[i] = 1;
                return infeasible_outcome(s, std::move(cert));
            }
        for (std::size_t j = 0; j < eqs.size(); ++j)
            if (is_zero(eqs[j].normal) && sgn(eqs[j].rhs) != 0) {
                cert.eq_multipliers[j] = sgn(eqs[j].rhs) > 0 ? -1 : 1;
                return infeasible_outcome(s, std::move(cert));
            }
    }

    RVector eq_cert;
    auto red = reduce_equalities(s, eq_cert);
    if (!red)
        return infeasible_outcome(s, {zeros(m), std::move(eq_cert)});

    const std::size_t k = red->directions.size();
    const bool plain = eqs.empty();
    // Reduced inequalities A' z <= b' with A' = A N and b' = b - A x0.
    std::vector<RVector> a_red(m, RVector(k));
    RVector b_red(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (plain) {
            a_red[i] = ineqs[i].normal;
            b_red[i] = ineqs[i].rhs;
        } else {
            for (std::size_t j = 0; j < k; ++j)
                a_red[i][j] = dot(ineqs[i].normal, red->directions[j]);
            b_red[i] = ineqs[i].rhs - dot(ineqs[i].normal, red->origin);
        }
    }

    // Columns: z+ [0,k), z- [k,2k), slack [2k,2k+m), artificial after.
    std::vector<std::size_t> flipped;
    for (std::size_t i = 0; i < m; ++i)
        if (sgn(b_red[i]) < 0)
            flipped.push_back(i);
    const std::size_t real_cols = 2 * k + m;
    const std::size_t cols = real_cols + flipped.size();
    Tableau tab(m, cols);
    std::vector<std::size_t> initial_col(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = sgn(b_red[i]) < 0;
        const int sign = flip ? -1 : 1;
        for (std::size_t j = 0; j < k; ++j) {
            if (sgn(a_red[i][j]) == 0)
                continue;
            tab.at(i, j) = sign * a_red[i][j];
            tab.at(i, k + j) = -sign * a_red[i][j];
        }
        tab.at(i, 2 * k + i) = sign;
        tab.rhs(i) = sign * b_red[i];
        initial_col[i] = 2 * k + i;
    }
    for (std::size_t a = 0; a < flipped.size(); ++a) {
        tab.at(flipped[a], real_cols + a) = 1;
        initial_col[flipped[a]] = real_cols + a;
    }
    for (std::size_t i = 0; i < m; ++i)
        tab.basic(i) = initial_col[i];

    if (!flipped.empty()) {
        RVector phase1 = zeros(cols);
        for (std::size_t a = 0; a < flipped.size(); ++a)
            phase1[real_cols + a] = -1;
        tab.set_objective(phase1);
        tab.run();
        if (sgn(tab.value()) < 0) {
            // y_i = reduced cost + cost of the initial basic column; q = sign * y.
            RVector q(m);
            for (std::size_t i = 0; i < m; ++i) {
                Rational y = tab.reduced_cost(initial_col[i]) + phase1[initial_col[i]];
                q[i] = sgn(b_red[i]) < 0 ? Rational(-y) : y;
            }
            FarkasCertificate cert{q, zeros(eqs.size())};
            if (!plain) {
                // Move A^T q into the equality row space: E^T w = A^T q, z = -w.
                RVector atq = zeros(d);
                for (std::size_t i = 0; i < m; ++i)
                    axpy(atq, q[i], ineqs[i].normal);
                std::vector<RVector> eq_rows;
                for (const auto& e : eqs)
                    eq_rows.push_back(e.normal);
                auto w = solve_affine(RMatrix::from_rows(eq_rows, d).transpose(), atq);
                if (!w)
                    certification_failure("equality lift");
                for (std::size_t j = 0; j < eqs.size(); ++j)
                    cert.eq_multipliers[j] = -(*w)[j];
            }
            return infeasible_outcome(s, std::move(cert));
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        for (std::size_t r = tab.rows(); r-- > 0;) {
            if (tab.basic(r) < real_cols)
                continue;
            std::size_t j = 0;
            while (j < real_cols && sgn(tab.at(r, j)) == 0)
                ++j;
            if (j < real_cols)
                tab.pivot(r, j);
            else
                tab.erase_row(r);
        }
        tab.restrict_entering(real_cols);
    }

    LPOutcome out;
    auto to_point = [&](const RVector& w, bool with_origin) {
        RVector x = with_origin ? red->origin : zeros(d);
        for (std::size_t j = 0; j < k; ++j) {
            Rational z = w[j] - w[k + j];
            if (sgn(z) != 0)
                axpy(x, z, red->directions[j]);
        }
        return x;
    };

    if (objective) {
        RVector cost = zeros(cols);
        for (std::size_t j = 0; j < k; ++j) {
            Rational cj = dot(*objective, red->directions[j]);
            cost[j] = cj;
            cost[k + j] = -cj;
        }
        tab.set_objective(cost);
        if (auto col = tab.run()) {
            RVector dir = zeros(cols);
            dir[*col] = 1;
            for (std::size_t r = 0; r < tab.rows(); ++r)
                dir[tab.basic(r)] = -tab.at(r, *col);
            RVector ray = to_point(dir, false);
            out.status = LPStatus::unbounded;
            out.witness = to_point(tab.basic_solution(), true);
            for (const auto& c : ineqs)
                if (sgn(dot(c.normal, ray)) > 0)
                    certification_failure("unbounded ray leaves the feasible set");
            for (const auto& c : eqs)
                if (sgn(dot(c.normal, ray)) != 0)
                    certification_failure("unbounded ray violates an equality");
            if (sgn(dot(*objective, ray)) <= 0)
                certification_failure("unbounded ray does not improve");
            out.ray = std::move(ray);
        } else {
            out.status = LPStatus::optimal;
            out.witness = to_point(tab.basic_solution(), true);
            out.value = dot(*objective, *out.witness);
        }
    } else {
        out.status = LPStatus::optimal;
        out.witness = to_point(tab.basic_solution(), true);
    }
    if (!s.satisfies(*out.witness))
        certification_failure("witness infeasible");
    return out;
}

LinearSystem slack_system(const LinearSystem& s, const std::vector<int>& state, bool per_row_slack,
                          std::vector<std::size_t>& slack_rows) {
    // state: 0 unknown, 1 implicit, 2 known strict-feasible
    const std::size_t d = s.dim();
    const auto& ineqs = s.inequalities();
    slack_rows.clear();
    for (std::size_t i = 0; i < ineqs.size(); ++i)
        if (per_row_slack ? state[i] == 0 : state[i] != 1)
            slack_rows.push_back(i);
    const std::size_t extra = per_row_slack ? slack_rows.size() : 1;
    LinearSystem out(d + extra);
    auto widen = [&](const RVector& v) {
        RVector w = v;
        w.resize(d + extra, Rational(0));
        return w;
    };
    std::size_t next = 0;
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
        RVector n = widen(ineqs[i].normal);
        if (state[i] == 1) {
            out.add_equality(std::move(n), ineqs[i].rhs);
        } else if (next < slack_rows.size() && slack_rows[next] == i) {
            n[d + (per_row_slack ? next : 0)] = 1;
            out.add_inequality(std::move(n), ineqs[i].rhs);
            ++next;
        } else {
            out.add_inequality(std::move(n), ineqs[i].rhs);
        }
    }
    for (std::size_t t = 0; t < extra; ++t) {
        out.add_inequality(unit_vector(d + extra, d + t), 1);
        if (per_row_slack)
            out.add_inequality(scale(unit_vector(d + extra, d + t), -1), 0);
    }
    for (const auto& e : s.equalities())
        out.add_equality(widen(e.normal), e.rhs);
    return out;
}

} // namespace

LPOutcome feasible(const LinearSystem& s) { return solve(s, nullptr); }

LPOutcome optimize(const RVector& c, const LinearSystem& s) {
    if (c.size() != s.dim())
        throw DimensionMismatch("objective has " + std::to_string(c.size()) + " coefficients, expected " +
                                std::to_string(s.dim()));
    return solve(s, &c);
}

std::optional<SystemAnalysis> analyze(const LinearSystem& s) {
    const std::size_t d = s.dim();
    const std::size_t m = s.inequalities().size();
    std::vector<int> state(m, 0);
    std::vector<std::size_t> slack_rows;

    auto common_slack = [&]() {
        LinearSystem aux = slack_system(s, state, false, slack_rows);
        return optimize(unit_vector(d + 1, d), aux);
    };

    LPOutcome first = common_slack();
    if (first.status == LPStatus::infeasible)
        return std::nullopt;
    assert(first.status == LPStatus::optimal);
    // t may go negative when the inequalities conflict.
    if (m > 0 && sgn(*first.value) < 0)
        return std::nullopt;
    if (sgn(*first.value) > 0 || m == 0) {
        SystemAnalysis a;
        a.relint_point.assign(first.witness->begin(), first.witness->begin() + static_cast<std::ptrdiff_t>(d));
        return a;
    }

    // Some rows are implicit. Maximize the total of per-row slacks on the
    // undecided rows; positive slacks are certified strict, and a zero
    // optimum certifies everything left as implicit.
    for (;;) {
        LinearSystem aux = slack_system(s, state, true, slack_rows);
        if (slack_rows.empty())
            break;
        RVector c = zeros(d + slack_rows.size());
        for (std::size_t t = 0; t < slack_rows.size(); ++t)
            c[d + t] = 1;
        LPOutcome r = optimize(c, aux);
        assert(r.status == LPStatus::optimal);
        if (sgn(*r.value) == 0) {
            for (auto i : slack_rows)
                state[i] = 1;
            break;
        }
        for (std::size_t t = 0; t < slack_rows.size(); ++t)
            if (sgn((*r.witness)[d + t]) > 0)
                state[slack_rows[t]] = 2;
    }

    LPOutcome last = common_slack();
    assert(last.status == LPStatus::optimal && sgn(*last.value) > 0);
    SystemAnalysis a;
    for (std::size_t i = 0; i < m; ++i)
        if (state[i] == 1)
            a.implicit.push_back(i);
    a.relint_point.assign(last.witness->begin(), last.witness->begin() + static_cast<std::ptrdiff_t>(d));
    return a;
}

std::vector<std::size_t> implicit_equalities(const LinearSystem& s) {
    auto a = analyze(s);
    if (!a)
        throw InconsistentSystem("implicit_equalities: system is infeasible");
    return a->implicit;
}

std::optional<RVector> strict_interior(const LinearSystem& s) {
    auto a = analyze(s);
    if (!a)
        return std::nullopt;
    return a->relint_point;
}

bool relint_contains(const LinearSystem& s, const RVector& x) {
    if (!s.satisfies(x))
        return false;
    auto a = analyze(s);
    if (!a)
        return false;
    const auto& ineqs = s.inequalities();
    std::size_t next = 0;
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
        const bool implicit = next < a->implicit.size() && a->implicit[next] == i;
        if (implicit) {
            ++next;
            continue;  // satisfied and implicit, hence tight
        }
        if (dot(ineqs[i].normal, x) >= ineqs[i].rhs)
            return false;
    }
    return true;
}

LinearSystem fix_leading_variables(const LinearSystem& s, const RVector& values) {
    const std::size_t k = values.size();
    if (k > s.dim())
        throw DimensionMismatch("fixing more variables than the system has");
    LinearSystem out(s.dim() - k);
    auto reduce = [&](const Constraint& c) {
        Rational rhs = c.rhs;
        for (std::size_t j = 0; j < k; ++j)
            if (sgn(c.normal[j]) != 0)
                rhs -= c.normal[j] * values[j];
        return std::pair{RVector(c.normal.begin() + static_cast<std::ptrdiff_t>(k), c.normal.end()), rhs};
    };
    for (const auto& c : s.inequalities()) {
        auto [n, r] = reduce(c);
        out.add_inequality(std::move(n), std::move(r));
    }
    for (const auto& c : s.equalities()) {
        auto [n, r] = reduce(c);
        out.add_equality(std::move(n), std::move(r));
    }
    return out;
}

} // namespace normalfan
