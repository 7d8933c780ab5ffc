#include "normalfan/errors.hpp"
#include "normalfan/lp.hpp"

#include <algorithm>
#include <set>

namespace normalfan {

namespace {

// Scales a row to coprime integers; equalities additionally get a positive
// leading coefficient so duplicates compare equal.
Constraint normalize(Constraint c, bool equality) {
    RVector joined = c.normal;
    joined.push_back(c.rhs);
    joined = equality ? canonical_direction(joined) : primitive_positive_multiple(joined);
    c.rhs = joined.back();
    joined.pop_back();
    c.normal = std::move(joined);
    return c;
}

struct RowKey {
    bool operator()(const Constraint& a, const Constraint& b) const {
        if (a.rhs != b.rhs)
            return a.rhs < b.rhs;
        return std::lexicographical_compare(a.normal.begin(), a.normal.end(), b.normal.begin(), b.normal.end());
    }
};

Constraint combine(const Constraint& pos, const Constraint& neg, std::size_t var) {
    // pos has a positive coefficient on var, neg a negative one.
    Rational wp = -neg.normal[var];
    Rational wn = pos.normal[var];
    Constraint out{zeros(pos.normal.size()), wp * pos.rhs + wn * neg.rhs};
    for (std::size_t j = 0; j < out.normal.size(); ++j)
        out.normal[j] = wp * pos.normal[j] + wn * neg.normal[j];
    out.normal[var] = 0;
    return out;
}

} // namespace

LinearSystem fm_eliminate(const LinearSystem& s, const std::vector<std::size_t>& drop) {
    const std::size_t d = s.dim();
    std::vector<bool> dropped(d, false);
    for (auto v : drop) {
        if (v >= d)
            throw DimensionMismatch("fm_eliminate: coordinate " + std::to_string(v) + " out of range");
        dropped[v] = true;
    }

    std::vector<Constraint> ineqs;
    std::vector<Constraint> eqs;
    bool infeasible = s.trivially_infeasible();
    auto push_ineq = [&](Constraint c, std::set<Constraint, RowKey>& seen) {
        if (is_zero(c.normal)) {
            if (sgn(c.rhs) < 0)
                infeasible = true;
            return;
        }
        c = normalize(std::move(c), false);
        if (seen.insert(c).second)
            ineqs.push_back(std::move(c));
    };
    {
        std::set<Constraint, RowKey> seen;
        for (const auto& c : s.inequalities())
            push_ineq(c, seen);
    }
    for (const auto& c : s.equalities()) {
        if (is_zero(c.normal)) {
            if (sgn(c.rhs) != 0)
                infeasible = true;
            continue;
        }
        eqs.push_back(normalize(c, true));
    }

    std::vector<std::size_t> remaining;
    for (std::size_t v = 0; v < d; ++v)
        if (dropped[v])
            remaining.push_back(v);

    while (!remaining.empty() && !infeasible) {
        // An equality mentioning a remaining variable eliminates it for free.
        std::optional<std::pair<std::size_t, std::size_t>> subst;  // (eq index, var)
        for (std::size_t e = 0; e < eqs.size() && !subst; ++e)
            for (auto v : remaining)
                if (sgn(eqs[e].normal[v]) != 0) {
                    subst = std::pair{e, v};
                    break;
                }

        if (subst) {
            auto [e, v] = *subst;
            Constraint pivot = eqs[e];
            eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(e));
            auto eliminate = [&](Constraint c) {
                if (sgn(c.normal[v]) == 0)
                    return c;
                Rational f = c.normal[v] / pivot.normal[v];
                axpy(c.normal, -f, pivot.normal);
                c.rhs -= f * pivot.rhs;
                c.normal[v] = 0;
                return c;
            };
            std::vector<Constraint> old = std::move(ineqs);
            ineqs.clear();
            std::set<Constraint, RowKey> seen;
            for (auto& c : old)
                push_ineq(eliminate(std::move(c)), seen);
            std::vector<Constraint> old_eqs = std::move(eqs);
            eqs.clear();
            for (auto& c : old_eqs) {
                Constraint r = eliminate(std::move(c));
                if (is_zero(r.normal)) {
                    if (sgn(r.rhs) != 0)
                        infeasible = true;
                    continue;
                }
                eqs.push_back(normalize(std::move(r), true));
            }
            remaining.erase(std::find(remaining.begin(), remaining.end(), v));
            continue;
        }

        // Greedy: the variable whose elimination creates the fewest rows.
        std::size_t best = remaining.front();
        long best_growth = 0;
        bool first = true;
        for (auto v : remaining) {
            long pos = 0, neg = 0;
            for (const auto& c : ineqs) {
                pos += sgn(c.normal[v]) > 0;
                neg += sgn(c.normal[v]) < 0;
            }
            long growth = pos * neg - pos - neg;
            if (first || growth < best_growth) {
                best = v;
                best_growth = growth;
                first = false;
            }
        }
        std::vector<Constraint> pos, neg, keep;
        for (auto& c : ineqs) {
            int sg = sgn(c.normal[best]);
            (sg > 0 ? pos : sg < 0 ? neg : keep).push_back(std::move(c));
        }
        ineqs.clear();
        std::set<Constraint, RowKey> seen;
        for (auto& c : keep)
            push_ineq(std::move(c), seen);
        for (const auto& p : pos)
            for (const auto& n : neg)
                push_ineq(combine(p, n, best), seen);
        remaining.erase(std::find(remaining.begin(), remaining.end(), best));
    }

    std::vector<std::size_t> kept;
    for (std::size_t v = 0; v < d; ++v)
        if (!dropped[v])
            kept.push_back(v);
    auto shrink = [&](const RVector& n) {
        RVector out;
        out.reserve(kept.size());
        for (auto v : kept)
            out.push_back(n[v]);
        return out;
    };
    LinearSystem out(kept.size());
    if (infeasible) {
        out.add_inequality(zeros(kept.size()), -1);
        return out;
    }
    for (const auto& c : ineqs)
        out.add_inequality(shrink(c.normal), c.rhs);
    for (const auto& c : eqs)
        out.add_equality(shrink(c.normal), c.rhs);
    return out;
}

} // namespace normalfan
