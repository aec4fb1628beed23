#pragma once

#include <primseq/rational.hpp>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace primseq {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEq, Equal, GreaterEq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct VarBound {
    std::optional<Rational> lower = Rational(0);
    std::optional<Rational> upper = std::nullopt;

    static VarBound nonneg() { return VarBound{}; }
    static VarBound free_var() { return VarBound{std::nullopt, std::nullopt}; }
    static VarBound boxed(Rational lo, Rational hi) {
        if (lo > hi) throw DomainError("VarBound: lower exceeds upper");
        return VarBound{std::move(lo), std::move(hi)};
    }
};

struct LpRow {
    std::vector<Rational> coeffs;
    Relation rel = Relation::Equal;
    Rational rhs;
};

struct LinearProgram {
    Sense sense = Sense::Minimize;
    std::vector<Rational> objective;
    std::vector<LpRow> rows;
    std::vector<VarBound> bounds;  // empty means every variable is >= 0

    std::size_t num_vars() const { return objective.size(); }

    VarBound bound(std::size_t j) const {
        return j < bounds.size() ? bounds[j] : VarBound::nonneg();
    }

    void check_dimensions() const {
        for (const auto& row : rows)
            if (row.coeffs.size() != num_vars())
                throw DomainError("LinearProgram: row dimension mismatch");
        if (!bounds.empty() && bounds.size() != num_vars())
            throw DomainError("LinearProgram: bounds dimension mismatch");
    }
};

/// Exact solve result. Optimal solutions carry dual values and reduced
/// costs satisfying primal feasibility, dual feasibility and complementary
/// slackness exactly; infeasible results carry a Farkas vector over the
/// rows; unbounded results carry a feasible point plus an improving ray.
struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    Rational objective;
    std::vector<Rational> primal;
    std::vector<Rational> duals;
    std::vector<Rational> reduced_costs;
    std::vector<std::size_t> basis;
    std::vector<Rational> farkas;
    std::vector<Rational> ray;
    std::size_t pivots = 0;
};

namespace lp_detail {

enum class VarMap { Shift, Reflect, Split };

struct ColInfo {
    std::size_t orig;
    VarMap map;
    Rational offset;  // lo for Shift, hi for Reflect
    bool negated;     // minus part of a Split pair
};

struct Standard {
    // min c.u  s.t.  A u = b, u >= 0, b >= 0
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;
    std::vector<Rational> c;
    std::vector<ColInfo> cols;   // structural columns
    std::vector<int> row_flip;   // +-1 per standard row
    std::vector<long> row_orig;  // original row id, -1 for cap rows
};

inline Standard standardize(const LinearProgram& prog) {
    prog.check_dimensions();
    const std::size_t n = prog.num_vars();
    Standard sf;

    std::vector<Rational> cost = prog.objective;
    if (prog.sense == Sense::Maximize)
        for (auto& v : cost) v = -v;

    struct Sub {
        std::size_t col_a;
        long col_b;
        VarMap map;
        Rational offset;
    };
    std::vector<Sub> subs(n);
    struct CapRow {
        std::size_t col;
        Rational cap;
    };
    std::vector<CapRow> caps;
    for (std::size_t j = 0; j < n; ++j) {
        VarBound vb = prog.bound(j);
        if (vb.lower && vb.upper && *vb.lower > *vb.upper)
            throw DomainError("LinearProgram: crossed variable bounds");
        if (vb.lower) {
            std::size_t col = sf.cols.size();
            sf.cols.push_back({j, VarMap::Shift, *vb.lower, false});
            subs[j] = {col, -1, VarMap::Shift, *vb.lower};
            if (vb.upper) caps.push_back({col, *vb.upper - *vb.lower});
        } else if (vb.upper) {
            std::size_t col = sf.cols.size();
            sf.cols.push_back({j, VarMap::Reflect, *vb.upper, false});
            subs[j] = {col, -1, VarMap::Reflect, *vb.upper};
        } else {
            std::size_t ca = sf.cols.size();
            sf.cols.push_back({j, VarMap::Split, Rational(0), false});
            sf.cols.push_back({j, VarMap::Split, Rational(0), true});
            subs[j] = {ca, static_cast<long>(ca + 1), VarMap::Split, Rational(0)};
        }
    }
    const std::size_t n_struct = sf.cols.size();

    sf.c.assign(n_struct, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        const Sub& s = subs[j];
        switch (s.map) {
        case VarMap::Shift:
            sf.c[s.col_a] += cost[j];
            break;
        case VarMap::Reflect:
            sf.c[s.col_a] -= cost[j];
            break;
        case VarMap::Split:
            sf.c[s.col_a] += cost[j];
            sf.c[static_cast<std::size_t>(s.col_b)] -= cost[j];
            break;
        }
    }

    std::vector<std::vector<Rational>> raw;
    std::vector<Relation> rel;
    std::vector<Rational> rhs;
    for (std::size_t i = 0; i < prog.rows.size(); ++i) {
        const LpRow& row = prog.rows[i];
        std::vector<Rational> a(n_struct, Rational(0));
        Rational r = row.rhs;
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& v = row.coeffs[j];
            if (v == 0) continue;
            const Sub& s = subs[j];
            switch (s.map) {
            case VarMap::Shift:
                a[s.col_a] += v;
                r -= v * s.offset;
                break;
            case VarMap::Reflect:
                a[s.col_a] -= v;
                r -= v * s.offset;
                break;
            case VarMap::Split:
                a[s.col_a] += v;
                a[static_cast<std::size_t>(s.col_b)] -= v;
                break;
            }
        }
        raw.push_back(std::move(a));
        rel.push_back(row.rel);
        rhs.push_back(std::move(r));
        sf.row_orig.push_back(static_cast<long>(i));
    }
    for (const CapRow& cap : caps) {
        std::vector<Rational> a(n_struct, Rational(0));
        a[cap.col] = 1;
        raw.push_back(std::move(a));
        rel.push_back(Relation::LessEq);
        rhs.push_back(cap.cap);
        sf.row_orig.push_back(-1);
    }

    std::size_t n_slack = 0;
    for (Relation r : rel)
        if (r != Relation::Equal) ++n_slack;
    std::size_t slack_at = n_struct;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        raw[i].resize(n_struct + n_slack, Rational(0));
        if (rel[i] != Relation::Equal) {
            raw[i][slack_at] =
                rel[i] == Relation::LessEq ? Rational(1) : Rational(-1);
            ++slack_at;
        }
    }
    sf.c.resize(n_struct + n_slack, Rational(0));
    sf.row_flip.assign(raw.size(), 1);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (rhs[i] < 0) {
            sf.row_flip[i] = -1;
            for (auto& v : raw[i]) v = -v;
            rhs[i] = -rhs[i];
        }
    }
    sf.A = std::move(raw);
    sf.b = std::move(rhs);
    return sf;
}

/// Dense simplex tableau driven by Bland's rule. The artificial columns
/// start as the identity and are never removed, so they always hold the
/// current basis inverse.
class Tableau {
public:
    explicit Tableau(const Standard& sf) : m_(sf.A.size()), n_(sf.c.size()) {
        rows_.assign(m_, std::vector<Rational>(n_ + m_ + 1, Rational(0)));
        basis_.resize(m_);
        allowed_.assign(n_ + m_, true);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = sf.A[i][j];
            rows_[i][n_ + i] = 1;
            rows_[i].back() = sf.b[i];
            basis_[i] = n_ + i;
        }
    }

    std::size_t num_rows() const { return m_; }
    std::size_t num_cols() const { return n_ + m_; }
    const std::vector<std::size_t>& basis() const { return basis_; }
    const Rational& entry(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    const Rational& rhs(std::size_t i) const { return rows_[i].back(); }
    std::size_t pivots() const { return pivots_; }

    void forbid(std::size_t col) { allowed_[col] = false; }

    Rational objective_of(const std::vector<Rational>& cost) const {
        Rational v = 0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < cost.size()) v += cost[basis_[i]] * rows_[i].back();
        return v;
    }

    Rational reduced_cost(const std::vector<Rational>& cost, std::size_t j) const {
        Rational rc = j < cost.size() ? cost[j] : Rational(0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (rows_[i][j] == 0) continue;
            std::size_t bv = basis_[i];
            if (bv < cost.size() && cost[bv] != 0) rc -= cost[bv] * rows_[i][j];
        }
        return rc;
    }

    /// Dual vector c_B B^{-1}, read off the artificial columns.
    std::vector<Rational> dual_vector(const std::vector<Rational>& cost) const {
        std::vector<Rational> y(m_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i) {
            std::size_t bv = basis_[i];
            Rational cb = bv < cost.size() ? cost[bv] : Rational(0);
            if (cb == 0) continue;
            for (std::size_t k = 0; k < m_; ++k) y[k] += cb * rows_[i][n_ + k];
        }
        return y;
    }

    /// Bland-rule iterations for the given cost vector. Returns the entering
    /// column that proves unboundedness, or nullopt at optimality.
    std::optional<std::size_t> minimize(const std::vector<Rational>& cost) {
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < num_cols(); ++j) {
                if (!allowed_[j]) continue;
                if (reduced_cost(cost, j) < 0) {
                    enter = j;  // Bland: lowest eligible index
                    break;
                }
            }
            if (!enter) return std::nullopt;
            std::optional<std::size_t> leave;
            Rational best_ratio;
            for (std::size_t i = 0; i < m_; ++i) {
                const Rational& a = rows_[i][*enter];
                if (a <= 0) continue;
                Rational ratio = rows_[i].back() / a;
                if (!leave || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (!leave) return enter;
            pivot(*leave, *enter);
        }
    }

    void pivot(std::size_t r, std::size_t jc) {
        std::vector<Rational>& prow = rows_[r];
        Rational inv = 1 / prow[jc];
        if (inv != 1)
            for (auto& v : prow) v *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            Rational f = rows_[i][jc];
            if (f == 0) continue;
            std::vector<Rational>& row = rows_[i];
            for (std::size_t k = 0; k < row.size(); ++k)
                if (prow[k] != 0) row[k] -= f * prow[k];
        }
        basis_[r] = jc;
        ++pivots_;
    }

private:
    std::size_t m_, n_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> basis_;
    std::vector<bool> allowed_;
    std::size_t pivots_ = 0;
};

inline std::vector<Rational> map_primal(const Standard& sf,
                                        const LinearProgram& prog,
                                        const std::vector<Rational>& u) {
    std::vector<Rational> x(prog.num_vars(), Rational(0));
    for (std::size_t k = 0; k < sf.cols.size(); ++k) {
        const ColInfo& ci = sf.cols[k];
        switch (ci.map) {
        case VarMap::Shift:
            x[ci.orig] = ci.offset + u[k];
            break;
        case VarMap::Reflect:
            x[ci.orig] = ci.offset - u[k];
            break;
        case VarMap::Split:
            x[ci.orig] += ci.negated ? -u[k] : u[k];
            break;
        }
    }
    return x;
}

inline void verify_primal_feasible(const LinearProgram& prog,
                                   const std::vector<Rational>& x) {
    for (std::size_t j = 0; j < prog.num_vars(); ++j) {
        VarBound vb = prog.bound(j);
        if (vb.lower && x[j] < *vb.lower)
            throw DomainError("lp verification: lower bound violated");
        if (vb.upper && x[j] > *vb.upper)
            throw DomainError("lp verification: upper bound violated");
    }
    for (const LpRow& row : prog.rows) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < row.coeffs.size(); ++j)
            lhs += row.coeffs[j] * x[j];
        bool ok = row.rel == Relation::Equal    ? lhs == row.rhs
                  : row.rel == Relation::LessEq ? lhs <= row.rhs
                                                : lhs >= row.rhs;
        if (!ok) throw DomainError("lp verification: row violated");
    }
}

/// Exact KKT check in the caller's orientation; throws on any failure, so a
/// returned Optimal solution is a verified certificate.
inline void verify_optimal(const LinearProgram& prog, const LpSolution& sol) {
    verify_primal_feasible(prog, sol.primal);
    const int s = prog.sense == Sense::Minimize ? 1 : -1;
    Rational primal_obj = 0;
    for (std::size_t j = 0; j < prog.num_vars(); ++j)
        primal_obj += prog.objective[j] * sol.primal[j];
    if (primal_obj != sol.objective)
        throw DomainError("lp verification: stated objective mismatch");

    Rational dual_obj = 0;
    for (std::size_t i = 0; i < prog.rows.size(); ++i) {
        const LpRow& row = prog.rows[i];
        const Rational& y = sol.duals[i];
        Rational lhs = 0;
        for (std::size_t j = 0; j < row.coeffs.size(); ++j)
            lhs += row.coeffs[j] * sol.primal[j];
        if (y * (lhs - row.rhs) != 0)
            throw DomainError("lp verification: complementary slackness");
        if (row.rel == Relation::GreaterEq && s * y < 0)
            throw DomainError("lp verification: dual sign (>=)");
        if (row.rel == Relation::LessEq && s * y > 0)
            throw DomainError("lp verification: dual sign (<=)");
        dual_obj += y * row.rhs;
    }
    for (std::size_t j = 0; j < prog.num_vars(); ++j) {
        Rational rc = prog.objective[j];
        for (std::size_t i = 0; i < prog.rows.size(); ++i)
            rc -= sol.duals[i] * prog.rows[i].coeffs[j];
        if (rc != sol.reduced_costs[j])
            throw DomainError("lp verification: stated reduced cost mismatch");
        VarBound vb = prog.bound(j);
        bool at_lower = vb.lower && sol.primal[j] == *vb.lower;
        bool at_upper = vb.upper && sol.primal[j] == *vb.upper;
        if (!at_lower && !at_upper) {
            if (rc != 0)
                throw DomainError("lp verification: interior reduced cost");
        } else {
            if (at_lower && !at_upper && s * rc < 0)
                throw DomainError("lp verification: reduced cost sign at lower");
            if (at_upper && !at_lower && s * rc > 0)
                throw DomainError("lp verification: reduced cost sign at upper");
            dual_obj += rc * sol.primal[j];
        }
    }
    if (dual_obj != primal_obj)
        throw DomainError("lp verification: duality gap");
}

/// Checks a Farkas vector: the weighted rows aggregate to sigma.x >= rhs
/// for every feasible x, yet sup of sigma.x over the bounds is < rhs.
inline void verify_infeasible(const LinearProgram& prog,
                              const std::vector<Rational>& farkas) {
    Rational rhs = 0;
    std::vector<Rational> sigma(prog.num_vars(), Rational(0));
    for (std::size_t i = 0; i < prog.rows.size(); ++i) {
        const Rational& y = farkas[i];
        if (prog.rows[i].rel == Relation::GreaterEq && y < 0)
            throw DomainError("lp verification: farkas sign (>=)");
        if (prog.rows[i].rel == Relation::LessEq && y > 0)
            throw DomainError("lp verification: farkas sign (<=)");
        if (y == 0) continue;
        rhs += y * prog.rows[i].rhs;
        for (std::size_t j = 0; j < prog.num_vars(); ++j)
            sigma[j] += y * prog.rows[i].coeffs[j];
    }
    Rational sup = 0;
    for (std::size_t j = 0; j < prog.num_vars(); ++j) {
        if (sigma[j] == 0) continue;
        VarBound vb = prog.bound(j);
        if (sigma[j] > 0) {
            if (!vb.upper)
                throw DomainError("lp verification: farkas unbounded above");
            sup += sigma[j] * *vb.upper;
        } else {
            if (!vb.lower)
                throw DomainError("lp verification: farkas unbounded below");
            sup += sigma[j] * *vb.lower;
        }
    }
    if (sup >= rhs) throw DomainError("lp verification: farkas not separating");
}

inline void verify_unbounded(const LinearProgram& prog,
                             const std::vector<Rational>& point,
                             const std::vector<Rational>& ray) {
    verify_primal_feasible(prog, point);
    const int s = prog.sense == Sense::Minimize ? 1 : -1;
    Rational drift = 0;
    for (std::size_t j = 0; j < prog.num_vars(); ++j) {
        drift += prog.objective[j] * ray[j];
        VarBound vb = prog.bound(j);
        if (vb.lower && ray[j] < 0)
            throw DomainError("lp verification: ray exits lower bound");
        if (vb.upper && ray[j] > 0)
            throw DomainError("lp verification: ray exits upper bound");
    }
    if (s * drift >= 0) throw DomainError("lp verification: ray does not improve");
    for (const LpRow& row : prog.rows) {
        Rational v = 0;
        for (std::size_t j = 0; j < row.coeffs.size(); ++j)
            v += row.coeffs[j] * ray[j];
        bool ok = row.rel == Relation::Equal    ? v == 0
                  : row.rel == Relation::LessEq ? v <= 0
                                                : v >= 0;
        if (!ok) throw DomainError("lp verification: ray leaves feasible cone");
    }
}

}  // namespace lp_detail

/// Two-phase exact simplex with Bland's anti-cycling rule. Every returned
/// status carries an exactly verified certificate.
inline LpSolution solve_lp(const LinearProgram& prog) {
    using namespace lp_detail;
    Standard sf = standardize(prog);
    Tableau tab(sf);
    const std::size_t m = tab.num_rows();
    const std::size_t n_std = sf.c.size();

    // Phase 1: minimize the artificial sum from the all-artificial basis.
    std::vector<Rational> phase1(n_std + m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) phase1[n_std + i] = 1;
    if (tab.minimize(phase1))
        throw DomainError("lp: phase 1 cannot be unbounded");

    LpSolution sol;
    Rational infeas = tab.objective_of(phase1);
    if (infeas > 0) {
        std::vector<Rational> y = tab.dual_vector(phase1);
        sol.status = LpStatus::Infeasible;
        sol.pivots = tab.pivots();
        sol.farkas.assign(prog.rows.size(), Rational(0));
        for (std::size_t i = 0; i < m; ++i) {
            long orig = sf.row_orig[i];
            if (orig >= 0)
                sol.farkas[static_cast<std::size_t>(orig)] =
                    Rational(sf.row_flip[i]) * y[i];
        }
        verify_infeasible(prog, sol.farkas);
        return sol;
    }

    // Pivot leftover artificials out of the basis; rows where no structural
    // pivot exists are redundant and stay parked at zero.
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis()[i] < n_std) continue;
        for (std::size_t j = 0; j < n_std; ++j) {
            if (tab.entry(i, j) != 0) {
                tab.pivot(i, j);
                break;
            }
        }
    }
    for (std::size_t j = n_std; j < n_std + m; ++j) tab.forbid(j);

    // Phase 2.
    std::vector<Rational> phase2 = sf.c;
    phase2.resize(n_std + m, Rational(0));
    auto unbounded_col = tab.minimize(phase2);
    sol.pivots = tab.pivots();

    std::vector<Rational> u(n_std, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis()[i] < n_std) u[tab.basis()[i]] = tab.rhs(i);

    if (unbounded_col) {
        std::vector<Rational> d(n_std, Rational(0));
        d[*unbounded_col] = 1;
        for (std::size_t i = 0; i < m; ++i)
            if (tab.basis()[i] < n_std)
                d[tab.basis()[i]] = -tab.entry(i, *unbounded_col);
        sol.status = LpStatus::Unbounded;
        sol.primal = map_primal(sf, prog, u);
        sol.ray.assign(prog.num_vars(), Rational(0));
        for (std::size_t k = 0; k < sf.cols.size(); ++k) {
            const ColInfo& ci = sf.cols[k];
            Rational dv = d[k];
            if (ci.map == VarMap::Reflect || ci.negated) dv = -dv;
            sol.ray[ci.orig] += dv;
        }
        verify_unbounded(prog, sol.primal, sol.ray);
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.primal = map_primal(sf, prog, u);
    sol.basis.assign(tab.basis().begin(), tab.basis().end());

    std::vector<Rational> y = tab.dual_vector(phase2);
    sol.duals.assign(prog.rows.size(), Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        long orig = sf.row_orig[i];
        if (orig >= 0)
            sol.duals[static_cast<std::size_t>(orig)] =
                Rational(sf.row_flip[i]) * y[i];
    }
    if (prog.sense == Sense::Maximize)
        for (auto& v : sol.duals) v = -v;

    Rational obj = 0;
    for (std::size_t j = 0; j < prog.num_vars(); ++j)
        obj += prog.objective[j] * sol.primal[j];
    sol.objective = obj;

    sol.reduced_costs.assign(prog.num_vars(), Rational(0));
    for (std::size_t j = 0; j < prog.num_vars(); ++j) {
        Rational rc = prog.objective[j];
        for (std::size_t i = 0; i < prog.rows.size(); ++i)
            rc -= sol.duals[i] * prog.rows[i].coeffs[j];
        sol.reduced_costs[j] = rc;
    }
    lp_detail::verify_optimal(prog, sol);
    return sol;
}

/// Dual multipliers of an optimal solve; errors on any other status.
inline const std::vector<Rational>& extract_dual(const LpSolution& sol) {
    if (sol.status != LpStatus::Optimal)
        throw DomainError("extract_dual: solution is not optimal");
    return sol.duals;
}

}  // namespace primseq
