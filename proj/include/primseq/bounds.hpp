#pragma once

#include <primseq/admissibility.hpp>
#include <primseq/distribution.hpp>
#include <primseq/lp.hpp>
#include <primseq/polynomial.hpp>
#include <primseq/rational.hpp>
#include <primseq/roots.hpp>
#include <primseq/sequence.hpp>

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace primseq {

/// The first m primitive coordinates c_1..c_m (c_0 = 1 implicit) defining
/// the feasible set of measures on [a, b].
struct ConstraintPrefix {
    Interval interval;
    std::vector<Rational> c;  // index j = 0..m with c[0] == 1

    ConstraintPrefix(Interval iv, std::vector<Rational> coords)
        : interval(std::move(iv)), c(std::move(coords)) {
        if (c.size() < 2) throw DomainError("ConstraintPrefix: requires m >= 1");
        if (c[0] != 1) throw DomainError("ConstraintPrefix: c_0 must equal 1");
    }

    static ConstraintPrefix from(const PrimitiveSeq& ps) {
        return ConstraintPrefix(ps.interval(), ps.terms());
    }

    std::size_t order() const { return c.size() - 1; }
};

enum class Side { Upper, Lower };
enum class BoundKind { Cdf, Moment };

/// Certified bound on a CDF value or a primitive moment under the prefix
/// constraints. The enclosure [lo, hi] contains the sharp bound; its width
/// equals the feasibility shift applied to the dual certificate. The
/// certificate polynomial is genuinely feasible (majorant or minorant) and
/// its pairing with the prefix equals the outer end of the enclosure. The
/// extremizer is an exact grid measure matching the prefix whose objective
/// equals the inner end.
struct BoundResult {
    ConstraintPrefix prefix;
    Side side;
    BoundKind kind;
    Rational x0;        // Cdf kind
    std::size_t k = 0;  // Moment kind
    Rational lo;
    Rational hi;
    Rational shift;
    Polynomial certificate;  // (b - x) basis
    FiniteAtomic extremizer;
    std::size_t iterations = 0;
};

namespace bounds_detail {

struct Region {
    Rational lo;
    Rational hi;
    Polynomial target;  // constraint threshold on this region, (b-x) basis
};

struct SemiInfiniteSpec {
    Side side;
    std::vector<Region> regions;
    // objective coefficient of a grid atom
    std::function<Rational(const Rational&)> atom_value;
};

inline void admissibility_screens(const ConstraintPrefix& prefix) {
    Rational len = prefix.interval.length();
    std::vector<Rational> gamma(prefix.c.size());
    Rational scale = 1;
    gamma[0] = 1;
    for (std::size_t n = 1; n < prefix.c.size(); ++n) {
        scale *= Rational(n) / len;
        gamma[n] = scale * prefix.c[n];
    }
    NormalizedSeq g(std::move(gamma));
    if (!check_cm_prefix(g).empty())
        throw DomainError("infeasible prefix: complete monotonicity screen failed");
    if (!hankel_check(g).ok())
        throw DomainError("infeasible prefix: Hankel screen failed");
}

inline std::vector<Rational> initial_grid(const ConstraintPrefix& prefix,
                                          const std::optional<Rational>& x0) {
    // Uniform 4m+1 points including both endpoints, plus the query point.
    const std::size_t m = prefix.order();
    const Rational& a = prefix.interval.a;
    Rational len = prefix.interval.length();
    std::vector<Rational> grid;
    std::size_t cells = 4 * m;
    for (std::size_t k = 0; k <= cells; ++k)
        grid.push_back(a + len * Rational(k) / Rational(cells));
    if (x0) grid.push_back(*x0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

inline LinearProgram measure_lp(const ConstraintPrefix& prefix,
                                const std::vector<Rational>& grid,
                                const SemiInfiniteSpec& spec) {
    const std::size_t m = prefix.order();
    const Rational& b = prefix.interval.b;
    LinearProgram lp;
    lp.sense = spec.side == Side::Upper ? Sense::Maximize : Sense::Minimize;
    lp.objective.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        lp.objective[i] = spec.atom_value(grid[i]);
    for (std::size_t j = 0; j <= m; ++j) {
        LpRow row;
        row.rel = Relation::Equal;
        row.rhs = Rational(factorial(static_cast<unsigned>(j))) * prefix.c[j];
        row.coeffs.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            row.coeffs[i] = pow_int(b - grid[i], static_cast<long>(j));
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

inline void merge_points(std::vector<Rational>& grid, std::vector<Rational> pts) {
    grid.insert(grid.end(), pts.begin(), pts.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
}

/// Constraint residual on one region: nonnegative exactly when the dual
/// polynomial is feasible there.
inline Polynomial region_residual(const Polynomial& dual, const Region& region,
                                  Side side) {
    return side == Side::Upper ? dual - region.target : region.target - dual;
}

inline FiniteAtomic extremizer_from(const LpSolution& sol, const Interval& iv,
                                    const std::vector<Rational>& grid) {
    std::vector<Rational> pts, ws;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (sol.primal[i] > 0) {
            pts.push_back(grid[i]);
            ws.push_back(sol.primal[i]);
        }
    }
    return FiniteAtomic(iv, std::move(pts), std::move(ws));
}

inline std::optional<std::vector<Rational>> solve_square(
    std::vector<std::vector<Rational>> M, std::vector<Rational> rhs) {
    const std::size_t n = M.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && M[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(M[pivot], M[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || M[r][col] == 0) continue;
            Rational f = M[r][col] / M[col][col];
            for (std::size_t c2 = col; c2 < n; ++c2) M[r][c2] -= f * M[col][c2];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / M[i][i];
    return x;
}

/// The region whose threshold binds at x for a majorant (largest target)
/// or minorant (smallest target).
inline const Region* binding_region(const SemiInfiniteSpec& spec, const Rational& x) {
    const Region* best = nullptr;
    Rational best_val;
    for (const Region& r : spec.regions) {
        if (x < r.lo || x > r.hi) continue;
        Rational v = r.target(x);
        bool better = !best || (spec.side == Side::Upper ? v > best_val : v < best_val);
        if (better) {
            best = &r;
            best_val = v;
        }
    }
    return best;
}

/// Attempts to reconstruct the exact optimal certificate from the support
/// of the grid extremizer: the polynomial interpolates the binding target
/// at every support atom and meets it tangentially at enough of them to pin
/// all m+1 coefficients. Each candidate contact pattern is validated
/// exactly; success yields a continuum-feasible certificate whose pairing
/// equals the grid value, closing the enclosure to a point.
inline std::optional<Polynomial> try_polish(const ConstraintPrefix& prefix,
                                            const SemiInfiniteSpec& spec,
                                            const std::vector<Rational>& support,
                                            const Rational& value) {
    const std::size_t m = prefix.order();
    const Rational& b = prefix.interval.b;
    const std::size_t k = support.size();
    if (k == 0 || k > m + 1) return std::nullopt;
    const std::size_t total = m + 1;

    // Enumerate contact orders o_i >= 1 with sum m+1.
    std::vector<std::vector<std::size_t>> patterns;
    const std::size_t cap = 200;
    if (k == 1) {
        patterns.push_back({total});
    } else if (total - k <= k) {
        // orders in {1, 2}: choose which atoms get the tangency
        std::size_t extra = total - k;
        std::vector<std::size_t> subset(extra);
        auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
            if (patterns.size() >= cap) return;
            if (depth == extra) {
                std::vector<std::size_t> orders(k, 1);
                for (std::size_t i = 0; i < extra; ++i) orders[subset[i]] = 2;
                patterns.push_back(std::move(orders));
                return;
            }
            for (std::size_t i = start; i < k; ++i) {
                subset[depth] = i;
                self(self, i + 1, depth + 1);
            }
        };
        rec(rec, 0, 0);
    } else if (k <= 4) {
        auto rec = [&](auto&& self, std::vector<std::size_t>& acc,
                       std::size_t left) -> void {
            if (patterns.size() >= cap) return;
            if (acc.size() == k - 1) {
                if (left >= 1) {
                    acc.push_back(left);
                    patterns.push_back(acc);
                    acc.pop_back();
                }
                return;
            }
            for (std::size_t o = 1; o + (k - acc.size() - 1) <= left; ++o) {
                acc.push_back(o);
                self(self, acc, left - o);
                acc.pop_back();
            }
        };
        std::vector<std::size_t> acc;
        rec(rec, acc, total);
    } else {
        return std::nullopt;
    }

    // l-th derivative of (b-x)^j at x, as a function of u = b - x.
    auto basis_deriv = [&](std::size_t j, std::size_t l, const Rational& u) {
        if (l > j) return Rational(0);
        Rational coef(falling_factorial(static_cast<unsigned>(j),
                                        static_cast<unsigned>(l)));
        if (l % 2 == 1) coef = -coef;
        return coef * pow_int(u, static_cast<long>(j - l));
    };

    for (const auto& orders : patterns) {
        std::vector<std::vector<Rational>> M;
        std::vector<Rational> rhs;
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            const Region* region = binding_region(spec, support[i]);
            if (!region) {
                ok = false;
                break;
            }
            Polynomial target = region->target;
            Rational u = b - support[i];
            for (std::size_t l = 0; l < orders[i]; ++l) {
                std::vector<Rational> row(total);
                for (std::size_t j = 0; j < total; ++j) row[j] = basis_deriv(j, l, u);
                M.push_back(std::move(row));
                rhs.push_back(target(support[i]));
                target = poly_derivative(target);
            }
        }
        if (!ok) continue;
        auto alpha = solve_square(std::move(M), std::move(rhs));
        if (!alpha) continue;
        Polynomial p(std::move(*alpha), Basis::BMinusX, b);

        Rational pairing = 0;
        for (std::size_t j = 0; j <= m; ++j)
            pairing += p.coefficient(j) *
                       Rational(factorial(static_cast<unsigned>(j))) * prefix.c[j];
        if (pairing != value) continue;

        // cheap probes before the exact certification
        bool plausible = true;
        for (const Region& region : spec.regions) {
            Polynomial q = region_residual(p, region, spec.side);
            Rational span = region.hi - region.lo;
            for (int t = 0; t <= 8 && plausible; ++t)
                if (q(region.lo + span * Rational(t, 8)) < 0) plausible = false;
            if (!plausible) break;
        }
        if (!plausible) continue;

        bool feasible = true;
        for (const Region& region : spec.regions) {
            Polynomial q = region_residual(p, region, spec.side);
            if (!poly_negative_witnesses(q, region.lo, region.hi).empty()) {
                feasible = false;
                break;
            }
        }
        if (feasible) return p;
    }
    return std::nullopt;
}

inline BoundResult solve_semi_infinite(const ConstraintPrefix& prefix,
                                       const SemiInfiniteSpec& spec,
                                       const std::optional<Rational>& x0,
                                       const Rational& tol) {
    if (tol <= 0) throw DomainError("bound: tolerance must be positive");
    admissibility_screens(prefix);
    const std::size_t m = prefix.order();
    const Rational& b = prefix.interval.b;
    const Rational len = prefix.interval.length();
    std::vector<Rational> grid = initial_grid(prefix, x0);

    const std::size_t cap = 200;
    const bool trace = std::getenv("PRIMSEQ_TRACE") != nullptr;
    bool tried_kernel_support = false;
    for (std::size_t round = 0; round < cap; ++round) {
        if (trace)
            std::cerr << "[primseq] round " << round << " grid " << grid.size()
                      << std::endl;
        LpSolution sol = solve_lp(measure_lp(prefix, grid, spec));
        if (sol.status == LpStatus::Unbounded)
            throw DomainError("bound: grid relaxation unbounded");
        if (sol.status == LpStatus::Infeasible) {
            // Boundary prefixes are carried by measures whose atoms solve
            // the Hankel kernel polynomial; rational atoms can be injected
            // outright.
            if (!tried_kernel_support) {
                tried_kernel_support = true;
                std::vector<Rational> gamma(prefix.c.size());
                Rational scale = 1;
                gamma[0] = 1;
                for (std::size_t n = 1; n < prefix.c.size(); ++n) {
                    scale *= Rational(n) / len;
                    gamma[n] = scale * prefix.c[n];
                }
                std::vector<Rational> ys =
                    hankel_kernel_support(NormalizedSeq(std::move(gamma)));
                if (!ys.empty()) {
                    std::vector<Rational> pts;
                    for (const Rational& y : ys) pts.push_back(b - len * y);
                    merge_points(grid, std::move(pts));
                    continue;
                }
            }
            // Otherwise refine along the Farkas polynomial's negative dip,
            // unless the shifted certificate proves the prefix genuinely
            // infeasible.
            std::vector<Rational> qc(m + 1);
            for (std::size_t j = 0; j <= m; ++j) qc[j] = -sol.farkas[j];
            Polynomial q(qc, Basis::BMinusX, b);
            std::vector<Rational> dips =
                poly_negative_witnesses(q, prefix.interval.a, b);
            Rational lift = 0;
            if (!dips.empty()) {
                Rational width =
                    len / pow_int(Rational(2), 6 + static_cast<long>(round));
                lift = -poly_min_on_interval(q, prefix.interval.a, b, width)
                            .value_lower_bound;
            }
            Rational pairing = lift;  // c_0 = 1 pairs with the shift
            for (std::size_t j = 0; j <= m; ++j)
                pairing += qc[j] * Rational(factorial(static_cast<unsigned>(j))) *
                           prefix.c[j];
            if (pairing < 0)
                throw DomainError(
                    "infeasible prefix: separating certificate valid on the whole "
                    "interval");
            merge_points(grid, std::move(dips));
            continue;
        }

        Polynomial dual(extract_dual(sol), Basis::BMinusX, b);
        const Rational& value = sol.objective;
        FiniteAtomic extremizer = extremizer_from(sol, prefix.interval, grid);

        // Try to close the enclosure outright by rebuilding the certificate
        // from the extremizer support; the second attempt merges tight
        // clusters of support points (two grid atoms sharing one true atom)
        // and snaps them to the simplest nearby rationals.
        auto attempt_polish = [&]() -> std::optional<Polynomial> {
            if (auto p = try_polish(prefix, spec, extremizer.points, value))
                return p;
            const auto& pts = extremizer.points;
            Rational gap_tol = len / pow_int(Rational(2), 14);
            std::vector<Rational> merged;
            bool changed = false;
            std::size_t i = 0;
            while (i < pts.size()) {
                std::size_t j = i;
                while (j + 1 < pts.size() && pts[j + 1] - pts[j] <= gap_tol) ++j;
                if (j > i) changed = true;
                Rational lo2 = std::max(prefix.interval.a, pts[i] - gap_tol);
                Rational hi2 = std::min(b, pts[j] + gap_tol);
                Rational snapped = root_detail::simplest_rational_in(lo2, hi2);
                if (snapped != pts[i]) changed = true;
                merged.push_back(std::move(snapped));
                i = j + 1;
            }
            merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
            if (!changed) return std::nullopt;
            return try_polish(prefix, spec, merged, value);
        };
        if (auto polished = attempt_polish()) {
            BoundResult res{prefix,
                            spec.side,
                            BoundKind::Cdf,
                            x0 ? *x0 : Rational(0),
                            0,
                            value,
                            value,
                            Rational(0),
                            std::move(*polished),
                            std::move(extremizer),
                            round + 1};
            return res;
        }

        // Exact separation: certify each region or harvest violations. Cut
        // points are snapped to the simplest nearby rational (verifying
        // that snapped violation points stay violated) so grid entries and
        // with them the dual coefficients keep short representations.
        std::vector<Rational> cuts;
        auto in_grid = [&](const Rational& x) {
            return std::binary_search(grid.begin(), grid.end(), x);
        };
        auto offer = [&](Rational x) {
            if (!in_grid(x)) cuts.push_back(std::move(x));
        };
        auto snap = [&](const Rational& x, const Rational& slack) {
            Rational lo2 = std::max(prefix.interval.a, x - slack);
            Rational hi2 = std::min(b, x + slack);
            return root_detail::simplest_rational_in(lo2, hi2);
        };

        // Exact midpoint samples give true violation values. While any
        // sample is deeper than the tolerance, keep exchanging cheaply:
        // the coarse argmin bracket localizes the worst dip and the
        // violated midpoints pin the rest.
        Rational sampled = 0;
        for (const Region& region : spec.regions) {
            Polynomial q = region_residual(dual, region, spec.side);
            for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
                if (grid[i + 1] <= region.lo || grid[i] >= region.hi) continue;
                Rational cell_lo = std::max(grid[i], region.lo);
                Rational cell_hi = std::min(grid[i + 1], region.hi);
                Rational mid = (cell_lo + cell_hi) / 2;
                Rational v = q(mid);
                if (v < 0) {
                    if (-v > sampled) sampled = -v;
                    Rational snapped = snap(mid, (cell_hi - cell_lo) / 8);
                    offer(q(snapped) < 0 ? std::move(snapped) : std::move(mid));
                }
            }
            if (sampled > tol) {
                Rational coarse_width = len / pow_int(Rational(2), 12);
                PolyMinResult mr =
                    poly_min_on_interval(q, region.lo, region.hi, coarse_width);
                offer(snap(mr.argmin.lo, coarse_width / 2));
                if (mr.argmin.hi != mr.argmin.lo) {
                    offer(snap((mr.argmin.lo + mr.argmin.hi) / 2, coarse_width / 4));
                    offer(snap(mr.argmin.hi, coarse_width / 2));
                }
            }
        }
        if (sampled > tol && !cuts.empty()) {
            if (trace)
                std::cerr << "[primseq]   sampled=" << format_decimal(sampled, 4)
                          << " cuts=" << cuts.size() << std::endl;
            merge_points(grid, std::move(cuts));
            continue;
        }

        // Certified pass: escalate the refinement width until the Taylor
        // enclosures either clear zero, drop the uncertified mass below the
        // tolerance, or stall; tangent zeros that the enclosure cannot
        // resolve go through the exact sign analysis.
        Rational worst = 0;
        bool feasible = true;
        for (const Region& region : spec.regions) {
            Polynomial q = region_residual(dual, region, spec.side);
            Rational width = len / pow_int(Rational(2), 16);
            PolyMinResult mr =
                poly_min_on_interval(q, region.lo, region.hi, width);
            for (int tries = 0;
                 tries < 5 && mr.value_lower_bound < 0 &&
                 -mr.value_lower_bound > tol;
                 ++tries) {
                width /= pow_int(Rational(2), 8);
                mr = poly_min_on_interval(q, region.lo, region.hi, width);
            }
            if (mr.value_lower_bound >= 0) continue;  // certified clean
            std::vector<Rational> wits =
                poly_negative_witnesses(q, region.lo, region.hi);
            if (wits.empty()) continue;  // exactly feasible despite the slack
            feasible = false;
            if (-mr.value_lower_bound > worst) worst = -mr.value_lower_bound;
            if (-mr.value_lower_bound <= tol) continue;  // shift will absorb it
            for (auto& w : wits) {
                Rational snapped = snap(w, width);
                offer(q(snapped) < 0 ? std::move(snapped) : std::move(w));
            }
            offer(snap(mr.argmin.lo, width * 2));
            if (mr.argmin.hi != mr.argmin.lo) offer(snap(mr.argmin.hi, width * 2));
        }

        if (trace)
            std::cerr << "[primseq]   V=" << format_decimal(value, 15)
                      << " worst=" << (feasible ? "0" : format_decimal(worst, 4))
                      << " cuts=" << cuts.size() << std::endl;
        if (feasible || worst <= tol) {
            Rational shift = feasible ? Rational(0) : worst;
            BoundResult res{
                prefix,
                spec.side,
                BoundKind::Cdf,
                x0 ? *x0 : Rational(0),
                0,
                Rational(0),
                Rational(0),
                shift,
                spec.side == Side::Upper ? dual + shift : dual - shift,
                std::move(extremizer),
                round + 1};
            if (spec.side == Side::Upper) {
                res.lo = value;
                res.hi = value + shift;
            } else {
                res.lo = value - shift;
                res.hi = value;
            }
            return res;
        }
        merge_points(grid, std::move(cuts));
    }
    throw DomainError("bound: tolerance not reached within the iteration cap");
}

}  // namespace bounds_detail

/// Sharp bound on F(x0) (upper side) or F(x0-) (lower side) over all
/// measures matching the prefix. The dual program optimizes degree-m
/// polynomials in the (b-x) basis that majorize the closed indicator
/// [a, x0] (upper) or minorize the indicator of [a, x0) through its closure
/// behaviour at x0 (lower); polynomial continuity makes the closed and
/// half-open formulations of the pointwise constraints equivalent.
inline BoundResult cdf_bound(const ConstraintPrefix& prefix, const Rational& x0,
                             Side side, const Rational& tol) {
    if (x0 < prefix.interval.a || x0 > prefix.interval.b)
        throw DomainError("cdf_bound: x0 outside the interval");
    const Rational& b = prefix.interval.b;
    bounds_detail::SemiInfiniteSpec spec;
    spec.side = side;
    Polynomial one = Polynomial::constant(Rational(1), Basis::BMinusX, b);
    Polynomial zero = Polynomial::zero(Basis::BMinusX, b);
    spec.regions = {{prefix.interval.a, x0, one}, {x0, prefix.interval.b, zero}};
    if (side == Side::Upper)
        spec.atom_value = [x0](const Rational& g) {
            return g <= x0 ? Rational(1) : Rational(0);
        };
    else
        spec.atom_value = [x0](const Rational& g) {
            return g < x0 ? Rational(1) : Rational(0);
        };
    BoundResult res = bounds_detail::solve_semi_infinite(prefix, spec, x0, tol);
    res.kind = BoundKind::Cdf;
    return res;
}

/// Sharp bound on the primitive moment E[(b-X)^k]/k!. Orders k <= m are
/// pinned to c_k by the constraints and return a zero-width enclosure with
/// the target itself as certificate.
inline BoundResult moment_bound(const ConstraintPrefix& prefix, std::size_t k,
                                Side side, const Rational& tol) {
    const std::size_t m = prefix.order();
    const Rational& b = prefix.interval.b;
    Rational kfact(factorial(static_cast<unsigned>(k)));
    std::vector<Rational> target_coeffs(k + 1, Rational(0));
    target_coeffs[k] = 1 / kfact;
    Polynomial target(std::move(target_coeffs), Basis::BMinusX, b);

    if (k <= m) {
        // Pinned by the constraints; attach a feasibility witness.
        bounds_detail::SemiInfiniteSpec spec;
        spec.side = side;
        spec.regions = {{prefix.interval.a, prefix.interval.b, target}};
        spec.atom_value = [&b, &kfact, k](const Rational& g) {
            return pow_int(b - g, static_cast<long>(k)) / kfact;
        };
        BoundResult res =
            bounds_detail::solve_semi_infinite(prefix, spec, std::nullopt, tol);
        res.kind = BoundKind::Moment;
        res.k = k;
        // Every feasible measure gives exactly c_k, so the enclosure is a
        // point even if the dual wandered; pin it.
        res.lo = prefix.c[k];
        res.hi = prefix.c[k];
        res.shift = 0;
        res.certificate = target;
        return res;
    }

    bounds_detail::SemiInfiniteSpec spec;
    spec.side = side;
    spec.regions = {{prefix.interval.a, prefix.interval.b, target}};
    spec.atom_value = [&b, &kfact, k](const Rational& g) {
        return pow_int(b - g, static_cast<long>(k)) / kfact;
    };
    BoundResult res =
        bounds_detail::solve_semi_infinite(prefix, spec, std::nullopt, tol);
    res.kind = BoundKind::Moment;
    res.k = k;
    return res;
}

/// The (at most m+1)-atomic measure recovered from the final grid duals,
/// re-verified here: its moment rows reproduce the prefix exactly.
inline FiniteAtomic recover_extremizer(const BoundResult& result) {
    const ConstraintPrefix& prefix = result.prefix;
    const FiniteAtomic& w = result.extremizer;
    if (w.points.size() > prefix.order() + 1)
        throw DomainError("recover_extremizer: more than m+1 atoms");
    const Rational& b = prefix.interval.b;
    for (std::size_t j = 0; j <= prefix.order(); ++j) {
        Rational acc = 0;
        for (std::size_t i = 0; i < w.points.size(); ++i)
            acc += w.weights[i] * pow_int(b - w.points[i], static_cast<long>(j));
        if (acc != Rational(factorial(static_cast<unsigned>(j))) * prefix.c[j])
            throw DomainError("recover_extremizer: moment row mismatch");
    }
    return w;
}

struct EnvelopePoint {
    std::size_t m;
    Rational upper;
    Rational lower;
};

/// Both sharp CDF bounds for every order m = 1..m_max, from the zoo closed
/// form of the distribution. Solves are independent and may run
/// concurrently; results are ordered by m.
inline std::vector<EnvelopePoint> envelope_sweep(const Distribution& dist,
                                                 const Rational& x0,
                                                 std::size_t m_max,
                                                 const Rational& tol,
                                                 bool parallel = true) {
    if (m_max < 1) throw DomainError("envelope_sweep: requires m_max >= 1");
    PrimitiveSeq full = primitive_sequence(dist, m_max);
    auto solve_one = [&](std::size_t m) {
        ConstraintPrefix prefix = ConstraintPrefix::from(full.truncated(m));
        Rational upper = cdf_bound(prefix, x0, Side::Upper, tol).hi;
        Rational lower = cdf_bound(prefix, x0, Side::Lower, tol).lo;
        return EnvelopePoint{m, std::move(upper), std::move(lower)};
    };
    std::vector<EnvelopePoint> points;
    points.reserve(m_max);
    if (parallel && std::thread::hardware_concurrency() > 1) {
        std::vector<std::future<EnvelopePoint>> futures;
        futures.reserve(m_max);
        for (std::size_t m = 1; m <= m_max; ++m)
            futures.push_back(std::async(std::launch::async, solve_one, m));
        for (auto& f : futures) points.push_back(f.get());
    } else {
        for (std::size_t m = 1; m <= m_max; ++m) points.push_back(solve_one(m));
    }
    return points;
}

/// Plot-data files: one line per order, `<m> <decimal to 12 significant
/// digits>`, plus exact-rational sidecars at `<path>.exact` with the same
/// rows in p/q form. Byte-deterministic for fixed inputs.
inline void emit_envelope_files(const std::vector<EnvelopePoint>& points,
                                const std::string& out_upper,
                                const std::string& out_lower) {
    if (points.empty()) throw DomainError("emit_envelope_files: empty sweep");
    auto write_all = [&](const std::string& path, bool upper) {
        std::ofstream dec(path, std::ios::binary);
        std::ofstream exact(path + ".exact", std::ios::binary);
        if (!dec || !exact)
            throw DomainError("emit_envelope_files: cannot open " + path);
        for (const auto& p : points) {
            const Rational& v = upper ? p.upper : p.lower;
            dec << p.m << ' ' << format_decimal(v, 12) << '\n';
            exact << p.m << ' ' << format_rational(v) << '\n';
        }
        if (!dec.good() || !exact.good())
            throw DomainError("emit_envelope_files: write failure for " + path);
    };
    write_all(out_upper, true);
    write_all(out_lower, false);
}

}  // namespace primseq
