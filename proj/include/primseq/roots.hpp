#pragma once

#include <primseq/polynomial.hpp>
#include <primseq/rational.hpp>

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace primseq {

/// An interval certified to contain exactly one distinct real root of the
/// query polynomial. lo == hi marks an exact rational root.
struct RootInterval {
    Rational lo;
    Rational hi;
    bool multiplicity_free = true;
};

namespace root_detail {

using IPoly = std::vector<Integer>;  // dense integer coefficients, index = power

inline void trim(IPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

/// Clears denominators and divides by the content; the sign pattern of the
/// polynomial is unchanged.
inline IPoly integer_primitive(const std::vector<Rational>& c) {
    Integer l = 1;
    for (const auto& v : c) l = lcm(l, denominator(v));
    IPoly p(c.size());
    Integer content = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        p[i] = numerator(c[i]) * (l / denominator(c[i]));
        content = gcd(content, p[i]);
    }
    if (content > 1)
        for (auto& v : p) v /= content;
    trim(p);
    return p;
}

inline IPoly make_primitive(IPoly p) {
    trim(p);
    Integer content = 0;
    for (const auto& v : p) content = gcd(content, v);
    if (content > 1)
        for (auto& v : p) v /= content;
    return p;
}

inline IPoly derivative(const IPoly& p) {
    if (p.size() <= 1) return {};
    IPoly d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = Integer(k) * p[k];
    return d;
}

/// Exact sign of p(u/v) computed as sign of sum p[k] u^k v^(d-k).
inline int sign_at(const IPoly& p, const Rational& t) {
    if (p.empty()) return 0;
    const Integer& u = numerator(t);
    const Integer& v = denominator(t);
    Integer acc = p.back();
    Integer vp = 1;
    for (std::size_t k = p.size() - 1; k-- > 0;) {
        vp *= v;
        acc = acc * u + p[k] * vp;
    }
    return acc.sign();
}

/// Generalized Sturm chain with primitive integer members. The last element
/// is gcd(p, p') up to a constant factor.
inline std::vector<IPoly> sturm_chain(const IPoly& p) {
    std::vector<IPoly> chain;
    chain.push_back(make_primitive(p));
    IPoly d = make_primitive(derivative(p));
    if (d.empty()) return chain;
    chain.push_back(std::move(d));
    while (chain.back().size() >= 2) {
        const IPoly& a = chain[chain.size() - 2];
        const IPoly& b = chain.back();
        long delta = static_cast<long>(a.size()) - static_cast<long>(b.size());
        if (delta < 0) delta = 0;
        const Integer& lead = b.back();
        // Pseudo-remainder of a by b with multiplier lead^(delta+1).
        IPoly r = a;
        long steps = delta + 1;
        while (static_cast<long>(r.size()) >= static_cast<long>(b.size()) &&
               !r.empty()) {
            Integer top = r.back();
            std::size_t shift = r.size() - b.size();
            for (auto& v : r) v *= lead;
            for (std::size_t k = 0; k < b.size(); ++k)
                r[shift + k] -= top * b[k];
            trim(r);
            --steps;
        }
        // Remaining multiplier keeps the total factor at exactly lead^(delta+1).
        for (; steps > 0; --steps)
            for (auto& v : r) v *= lead;
        if (r.empty()) break;  // previous element is the gcd
        // Exact remainder is prem / lead^(delta+1); Sturm wants its negative,
        // up to positive scaling.
        bool mult_positive = lead > 0 || (delta + 1) % 2 == 0;
        if (mult_positive)
            for (auto& v : r) v = -v;
        chain.push_back(make_primitive(std::move(r)));
    }
    return chain;
}

inline int variations_at(const std::vector<IPoly>& chain, const Rational& t) {
    int count = 0;
    int prev = 0;
    for (const auto& p : chain) {
        int s = sign_at(p, t);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

inline Rational eval_rat(const std::vector<Rational>& c, const Rational& u) {
    return poly_detail::eval(c, u);
}

/// Quotient of exact division; throws if the division leaves a remainder.
inline std::vector<Rational> exact_divide(const std::vector<Rational>& num,
                                          const IPoly& den) {
    std::vector<Rational> d(den.size());
    for (std::size_t i = 0; i < den.size(); ++i) d[i] = Rational(den[i]);
    std::vector<Rational> r = num;
    poly_detail::trim(r);
    if (d.empty()) throw DomainError("exact_divide: zero divisor");
    std::vector<Rational> q(r.size() >= d.size() ? r.size() - d.size() + 1 : 0,
                            Rational(0));
    while (r.size() >= d.size() && !r.empty()) {
        Rational f = r.back() / d.back();
        std::size_t shift = r.size() - d.size();
        q[shift] = f;
        for (std::size_t k = 0; k < d.size(); ++k) r[shift + k] -= f * d[k];
        poly_detail::trim(r);
    }
    if (!r.empty()) throw DomainError("exact_divide: nonzero remainder");
    return q;
}

/// Deflates all factors (u - r); returns the multiplicity removed.
inline unsigned deflate_root(std::vector<Rational>& c, const Rational& r) {
    unsigned mult = 0;
    while (c.size() >= 2 && eval_rat(c, r) == 0) {
        // synthetic division by (u - r)
        std::vector<Rational> q(c.size() - 1);
        Rational carry = c.back();
        for (std::size_t k = c.size() - 1; k-- > 0;) {
            q[k] = carry;
            carry = c[k] + carry * r;
        }
        // carry == remainder == 0 by the eval check
        c = std::move(q);
        ++mult;
    }
    return mult;
}

/// Isolation state for one polynomial on one interval, in the polynomial's
/// own basis variable.
struct Isolation {
    std::vector<Rational> reduced;  // endpoint roots deflated out
    std::vector<IPoly> chain;       // Sturm chain of `reduced`
    IPoly square_free;              // square-free part of `reduced`
    std::vector<IPoly> gcd_chain;   // chain of gcd(reduced, reduced'), may be empty
    std::vector<RootInterval> intervals;  // sorted by lo
};

inline Rational midpoint(const Rational& a, const Rational& b) {
    return (a + b) / 2;
}

/// A point in (lo, hi) where p is nonzero. p has finitely many roots, so one
/// of the trial points must work.
inline Rational nonroot_point(const std::vector<IPoly>& chain, const Rational& lo,
                              const Rational& hi) {
    const IPoly& p = chain.front();
    Rational len = hi - lo;
    for (unsigned k = 1;; ++k) {
        Rational cand = lo + len * Rational(k, 2 * k + 1);
        if (sign_at(p, cand) != 0) return cand;
    }
}

inline void isolate_rec(const Isolation& ctx, const Rational& lo, int vlo,
                        const Rational& hi, int vhi,
                        std::vector<RootInterval>& out) {
    int count = vlo - vhi;
    if (count <= 0) return;
    if (count == 1) {
        out.push_back(RootInterval{lo, hi, true});
        return;
    }
    Rational mid = nonroot_point(ctx.chain, lo, hi);
    int vmid = variations_at(ctx.chain, mid);
    isolate_rec(ctx, lo, vlo, mid, vmid, out);
    isolate_rec(ctx, mid, vmid, hi, vhi, out);
}

/// Shrinks a bracketing interval of a simple root of the square-free part
/// until hi - lo <= width (or an exact root is hit).
inline RootInterval refine(const Isolation& ctx, RootInterval iv,
                           const Rational& width) {
    if (iv.lo == iv.hi) return iv;
    int slo = sign_at(ctx.square_free, iv.lo);
    while (iv.hi - iv.lo > width) {
        Rational mid = midpoint(iv.lo, iv.hi);
        int smid = sign_at(ctx.square_free, mid);
        if (smid == 0) {
            iv.lo = mid;
            iv.hi = mid;
            return iv;
        }
        if (smid == slo)
            iv.lo = mid;
        else
            iv.hi = mid;
    }
    return iv;
}

/// Full isolation of the distinct real roots of `coeffs` in [lo, hi].
inline Isolation isolate(const std::vector<Rational>& coeffs, const Rational& lo,
                         const Rational& hi) {
    Isolation ctx;
    ctx.reduced = coeffs;
    poly_detail::trim(ctx.reduced);
    if (ctx.reduced.empty())
        throw DomainError("root isolation rejects the zero polynomial");

    unsigned mult_lo = deflate_root(ctx.reduced, lo);
    unsigned mult_hi = (hi != lo) ? deflate_root(ctx.reduced, hi) : 0;
    if (mult_lo > 0)
        ctx.intervals.push_back(RootInterval{lo, lo, mult_lo == 1});
    if (mult_hi > 0)
        ctx.intervals.push_back(RootInterval{hi, hi, mult_hi == 1});

    if (ctx.reduced.size() >= 2 && lo < hi) {
        IPoly rp = integer_primitive(ctx.reduced);
        ctx.chain = sturm_chain(rp);
        const IPoly& g = ctx.chain.back();
        if (g.size() >= 2) {
            ctx.square_free = make_primitive(
                integer_primitive(exact_divide(ctx.reduced, g)));
            ctx.gcd_chain = sturm_chain(g);
        } else {
            ctx.square_free = rp;
        }
        std::vector<RootInterval> interior;
        isolate_rec(ctx, lo, variations_at(ctx.chain, lo), hi,
                    variations_at(ctx.chain, hi), interior);
        // Interior brackets (l, h] have nonroot endpoints, so the root is
        // strictly inside. Mark multiplicity by counting gcd roots inside.
        for (auto& iv : interior) {
            if (!ctx.gcd_chain.empty()) {
                int mult_roots = variations_at(ctx.gcd_chain, iv.lo) -
                                 variations_at(ctx.gcd_chain, iv.hi);
                iv.multiplicity_free = mult_roots == 0;
            }
            ctx.intervals.push_back(iv);
        }
    } else {
        ctx.square_free = integer_primitive(ctx.reduced);
    }
    std::sort(ctx.intervals.begin(), ctx.intervals.end(),
              [](const RootInterval& a, const RootInterval& b) {
                  return a.lo < b.lo;
              });
    return ctx;
}

/// Refines until consecutive intervals are separated by nonempty gaps.
inline void separate(Isolation& ctx) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < ctx.intervals.size(); ++i) {
            RootInterval& a = ctx.intervals[i];
            RootInterval& b = ctx.intervals[i + 1];
            while (a.hi >= b.lo) {
                Rational w = a.hi - a.lo;
                Rational wb = b.hi - b.lo;
                if (w == 0 && wb == 0)
                    throw DomainError("distinct roots cannot coincide");
                if (w >= wb)
                    a = refine(ctx, a, w / 2);
                else
                    b = refine(ctx, b, wb / 2);
                changed = true;
            }
        }
    }
}

struct QInterval {
    Rational lo;
    Rational hi;
};

inline QInterval iv_mul(const QInterval& a, const QInterval& b) {
    Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo,
             p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

/// Interval Horner evaluation: encloses {p(u) : u in [ulo, uhi]}.
inline QInterval interval_eval(const std::vector<Rational>& c, const Rational& ulo,
                               const Rational& uhi) {
    QInterval acc{Rational(0), Rational(0)};
    QInterval u{ulo, uhi};
    for (std::size_t k = c.size(); k-- > 0;) {
        acc = iv_mul(acc, u);
        acc.lo += c[k];
        acc.hi += c[k];
    }
    return acc;
}

/// Taylor-centered enclosure of {p(u) : u in [ulo, uhi]}: expand about the
/// midpoint and bound the tail by sum |a_k| (w/2)^k. Near a stationary
/// point the linear coefficient is tiny, which makes this far tighter than
/// interval Horner at the same width.
inline QInterval taylor_enclosure(const std::vector<Rational>& c,
                                  const Rational& ulo, const Rational& uhi) {
    Rational center = (ulo + uhi) / 2;
    Rational half = (uhi - ulo) / 2;
    std::vector<Rational> shifted =
        poly_detail::affine_substitute(c, center, Rational(1));
    Rational base = shifted.empty() ? Rational(0) : shifted[0];
    Rational tail = 0;
    Rational hp = 1;
    for (std::size_t k = 1; k < shifted.size(); ++k) {
        hp *= half;
        tail += abs_val(shifted[k]) * hp;
    }
    return {base - tail, base + tail};
}

/// The fraction with the smallest denominator in [lo, hi] (Stern-Brocot
/// descent). Used to keep refinement points short.
inline Rational simplest_rational_in(const Rational& lo, const Rational& hi) {
    if (lo > hi) throw DomainError("simplest_rational_in: empty interval");
    if (lo == hi) return lo;
    Integer fl = floor_rat(lo);
    if (Rational(fl) == lo) return lo;
    if (Rational(fl + 1) <= hi) return Rational(fl + 1);
    // both endpoints inside (fl, fl+1)
    Rational a = lo - Rational(fl);
    Rational b = hi - Rational(fl);
    // recurse on reciprocals: simplest in [1/b, 1/a] inverted back
    Rational inner = simplest_rational_in(1 / b, 1 / a);
    return Rational(fl) + 1 / inner;
}

/// Maps a basis-variable range back to x space.
inline RootInterval to_x_interval(const Polynomial& p, const RootInterval& iv) {
    if (p.basis() == Basis::X) return iv;
    return RootInterval{p.anchor() - iv.hi, p.anchor() - iv.lo,
                        iv.multiplicity_free};
}

/// The [lo, hi] range in x mapped into the polynomial's basis variable.
inline std::pair<Rational, Rational> to_u_range(const Polynomial& p,
                                                const Rational& lo,
                                                const Rational& hi) {
    if (p.basis() == Basis::X) return {lo, hi};
    return {p.anchor() - hi, p.anchor() - lo};
}

}  // namespace root_detail

/// Pairwise-disjoint intervals, each containing exactly one distinct real
/// root of p in [lo, hi]; their union covers all such roots. The zero
/// polynomial is rejected.
inline std::vector<RootInterval> sturm_isolate_roots(const Polynomial& p,
                                                     const Rational& lo,
                                                     const Rational& hi) {
    if (lo >= hi) throw DomainError("sturm_isolate_roots: requires lo < hi");
    auto [ulo, uhi] = root_detail::to_u_range(p, lo, hi);
    root_detail::Isolation ctx = root_detail::isolate(p.coefficients(), ulo, uhi);
    root_detail::separate(ctx);
    std::vector<RootInterval> out;
    out.reserve(ctx.intervals.size());
    for (const auto& iv : ctx.intervals)
        out.push_back(root_detail::to_x_interval(p, iv));
    std::sort(out.begin(), out.end(),
              [](const RootInterval& a, const RootInterval& b) {
                  return a.lo < b.lo;
              });
    return out;
}

struct PolyMinResult {
    RootInterval argmin;
    Rational value_lower_bound;
};

/// Certified global minimum information for p over [lo, hi]: the candidate
/// interval (an endpoint or a bracket of a stationary point, refined to the
/// requested width) whose value enclosure has the least lower bound, and
/// that bound, which is a rigorous lower bound for min p over [lo, hi].
inline PolyMinResult poly_min_on_interval(const Polynomial& p, const Rational& lo,
                                          const Rational& hi,
                                          const Rational& width) {
    if (lo > hi) throw DomainError("poly_min_on_interval: requires lo <= hi");
    if (width <= 0) throw DomainError("poly_min_on_interval: requires width > 0");
    auto [ulo, uhi] = root_detail::to_u_range(p, lo, hi);
    const auto& c = p.coefficients();

    struct Candidate {
        RootInterval iv;        // in basis variable
        root_detail::QInterval value;
    };
    std::vector<Candidate> cands;
    auto add_point = [&](const Rational& u) {
        Rational v = root_detail::eval_rat(c, u);
        cands.push_back({RootInterval{u, u, true}, {v, v}});
    };
    add_point(ulo);
    if (uhi != ulo) add_point(uhi);

    std::vector<Rational> dc = poly_detail::derivative_u(c);
    if (!dc.empty() && ulo < uhi) {
        root_detail::Isolation ctx = root_detail::isolate(dc, ulo, uhi);
        for (auto iv : ctx.intervals) {
            iv = root_detail::refine(ctx, iv, width);
            if (iv.lo == iv.hi) {
                add_point(iv.lo);
                continue;
            }
            // The bracket holds one stationary point. Unless the derivative
            // flips from negative to positive (an interior minimum), the
            // minimum over the bracket sits at a bracket endpoint and the
            // enclosure can be exact.
            Rational dlo = root_detail::eval_rat(dc, iv.lo);
            Rational dhi = root_detail::eval_rat(dc, iv.hi);
            if (dlo < 0 && dhi > 0) {
                cands.push_back({iv, root_detail::taylor_enclosure(c, iv.lo, iv.hi)});
            } else {
                Rational vlo = root_detail::eval_rat(c, iv.lo);
                Rational vhi = root_detail::eval_rat(c, iv.hi);
                cands.push_back(
                    {iv, {std::min(vlo, vhi), std::max(vlo, vhi)}});
            }
        }
    }

    const Candidate* best = &cands.front();
    for (const auto& cand : cands)
        if (cand.value.lo < best->value.lo) best = &cand;
    return PolyMinResult{root_detail::to_x_interval(p, best->iv), best->value.lo};
}

/// Exact rational points with p < 0, one for every maximal open region where
/// p is negative on [lo, hi]. Empty exactly when p >= 0 on the whole
/// interval; this decides nonnegativity.
inline std::vector<Rational> poly_negative_witnesses(const Polynomial& p,
                                                     const Rational& lo,
                                                     const Rational& hi) {
    if (lo > hi) throw DomainError("poly_negative_witnesses: requires lo <= hi");
    std::vector<Rational> out;
    if (p.is_zero()) return out;
    auto [ulo, uhi] = root_detail::to_u_range(p, lo, hi);
    const auto& c = p.coefficients();
    auto test = [&](const Rational& u) {
        if (root_detail::eval_rat(c, u) < 0) out.push_back(u);
    };
    if (ulo == uhi) {
        test(ulo);
    } else {
        root_detail::Isolation ctx = root_detail::isolate(c, ulo, uhi);
        root_detail::separate(ctx);
        test(ulo);
        for (std::size_t i = 0; i + 1 < ctx.intervals.size(); ++i)
            test(root_detail::midpoint(ctx.intervals[i].hi,
                                       ctx.intervals[i + 1].lo));
        if (uhi != ulo) test(uhi);
    }
    if (p.basis() == Basis::BMinusX) {
        for (auto& u : out) u = p.anchor() - u;
        std::sort(out.begin(), out.end());
    }
    return out;
}

/// Exact decision of p >= 0 everywhere on [lo, hi].
inline bool poly_nonneg_on_interval(const Polynomial& p, const Rational& lo,
                                    const Rational& hi) {
    return poly_negative_witnesses(p, lo, hi).empty();
}

}  // namespace primseq
