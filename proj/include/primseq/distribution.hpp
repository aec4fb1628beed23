#pragma once

#include <primseq/polynomial.hpp>
#include <primseq/rational.hpp>
#include <primseq/roots.hpp>
#include <primseq/sequence.hpp>

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace primseq {

class Distribution;

struct PointMass {
    Interval interval;
    Rational c;

    PointMass(Interval iv, Rational c_) : interval(std::move(iv)), c(std::move(c_)) {
        if (c < interval.a || c > interval.b)
            throw DomainError("PointMass: atom outside the interval");
    }
};

struct FiniteAtomic {
    Interval interval;
    std::vector<Rational> points;   // strictly increasing, inside [a, b]
    std::vector<Rational> weights;  // nonnegative, sum exactly 1

    FiniteAtomic(Interval iv, std::vector<Rational> pts, std::vector<Rational> ws)
        : interval(std::move(iv)), points(std::move(pts)), weights(std::move(ws)) {
        if (points.empty() || points.size() != weights.size())
            throw DomainError("FiniteAtomic: points/weights mismatch");
        Rational total = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i] < interval.a || points[i] > interval.b)
                throw DomainError("FiniteAtomic: atom outside the interval");
            if (i > 0 && points[i] <= points[i - 1])
                throw DomainError("FiniteAtomic: atoms must be strictly increasing");
            if (weights[i] < 0)
                throw DomainError("FiniteAtomic: negative weight");
            total += weights[i];
        }
        if (total != 1) throw DomainError("FiniteAtomic: weights must sum to 1");
    }
};

/// Beta(alpha, beta) with rational parameters, supported on [0, 1].
struct BetaRational {
    Rational alpha;
    Rational beta;

    BetaRational(Rational a, Rational b) : alpha(std::move(a)), beta(std::move(b)) {
        if (alpha <= 0 || beta <= 0)
            throw DomainError("BetaRational: parameters must be positive");
    }
};

/// Density given by a polynomial p_i on each knot interval [xi_{i-1}, xi_i].
/// Nonnegativity of every piece is certified exactly at construction and the
/// total mass must equal 1.
struct PiecewisePolyDensity {
    std::vector<Rational> knots;
    std::vector<Polynomial> pieces;  // monomial-in-x basis

    PiecewisePolyDensity(std::vector<Rational> ks, std::vector<Polynomial> ps)
        : knots(std::move(ks)), pieces(std::move(ps)) {
        if (knots.size() < 2 || pieces.size() + 1 != knots.size())
            throw DomainError("PiecewisePolyDensity: needs k+1 knots for k pieces");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (knots[i] <= knots[i - 1])
                throw DomainError("PiecewisePolyDensity: knots must be strictly increasing");
        Rational mass = 0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (pieces[i].basis() != Basis::X)
                throw DomainError("PiecewisePolyDensity: pieces use the x basis");
            if (!poly_nonneg_on_interval(pieces[i], knots[i], knots[i + 1]))
                throw DomainError("PiecewisePolyDensity: density is negative on piece " +
                                  std::to_string(i));
            mass += poly_definite_integral(pieces[i], knots[i], knots[i + 1]);
        }
        if (mass != 1)
            throw DomainError("PiecewisePolyDensity: density must integrate to exactly 1, got " +
                              format_rational(mass));
    }

    Interval interval() const { return Interval(knots.front(), knots.back()); }
};

struct Mixture {
    std::vector<Distribution> components;
    std::vector<Rational> weights;  // nonnegative, sum exactly 1

    Mixture(std::vector<Distribution> comps, std::vector<Rational> ws);
};

/// Tagged union over the supported families, with value semantics; the
/// payload is shared immutably so copies are cheap.
class Distribution {
public:
    using Variant =
        std::variant<PointMass, FiniteAtomic, BetaRational, PiecewisePolyDensity, Mixture>;

    Distribution(PointMass v) : v_(std::make_shared<Variant>(std::move(v))) {}
    Distribution(FiniteAtomic v) : v_(std::make_shared<Variant>(std::move(v))) {}
    Distribution(BetaRational v) : v_(std::make_shared<Variant>(std::move(v))) {}
    Distribution(PiecewisePolyDensity v) : v_(std::make_shared<Variant>(std::move(v))) {}
    Distribution(Mixture v) : v_(std::make_shared<Variant>(std::move(v))) {}

    const Variant& value() const { return *v_; }

    Interval interval() const;

private:
    std::shared_ptr<const Variant> v_;
};

inline Interval Distribution::interval() const {
    struct Visitor {
        Interval operator()(const PointMass& d) const { return d.interval; }
        Interval operator()(const FiniteAtomic& d) const { return d.interval; }
        Interval operator()(const BetaRational&) const {
            return Interval(Rational(0), Rational(1));
        }
        Interval operator()(const PiecewisePolyDensity& d) const { return d.interval(); }
        Interval operator()(const Mixture& d) const {
            return d.components.front().interval();
        }
    };
    return std::visit(Visitor{}, *v_);
}

inline Mixture::Mixture(std::vector<Distribution> comps, std::vector<Rational> ws)
    : components(std::move(comps)), weights(std::move(ws)) {
    if (components.empty() || components.size() != weights.size())
        throw DomainError("Mixture: components/weights mismatch");
    Rational total = 0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (weights[i] < 0) throw DomainError("Mixture: negative weight");
        total += weights[i];
        if (!(components[i].interval() == components[0].interval()))
            throw DomainError("Mixture: components must share the interval");
    }
    if (total != 1) throw DomainError("Mixture: weights must sum to 1");
}

// --- primitive sequences (closed forms) ------------------------------------

/// eps_n = (b - c)^n / n! for the point mass at c.
inline PrimitiveSeq eps_point_mass(const Rational& c, const Interval& iv,
                                   std::size_t m) {
    if (c < iv.a || c > iv.b) throw DomainError("eps_point_mass: atom outside interval");
    std::vector<Rational> eps(m + 1);
    eps[0] = 1;
    Rational base = iv.b - c;
    for (std::size_t n = 1; n <= m; ++n) eps[n] = eps[n - 1] * base / Rational(n);
    return PrimitiveSeq(iv, std::move(eps));
}

/// eps_n = sum_i pi_i (b - c_i)^n / n!, the convex combination of the
/// point-mass sequences.
inline PrimitiveSeq eps_atomic(const FiniteAtomic& d, std::size_t m) {
    std::vector<Rational> eps(m + 1, Rational(0));
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        Rational term = d.weights[i];
        eps[0] += term;
        Rational base = d.interval.b - d.points[i];
        for (std::size_t n = 1; n <= m; ++n) {
            term *= base / Rational(n);
            eps[n] += term;
        }
    }
    return PrimitiveSeq(d.interval, std::move(eps));
}

/// eps_n = (1/n!) prod_{k=0}^{n-1} (beta+k)/(alpha+beta+k) on [0, 1]; the
/// ascending-product form of B(alpha, beta+n)/B(alpha, beta) avoids any
/// Gamma evaluation.
inline PrimitiveSeq eps_beta(const Rational& alpha, const Rational& beta,
                             std::size_t m) {
    if (alpha <= 0 || beta <= 0)
        throw DomainError("eps_beta: parameters must be positive");
    std::vector<Rational> eps(m + 1);
    eps[0] = 1;
    for (std::size_t n = 1; n <= m; ++n)
        eps[n] = eps[n - 1] * (beta + Rational(n - 1)) /
                 ((alpha + beta + Rational(n - 1)) * Rational(n));
    return PrimitiveSeq(Interval(Rational(0), Rational(1)), std::move(eps));
}

/// Knot-jump expansion: derivative jumps of the density at each knot feed
/// eps_n at the 1/(n+j+1)! scale; cross-checked in the tests against direct
/// symbolic integration.
inline PrimitiveSeq eps_pwpoly(const PiecewisePolyDensity& d, std::size_t m) {
    const Rational& a = d.knots.front();
    const Rational& b = d.knots.back();
    int dmax = 0;
    for (const auto& p : d.pieces) dmax = std::max(dmax, p.degree());
    // jumps[j] holds the pairs (point, jump of the j-th derivative there).
    std::vector<std::vector<std::pair<Rational, Rational>>> jumps(
        static_cast<std::size_t>(dmax) + 1);
    std::vector<Polynomial> deriv = d.pieces;
    for (int j = 0; j <= dmax; ++j) {
        jumps[static_cast<std::size_t>(j)].push_back({a, deriv.front()(a)});
        for (std::size_t i = 0; i + 1 < d.pieces.size(); ++i)
            jumps[static_cast<std::size_t>(j)].push_back(
                {d.knots[i + 1], deriv[i + 1](d.knots[i + 1]) - deriv[i](d.knots[i + 1])});
        for (auto& p : deriv) p = poly_derivative(p);
    }
    std::vector<Rational> eps(m + 1, Rational(0));
    for (std::size_t n = 0; n <= m; ++n) {
        Rational acc = 0;
        for (std::size_t j = 0; j < jumps.size(); ++j) {
            Rational inv_fact =
                Rational(1) / Rational(factorial(static_cast<unsigned>(n + j + 1)));
            for (const auto& [point, jump] : jumps[j]) {
                if (jump == 0) continue;
                acc += inv_fact * jump *
                       pow_int(b - point, static_cast<long>(n + j + 1));
            }
        }
        eps[n] = acc;
    }
    return PrimitiveSeq(Interval(a, b), std::move(eps));
}

inline PrimitiveSeq primitive_sequence(const Distribution& dist, std::size_t m);

/// Exact weighted sum of the component sequences.
inline PrimitiveSeq eps_mixture(const Mixture& d, std::size_t m) {
    Interval iv = d.components[0].interval();
    std::vector<Rational> eps(m + 1, Rational(0));
    for (std::size_t i = 0; i < d.components.size(); ++i) {
        PrimitiveSeq part = primitive_sequence(d.components[i], m);
        for (std::size_t n = 0; n <= m; ++n) eps[n] += d.weights[i] * part.eps(n);
    }
    return PrimitiveSeq(iv, std::move(eps));
}

inline PrimitiveSeq primitive_sequence(const Distribution& dist, std::size_t m) {
    struct Visitor {
        std::size_t m;
        PrimitiveSeq operator()(const PointMass& d) const {
            return eps_point_mass(d.c, d.interval, m);
        }
        PrimitiveSeq operator()(const FiniteAtomic& d) const { return eps_atomic(d, m); }
        PrimitiveSeq operator()(const BetaRational& d) const {
            return eps_beta(d.alpha, d.beta, m);
        }
        PrimitiveSeq operator()(const PiecewisePolyDensity& d) const {
            return eps_pwpoly(d, m);
        }
        PrimitiveSeq operator()(const Mixture& d) const { return eps_mixture(d, m); }
    };
    return std::visit(Visitor{m}, dist.value());
}

// --- exact CDF oracles ------------------------------------------------------

namespace dist_detail {

/// Polynomial density of an integer-parameter Beta: x^(a-1)(1-x)^(b-1)/B(a,b).
inline Polynomial beta_density(const Rational& alpha, const Rational& beta) {
    if (denominator(alpha) != 1 || denominator(beta) != 1)
        throw DomainError(
            "cdf of BetaRational is exact only for integer parameters");
    unsigned ia = static_cast<unsigned>(numerator(alpha));
    unsigned ib = static_cast<unsigned>(numerator(beta));
    Rational norm = Rational(factorial(ia + ib - 1)) /
                    Rational(factorial(ia - 1) * factorial(ib - 1));
    Polynomial x_pow({Rational(0), Rational(1)});
    Polynomial result = Polynomial::constant(norm);
    for (unsigned k = 1; k < ia; ++k) result = result * x_pow;
    Polynomial one_minus_x({Rational(1), Rational(-1)});
    for (unsigned k = 1; k < ib; ++k) result = result * one_minus_x;
    return result;
}

}  // namespace dist_detail

/// F(x) = mu((-inf, x]), exact.
inline Rational cdf(const Distribution& dist, const Rational& x);

/// Left limit F(x-) = mu((-inf, x)), exact.
inline Rational cdf_left(const Distribution& dist, const Rational& x);

namespace dist_detail {

inline Rational pwpoly_cdf(const PiecewisePolyDensity& d, const Rational& x) {
    if (x < d.knots.front()) return 0;
    Rational acc = 0;
    for (std::size_t i = 0; i < d.pieces.size(); ++i) {
        if (x >= d.knots[i + 1]) {
            acc += poly_definite_integral(d.pieces[i], d.knots[i], d.knots[i + 1]);
        } else {
            acc += poly_definite_integral(d.pieces[i], d.knots[i], x);
            break;
        }
    }
    return acc;
}

}  // namespace dist_detail

inline Rational cdf(const Distribution& dist, const Rational& x) {
    struct Visitor {
        const Rational& x;
        Rational operator()(const PointMass& d) const {
            return x >= d.c ? Rational(1) : Rational(0);
        }
        Rational operator()(const FiniteAtomic& d) const {
            Rational acc = 0;
            for (std::size_t i = 0; i < d.points.size(); ++i)
                if (d.points[i] <= x) acc += d.weights[i];
            return acc;
        }
        Rational operator()(const BetaRational& d) const {
            if (x <= 0) return 0;
            if (x >= 1) return 1;
            Polynomial density = dist_detail::beta_density(d.alpha, d.beta);
            return poly_definite_integral(density, Rational(0), x);
        }
        Rational operator()(const PiecewisePolyDensity& d) const {
            return dist_detail::pwpoly_cdf(d, x);
        }
        Rational operator()(const Mixture& d) const {
            Rational acc = 0;
            for (std::size_t i = 0; i < d.components.size(); ++i)
                acc += d.weights[i] * cdf(d.components[i], x);
            return acc;
        }
    };
    return std::visit(Visitor{x}, dist.value());
}

inline Rational cdf_left(const Distribution& dist, const Rational& x) {
    struct Visitor {
        const Rational& x;
        Rational operator()(const PointMass& d) const {
            return x > d.c ? Rational(1) : Rational(0);
        }
        Rational operator()(const FiniteAtomic& d) const {
            Rational acc = 0;
            for (std::size_t i = 0; i < d.points.size(); ++i)
                if (d.points[i] < x) acc += d.weights[i];
            return acc;
        }
        Rational operator()(const BetaRational& d) const { return cdf(Distribution(d), x); }
        Rational operator()(const PiecewisePolyDensity& d) const {
            return dist_detail::pwpoly_cdf(d, x);
        }
        Rational operator()(const Mixture& d) const {
            Rational acc = 0;
            for (std::size_t i = 0; i < d.components.size(); ++i)
                acc += d.weights[i] * cdf_left(d.components[i], x);
            return acc;
        }
    };
    return std::visit(Visitor{x}, dist.value());
}

// --- distribution spec grammar ----------------------------------------------
//
//   uniform
//   beta <alpha> <beta>
//   point[a,b] <c>                       (interval optional, default [0,1])
//   atomic[a,b] <pt>:<w> <pt>:<w> ...    (interval optional, default [0,1])
//   pwpoly[a,b] <knots...> | <coeffs piece 1> | <coeffs piece 2> ...
//   mix <w>:(<spec>) <w>:(<spec>) ...
//
// Rationals use the "p/q" form. Piece coefficients are listed in ascending
// powers of x. The pwpoly knots must span the annotated interval when one
// is given.

namespace dist_detail {

class SpecParser {
public:
    explicit SpecParser(std::string_view text) : text_(text) {}

    Distribution parse() {
        Distribution d = parse_spec();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return d;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("distribution spec: " + msg, pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
            ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ == text_.size();
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string parse_word() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               ((text_[pos_] >= 'a' && text_[pos_] <= 'z') ||
                (text_[pos_] >= 'A' && text_[pos_] <= 'Z')))
            ++pos_;
        if (pos_ == start) fail("expected a family keyword");
        return std::string(text_.substr(start, pos_ - start));
    }

    Rational parse_number() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        while (pos_ < text_.size() &&
               ((text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '/'))
            ++pos_;
        if (pos_ == start) fail("expected a rational");
        return parse_rational(text_.substr(start, pos_ - start), start);
    }

    std::optional<Interval> parse_optional_interval() {
        if (!consume('[')) return std::nullopt;
        Rational a = parse_number();
        if (!consume(',')) fail("expected ',' in interval");
        Rational b = parse_number();
        if (!consume(']')) fail("expected ']' closing interval");
        return Interval(std::move(a), std::move(b));
    }

    bool next_is_number() {
        skip_ws();
        return pos_ < text_.size() &&
               (text_[pos_] == '-' || (text_[pos_] >= '0' && text_[pos_] <= '9'));
    }

    Distribution parse_spec() {
        std::string family = parse_word();
        if (family == "uniform") return Distribution(BetaRational(1, 1));
        if (family == "beta") {
            Rational alpha = parse_number();
            Rational beta = parse_number();
            return Distribution(BetaRational(std::move(alpha), std::move(beta)));
        }
        if (family == "point") {
            Interval iv = parse_optional_interval().value_or(
                Interval(Rational(0), Rational(1)));
            Rational c = parse_number();
            return Distribution(PointMass(std::move(iv), std::move(c)));
        }
        if (family == "atomic") {
            Interval iv = parse_optional_interval().value_or(
                Interval(Rational(0), Rational(1)));
            std::vector<Rational> pts, ws;
            while (next_is_number()) {
                pts.push_back(parse_number());
                if (!consume(':')) fail("expected ':' between atom and weight");
                ws.push_back(parse_number());
            }
            if (pts.empty()) fail("atomic needs at least one atom");
            return Distribution(FiniteAtomic(std::move(iv), std::move(pts), std::move(ws)));
        }
        if (family == "pwpoly") {
            std::optional<Interval> iv = parse_optional_interval();
            std::vector<Rational> knots;
            while (next_is_number()) knots.push_back(parse_number());
            if (knots.size() < 2) fail("pwpoly needs at least two knots");
            std::vector<Polynomial> pieces;
            while (consume('|')) {
                std::vector<Rational> coeffs;
                while (next_is_number()) coeffs.push_back(parse_number());
                pieces.push_back(Polynomial(std::move(coeffs)));
            }
            PiecewisePolyDensity d(std::move(knots), std::move(pieces));
            if (iv && !(d.interval() == *iv))
                fail("pwpoly knots do not span the annotated interval");
            return Distribution(std::move(d));
        }
        if (family == "mix") {
            std::vector<Distribution> comps;
            std::vector<Rational> ws;
            while (next_is_number()) {
                ws.push_back(parse_number());
                if (!consume(':')) fail("expected ':' after mixture weight");
                if (!consume('(')) fail("expected '(' around mixture component");
                comps.push_back(parse_spec());
                if (!consume(')')) fail("expected ')' closing mixture component");
            }
            if (comps.empty()) fail("mix needs at least one component");
            return Distribution(Mixture(std::move(comps), std::move(ws)));
        }
        fail("unknown family '" + family + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace dist_detail

/// Parses the CLI distribution grammar; errors carry the input offset.
inline Distribution parse_dist_spec(std::string_view text) {
    return dist_detail::SpecParser(text).parse();
}

}  // namespace primseq
