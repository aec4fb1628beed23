#pragma once

#include <primseq/rational.hpp>

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace primseq {

struct Interval {
    Rational a;
    Rational b;

    Interval(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {
        if (a >= b) throw DomainError("Interval: requires a < b");
    }

    Rational length() const { return b - a; }

    friend bool operator==(const Interval& x, const Interval& y) {
        return x.a == y.a && x.b == y.b;
    }
};

/// Finite prefix eps_0..eps_m of a primitive sequence on [a, b].
/// Construction pins eps_0 = 1; the order-n bounds 0 <= eps_n <= (b-a)^n/n!
/// are a property of admissible sequences and are checked by
/// check_elementary and the converters, so that diagnostic inputs which
/// violate them can still be represented.
class PrimitiveSeq {
public:
    PrimitiveSeq(Interval interval, std::vector<Rational> eps)
        : interval_(std::move(interval)), eps_(std::move(eps)) {
        if (eps_.empty()) throw DomainError("PrimitiveSeq: needs eps_0");
        if (eps_[0] != 1) throw DomainError("PrimitiveSeq: eps_0 must equal 1");
    }

    const Interval& interval() const { return interval_; }
    std::size_t order() const { return eps_.size() - 1; }  // m
    const std::vector<Rational>& terms() const { return eps_; }

    const Rational& eps(std::size_t n) const {
        if (n >= eps_.size()) throw DomainError("PrimitiveSeq: index beyond prefix");
        return eps_[n];
    }

    /// Prefix of lower order m <= order().
    PrimitiveSeq truncated(std::size_t m) const {
        if (m >= eps_.size())
            throw DomainError("PrimitiveSeq: truncation beyond stored prefix");
        return PrimitiveSeq(interval_,
                            std::vector<Rational>(eps_.begin(), eps_.begin() + m + 1));
    }

    friend bool operator==(const PrimitiveSeq& x, const PrimitiveSeq& y) {
        return x.interval_ == y.interval_ && x.eps_ == y.eps_;
    }

private:
    Interval interval_;
    std::vector<Rational> eps_;
};

/// gamma_n = n! eps_n / (b-a)^n, the moment sequence of (b-X)/(b-a).
/// normalize_gamma() validates monotonicity; raw instances may violate it
/// so the admissibility screens can diagnose them.
struct NormalizedSeq {
    std::vector<Rational> gamma;

    explicit NormalizedSeq(std::vector<Rational> g) : gamma(std::move(g)) {
        if (gamma.empty()) throw DomainError("NormalizedSeq: needs gamma_0");
        if (gamma[0] != 1) throw DomainError("NormalizedSeq: gamma_0 must equal 1");
    }

    std::size_t order() const { return gamma.size() - 1; }
};

struct MomentVector {
    Rational b;
    std::vector<Rational> moments;  // moments[n] = E[X^n], moments[0] = 1

    MomentVector(Rational b_, std::vector<Rational> ms)
        : b(std::move(b_)), moments(std::move(ms)) {
        if (moments.empty()) throw DomainError("MomentVector: needs moment 0");
        if (moments[0] != 1) throw DomainError("MomentVector: moment 0 must equal 1");
    }

    std::size_t order() const { return moments.size() - 1; }

    friend bool operator==(const MomentVector& x, const MomentVector& y) {
        return x.b == y.b && x.moments == y.moments;
    }
};

/// Certified partial evaluation of the generating function sum eps_n z^n.
struct EgfValue {
    Rational partial_sum;
    Rational remainder_bound;
    std::size_t terms_used;
};

/// eps_n = sum_{j=0}^n (-1)^j b^{n-j} E[X^j] / (j! (n-j)!), computed exactly.
/// The interval endpoint a enters only through the admissibility bounds
/// 0 <= eps_n <= (b-a)^n / n!, which are enforced here.
inline PrimitiveSeq primitive_from_moments(const MomentVector& mv, const Rational& a) {
    if (a >= mv.b) throw DomainError("primitive_from_moments: requires a < b");
    const std::size_t m = mv.order();
    Rational len = mv.b - a;
    std::vector<Rational> eps(m + 1);
    for (std::size_t n = 0; n <= m; ++n) {
        Rational acc = 0;
        for (std::size_t j = 0; j <= n; ++j) {
            Rational term = pow_int(mv.b, static_cast<long>(n - j)) * mv.moments[j] /
                            Rational(factorial(static_cast<unsigned>(j)) *
                                     factorial(static_cast<unsigned>(n - j)));
            acc += (j % 2 == 0) ? term : -term;
        }
        eps[n] = acc;
        Rational cap = pow_int(len, static_cast<long>(n)) /
                       Rational(factorial(static_cast<unsigned>(n)));
        if (acc < 0 || acc > cap)
            throw DomainError(
                "not a moment prefix of any measure on [a,b]: eps bound violated at "
                "index " +
                std::to_string(n));
    }
    return PrimitiveSeq(Interval(a, mv.b), std::move(eps));
}

/// E[X^n] = sum_{j=0}^n (-1)^j n^(j) b^(n-j) eps_j; exact inverse of
/// primitive_from_moments.
inline MomentVector moments_from_primitive(const PrimitiveSeq& ps) {
    const std::size_t m = ps.order();
    const Rational& b = ps.interval().b;
    std::vector<Rational> ms(m + 1);
    for (std::size_t n = 0; n <= m; ++n) {
        Rational acc = 0;
        for (std::size_t j = 0; j <= n; ++j) {
            Rational term =
                Rational(falling_factorial(static_cast<unsigned>(n),
                                           static_cast<unsigned>(j))) *
                pow_int(b, static_cast<long>(n - j)) * ps.eps(j);
            acc += (j % 2 == 0) ? term : -term;
        }
        ms[n] = acc;
    }
    return MomentVector(b, std::move(ms));
}

/// Plain rescale without admissibility validation.
inline NormalizedSeq gamma_unchecked(const PrimitiveSeq& ps) {
    const std::size_t m = ps.order();
    Rational len = ps.interval().length();
    std::vector<Rational> g(m + 1);
    Rational scale = 1;  // n! / (b-a)^n, updated incrementally
    g[0] = ps.eps(0);
    for (std::size_t n = 1; n <= m; ++n) {
        scale *= Rational(n) / len;
        g[n] = scale * ps.eps(n);
    }
    return NormalizedSeq(std::move(g));
}

/// Exact rescale; the output satisfies 1 >= gamma_n >= gamma_{n+1} >= 0 or
/// the first violating index is reported.
inline NormalizedSeq normalize_gamma(const PrimitiveSeq& ps) {
    NormalizedSeq g = gamma_unchecked(ps);
    for (std::size_t n = 1; n < g.gamma.size(); ++n) {
        if (g.gamma[n] < 0 || g.gamma[n] > g.gamma[n - 1])
            throw DomainError("sequence is not admissible: gamma monotonicity fails at index " +
                              std::to_string(n));
    }
    return g;
}

struct ElementaryViolation {
    enum class Kind { NegativeTerm, UpperBound, LogConvexity };
    Kind kind;
    std::size_t index;
};

struct ElementaryReport {
    std::vector<ElementaryViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Necessary conditions: 0 <= eps_n <= (b-a)^n/n! for every stored term and
/// (n! eps_n)^2 <= ((n-1)! eps_{n-1}) ((n+1)! eps_{n+1}) on the interior.
/// Equalities pass; point masses attain them.
inline ElementaryReport check_elementary(const PrimitiveSeq& ps) {
    ElementaryReport report;
    const std::size_t m = ps.order();
    Rational len = ps.interval().length();
    Rational cap = 1;
    for (std::size_t n = 1; n <= m; ++n) {
        cap *= len / Rational(n);
        if (ps.eps(n) < 0)
            report.violations.push_back(
                {ElementaryViolation::Kind::NegativeTerm, n});
        else if (ps.eps(n) > cap)
            report.violations.push_back(
                {ElementaryViolation::Kind::UpperBound, n});
    }
    for (std::size_t n = 1; n + 1 <= m; ++n) {
        Rational mid = Rational(factorial(static_cast<unsigned>(n))) * ps.eps(n);
        Rational lft =
            Rational(factorial(static_cast<unsigned>(n - 1))) * ps.eps(n - 1);
        Rational rgt =
            Rational(factorial(static_cast<unsigned>(n + 1))) * ps.eps(n + 1);
        if (mid * mid > lft * rgt)
            report.violations.push_back(
                {ElementaryViolation::Kind::LogConvexity, n});
    }
    return report;
}

struct AtomMassBounds {
    Rational upper_on_atom_at_a;           // gamma_m, a certified upper bound
    std::optional<Rational> ratio_diagnostic;  // m eps_m / eps_{m-1}, reported only
};

inline AtomMassBounds atom_mass_bounds(const PrimitiveSeq& ps) {
    const std::size_t m = ps.order();
    if (m < 1) throw DomainError("atom_mass_bounds: needs at least eps_0, eps_1");
    NormalizedSeq g = gamma_unchecked(ps);
    AtomMassBounds out{g.gamma[m], std::nullopt};
    if (ps.eps(m - 1) != 0)
        out.ratio_diagnostic = Rational(m) * ps.eps(m) / ps.eps(m - 1);
    return out;
}

/// Partial sum of the entire generating function sum eps_n z^n with a
/// rational tail bound: the tail is at most ((b-a)|z|)^(m+1)/(m+1)! times
/// e^((b-a)|z|), and e^t <= 4^ceil(t) keeps the bound rational.
inline EgfValue egf_eval(const PrimitiveSeq& ps, const Rational& z) {
    const std::size_t m = ps.order();
    Rational partial = 0;
    Rational zp = 1;
    for (std::size_t n = 0; n <= m; ++n) {
        partial += ps.eps(n) * zp;
        zp *= z;
    }
    Rational t = ps.interval().length() * abs_val(z);
    Rational head = pow_int(t, static_cast<long>(m + 1)) /
                    Rational(factorial(static_cast<unsigned>(m + 1)));
    Rational exp_bound = pow_int(Rational(4), static_cast<long>(ceil_rat(t)));
    return EgfValue{std::move(partial), head * exp_bound, m + 1};
}

struct HolderReport {
    std::vector<std::size_t> failing_indices;
    bool ok() const { return failing_indices.empty(); }
};

/// Checks 0 <= gamma_n - atom <= C kappa! n/(n-1)^(kappa+1) for n >= 2 on
/// the stored prefix. A failure falsifies the supplied (kappa, C, atom)
/// hypothesis. Exact mode needs integer kappa so Gamma(kappa+1) = kappa!.
inline HolderReport holder_rate_check(const PrimitiveSeq& ps, const Rational& kappa,
                                      const Rational& C, const Rational& atom) {
    if (kappa <= 0 || C <= 0)
        throw DomainError("holder_rate_check: requires kappa > 0 and C > 0");
    if (denominator(kappa) != 1)
        throw DomainError("holder_rate_check: non-integer kappa is not supported in exact mode");
    unsigned k = static_cast<unsigned>(numerator(kappa));
    Rational gamma_k1 = Rational(factorial(k));
    NormalizedSeq g = gamma_unchecked(ps);
    HolderReport report;
    for (std::size_t n = 2; n < g.gamma.size(); ++n) {
        Rational gap = g.gamma[n] - atom;
        Rational cap = C * gamma_k1 * Rational(n) /
                       pow_int(Rational(n - 1), static_cast<long>(k) + 1);
        if (gap < 0 || gap > cap) report.failing_indices.push_back(n);
    }
    return report;
}

// --- sequence file format -------------------------------------------------
//
// Line 1:   interval <a> <b>
// Then one line per term: <n> <eps_n>, rationals as "p/q". Indices must be
// exactly 0..m with no duplicates or gaps.

inline void write_sequence(std::ostream& os, const PrimitiveSeq& ps) {
    os << "interval " << format_rational(ps.interval().a) << ' '
       << format_rational(ps.interval().b) << '\n';
    for (std::size_t n = 0; n <= ps.order(); ++n)
        os << n << ' ' << format_rational(ps.eps(n)) << '\n';
}

inline std::string sequence_to_string(const PrimitiveSeq& ps) {
    std::ostringstream os;
    write_sequence(os, ps);
    return os.str();
}

inline PrimitiveSeq read_sequence(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(is, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("sequence file, line " + std::to_string(lineno) + ": " + msg);
    };

    if (!next_line()) fail("missing interval header");
    std::istringstream header(line);
    std::string keyword, atext, btext;
    if (!(header >> keyword >> atext >> btext) || keyword != "interval")
        fail("expected 'interval <a> <b>'");
    std::string trailing;
    if (header >> trailing) fail("trailing tokens after interval");
    Rational a = parse_rational(atext);
    Rational b = parse_rational(btext);

    std::vector<Rational> eps;
    while (next_line()) {
        std::istringstream ls(line);
        std::string ntext, vtext;
        if (!(ls >> ntext >> vtext)) fail("expected '<n> <eps_n>'");
        if (ls >> trailing) fail("trailing tokens after term");
        Rational n = parse_rational(ntext);
        if (denominator(n) != 1 || n < 0) fail("term index must be a nonnegative integer");
        if (Integer(numerator(n)) != Integer(eps.size()))
            fail("term indices must be consecutive from 0 (duplicate or skipped index)");
        eps.push_back(parse_rational(vtext));
    }
    if (eps.empty()) fail("no terms");
    return PrimitiveSeq(Interval(std::move(a), std::move(b)), std::move(eps));
}

// Moment list format used by the converter: one line per order, <n> <E[X^n]>,
// indices consecutive from 0.

inline void write_moments(std::ostream& os, const MomentVector& mv) {
    for (std::size_t n = 0; n <= mv.order(); ++n)
        os << n << ' ' << format_rational(mv.moments[n]) << '\n';
}

inline MomentVector read_moments(std::istream& is, const Rational& b) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<Rational> ms;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string ntext, vtext, trailing;
        if (!(ls >> ntext >> vtext) || (ls >> trailing))
            throw ParseError("moment file, line " + std::to_string(lineno) +
                             ": expected '<n> <moment>'");
        Rational n = parse_rational(ntext);
        if (denominator(n) != 1 || n < 0 ||
            Integer(numerator(n)) != Integer(ms.size()))
            throw ParseError("moment file, line " + std::to_string(lineno) +
                             ": indices must be consecutive from 0");
        ms.push_back(parse_rational(vtext));
    }
    if (ms.empty()) throw ParseError("moment file: no terms");
    return MomentVector(b, std::move(ms));
}

}  // namespace primseq
