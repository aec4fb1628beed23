#include <primseq/sequence.hpp>

#include <primseq/distribution.hpp>

#include "oracles.hpp"
#include "zoo.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace primseq;

namespace {

MomentVector moments_of(const Distribution& d, std::size_t m) {
    std::vector<Rational> ms(m + 1);
    for (std::size_t n = 0; n <= m; ++n)
        ms[n] = oracles::moment_by_integration(d, n);
    return MomentVector(d.interval().b, std::move(ms));
}

FiniteAtomic random_atomic(std::mt19937_64& rng, std::size_t max_atoms) {
    std::uniform_int_distribution<std::size_t> natoms(1, max_atoms);
    std::uniform_int_distribution<long> pos(0, 24);
    std::uniform_int_distribution<long> wt(1, 9);
    std::size_t k = natoms(rng);
    std::vector<Rational> pts;
    while (pts.size() < k) {
        Rational p(pos(rng), 24);
        bool dup = false;
        for (const auto& q : pts) dup = dup || q == p;
        if (!dup) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<Rational> ws(k);
    Rational total = 0;
    for (auto& w : ws) {
        w = wt(rng);
        total += w;
    }
    for (auto& w : ws) w /= total;
    return FiniteAtomic(zoo::unit(), std::move(pts), std::move(ws));
}

}  // namespace

TEST_CASE("primitive_from_moments on the uniform prefix") {
    MomentVector mv(Rational(1),
                    {Rational(1), Rational(1, 2), Rational(1, 3), Rational(1, 4)});
    PrimitiveSeq ps = primitive_from_moments(mv, Rational(0));
    CHECK(ps.terms() == std::vector<Rational>{Rational(1), Rational(1, 2),
                                              Rational(1, 6), Rational(1, 24)});
}

TEST_CASE("primitive_from_moments on endpoint masses") {
    MomentVector at_b(Rational(1), {Rational(1), Rational(1), Rational(1), Rational(1)});
    PrimitiveSeq ps = primitive_from_moments(at_b, Rational(0));
    CHECK(ps.terms() ==
          std::vector<Rational>{Rational(1), Rational(0), Rational(0), Rational(0)});

    MomentVector at_a(Rational(1), {Rational(1), Rational(0), Rational(0), Rational(0)});
    PrimitiveSeq pa = primitive_from_moments(at_a, Rational(0));
    CHECK(pa.terms() == std::vector<Rational>{Rational(1), Rational(1),
                                              Rational(1, 2), Rational(1, 6)});
}

TEST_CASE("primitive_from_moments rejects non-moment input with the index") {
    MomentVector bad(Rational(1), {Rational(1), Rational(2)});
    try {
        primitive_from_moments(bad, Rational(0));
        FAIL("expected a DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
        CHECK(std::string(e.what()).find("not a moment prefix") != std::string::npos);
    }
}

TEST_CASE("moments_from_primitive frozen values") {
    PrimitiveSeq u(zoo::unit(), {Rational(1), Rational(1, 2), Rational(1, 6)});
    CHECK(moments_from_primitive(u).moments ==
          std::vector<Rational>{Rational(1), Rational(1, 2), Rational(1, 3)});

    PrimitiveSeq at_b(Interval(Rational(0), Rational(2)),
                      {Rational(1), Rational(0), Rational(0)});
    CHECK(moments_from_primitive(at_b).moments ==
          std::vector<Rational>{Rational(1), Rational(2), Rational(4)});

    // point mass at 1/2: eps_n = (1/2)^n/n!, moments 2^-n
    PrimitiveSeq mid(zoo::unit(), {Rational(1), Rational(1, 2), Rational(1, 8)});
    CHECK(moments_from_primitive(mid).moments ==
          std::vector<Rational>{Rational(1), Rational(1, 2), Rational(1, 4)});
}

TEST_CASE("round trip over random atomic measures is the exact identity") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 200; ++trial) {
        FiniteAtomic atoms = random_atomic(rng, 5);
        Distribution d(atoms);
        MomentVector mv = moments_of(d, 8);
        PrimitiveSeq ps = primitive_from_moments(mv, Rational(0));
        // both directions agree with the brute-force expectation sums
        for (std::size_t n = 0; n <= 8; ++n)
            CHECK(ps.eps(n) == oracles::eps_by_integration(d, n));
        CHECK(moments_from_primitive(ps) == mv);
    }
}

TEST_CASE("round trip at order 12 over mixed zoo prefixes") {
    for (const auto& entry : zoo::corpus()) {
        PrimitiveSeq ps = primitive_sequence(entry.dist, 12);
        MomentVector mv = moments_from_primitive(ps);
        PrimitiveSeq back = primitive_from_moments(mv, ps.interval().a);
        CHECK(back == ps);
    }
}

TEST_CASE("normalize_gamma values and diagnostics") {
    PrimitiveSeq uniform = eps_beta(Rational(1), Rational(1), 6);
    NormalizedSeq g = normalize_gamma(uniform);
    for (std::size_t n = 0; n <= 6; ++n) CHECK(g.gamma[n] == Rational(1, n + 1));

    PrimitiveSeq at_a = eps_point_mass(Rational(0), zoo::unit(), 5);
    NormalizedSeq ga = normalize_gamma(at_a);
    for (std::size_t n = 0; n <= 5; ++n) CHECK(ga.gamma[n] == 1);

    PrimitiveSeq atoms = eps_atomic(
        FiniteAtomic(zoo::unit(), {Rational(0), Rational(1, 2), Rational(1)},
                     {Rational(1, 6), Rational(2, 3), Rational(1, 6)}),
        3);
    CHECK(normalize_gamma(atoms).gamma ==
          std::vector<Rational>{Rational(1), Rational(1, 2), Rational(1, 3),
                                Rational(1, 4)});

    PrimitiveSeq bad(zoo::unit(), {Rational(1), Rational(2)});
    try {
        normalize_gamma(bad);
        FAIL("expected a DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("not admissible") != std::string::npos);
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
}

TEST_CASE("check_elementary report kinds") {
    CHECK(check_elementary(eps_beta(Rational(1), Rational(1), 8)).ok());

    PrimitiveSeq at_b(zoo::unit(), {Rational(1), Rational(0), Rational(0)});
    CHECK(check_elementary(at_b).ok());  // boundary equalities pass

    PrimitiveSeq too_big(zoo::unit(), {Rational(1), Rational(2)});
    auto r1 = check_elementary(too_big);
    REQUIRE(r1.violations.size() == 1);
    CHECK(r1.violations[0].kind == ElementaryViolation::Kind::UpperBound);
    CHECK(r1.violations[0].index == 1);

    PrimitiveSeq negative(zoo::unit(), {Rational(1), Rational(-1, 2)});
    auto r2 = check_elementary(negative);
    REQUIRE(r2.violations.size() == 1);
    CHECK(r2.violations[0].kind == ElementaryViolation::Kind::NegativeTerm);

    // gamma prefix (1, 1/2, 1/5) as eps: log-convexity fails at n = 1
    PrimitiveSeq logc(zoo::unit(), {Rational(1), Rational(1, 2), Rational(1, 10)});
    auto r3 = check_elementary(logc);
    REQUIRE(r3.violations.size() == 1);
    CHECK(r3.violations[0].kind == ElementaryViolation::Kind::LogConvexity);
    CHECK(r3.violations[0].index == 1);
}

TEST_CASE("zoo prefixes satisfy the elementary inequalities exactly") {
    for (const auto& entry : zoo::corpus()) {
        PrimitiveSeq ps = primitive_sequence(entry.dist, 10);
        CHECK(check_elementary(ps).ok());
        NormalizedSeq g = gamma_unchecked(ps);
        for (std::size_t n = 0; n + 1 <= 10; ++n) {
            CHECK(g.gamma[n + 1] <= g.gamma[n]);  // monotone
        }
        Rational len = ps.interval().length();
        Rational cap = 1;
        for (std::size_t n = 1; n <= 10; ++n) {
            cap *= len / Rational(n);
            CHECK(ps.eps(n) <= cap);
            CHECK(ps.eps(n) >= 0);
        }
    }
}

TEST_CASE("atom_mass_bounds") {
    auto uniform = eps_beta(Rational(1), Rational(1), 9);
    auto ub = atom_mass_bounds(uniform);
    CHECK(ub.upper_on_atom_at_a == Rational(1, 10));

    auto at_a = eps_point_mass(Rational(0), zoo::unit(), 4);
    auto ua = atom_mass_bounds(at_a);
    CHECK(ua.upper_on_atom_at_a == 1);
    REQUIRE(ua.ratio_diagnostic);
    CHECK(*ua.ratio_diagnostic == 1);  // converges to b - a = 1

    auto atoms = eps_atomic(FiniteAtomic(zoo::unit(), {Rational(0), Rational(1)},
                                         {Rational(1, 3), Rational(2, 3)}),
                            5);
    CHECK(atom_mass_bounds(atoms).upper_on_atom_at_a == Rational(1, 3));

    auto at_b = eps_point_mass(Rational(1), zoo::unit(), 3);
    CHECK(!atom_mass_bounds(at_b).ratio_diagnostic);  // eps_{m-1} = 0

    CHECK_THROWS_AS(atom_mass_bounds(PrimitiveSeq(zoo::unit(), {Rational(1)})),
                    DomainError);
}

TEST_CASE("egf enclosure around e - 1") {
    PrimitiveSeq uniform = eps_beta(Rational(1), Rational(1), 12);
    EgfValue v = egf_eval(uniform, Rational(1));
    CHECK(v.terms_used == 13);
    CHECK(v.remainder_bound > 0);
    CHECK(v.remainder_bound < Rational(1, 1000000));
    // rational bracket of e - 1 via the series with tail bound 2/21!
    Rational lo = 0;
    for (unsigned k = 1; k <= 20; ++k) lo += Rational(1) / Rational(factorial(k));
    Rational hi = lo + Rational(2) / Rational(factorial(21));
    CHECK(v.partial_sum - v.remainder_bound <= lo);
    CHECK(hi <= v.partial_sum + v.remainder_bound);
}

TEST_CASE("egf at zero and for endpoint masses") {
    PrimitiveSeq uniform = eps_beta(Rational(1), Rational(1), 5);
    EgfValue z0 = egf_eval(uniform, Rational(0));
    CHECK(z0.partial_sum == 1);
    CHECK(z0.remainder_bound == 0);

    // point mass at a on [0,1]: the generating function is e^z
    PrimitiveSeq at_a = eps_point_mass(Rational(0), zoo::unit(), 14);
    EgfValue v = egf_eval(at_a, Rational(1));
    Rational lo = 1;
    for (unsigned k = 1; k <= 20; ++k) lo += Rational(1) / Rational(factorial(k));
    Rational hi = lo + Rational(2) / Rational(factorial(21));
    CHECK(v.partial_sum - v.remainder_bound <= lo);
    CHECK(hi <= v.partial_sum + v.remainder_bound);
}

TEST_CASE("holder_rate_check") {
    PrimitiveSeq uniform = eps_beta(Rational(1), Rational(1), 10);
    CHECK(holder_rate_check(uniform, Rational(1), Rational(1), Rational(0)).ok());

    PrimitiveSeq at_a = eps_point_mass(Rational(0), zoo::unit(), 10);
    CHECK(holder_rate_check(at_a, Rational(1), Rational(1), Rational(1)).ok());

    // uniform is exactly kappa = 1, so kappa = 2 must be falsified
    auto fail = holder_rate_check(uniform, Rational(2), Rational(1), Rational(0));
    CHECK(!fail.ok());
    CHECK(fail.failing_indices.front() == 5);

    CHECK_THROWS_AS(
        holder_rate_check(uniform, Rational(3, 2), Rational(1), Rational(0)),
        DomainError);
    CHECK_THROWS_AS(holder_rate_check(uniform, Rational(0), Rational(1), Rational(0)),
                    DomainError);
    CHECK_THROWS_AS(holder_rate_check(uniform, Rational(1), Rational(0), Rational(0)),
                    DomainError);
}

TEST_CASE("termwise convergence tracks weak convergence for point masses") {
    // x_k = 1/2 + 1/(k+2) -> 1/2; eps terms converge and CDF values settle
    // at continuity points
    PrimitiveSeq limit = eps_point_mass(Rational(1, 2), zoo::unit(), 6);
    std::vector<Rational> prev_gap;
    for (long k = 1; k <= 12; ++k) {
        Rational xk = Rational(1, 2) + Rational(1, k + 2);
        PrimitiveSeq sk = eps_point_mass(xk, zoo::unit(), 6);
        std::vector<Rational> gap;
        for (std::size_t n = 0; n <= 6; ++n)
            gap.push_back(abs_val(sk.eps(n) - limit.eps(n)));
        if (!prev_gap.empty())
            for (std::size_t n = 1; n <= 6; ++n) CHECK(gap[n] <= prev_gap[n]);
        prev_gap = std::move(gap);
    }
    // CDF convergence at continuity points of the limit
    for (long k = 6; k <= 12; ++k) {
        Rational xk = Rational(1, 2) + Rational(1, k + 2);
        Distribution dk(PointMass(zoo::unit(), xk));
        CHECK(cdf(dk, Rational(3, 4)) == 1);  // t = 3/4 > x_k eventually
        CHECK(cdf(dk, Rational(1, 4)) == 0);
    }
}

TEST_CASE("sequence file round trip and rejections") {
    PrimitiveSeq ps = eps_atomic(
        FiniteAtomic(zoo::unit(), {Rational(0), Rational(1, 2), Rational(1)},
                     {Rational(1, 6), Rational(2, 3), Rational(1, 6)}),
        4);
    std::string text = sequence_to_string(ps);
    std::istringstream in(text);
    CHECK(read_sequence(in) == ps);

    auto reject = [](const std::string& body) {
        std::istringstream is(body);
        CHECK_THROWS_AS(read_sequence(is), ParseError);
    };
    reject("");                                     // no header
    reject("interval 0\n0 1\n");                    // malformed header
    reject("interval 0 1\n0 1\n0 1/2\n");           // duplicate index
    reject("interval 0 1\n0 1\n2 1/2\n");           // skipped index
    reject("interval 0 1\n1 1/2\n");                // missing index 0
    reject("interval 0 1\n");                       // no terms
    reject("interval 0 1\n0 1 junk\n");             // trailing token
    reject("interval 0 1\n0 1\n1 0.5\n");           // decimal not allowed

    // a >= b actually raises DomainError from Interval; both are errors
    std::istringstream flipped("interval 1 0\n0 1\n");
    CHECK_THROWS(read_sequence(flipped));
}

TEST_CASE("moment file round trip") {
    MomentVector mv(Rational(1),
                    {Rational(1), Rational(1, 2), Rational(1, 3), Rational(1, 4)});
    std::ostringstream os;
    write_moments(os, mv);
    std::istringstream is(os.str());
    CHECK(read_moments(is, Rational(1)) == mv);

    std::istringstream bad("0 1\n2 1/3\n");
    CHECK_THROWS_AS(read_moments(bad, Rational(1)), ParseError);
}
