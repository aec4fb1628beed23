#include <primseq/polynomial.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace primseq;

namespace {

Polynomial random_poly(std::mt19937_64& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 9);
    std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& v : c) v = Rational(num(rng), den(rng));
    return Polynomial(std::move(c));
}

Rational random_rat(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-30, 30);
    std::uniform_int_distribution<long> den(1, 12);
    return Rational(num(rng), den(rng));
}

}  // namespace

TEST_CASE("poly_eval exact values") {
    // the section-5 majorant touches the indicator at y = 1/2
    Polynomial p({0, 4, -5, 2});
    CHECK(poly_eval(p, Rational(1, 2)) == 1);
    CHECK(poly_eval(Polynomial{}, Rational(17, 3)) == 0);
    Polynomial q({0, -4, 11, -6});
    CHECK(poly_eval(q, Rational(1)) == 1);
}

TEST_CASE("degree sentinel and trimming") {
    CHECK(Polynomial{}.degree() == -1);
    CHECK(Polynomial({Rational(0), Rational(0)}).degree() == -1);
    CHECK(Polynomial({Rational(3)}).degree() == 0);
    CHECK(Polynomial({Rational(1), Rational(2), Rational(0)}).degree() == 1);
}

TEST_CASE("poly_derivative") {
    CHECK(poly_derivative(Polynomial({0, 0, 0, 1})) == Polynomial({0, 0, 3}));
    CHECK(poly_derivative(Polynomial({Rational(5)})) == Polynomial{});
    CHECK(poly_derivative(Polynomial({0, 4, -5, 2})) == Polynomial({4, -10, 6}));
    // degree drops by exactly one for nonconstant input
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        Polynomial p = random_poly(rng, 6);
        if (p.degree() >= 1) CHECK(poly_derivative(p).degree() == p.degree() - 1);
    }
}

TEST_CASE("derivative and antiderivative in the (b-x) basis") {
    // p(x) = (2-x)^2: dp/dx = -2(2-x)
    Polynomial p({0, 0, 1}, Basis::BMinusX, Rational(2));
    Polynomial d = poly_derivative(p);
    CHECK(d == Polynomial({0, -2}, Basis::BMinusX, Rational(2)));
    CHECK(d(Rational(0)) == -4);
    Polynomial a = poly_antiderivative(p);
    CHECK(poly_derivative(a) == p);
    // definite integral of (2-x)^2 over [0,2] is 8/3
    CHECK(poly_definite_integral(p, Rational(0), Rational(2)) == Rational(8, 3));
}

TEST_CASE("eval additivity is exact") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Polynomial p = random_poly(rng, 7);
        Polynomial q = random_poly(rng, 7);
        Rational x = random_rat(rng);
        CHECK(poly_eval(p + q, x) == poly_eval(p, x) + poly_eval(q, x));
        CHECK(poly_eval(p * q, x) == poly_eval(p, x) * poly_eval(q, x));
    }
}

TEST_CASE("definite integral of the section-5 majorant") {
    Polynomial p({0, 4, -5, 2});
    CHECK(poly_definite_integral(p, Rational(0), Rational(1)) == Rational(5, 6));
    Polynomial q({0, -4, 11, -6});
    CHECK(poly_definite_integral(q, Rational(0), Rational(1)) == Rational(1, 6));
}

TEST_CASE("basis conversion is exact and invertible") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        Polynomial p = random_poly(rng, 6);
        Rational b = random_rat(rng);
        Polynomial q = to_basis_bmx(p, b);
        CHECK(q.basis() == Basis::BMinusX);
        Rational x = random_rat(rng);
        CHECK(poly_eval(q, x) == poly_eval(p, x));
        CHECK(to_basis_x(q) == p);
    }
    // anchor change within the (b-x) basis
    Polynomial u({1, 2, 3}, Basis::BMinusX, Rational(1));
    Polynomial v = to_basis_bmx(u, Rational(4));
    CHECK(v.anchor() == 4);
    CHECK(poly_eval(v, Rational(1, 3)) == poly_eval(u, Rational(1, 3)));
}

TEST_CASE("mixed-frame arithmetic is rejected") {
    Polynomial p({1, 2});
    Polynomial q({1, 2}, Basis::BMinusX, Rational(1));
    CHECK_THROWS_AS(p + q, DomainError);
    CHECK_THROWS_AS(p * q, DomainError);
}
