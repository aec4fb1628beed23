#include <primseq/rational.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace primseq;

TEST_CASE("parse_rational reduces to lowest terms with positive denominator") {
    Rational v = parse_rational("6/8");
    CHECK(numerator(v) == 3);
    CHECK(denominator(v) == 4);
    v = parse_rational("-6/4");
    CHECK(numerator(v) == -3);
    CHECK(denominator(v) == 2);
    CHECK(parse_rational("0/7") == 0);
    CHECK(denominator(parse_rational("0/7")) == 1);
    CHECK(parse_rational("12") == 12);
    CHECK(parse_rational("123456789012345678901234567890") ==
          Rational(Integer("123456789012345678901234567890")));
}

TEST_CASE("parse_rational rejects malformed input") {
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
    CHECK_THROWS_AS(parse_rational("+1"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
    CHECK_THROWS_AS(parse_rational("a/b"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
    CHECK_THROWS_AS(parse_rational("1 /2"), ParseError);
}

TEST_CASE("format_rational round-trips") {
    std::mt19937_64 rng(20240521);
    std::uniform_int_distribution<long> num(-5000, 5000);
    std::uniform_int_distribution<long> den(1, 5000);
    for (int i = 0; i < 500; ++i) {
        Rational v(num(rng), den(rng));
        CHECK(parse_rational(format_rational(v)) == v);
    }
    CHECK(format_rational(Rational(1, 2)) == "1/2");
    CHECK(format_rational(Rational(-1, 2)) == "-1/2");
    CHECK(format_rational(Rational(7)) == "7");
    CHECK(format_rational(Rational(0)) == "0");
}

TEST_CASE("integer helpers") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(5) == 120);
    CHECK(factorial(12) == 479001600);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(10, 0) == 1);
    CHECK(binomial(4, 7) == 0);
    CHECK(falling_factorial(5, 2) == 20);  // 5*4
    CHECK(falling_factorial(5, 0) == 1);
    CHECK(falling_factorial(3, 5) == 0);
    CHECK(pow_int(Rational(2, 3), 3) == Rational(8, 27));
    CHECK(pow_int(Rational(2, 3), 0) == 1);
    CHECK(pow_int(Rational(2, 3), -2) == Rational(9, 4));
    CHECK(floor_rat(Rational(7, 2)) == 3);
    CHECK(floor_rat(Rational(-7, 2)) == -4);
    CHECK(ceil_rat(Rational(7, 2)) == 4);
    CHECK(ceil_rat(Rational(-7, 2)) == -3);
    CHECK(ceil_rat(Rational(4)) == 4);
}

TEST_CASE("format_decimal renders 12 significant digits, round half even") {
    CHECK(format_decimal(Rational(5, 6)) == "0.833333333333");
    CHECK(format_decimal(Rational(1, 6)) == "0.166666666667");
    CHECK(format_decimal(Rational(1)) == "1.000000000000");
    CHECK(format_decimal(Rational(0)) == "0.000000000000");
    CHECK(format_decimal(Rational(1, 2)) == "0.500000000000");
    CHECK(format_decimal(Rational(-5, 6)) == "-0.833333333333");
    // ties round to even in the last kept digit
    CHECK(format_decimal(Rational(5, 10), 1) == "0.5");
    CHECK(format_decimal(Rational(25, 100), 1) == "0.2");  // 0.25 -> 0.2
    CHECK(format_decimal(Rational(35, 100), 1) == "0.4");  // 0.35 -> 0.4
    // carry across a power of ten
    CHECK(format_decimal(Rational(9999995, 10000000), 6) == "1.000000");
}

TEST_CASE("arithmetic stays canonical") {
    Rational a(3, 6);
    Rational b(1, 6);
    Rational c = a + b;  // 2/3
    CHECK(numerator(c) == 2);
    CHECK(denominator(c) == 3);
    CHECK(abs_val(Rational(-5, 7)) == Rational(5, 7));
    CHECK(sign(Rational(-2)) == -1);
    CHECK(sign(Rational(0)) == 0);
    CHECK(sign(Rational(9)) == 1);
}
