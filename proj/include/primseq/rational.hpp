#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace primseq {

using Integer = boost::multiprecision::mpz_int;

/// Exact arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator by the GMP backend. The universal scalar type of
/// the library; no floating point appears in any certified path.
using Rational = boost::multiprecision::mpq_rational;

/// Input text could not be parsed. `position` is a 0-based byte offset
/// into the offending input when known, npos otherwise.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what,
                        std::size_t position = std::string::npos)
        : std::runtime_error(what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// A documented precondition or invariant was violated.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline int sign(const Rational& v) { return v.sign(); }

inline Rational abs_val(const Rational& v) { return v < 0 ? Rational(-v) : v; }

inline Integer factorial(unsigned n) {
    Integer f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

inline Integer binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Integer r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);  // exact: r is always an integer here
    }
    return r;
}

/// n(n-1)...(n-j+1), the jth falling factorial of n.
inline Integer falling_factorial(unsigned n, unsigned j) {
    if (j > n) return 0;
    Integer r = 1;
    for (unsigned i = 0; i < j; ++i) r *= (n - i);
    return r;
}

/// base^e for integer e; e < 0 requires base != 0.
inline Rational pow_int(const Rational& base, long e) {
    if (e < 0) {
        if (base == 0) throw DomainError("pow_int: zero base with negative exponent");
        return 1 / pow_int(base, -e);
    }
    Rational acc = 1;
    Rational b = base;
    unsigned long n = static_cast<unsigned long>(e);
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

inline Integer floor_rat(const Rational& v) {
    Integer q = numerator(v) / denominator(v);
    if (v < 0 && q * denominator(v) != numerator(v)) --q;
    return q;
}

inline Integer ceil_rat(const Rational& v) { return -floor_rat(-v); }

/// Parses "p/q" or "p" exactly. Sign allowed on the numerator only; the
/// denominator must be a positive integer. The result is reduced.
inline Rational parse_rational(std::string_view text, std::size_t base_offset = 0) {
    auto fail = [&](const std::string& msg, std::size_t at) -> Rational {
        throw ParseError("bad rational '" + std::string(text) + "': " + msg,
                         base_offset + at);
    };
    if (text.empty()) return fail("empty", 0);
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '-') {
        neg = true;
        ++i;
    }
    std::size_t num_start = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == num_start) return fail("expected digits", i);
    Integer num(std::string(text.substr(num_start, i - num_start)));
    Integer den = 1;
    if (i < text.size()) {
        if (text[i] != '/') return fail("unexpected character", i);
        ++i;
        std::size_t den_start = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        if (i == den_start || i != text.size()) return fail("bad denominator", i);
        den = Integer(std::string(text.substr(den_start, i - den_start)));
        if (den == 0) return fail("zero denominator", den_start);
    }
    Integer g = gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (neg) num = -num;
    return Rational(num, den);
}

/// Renders "p/q", or "p" when the denominator is 1.
inline std::string format_rational(const Rational& v) {
    std::string s = numerator(v).str();
    if (denominator(v) != 1) {
        s += '/';
        s += denominator(v).str();
    }
    return s;
}

/// Decimal rendering with `sig` significant digits, round-half-even, plain
/// notation, at least `sig` digits after the point. Used by the plot-data
/// emitters; certified output stays rational.
inline std::string format_decimal(const Rational& v, unsigned sig = 12) {
    if (sig == 0) throw DomainError("format_decimal: sig must be positive");
    std::string pad(sig, '0');
    if (v == 0) return "0." + pad;
    Rational a = abs_val(v);
    // e such that 10^e <= a < 10^(e+1)
    long e = 0;
    Rational scaled = a;
    while (scaled >= 10) {
        scaled /= 10;
        ++e;
    }
    while (scaled < 1) {
        scaled *= 10;
        --e;
    }
    // Round a * 10^(sig-1-e) half-to-even.
    Rational x = a * pow_int(Rational(10), static_cast<long>(sig) - 1 - e);
    Integer d = numerator(x) / denominator(x);
    Rational rem2 = 2 * (x - Rational(d));
    if (rem2 > 1 || (rem2 == 1 && (d & 1) != 0)) ++d;
    std::string digits = d.str();
    if (digits.size() > sig) {  // carry, e.g. 999.96 -> 1000
        ++e;
        digits.pop_back();
    }
    std::string out;
    if (e >= 0) {
        std::size_t ip = static_cast<std::size_t>(e) + 1;
        if (digits.size() < ip) digits.append(ip - digits.size(), '0');
        out = digits.substr(0, ip);
        std::string frac = digits.substr(ip);
        if (frac.size() < sig) frac.append(sig - frac.size(), '0');
        out += '.';
        out += frac;
    } else {
        out = "0.";
        out.append(static_cast<std::size_t>(-e - 1), '0');
        out += digits;
        if (out.size() - 2 < sig) out.append(sig - (out.size() - 2), '0');
    }
    return (v < 0 ? "-" : "") + out;
}

}  // namespace primseq
