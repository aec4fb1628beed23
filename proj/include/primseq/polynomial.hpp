#pragma once

#include <primseq/rational.hpp>

#include <initializer_list>
#include <utility>
#include <vector>

namespace primseq {

/// Coefficient basis of a dense univariate polynomial: powers of x, or
/// powers of (b - x) for an explicit anchor b. The bound solver stores its
/// certificates in the (b - x) basis; conversion to the x basis is explicit.
enum class Basis { X, BMinusX };

namespace poly_detail {

inline void trim(std::vector<Rational>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

/// Value of sum c[k] u^k by Horner's rule.
inline Rational eval(const std::vector<Rational>& c, const Rational& u) {
    Rational acc = 0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * u + c[k];
    return acc;
}

inline std::vector<Rational> add(const std::vector<Rational>& a,
                                 const std::vector<Rational>& b) {
    std::vector<Rational> r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

inline std::vector<Rational> scale(std::vector<Rational> a, const Rational& s) {
    for (auto& v : a) v *= s;
    trim(a);
    return a;
}

inline std::vector<Rational> mul(const std::vector<Rational>& a,
                                 const std::vector<Rational>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rational> r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

/// d/du of sum c[k] u^k.
inline std::vector<Rational> derivative_u(const std::vector<Rational>& c) {
    if (c.size() <= 1) return {};
    std::vector<Rational> r(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) r[k - 1] = Rational(k) * c[k];
    return r;
}

/// Coefficients in w of q(s + t w), where q has coefficients c in u.
inline std::vector<Rational> affine_substitute(const std::vector<Rational>& c,
                                               const Rational& s,
                                               const Rational& t) {
    std::vector<Rational> res;
    for (std::size_t i = c.size(); i-- > 0;) {
        // res = res * (s + t w) + c[i]
        std::vector<Rational> next(res.size() + 1, Rational(0));
        for (std::size_t k = 0; k < res.size(); ++k) {
            next[k] += res[k] * s;
            next[k + 1] += res[k] * t;
        }
        if (next.empty()) next.assign(1, Rational(0));
        next[0] += c[i];
        trim(next);
        res = std::move(next);
    }
    return res;
}

}  // namespace poly_detail

/// Dense univariate polynomial over Rational in a declared basis.
/// Trailing zero coefficients are trimmed; the zero polynomial has
/// degree() == -1.
class Polynomial {
public:
    Polynomial() : basis_(Basis::X), anchor_(0) {}

    explicit Polynomial(std::vector<Rational> coeffs, Basis basis = Basis::X,
                        Rational anchor = Rational(0))
        : basis_(basis), anchor_(std::move(anchor)), coeffs_(std::move(coeffs)) {
        if (basis_ == Basis::X) anchor_ = 0;
        poly_detail::trim(coeffs_);
    }

    Polynomial(std::initializer_list<Rational> coeffs, Basis basis = Basis::X,
               Rational anchor = Rational(0))
        : Polynomial(std::vector<Rational>(coeffs), basis, std::move(anchor)) {}

    static Polynomial zero(Basis basis = Basis::X, Rational anchor = Rational(0)) {
        return Polynomial(std::vector<Rational>{}, basis, std::move(anchor));
    }

    static Polynomial constant(Rational value, Basis basis = Basis::X,
                               Rational anchor = Rational(0)) {
        return Polynomial(std::vector<Rational>{std::move(value)}, basis,
                          std::move(anchor));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    Basis basis() const { return basis_; }
    const Rational& anchor() const { return anchor_; }
    const std::vector<Rational>& coefficients() const { return coeffs_; }

    Rational coefficient(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : Rational(0);
    }

    /// Argument of the stored power basis at the point x.
    Rational basis_variable(const Rational& x) const {
        return basis_ == Basis::X ? x : Rational(anchor_ - x);
    }

    Rational operator()(const Rational& x) const {
        return poly_detail::eval(coeffs_, basis_variable(x));
    }

    bool same_frame(const Polynomial& o) const {
        return basis_ == o.basis_ && (basis_ == Basis::X || anchor_ == o.anchor_);
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.basis_ == b.basis_ && a.anchor_ == b.anchor_ &&
               a.coeffs_ == b.coeffs_;
    }

    Polynomial operator-() const {
        return Polynomial(poly_detail::scale(coeffs_, Rational(-1)), basis_, anchor_);
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        a.require_same_frame(b);
        return Polynomial(poly_detail::add(a.coeffs_, b.coeffs_), a.basis_, a.anchor_);
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        return a + (-b);
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.require_same_frame(b);
        return Polynomial(poly_detail::mul(a.coeffs_, b.coeffs_), a.basis_, a.anchor_);
    }

    friend Polynomial operator*(const Rational& s, const Polynomial& p) {
        return Polynomial(poly_detail::scale(p.coeffs_, s), p.basis_, p.anchor_);
    }

    friend Polynomial operator+(const Polynomial& p, const Rational& s) {
        std::vector<Rational> c = p.coeffs_;
        if (c.empty()) c.assign(1, Rational(0));
        c[0] += s;
        return Polynomial(std::move(c), p.basis_, p.anchor_);
    }

    friend Polynomial operator-(const Polynomial& p, const Rational& s) {
        return p + Rational(-s);
    }

private:
    void require_same_frame(const Polynomial& o) const {
        if (!same_frame(o))
            throw DomainError("polynomial basis/anchor mismatch");
    }

    Basis basis_;
    Rational anchor_;
    std::vector<Rational> coeffs_;
};

inline Rational poly_eval(const Polynomial& p, const Rational& x) { return p(x); }

/// Formal d/dx, expressed in the same basis. For the (b - x) basis the
/// chain rule contributes a factor of -1 per power.
inline Polynomial poly_derivative(const Polynomial& p) {
    std::vector<Rational> d = poly_detail::derivative_u(p.coefficients());
    if (p.basis() == Basis::BMinusX)
        d = poly_detail::scale(std::move(d), Rational(-1));
    return Polynomial(std::move(d), p.basis(), p.anchor());
}

/// Antiderivative A with A' = p and zero constant term, same basis.
inline Polynomial poly_antiderivative(const Polynomial& p) {
    const auto& c = p.coefficients();
    std::vector<Rational> a(c.size() + 1, Rational(0));
    Rational flip = p.basis() == Basis::BMinusX ? Rational(-1) : Rational(1);
    for (std::size_t k = 0; k < c.size(); ++k)
        a[k + 1] = flip * c[k] / Rational(k + 1);
    return Polynomial(std::move(a), p.basis(), p.anchor());
}

inline Rational poly_definite_integral(const Polynomial& p, const Rational& lo,
                                       const Rational& hi) {
    Polynomial a = poly_antiderivative(p);
    return a(hi) - a(lo);
}

/// Exact change of basis into powers of x.
inline Polynomial to_basis_x(const Polynomial& p) {
    if (p.basis() == Basis::X) return p;
    // u = b - x, so substitute u = b + (-1) x.
    return Polynomial(
        poly_detail::affine_substitute(p.coefficients(), p.anchor(), Rational(-1)),
        Basis::X);
}

/// Exact change of basis into powers of (b - x).
inline Polynomial to_basis_bmx(const Polynomial& p, const Rational& b) {
    if (p.basis() == Basis::BMinusX) {
        if (p.anchor() == b) return p;
        // (b' - x) = (b' - b) + (b - x): shift between anchors.
        return Polynomial(poly_detail::affine_substitute(p.coefficients(),
                                                         Rational(p.anchor() - b),
                                                         Rational(1)),
                          Basis::BMinusX, b);
    }
    // x = b - u.
    return Polynomial(
        poly_detail::affine_substitute(p.coefficients(), b, Rational(-1)),
        Basis::BMinusX, b);
}

}  // namespace primseq
