#ifndef LOWEROP_POLY_HPP
#define LOWEROP_POLY_HPP

#include <concepts>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lowerop/errors.hpp"
#include "lowerop/rational.hpp"
#include "lowerop/surd.hpp"

namespace lowerop {

template <typename K>
concept FieldScalar = std::regular<K> && requires(K a, const K& b) {
    { a + b } -> std::convertible_to<K>;
    { a - b } -> std::convertible_to<K>;
    { a * b } -> std::convertible_to<K>;
    { a / b } -> std::convertible_to<K>;
    { -a } -> std::convertible_to<K>;
    K(0);
    K(1);
};

/// Dense univariate polynomial over an exact field scalar, coefficients
/// stored low degree to high. The zero polynomial is the empty list and the
/// top coefficient is nonzero otherwise, so operator== is exact equality.
template <FieldScalar K>
class Poly {
public:
    Poly() = default;
    explicit Poly(K constant) {
        c_.push_back(std::move(constant));
        trim();
    }
    explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly monomial(int n, K coef = K(1)) {
        if (n < 0) throw Error(errc::bad_parameter, "monomial of negative degree");
        std::vector<K> c(static_cast<std::size_t>(n) + 1, K(0));
        c.back() = std::move(coef);
        return Poly(std::move(c));
    }
    static Poly var() { return monomial(1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    K coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return K(0);
        return c_[static_cast<std::size_t>(i)];
    }
    const K& leading() const {
        if (is_zero()) throw Error(errc::bad_parameter, "leading coefficient of zero polynomial");
        return c_.back();
    }
    const std::vector<K>& coeffs() const { return c_; }

    // Horner evaluation.
    K operator()(const K& x) const {
        K acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const K& k) {
        for (auto& ci : c_) ci = ci * k;
        trim();
        return *this;
    }
    Poly& operator/=(const K& k) {
        for (auto& ci : c_) ci = ci / k;
        trim();
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
    friend Poly operator-(const Poly& a) {
        Poly r = a;
        for (auto& ci : r.c_) ci = -ci;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<K> c(a.c_.size() + b.c_.size() - 1, K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    friend Poly operator*(Poly a, const K& k) { a *= k; return a; }
    friend Poly operator*(const K& k, Poly a) { a *= k; return a; }
    friend Poly operator/(Poly a, const K& k) { a /= k; return a; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    void trim() {
        while (!c_.empty() && c_.back() == K(0)) c_.pop_back();
    }

    std::vector<K> c_;
};

using RatPoly = Poly<Rat>;
using SurdPoly = Poly<Surd>;

/// m-th derivative.
template <FieldScalar K>
Poly<K> derive(const Poly<K>& p, int m = 1) {
    if (m < 0) throw Error(errc::bad_parameter, "negative derivative order");
    if (m == 0) return p;
    if (p.degree() < m) return Poly<K>();
    std::vector<K> c;
    c.reserve(static_cast<std::size_t>(p.degree() - m) + 1);
    for (int i = m; i <= p.degree(); ++i) {
        K f = p.coeff(i);
        for (int j = 0; j < m; ++j) f = f * K(binomial(i - j, 1));
        c.push_back(std::move(f));
    }
    return Poly<K>(std::move(c));
}

/// Hasse derivative p^(m)/m!, exact in any characteristic-zero field:
/// coefficient i of p contributes binomial(i, m) x^(i-m).
template <FieldScalar K>
Poly<K> hasse_derive(const Poly<K>& p, int m) {
    if (m < 0) throw Error(errc::bad_parameter, "negative derivative order");
    if (m == 0) return p;
    if (p.degree() < m) return Poly<K>();
    std::vector<K> c;
    c.reserve(static_cast<std::size_t>(p.degree() - m) + 1);
    for (int i = m; i <= p.degree(); ++i) c.push_back(p.coeff(i) * K(binomial(i, m)));
    return Poly<K>(std::move(c));
}

/// p(Ax + B); A must be invertible.
template <FieldScalar K>
Poly<K> affine_sub(const Poly<K>& p, const K& A, const K& B) {
    if (A == K(0)) throw Error(errc::degenerate_affine, "affine substitution with A = 0");
    Poly<K> lin(std::vector<K>{B, A});
    Poly<K> acc;
    for (int i = p.degree(); i >= 0; --i) acc = acc * lin + Poly<K>(p.coeff(i));
    return acc;
}

template <FieldScalar K>
Poly<K> pow(const Poly<K>& p, int e) {
    if (e < 0) throw Error(errc::bad_parameter, "negative polynomial power");
    Poly<K> r{K(1)};
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

inline SurdPoly to_surd(const RatPoly& p) {
    std::vector<Surd> c;
    c.reserve(p.coeffs().size());
    for (const auto& ci : p.coeffs()) c.emplace_back(ci);
    return SurdPoly(std::move(c));
}

template <FieldScalar K>
std::string to_string(const Poly<K>& p) {
    if (p.is_zero()) return "[]";
    std::string s = "[";
    for (int i = 0; i <= p.degree(); ++i) {
        if (i) s += ", ";
        if constexpr (std::same_as<K, Rat> || std::same_as<K, Surd>)
            s += p.coeff(i).str();
        else
            s += "?";
    }
    return s + "]";
}

template <FieldScalar K>
std::ostream& operator<<(std::ostream& os, const Poly<K>& p) {
    return os << to_string(p);
}

}  // namespace lowerop

#endif
