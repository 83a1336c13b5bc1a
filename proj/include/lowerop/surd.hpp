#ifndef LOWEROP_SURD_HPP
#define LOWEROP_SURD_HPP

#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "lowerop/errors.hpp"
#include "lowerop/rational.hpp"

namespace lowerop {

namespace detail {

// n = s^2 * m with m squarefree, n > 0. Trial division up to the cube root
// of the running cofactor, then a perfect-square test settles the tail
// (which has at most two prime factors).
inline std::pair<mpz_class, mpz_class> square_part(mpz_class n) {
    mpz_class s = 1, m = 1;
    mpz_class p = 2;
    while (p * p * p <= n) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            for (int i = 0; i < e / 2; ++i) s *= p;
            if (e % 2) m *= p;
        }
        p += (p == 2) ? 1 : 2;
    }
    if (n > 1) {
        if (mpz_perfect_square_p(n.get_mpz_t())) {
            mpz_class r;
            mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
            s *= r;
        } else {
            m *= n;
        }
    }
    return {s, m};
}

}  // namespace detail

/// Element of a quadratic extension of the rationals:
/// value = rational_part + surd_part * sqrt(radicand).
///
/// Canonical form: the radicand is a squarefree integer distinct from 0 and 1
/// (square factors are folded into surd_part, perfect squares into
/// rational_part); a pure rational carries radicand 1. A negative radicand is
/// representable and flagged formal_nonreal(). Arithmetic between two
/// irrational values with different radicands raises FieldMismatch.
class Surd {
public:
    Surd() : rat_(0), coef_(0), rad_(1) {}
    Surd(int n) : rat_(n), coef_(0), rad_(1) {}
    Surd(Rat r) : rat_(std::move(r)), coef_(0), rad_(1) {}
    Surd(Rat rational_part, Rat surd_part, Rat radicand)
        : rat_(std::move(rational_part)), coef_(std::move(surd_part)), rad_(std::move(radicand)) {
        normalize();
    }

    static Surd sqrt(const Rat& radicand) { return Surd(Rat(0), Rat(1), radicand); }

    const Rat& rational_part() const { return rat_; }
    const Rat& surd_part() const { return coef_; }
    const Rat& radicand() const { return rad_; }

    bool is_rational() const { return coef_.is_zero(); }
    bool is_zero() const { return is_rational() && rat_.is_zero(); }
    bool formal_nonreal() const { return rad_.sign() < 0; }

    std::optional<Rat> as_rat() const {
        if (!is_rational()) return std::nullopt;
        return rat_;
    }

    Surd& operator+=(const Surd& o) {
        Rat d = common_radicand(*this, o);
        rat_ += o.rat_;
        coef_ += o.coef_;
        rad_ = d;
        normalize();
        return *this;
    }
    Surd& operator-=(const Surd& o) { return *this += -o; }
    Surd& operator*=(const Surd& o) {
        Rat d = common_radicand(*this, o);
        Rat r = rat_ * o.rat_ + coef_ * o.coef_ * d;
        Rat c = rat_ * o.coef_ + coef_ * o.rat_;
        rat_ = r;
        coef_ = c;
        rad_ = d;
        normalize();
        return *this;
    }
    Surd& operator/=(const Surd& o) { return *this *= o.inverse(); }

    Surd inverse() const {
        // 1/(a + b*sqrt(d)) = (a - b*sqrt(d)) / (a^2 - b^2 d); the norm only
        // vanishes for zero since d is squarefree and not 1.
        Rat norm = rat_ * rat_ - coef_ * coef_ * rad_;
        if (norm.is_zero()) throw Error(errc::division_by_zero, "surd division by zero");
        return Surd(rat_ / norm, -coef_ / norm, rad_);
    }

    friend Surd operator+(Surd a, const Surd& b) { a += b; return a; }
    friend Surd operator-(Surd a, const Surd& b) { a -= b; return a; }
    friend Surd operator*(Surd a, const Surd& b) { a *= b; return a; }
    friend Surd operator/(Surd a, const Surd& b) { a /= b; return a; }
    friend Surd operator-(const Surd& a) {
        Surd r = a;
        r.rat_ = -r.rat_;
        r.coef_ = -r.coef_;
        return r;
    }

    friend bool operator==(const Surd& a, const Surd& b) {
        return a.rat_ == b.rat_ && a.coef_ == b.coef_ && a.rad_ == b.rad_;
    }
    friend bool operator!=(const Surd& a, const Surd& b) { return !(a == b); }

    std::string str() const;

private:
    static Rat common_radicand(const Surd& a, const Surd& b) {
        if (a.is_rational()) return b.rad_;
        if (b.is_rational()) return a.rad_;
        if (a.rad_ != b.rad_)
            throw Error(errc::field_mismatch,
                        "mixed radicands sqrt(" + a.rad_.str() + ") and sqrt(" + b.rad_.str() + ")");
        return a.rad_;
    }

    void normalize() {
        if (coef_.is_zero() || rad_.is_zero()) {
            coef_ = Rat(0);
            rad_ = Rat(1);
            return;
        }
        // sqrt(p/q) = sqrt(p*q)/q brings the radicand to an integer.
        mpz_class den = rad_.denominator();
        mpz_class work = rad_.numerator() * den;
        if (den != 1) coef_ /= Rat(den, 1);
        int sign = sgn(work) < 0 ? -1 : 1;
        auto [sq, core] = detail::square_part(::abs(work));
        coef_ *= Rat(sq, 1);
        rad_ = Rat(sign < 0 ? mpz_class(-core) : core, 1);
        if (rad_.is_one()) {
            rat_ += coef_;
            coef_ = Rat(0);
        }
        if (coef_.is_zero()) rad_ = Rat(1);
    }

    Rat rat_, coef_, rad_;
};

inline std::string Surd::str() const {
    if (is_rational()) return rat_.str();
    std::string root = "sqrt(" + rad_.str() + ")";
    std::string surd;
    if (coef_.is_one()) surd = root;
    else if (coef_ == Rat(-1)) surd = "-" + root;
    else surd = coef_.str() + "*" + root;
    if (rat_.is_zero()) return surd;
    if (surd[0] == '-') return rat_.str() + " - " + surd.substr(1);
    return rat_.str() + " + " + surd;
}

inline std::ostream& operator<<(std::ostream& os, const Surd& s) { return os << s.str(); }

}  // namespace lowerop

#endif
