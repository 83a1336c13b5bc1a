#ifndef LOWEROP_RATIONAL_HPP
#define LOWEROP_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "lowerop/errors.hpp"

namespace lowerop {

/// Arbitrary-precision rational number in canonical form:
/// gcd(|numerator|, denominator) = 1, denominator > 0, zero stored as 0/1.
/// GMP keeps arithmetic results canonical when the operands are, so only
/// construction paths call canonicalize().
class Rat {
public:
    Rat() : v_(0) {}
    Rat(int n) : v_(n) {}
    Rat(long n) : v_(mpz_class(n)) {}
    Rat(long num, long den) : Rat(mpz_class(num), mpz_class(den)) {}
    Rat(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw Error(errc::division_by_zero, "rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rat(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

    // Accepts "p" or "p/q" with an optional sign on p; q must be nonzero.
    static Rat parse(std::string_view s);

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    bool is_nonnegative_integer() const { return is_integer() && sgn(v_) >= 0; }
    int sign() const { return sgn(v_); }

    Rat abs() const { return Rat(mpq_class(::abs(v_))); }

    std::optional<long> as_long() const {
        if (!is_integer() || !v_.get_num().fits_slong_p()) return std::nullopt;
        return v_.get_num().get_si();
    }

    Rat pow(long e) const;

    // Square root when the value is the square of a rational (requires >= 0).
    std::optional<Rat> exact_sqrt() const;

    std::string str() const {
        std::string s = v_.get_num().get_str();
        if (v_.get_den() != 1) s += "/" + v_.get_den().get_str();
        return s;
    }

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw Error(errc::division_by_zero, "rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
    friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.v_)); }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

private:
    mpq_class v_;
};

inline Rat Rat::parse(std::string_view s) {
    auto parse_int = [](std::string_view t) -> mpz_class {
        if (t.empty()) throw Error(errc::parse_error, "empty integer literal");
        if (t[0] == '+') t.remove_prefix(1);  // GMP rejects a leading plus
        std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
        if (i == t.size()) throw Error(errc::parse_error, "sign without digits");
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9')
                throw Error(errc::parse_error, "invalid rational literal: " + std::string(t));
        return mpz_class(std::string(t), 10);
    };
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rat(parse_int(s), 1);
    mpz_class num = parse_int(s.substr(0, slash));
    mpz_class den = parse_int(s.substr(slash + 1));
    if (den == 0) throw Error(errc::parse_error, "zero denominator: " + std::string(s));
    return Rat(num, den);
}

inline Rat Rat::pow(long e) const {
    if (e == 0) return Rat(1);
    bool invert = e < 0;
    unsigned long ue = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    if (invert && is_zero()) throw Error(errc::division_by_zero, "zero to a negative power");
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), ue);
    mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), ue);
    return invert ? Rat(d, n) : Rat(n, d);
}

inline std::optional<Rat> Rat::exact_sqrt() const {
    if (sign() < 0) return std::nullopt;
    mpz_class n = v_.get_num(), d = v_.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Rat(rn, rd);
}

inline Rat binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return Rat(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rat(r, 1);
}

inline Rat factorial(long n) {
    if (n < 0) throw Error(errc::bad_parameter, "factorial of negative integer");
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(r, 1);
}

inline std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace lowerop

#endif
