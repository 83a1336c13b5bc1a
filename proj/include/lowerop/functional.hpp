#ifndef LOWEROP_FUNCTIONAL_HPP
#define LOWEROP_FUNCTIONAL_HPP

#include <utility>
#include <vector>

#include "lowerop/errors.hpp"
#include "lowerop/operator_j.hpp"
#include "lowerop/poly.hpp"

namespace lowerop {

/// Linear functional on polynomials, represented by its moments
/// (u)_n = <u, x^n> for n = 0..horizon. Every operation records the exact
/// horizon of its result; pairing beyond it is an error.
template <FieldScalar K>
class MomentFunctional {
public:
    explicit MomentFunctional(std::vector<K> moments) : m_(std::move(moments)) {
        if (m_.empty())
            throw Error(errc::bad_parameter, "functional needs at least one moment");
    }

    int horizon() const { return static_cast<int>(m_.size()) - 1; }

    const K& moment(int n) const {
        if (n < 0 || n > horizon())
            throw Error(errc::horizon_exceeded, "moment index beyond horizon",
                        static_cast<long>(n));
        return m_[static_cast<std::size_t>(n)];
    }

    const std::vector<K>& moments() const { return m_; }

    friend bool operator==(const MomentFunctional& a, const MomentFunctional& b) {
        return a.m_ == b.m_;
    }
    friend bool operator!=(const MomentFunctional& a, const MomentFunctional& b) {
        return !(a == b);
    }

    // Sum on the shared horizon.
    friend MomentFunctional operator+(const MomentFunctional& a, const MomentFunctional& b) {
        std::size_t n = std::min(a.m_.size(), b.m_.size());
        std::vector<K> m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = a.m_[i] + b.m_[i];
        return MomentFunctional(std::move(m));
    }
    friend MomentFunctional operator-(const MomentFunctional& a, const MomentFunctional& b) {
        std::size_t n = std::min(a.m_.size(), b.m_.size());
        std::vector<K> m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = a.m_[i] - b.m_[i];
        return MomentFunctional(std::move(m));
    }
    friend MomentFunctional operator*(const K& k, const MomentFunctional& u) {
        std::vector<K> m = u.m_;
        for (auto& mi : m) mi = k * mi;
        return MomentFunctional(std::move(m));
    }

    bool vanishes() const {
        for (const auto& mi : m_)
            if (!(mi == K(0))) return false;
        return true;
    }

private:
    std::vector<K> m_;
};

using RatFunctional = MomentFunctional<Rat>;

/// <u, p>. Requires deg p <= horizon.
template <FieldScalar K>
K pairing(const MomentFunctional<K>& u, const Poly<K>& p) {
    if (p.degree() > u.horizon())
        throw Error(errc::horizon_exceeded, "pairing beyond moment horizon",
                    static_cast<long>(p.degree()));
    K acc(0);
    for (int i = 0; i <= p.degree(); ++i) acc = acc + p.coeff(i) * u.moment(i);
    return acc;
}

/// Left multiplication (w u)_n = <u, w x^n>; result horizon M - deg w.
template <FieldScalar K>
MomentFunctional<K> left_mul(const Poly<K>& w, const MomentFunctional<K>& u) {
    const int M = u.horizon();
    if (w.is_zero()) return MomentFunctional<K>(std::vector<K>(static_cast<std::size_t>(M) + 1, K(0)));
    if (w.degree() > M)
        throw Error(errc::empty_result, "multiplier degree exceeds moment horizon",
                    static_cast<long>(w.degree()));
    std::vector<K> m(static_cast<std::size_t>(M - w.degree()) + 1, K(0));
    for (int n = 0; n <= M - w.degree(); ++n) {
        K acc(0);
        for (int i = 0; i <= w.degree(); ++i) acc = acc + w.coeff(i) * u.moment(n + i);
        m[static_cast<std::size_t>(n)] = std::move(acc);
    }
    return MomentFunctional<K>(std::move(m));
}

/// Distributional derivative: (Du)_n = -n (u)_{n-1}; horizon preserved.
template <FieldScalar K>
MomentFunctional<K> derive(const MomentFunctional<K>& u) {
    std::vector<K> m(static_cast<std::size_t>(u.horizon()) + 1, K(0));
    for (int n = 1; n <= u.horizon(); ++n)
        m[static_cast<std::size_t>(n)] = -(K(binomial(n, 1)) * u.moment(n - 1));
    return MomentFunctional<K>(std::move(m));
}

/// Transpose action (J u)_n = <u, J(x^n)>. For canonical operators the
/// result horizon is min(M, N); relaxed operators stop earlier, as soon as
/// deg J(x^n) outruns the moment horizon.
template <FieldScalar K>
MomentFunctional<K> transpose_apply(const OperatorJ<K>& J, const MomentFunctional<K>& u) {
    std::vector<K> m;
    for (int n = 0; n <= J.truncation_order(); ++n) {
        Poly<K> jn = image(J, n);
        if (jn.degree() > u.horizon()) break;
        m.push_back(pairing(u, jn));
    }
    if (m.empty())
        throw Error(errc::horizon_exceeded, "no computable moments for transpose action");
    return MomentFunctional<K>(std::move(m));
}

/// Transpose of the shifted operator J^(m).
template <FieldScalar K>
MomentFunctional<K> transpose_shift_apply(const OperatorJ<K>& J, int m,
                                          const MomentFunctional<K>& u) {
    return transpose_apply(shift(J, m), u);
}

/// Moments of (h_{A^-1} o tau_{-B}) u:  (u~)_n = <u, ((x - B)/A)^n>.
/// This is the dual transport matching P~_n(x) = A^-n P_n(Ax + B).
template <FieldScalar K>
MomentFunctional<K> affine_transport(const MomentFunctional<K>& u, const K& A, const K& B) {
    if (A == K(0)) throw Error(errc::degenerate_affine, "affine transport with A = 0");
    std::vector<K> m;
    m.reserve(static_cast<std::size_t>(u.horizon()) + 1);
    K apow(1);
    for (int n = 0; n <= u.horizon(); ++n) {
        K acc(0);
        K bpow(1);  // (-B)^(n-k) built from the top down
        for (int k = n; k >= 0; --k) {
            acc = acc + K(binomial(n, k)) * bpow * u.moment(k);
            bpow = bpow * (-B);
        }
        m.push_back(acc / apow);
        apow = apow * A;
    }
    return MomentFunctional<K>(std::move(m));
}

}  // namespace lowerop

#endif
