#ifndef LOWEROP_OPERATOR_J_HPP
#define LOWEROP_OPERATOR_J_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "lowerop/errors.hpp"
#include "lowerop/poly.hpp"

namespace lowerop {

/// Truncated canonical expansion of a linear operator on polynomials that does
/// not increase the degree:
///
///     J = sum_{nu = 0..N} a_nu(x)/nu! D^nu,   deg a_nu <= nu.
///
/// The truncation order N is an explicit horizon: coefficients beyond it are
/// unknown, and every operation below states the horizon of its result.
/// Exceeding a horizon is a hard error, never a silent truncation.
///
/// Shifted auxiliary operators J^(m) (see shift()) may violate deg a_nu <= nu;
/// they carry a relaxed-degree flag and are accepted only where noted.
template <FieldScalar K>
class OperatorJ {
public:
    static OperatorJ from_coeffs(std::vector<Poly<K>> coeffs) {
        if (coeffs.empty())
            throw Error(errc::bad_parameter, "operator needs at least one coefficient");
        for (std::size_t nu = 0; nu < coeffs.size(); ++nu)
            if (coeffs[nu].degree() > static_cast<int>(nu))
                throw Error(errc::degree_violation,
                            "deg a_nu exceeds nu", static_cast<long>(nu));
        return OperatorJ(std::move(coeffs), false);
    }

    // Auxiliary operators (the shifted J^(m)) may violate deg a_nu <= nu and
    // are always flagged, whatever their actual degrees.
    static OperatorJ from_coeffs_relaxed(std::vector<Poly<K>> coeffs) {
        if (coeffs.empty())
            throw Error(errc::bad_parameter, "operator needs at least one coefficient");
        return OperatorJ(std::move(coeffs), true);
    }

    int truncation_order() const { return static_cast<int>(a_.size()) - 1; }
    bool relaxed_degree() const { return relaxed_; }

    const Poly<K>& coeff(int nu) const {
        if (nu < 0 || nu > truncation_order())
            throw Error(errc::horizon_exceeded, "coefficient index beyond horizon",
                        static_cast<long>(nu));
        return a_[static_cast<std::size_t>(nu)];
    }
    // a_i^[nu], zero when out of range of the stored polynomial.
    K coeff_entry(int nu, int i) const { return coeff(nu).coeff(i); }

    const std::vector<Poly<K>>& coeffs() const { return a_; }

    // Equality is coefficientwise; the relaxed flag records provenance, not value.
    friend bool operator==(const OperatorJ& x, const OperatorJ& y) { return x.a_ == y.a_; }
    friend bool operator!=(const OperatorJ& x, const OperatorJ& y) { return !(x == y); }

private:
    OperatorJ(std::vector<Poly<K>> a, bool relaxed) : a_(std::move(a)), relaxed_(relaxed) {}

    std::vector<Poly<K>> a_;
    bool relaxed_;
};

using RatOperator = OperatorJ<Rat>;

/// J(p) = sum_nu a_nu(x) p^(nu)(x)/nu!. Requires deg p <= horizon.
template <FieldScalar K>
Poly<K> apply(const OperatorJ<K>& J, const Poly<K>& p) {
    if (p.degree() > J.truncation_order())
        throw Error(errc::horizon_exceeded, "polynomial degree beyond operator horizon",
                    static_cast<long>(p.degree()));
    Poly<K> sum;
    int top = std::min(p.degree(), J.truncation_order());
    for (int nu = 0; nu <= top; ++nu) sum += J.coeff(nu) * hasse_derive(p, nu);
    return sum;
}

/// J(x^n) by the closed double sum
///     J(x^n) = sum_{tau=0..n} ( sum_{nu=0..tau} C(n, nu) a_{tau-nu}^[n-nu] ) x^tau,
/// valid for canonical operators; relaxed ones fall back to apply().
template <FieldScalar K>
Poly<K> image(const OperatorJ<K>& J, int n) {
    if (n < 0 || n > J.truncation_order())
        throw Error(errc::horizon_exceeded, "image index beyond horizon", static_cast<long>(n));
    if (J.relaxed_degree()) return apply(J, Poly<K>::monomial(n));
    std::vector<K> c(static_cast<std::size_t>(n) + 1, K(0));
    for (int tau = 0; tau <= n; ++tau) {
        K v(0);
        for (int nu = 0; nu <= tau; ++nu)
            v = v + K(binomial(n, nu)) * J.coeff_entry(n - nu, tau - nu);
        c[static_cast<std::size_t>(tau)] = std::move(v);
    }
    return Poly<K>(std::move(c));
}

/// Unique canonical operator with the given images J(x^n) = images[n],
/// recovered by the triangular recurrence
///     a_tau^[n] = d_tau^[n] - sum_{nu=1..tau} C(n, nu) a_{tau-nu}^[n-nu].
template <FieldScalar K>
OperatorJ<K> from_images(const std::vector<Poly<K>>& images) {
    if (images.empty())
        throw Error(errc::bad_parameter, "need at least one image");
    const int N = static_cast<int>(images.size()) - 1;
    for (int n = 0; n <= N; ++n)
        if (images[static_cast<std::size_t>(n)].degree() > n)
            throw Error(errc::not_degree_nonincreasing,
                        "image degree exceeds its index", static_cast<long>(n));
    std::vector<std::vector<K>> a;
    a.reserve(images.size());
    for (int n = 0; n <= N; ++n) {
        std::vector<K> row(static_cast<std::size_t>(n) + 1, K(0));
        for (int tau = 0; tau <= n; ++tau) {
            K v = images[static_cast<std::size_t>(n)].coeff(tau);
            for (int nu = 1; nu <= tau; ++nu)
                v = v - K(binomial(n, nu)) * a[static_cast<std::size_t>(n - nu)]
                                              [static_cast<std::size_t>(tau - nu)];
            row[static_cast<std::size_t>(tau)] = std::move(v);
        }
        a.push_back(std::move(row));
    }
    std::vector<Poly<K>> coeffs;
    coeffs.reserve(a.size());
    for (auto& row : a) coeffs.emplace_back(std::move(row));
    return OperatorJ<K>::from_coeffs(std::move(coeffs));
}

/// J^(m): coefficient list a_m, a_{m+1}, ... reindexed from zero. The result
/// may violate deg a_nu <= nu and is then flagged relaxed-degree.
template <FieldScalar K>
OperatorJ<K> shift(const OperatorJ<K>& J, int m) {
    if (m < 0 || m > J.truncation_order())
        throw Error(errc::horizon_exceeded, "shift beyond horizon", static_cast<long>(m));
    if (m == 0) return J;
    std::vector<Poly<K>> c(J.coeffs().begin() + m, J.coeffs().end());
    return OperatorJ<K>::from_coeffs_relaxed(std::move(c));
}

namespace detail {
template <FieldScalar K>
void require_canonical(const OperatorJ<K>& J, const char* what) {
    if (J.relaxed_degree())
        throw Error(errc::bad_parameter,
                    std::string("relaxed-degree operator not accepted by ") + what);
}
}  // namespace detail

/// K o J (apply J first). Result horizon min(N_K, N_J); coefficients
///     c_n = sum_{mu=0..n} b_mu sum_{nu=0..mu} C(n, nu) a_{n-nu}^((mu-nu)) / (mu-nu)!.
template <FieldScalar K>
OperatorJ<K> compose(const OperatorJ<K>& Kop, const OperatorJ<K>& Jop) {
    detail::require_canonical(Kop, "compose");
    detail::require_canonical(Jop, "compose");
    const int N = std::min(Kop.truncation_order(), Jop.truncation_order());
    std::vector<Poly<K>> c;
    c.reserve(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        Poly<K> cn;
        for (int mu = 0; mu <= n; ++mu) {
            if (Kop.coeff(mu).is_zero()) continue;
            Poly<K> inner;
            for (int nu = 0; nu <= mu; ++nu)
                inner += K(binomial(n, nu)) * hasse_derive(Jop.coeff(n - nu), mu - nu);
            cn += Kop.coeff(mu) * inner;
        }
        c.push_back(std::move(cn));
    }
    return OperatorJ<K>::from_coeffs(std::move(c));
}

/// lambda_n^[0] = sum_{mu=0..n} C(n, mu) a_mu^[mu], n = 0..N — the isomorphism
/// scalars of (the truncation of) J.
template <FieldScalar K>
std::vector<K> iso_lambdas(const OperatorJ<K>& J) {
    std::vector<K> l;
    l.reserve(static_cast<std::size_t>(J.truncation_order()) + 1);
    for (int n = 0; n <= J.truncation_order(); ++n) {
        K v(0);
        for (int mu = 0; mu <= n; ++mu)
            v = v + K(binomial(n, mu)) * J.coeff_entry(mu, mu);
        l.push_back(std::move(v));
    }
    return l;
}

/// Inverse on the shared horizon: a~_0 = 1/lambda_0 and
///     lambda_{n+1} a~_{n+1} = -sum_{mu=0..n} a~_mu sum_{nu=0..mu}
///                              C(n+1, nu) a_{n+1-nu}^((mu-nu)) / (mu-nu)!.
/// Requires every lambda_n^[0] nonzero up to the horizon.
template <FieldScalar K>
OperatorJ<K> invert(const OperatorJ<K>& J) {
    detail::require_canonical(J, "invert");
    const int N = J.truncation_order();
    std::vector<K> lambda = iso_lambdas(J);
    for (int n = 0; n <= N; ++n)
        if (lambda[static_cast<std::size_t>(n)] == K(0))
            throw Error(errc::not_isomorphism, "lambda_n vanishes", static_cast<long>(n));
    std::vector<Poly<K>> inv;
    inv.reserve(static_cast<std::size_t>(N) + 1);
    inv.push_back(Poly<K>(K(1) / lambda[0]));
    for (int n = 0; n < N; ++n) {
        Poly<K> s;
        for (int mu = 0; mu <= n; ++mu) {
            if (inv[static_cast<std::size_t>(mu)].is_zero()) continue;
            Poly<K> innerp;
            for (int nu = 0; nu <= mu; ++nu)
                innerp += K(binomial(n + 1, nu)) * hasse_derive(J.coeff(n + 1 - nu), mu - nu);
            s += inv[static_cast<std::size_t>(mu)] * innerp;
        }
        inv.push_back(-s / lambda[static_cast<std::size_t>(n + 1)]);
    }
    return OperatorJ<K>::from_coeffs(std::move(inv));
}

/// Lowering profile of J: the order k and the normalization scalars
/// lambda_{n+k}^[k], certified up to the stored horizon.
template <FieldScalar K>
struct LoweringProfile {
    int order = 0;
    std::vector<K> lambdas;  // lambdas[i] = lambda_{order+i}^[order], i = 0..horizon-order
    int horizon = 0;

    const K& lambda(int index) const {  // lambda_index^[order], index >= order
        if (index < order || index > horizon)
            throw Error(errc::horizon_exceeded, "lambda index beyond horizon",
                        static_cast<long>(index));
        return lambdas[static_cast<std::size_t>(index - order)];
    }
};

/// Decides whether J acts as a derivative of order k on its horizon:
///   a) a_0 = ... = a_{k-1} = 0 (k pinned by the first nonzero coefficient),
///   b) deg a_nu <= nu - k for nu >= k,
///   c) lambda_{n+k}^[k] = sum_{nu=0..n} C(n+k, nu) a_{n-nu}^[n+k-nu] != 0.
/// k = 0 is the isomorphism case. Certification is horizon-scoped only.
template <FieldScalar K>
LoweringProfile<K> lowering_order(const OperatorJ<K>& J) {
    if (J.relaxed_degree())
        throw Error(errc::not_lowering, "relaxed-degree operator has no lowering profile");
    const int N = J.truncation_order();
    int k = -1;
    for (int nu = 0; nu <= N; ++nu)
        if (!J.coeff(nu).is_zero()) { k = nu; break; }
    if (k < 0)
        throw Error(errc::not_lowering, "zero operator (condition a fails for every k)");
    for (int nu = k; nu <= N; ++nu)
        if (J.coeff(nu).degree() > nu - k)
            throw Error(errc::not_lowering,
                        "condition b fails: deg a_nu > nu - k", static_cast<long>(nu));
    LoweringProfile<K> prof;
    prof.order = k;
    prof.horizon = N;
    for (int n = 0; n + k <= N; ++n) {
        K v(0);
        for (int nu = 0; nu <= n; ++nu)
            v = v + K(binomial(n + k, nu)) * J.coeff_entry(n + k - nu, n - nu);
        if (v == K(0))
            throw Error(errc::not_lowering, "condition c fails: lambda vanishes",
                        static_cast<long>(n + k));
        prof.lambdas.push_back(std::move(v));
    }
    return prof;
}

/// Truncated generating series J(x0; z) = sum_{n<=z_order} a_n(x0)/n! z^n,
/// returned as a polynomial in z.
template <FieldScalar K>
Poly<K> series_truncated(const OperatorJ<K>& J, const K& x0, int z_order) {
    if (z_order < 0 || z_order > J.truncation_order())
        throw Error(errc::horizon_exceeded, "series order beyond horizon",
                    static_cast<long>(z_order));
    std::vector<K> c;
    c.reserve(static_cast<std::size_t>(z_order) + 1);
    for (int n = 0; n <= z_order; ++n)
        c.push_back(J.coeff(n)(x0) / K(factorial(n)));
    return Poly<K>(std::move(c));
}

// ---------------------------------------------------------------------------
// Built-in operators. Each takes the truncation order N of the result.

template <FieldScalar K>
OperatorJ<K> make_identity(int N) {
    std::vector<Poly<K>> c(static_cast<std::size_t>(N) + 1);
    c[0] = Poly<K>(K(1));
    return OperatorJ<K>::from_coeffs(std::move(c));
}

template <FieldScalar K>
OperatorJ<K> make_derivative(int N) {
    if (N < 1) throw Error(errc::bad_parameter, "derivative needs horizon >= 1");
    std::vector<Poly<K>> c(static_cast<std::size_t>(N) + 1);
    c[1] = Poly<K>(K(1));
    return OperatorJ<K>::from_coeffs(std::move(c));
}

/// DxD = D + x D^2.
template <FieldScalar K>
OperatorJ<K> make_dxd(int N) {
    if (N < 2) throw Error(errc::bad_parameter, "DxD needs horizon >= 2");
    std::vector<Poly<K>> c(static_cast<std::size_t>(N) + 1);
    c[1] = Poly<K>(K(1));
    c[2] = Poly<K>::monomial(1, K(2));
    return OperatorJ<K>::from_coeffs(std::move(c));
}

/// s (h_A o tau_{-B}): p(x) -> s p(Ax + B); a_n = s ((A-1)x + B)^n.
template <FieldScalar K>
OperatorJ<K> make_affine(const K& s, const K& A, const K& B, int N) {
    if (s == K(0) || A == K(0))
        throw Error(errc::bad_parameter, "affine operator needs s != 0 and A != 0");
    Poly<K> lin(std::vector<K>{B, A - K(1)});
    std::vector<Poly<K>> c;
    c.reserve(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) c.push_back(s * pow(lin, n));
    return OperatorJ<K>::from_coeffs(std::move(c));
}

/// Divided difference D_w: f -> (f(x + w) - f(x))/w; a_0 = 0, a_n = w^(n-1).
template <FieldScalar K>
OperatorJ<K> make_divided_difference(const K& w, int N) {
    if (w == K(0)) throw Error(errc::bad_parameter, "divided difference needs w != 0");
    std::vector<Poly<K>> c(static_cast<std::size_t>(N) + 1);
    K p(1);
    for (int n = 1; n <= N; ++n) {
        c[static_cast<std::size_t>(n)] = Poly<K>(p);
        p = p * w;
    }
    return OperatorJ<K>::from_coeffs(std::move(c));
}

/// q-derivative H_q: f -> (f(qx) - f(x))/((q-1)x); a_0 = 0,
/// a_n = (q-1)^(n-1) x^(n-1). Needs q outside {0} and the roots of unity,
/// which over an exact rational scalar excludes exactly {0, 1, -1}.
template <FieldScalar K>
OperatorJ<K> make_q_derivative(const K& q, int N) {
    if (q == K(0) || q == K(1) || q == K(-1))
        throw Error(errc::bad_parameter, "inadmissible q for the q-derivative");
    std::vector<Poly<K>> c(static_cast<std::size_t>(N) + 1);
    K p(1);
    for (int n = 1; n <= N; ++n) {
        c[static_cast<std::size_t>(n)] = Poly<K>::monomial(n - 1, p);
        p = p * (q - K(1));
    }
    return OperatorJ<K>::from_coeffs(std::move(c));
}

/// I_(q,w): f -> f(x) + w f(qx); a_0 = 1 + w, a_n = w (q-1)^n x^n.
/// The admissible set requires 1 + w q^n != 0, checked up to the horizon.
template <FieldScalar K>
OperatorJ<K> make_i_q_omega(const K& q, const K& w, int N) {
    if (w == K(0)) throw Error(errc::bad_parameter, "I_(q,w) needs w != 0");
    if (q == K(0) || q == K(1) || q == K(-1))
        throw Error(errc::bad_parameter, "inadmissible q for I_(q,w)");
    K qn(1);
    for (int n = 0; n <= N; ++n) {
        if (K(1) + w * qn == K(0))
            throw Error(errc::bad_parameter, "1 + w q^n vanishes", static_cast<long>(n));
        qn = qn * q;
    }
    std::vector<Poly<K>> c(static_cast<std::size_t>(N) + 1);
    c[0] = Poly<K>(K(1) + w);
    K p = w;
    for (int n = 1; n <= N; ++n) {
        p = p * (q - K(1));
        c[static_cast<std::size_t>(n)] = Poly<K>::monomial(n, p);
    }
    return OperatorJ<K>::from_coeffs(std::move(c));
}

}  // namespace lowerop

#endif
