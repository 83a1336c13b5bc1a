#ifndef LOWEROP_CLASSIFY_HPP
#define LOWEROP_CLASSIFY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lowerop/errors.hpp"
#include "lowerop/functional.hpp"
#include "lowerop/mps.hpp"
#include "lowerop/operator_j.hpp"
#include "lowerop/poly.hpp"
#include "lowerop/surd.hpp"

namespace lowerop {

/// Pearson pair of the functional equation D(phi u) + psi u = 0,
/// deg phi <= 2 and deg psi = 1 for classical claims.
template <FieldScalar K = Rat>
struct PearsonPair {
    Poly<K> phi;
    Poly<K> psi;
};

enum class ClassicalFamily { Bessel, Jacobi, Laguerre, Hermite };

inline const char* case_tag(ClassicalFamily f) {
    switch (f) {
        case ClassicalFamily::Bessel: return "A-Bessel";
        case ClassicalFamily::Jacobi: return "A-Jacobi";
        case ClassicalFamily::Laguerre: return "B-Laguerre";
        default: return "C-Hermite";
    }
}

/// Result of the affine reduction of a Pearson pair to one of the four
/// classical families. Parameters live in a quadratic extension when the
/// reduction involves sqrt(mu); admissible_up_to = -1 means the
/// admissibility condition is certified for every n by an exact
/// integrality test.
struct ClassificationReport {
    ClassicalFamily family = ClassicalFamily::Hermite;
    std::optional<Surd> alpha;
    std::optional<Surd> beta;
    Surd affine_A{Rat(1)};
    Rat affine_B{0};
    std::optional<Rat> d;   // case A intermediates
    std::optional<Rat> mu;
    long admissible_up_to = -1;
    std::vector<std::string> notes;
};

namespace detail {

// The solvers of this module treat J as the three-term operator
// a_0 I + a_1 D + (a_2/2) D^2; any declared coefficient beyond nu = 2 must
// vanish on the horizon.
template <FieldScalar K>
void require_three_term(const OperatorJ<K>& J) {
    require_canonical(J, "classification");
    for (int nu = 3; nu <= J.truncation_order(); ++nu)
        if (!J.coeff(nu).is_zero())
            throw Error(errc::bad_parameter, "expected a_nu = 0 for nu >= 3",
                        static_cast<long>(nu));
}

// 2 a_1^[1] + a_2^[2] n != 0 for every n >= 0, decided exactly: when
// a_2^[2] != 0 this fails iff -2 a_1^[1]/a_2^[2] is a nonnegative integer.
inline void require_admissible(const Rat& a11, const Rat& a22) {
    if (a22.is_zero()) return;  // reduces to 2 a_1^[1] != 0, true by construction
    Rat r = Rat(-2) * a11 / a22;
    if (r.is_nonnegative_integer())
        throw Error(errc::inadmissible_pair, "2 a_1^[1] + a_2^[2] n vanishes",
                    r.as_long().value_or(0));
}

}  // namespace detail

/// Pearson pair of the fixed-point problem for an isomorphism-type
/// three-term J: phi = a_2, psi = -2 a_1, beta_0 = -a_0^[1]/a_1^[1].
inline std::pair<PearsonPair<Rat>, Rat> pearson_from_k0(const RatOperator& J) {
    detail::require_three_term(J);
    if (J.truncation_order() < 2)
        throw Error(errc::horizon_exceeded, "need the coefficients a_0, a_1, a_2", 2);
    const Rat a11 = J.coeff_entry(1, 1);
    if (a11.is_zero())
        throw Error(errc::no_classical_solution,
                    "a_1^[1] = 0 leaves psi constant; no classical solution");
    const Rat a22 = J.coeff_entry(2, 2);
    detail::require_admissible(a11, a22);
    PearsonPair<Rat> p{J.coeff(2), Rat(-2) * J.coeff(1)};
    Rat beta0 = -J.coeff_entry(1, 0) / a11;
    return {std::move(p), std::move(beta0)};
}

/// Moments of the form annihilated by D(phi u) + psi u, normalized to
/// (u)_0 = 1 and computed by the exact recursion
///   (psi_1 - n phi_2)(u)_{n+1} = (n phi_1 - psi_0)(u)_n + n phi_0 (u)_{n-1}.
template <FieldScalar K>
MomentFunctional<K> moments_from_pearson(const PearsonPair<K>& p, int M) {
    if (M < 0) throw Error(errc::bad_parameter, "negative moment horizon");
    const K f0 = p.phi.coeff(0), f1 = p.phi.coeff(1), f2 = p.phi.coeff(2);
    const K s0 = p.psi.coeff(0), s1 = p.psi.coeff(1);
    std::vector<K> m;
    m.reserve(static_cast<std::size_t>(M) + 1);
    m.push_back(K(1));
    for (int n = 0; n < M; ++n) {
        K denom = s1 - K(n) * f2;
        if (denom == K(0))
            throw Error(errc::inadmissible_pair, "moment recursion pivot vanishes",
                        static_cast<long>(n));
        K v = (K(n) * f1 - s0) * m[static_cast<std::size_t>(n)];
        if (n >= 1) v = v + K(n) * f0 * m[static_cast<std::size_t>(n - 1)];
        m.push_back(v / denom);
    }
    return MomentFunctional<K>(std::move(m));
}

/// Moment-wise verification of D(phi u) + psi u = 0 on the computable horizon.
template <FieldScalar K>
bool pearson_verify(const PearsonPair<K>& p, const MomentFunctional<K>& u) {
    MomentFunctional<K> v = derive(left_mul(p.phi, u)) + left_mul(p.psi, u);
    return v.vanishes();
}

/// Affine reduction of a Pearson pair (phi = a_2, psi = -2 a_1) to its
/// classical family. Case selection: deg phi = 2 splits on mu (Bessel when
/// the shifted phi is a perfect square, Jacobi otherwise), deg phi = 1 is
/// Laguerre, deg phi = 0 is Hermite. All formulas are ratios of the
/// a-coefficients, so the report is invariant under scaling the pair.
inline ClassificationReport classify_affine(const PearsonPair<Rat>& p, const Rat& beta0) {
    if (p.phi.is_zero())
        throw Error(errc::no_classical_solution, "phi = 0 admits no regular form");
    const Rat a22 = p.phi.coeff(2), a12 = p.phi.coeff(1), a02 = p.phi.coeff(0);
    const Rat a11 = -p.psi.coeff(1) / Rat(2), a01 = -p.psi.coeff(0) / Rat(2);
    if (a11.is_zero())
        throw Error(errc::no_classical_solution, "psi must have degree one");
    detail::require_admissible(a11, a22);

    ClassificationReport rep;
    if (!a22.is_zero()) {
        const Rat d = -a12 / (Rat(2) * a22);
        const Rat mu = -a02 / a22 + (a12 / (Rat(2) * a22)) * (a12 / (Rat(2) * a22));
        rep.d = d;
        rep.mu = mu;
        const Rat r = a11 / a22;
        if (mu.is_zero()) {
            rep.family = ClassicalFamily::Bessel;
            rep.alpha = Surd(r);
            rep.affine_A = Surd(Rat(1));
            rep.affine_B = d;
        } else {
            rep.family = ClassicalFamily::Jacobi;
            const Surd root = Surd::sqrt(mu);
            const Surd off(d + a01 / a11);
            rep.alpha = Surd(r) * (root - off) - Surd(Rat(1));
            rep.beta = Surd(r) * (root + off) - Surd(Rat(1));
            rep.affine_A = root;
            rep.affine_B = d;
            if (mu.sign() < 0)
                rep.notes.push_back("mu < 0: affine dilation and parameters are formal surds");
        }
    } else if (!a12.is_zero()) {
        rep.family = ClassicalFamily::Laguerre;
        rep.alpha = Surd(Rat(-1) + (Rat(2) / a12) * (a01 - a02 * a11 / a12));
        rep.affine_A = Surd(-a12 / (Rat(2) * a11));
        rep.affine_B = -a02 / a12;
    } else {
        rep.family = ClassicalFamily::Hermite;
        rep.affine_A = Surd::sqrt(-a02 / a11);
        rep.affine_B = beta0;
        if ((-a02 / a11).sign() < 0)
            rep.notes.push_back("negative radicand: affine dilation is a formal surd");
    }
    return rep;
}

/// Monic orthogonal sequence of a moment functional up to degree N by exact
/// triangular orthogonalization; requires moments through 2N. A vanishing
/// square norm <u, P_n^2> means the form is not regular at that index.
template <FieldScalar K>
Mps<K> mops_from_moments(const MomentFunctional<K>& u, int N) {
    if (u.horizon() < 2 * N)
        throw Error(errc::horizon_exceeded, "need moments through 2N",
                    static_cast<long>(2 * N));
    std::vector<Poly<K>> p;
    std::vector<K> sq;  // <u, P_n^2>
    p.reserve(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        Poly<K> pn = Poly<K>::monomial(n);
        for (int j = 0; j < n; ++j) {
            K c = pairing(u, Poly<K>::monomial(n) * p[static_cast<std::size_t>(j)])
                  / sq[static_cast<std::size_t>(j)];
            pn -= c * p[static_cast<std::size_t>(j)];
        }
        K norm = pairing(u, pn * pn);
        if (norm == K(0))
            throw Error(errc::not_regular, "<u, P_n^2> vanishes", static_cast<long>(n));
        p.push_back(std::move(pn));
        sq.push_back(std::move(norm));
    }
    OrthogonalCoeffs<K> s;
    for (int n = 0; n < N; ++n)
        s.betas.push_back(pairing(u, Poly<K>::var() * p[static_cast<std::size_t>(n)]
                                          * p[static_cast<std::size_t>(n)])
                          / sq[static_cast<std::size_t>(n)]);
    for (int n = 1; n <= N; ++n)
        s.gammas.push_back(sq[static_cast<std::size_t>(n)] / sq[static_cast<std::size_t>(n - 1)]);
    return Mps<K>(StructureCoeffs<K>(std::move(s)), std::move(p));
}

struct SolveK0Result {
    ClassificationReport report;
    Mps<Rat> mops;
    std::vector<Rat> lambdas;  // lambdas[n] = lambda_n^[0]
    PearsonPair<Rat> pearson;
    Rat beta0;
    MomentFunctional<Rat> moments;
};

/// Full isomorphism-type pipeline: Pearson pair, moment recursion, exact
/// MOPS reconstruction, eigenrelation verification J(P_n) = lambda_n P_n
/// with lambda_n = a_0^[0] + n a_1^[1] + n(n-1)/2 a_2^[2], and the affine
/// classification report. lambda_n is allowed to vanish (J need not be an
/// isomorphism on the horizon); the report notes the first vanishing index.
inline SolveK0Result solve_k0(const RatOperator& J, int N) {
    if (N < 1) throw Error(errc::bad_parameter, "horizon must be >= 1");
    if (J.truncation_order() < N)
        throw Error(errc::horizon_exceeded, "operator horizon below requested N",
                    static_cast<long>(N));
    auto [pear, beta0] = pearson_from_k0(J);
    MomentFunctional<Rat> u = moments_from_pearson(pear, 2 * N + 2);
    Mps<Rat> mops = mops_from_moments(u, N);

    const Rat a00 = J.coeff_entry(0, 0), a11 = J.coeff_entry(1, 1), a22 = J.coeff_entry(2, 2);
    std::vector<Rat> lambdas;
    lambdas.reserve(static_cast<std::size_t>(N) + 1);
    std::optional<long> first_zero;
    for (int n = 0; n <= N; ++n) {
        Rat l = a00 + Rat(n) * a11 + Rat(static_cast<long>(n) * (n - 1), 2) * a22;
        if (l.is_zero() && !first_zero) first_zero = n;
        lambdas.push_back(std::move(l));
    }
    for (int n = 0; n <= N; ++n)
        if (apply(J, mops.poly(n)) != lambdas[static_cast<std::size_t>(n)] * mops.poly(n))
            throw Error(errc::self_test_failure, "eigenrelation J(P_n) = lambda_n P_n failed",
                        static_cast<long>(n));

    ClassificationReport rep = classify_affine(pear, beta0);
    if (first_zero)
        rep.notes.push_back("lambda_" + std::to_string(*first_zero)
                            + " = 0: J is not an isomorphism; eigenrelation form only");
    rep.notes.push_back("regularity checked constructively up to n = " + std::to_string(N));
    return SolveK0Result{std::move(rep), std::move(mops), std::move(lambdas),
                         std::move(pear), beta0, std::move(u)};
}

/// Solution family for the lowering-order solvers.
struct FamilySolution {
    ClassicalFamily family = ClassicalFamily::Hermite;
    std::optional<Rat> alpha;
    Rat affine_A{1};
    Rat affine_B{0};
    std::string freedom;
};

struct SolveFamilyResult {
    FamilySolution solution;
    Mps<Rat> mps;
    std::vector<Rat> lambdas;  // lambdas[n] = lambda_{n+k}^[k]
};

/// Lowering order one: the orthogonal fixed points form a Laguerre family
/// with alpha = 2 a_0^[1]/a_1^[2] - 1 when deg a_2 = 1, the Hermite Appell
/// family when a_2 = 0, and nothing otherwise. The dilation A cancels in the
/// eigenrelation, so a representative with A = 1 is returned and the freedom
/// is recorded.
inline SolveFamilyResult solve_k1(const RatOperator& J, int N) {
    if (N < 1) throw Error(errc::bad_parameter, "horizon must be >= 1");
    detail::require_three_term(J);
    LoweringProfile<Rat> prof = lowering_order(J);
    if (prof.order != 1)
        throw Error(errc::not_lowering, "lowering order is not one",
                    static_cast<long>(prof.order));
    if (J.truncation_order() < N + 1)
        throw Error(errc::horizon_exceeded, "operator horizon below N + 1",
                    static_cast<long>(N + 1));

    const Rat a01 = J.coeff_entry(1, 0);
    const Rat a12 = J.coeff_entry(2, 1);
    const Rat a02 = J.coeff_entry(2, 0);

    FamilySolution sol;
    OrthogonalCoeffs<Rat> s;
    if (!a12.is_zero()) {
        Rat alpha = Rat(2) * a01 / a12 - Rat(1);
        Rat B = -a02 / a12;
        sol.family = ClassicalFamily::Laguerre;
        sol.alpha = alpha;
        sol.affine_B = B;
        sol.freedom = "dilation A is free; representative uses A = 1";
        for (int n = 0; n <= N; ++n) s.betas.push_back(Rat(2 * n) + alpha + Rat(1) + B);
        for (int n = 0; n < N; ++n) s.gammas.push_back(Rat(n + 1) * (Rat(n + 1) + alpha));
    } else if (a02.is_zero()) {
        sol.family = ClassicalFamily::Hermite;
        sol.freedom = "affine pair (A, B) is free; representative uses A = 1, B = 0";
        for (int n = 0; n <= N; ++n) s.betas.push_back(Rat(0));
        for (int n = 0; n < N; ++n) s.gammas.push_back(Rat(n + 1, 2));
    } else {
        throw Error(errc::no_solution,
                    "deg psi = 0 forces psi = 0 and a_2 = 0; no orthogonal fixed point");
    }

    Mps<Rat> mps = generate(StructureCoeffs<Rat>(std::move(s)), N + 1);
    FixedPointReport fp = fixed_point_check(mps, J);
    if (!fp.fixed_point())
        throw Error(errc::self_test_failure, "representative fails the fixed-point check");

    std::vector<Rat> lambdas;
    lambdas.reserve(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) lambdas.push_back(prof.lambda(n + 1));
    return SolveFamilyResult{std::move(sol), std::move(mps), std::move(lambdas)};
}

/// Lowering order two: the fixed point is the Hermite family (the single
/// Appell MOPS), verified through P''_{n+2} = (n+1)(n+2) P_n.
inline SolveFamilyResult solve_k2(const RatOperator& J, int N) {
    if (N < 0) throw Error(errc::bad_parameter, "negative horizon");
    detail::require_three_term(J);
    LoweringProfile<Rat> prof = lowering_order(J);
    if (prof.order != 2)
        throw Error(errc::not_lowering, "lowering order is not two",
                    static_cast<long>(prof.order));
    if (J.truncation_order() < N + 2)
        throw Error(errc::horizon_exceeded, "operator horizon below N + 2",
                    static_cast<long>(N + 2));

    FamilySolution sol;
    sol.family = ClassicalFamily::Hermite;
    sol.freedom = "affine pair (A, B) is free; representative uses A = 1, B = 0";
    OrthogonalCoeffs<Rat> s;
    for (int n = 0; n <= N + 1; ++n) s.betas.push_back(Rat(0));
    for (int n = 0; n <= N; ++n) s.gammas.push_back(Rat(n + 1, 2));
    Mps<Rat> mps = generate(StructureCoeffs<Rat>(std::move(s)), N + 2);

    for (int n = 0; n <= N; ++n)
        if (derive(mps.poly(n + 2), 2) != Rat(static_cast<long>(n + 1) * (n + 2)) * mps.poly(n))
            throw Error(errc::self_test_failure, "P''_{n+2} = (n+1)(n+2) P_n failed",
                        static_cast<long>(n));
    FixedPointReport fp = fixed_point_check(mps, J);
    if (!fp.fixed_point())
        throw Error(errc::self_test_failure, "representative fails the fixed-point check");

    std::vector<Rat> lambdas;
    lambdas.reserve(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) lambdas.push_back(prof.lambda(n + 2));
    return SolveFamilyResult{std::move(sol), std::move(mps), std::move(lambdas)};
}

}  // namespace lowerop

#endif
