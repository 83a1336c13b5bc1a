#ifndef LOWEROP_TWOORTHO_HPP
#define LOWEROP_TWOORTHO_HPP

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "lowerop/errors.hpp"
#include "lowerop/functional.hpp"
#include "lowerop/mps.hpp"
#include "lowerop/operator_j.hpp"
#include "lowerop/poly.hpp"

namespace lowerop {

/// A two-orthogonal monic sequence: four-term recurrence data, the generated
/// polynomials, and the change-of-basis dual table.
template <FieldScalar K>
struct TwoOrthoData {
    TwoOrthoCoeffs<K> structure;
    Mps<K> mps;
    DualTable<K> duals;
};

template <FieldScalar K>
TwoOrthoData<K> make_twoortho(TwoOrthoCoeffs<K> s, int N) {
    detail::check_gammas_nonzero(s.gammas, s.gammas.size());
    Mps<K> m = generate(StructureCoeffs<K>(s), N);
    DualTable<K> d = dual_table(m);
    return TwoOrthoData<K>{std::move(s), std::move(m), std::move(d)};
}

/// The six polynomials expressing u_2, u_3, u_4 through the pair (u_0, u_1):
///   u_2 = E1 u_0 + A0 u_1,  u_3 = B1 u_0 + F1 u_1,  u_4 = E2 u_0 + A1 u_1.
template <FieldScalar K>
struct DualPairExpressions {
    Poly<K> E1, A0, B1, F1, E2, A1;
};

template <FieldScalar K>
DualPairExpressions<K> to_dual_expressions(const TwoOrthoData<K>& t) {
    const auto& s = t.structure;
    if (s.betas.size() < 3 || s.alphas.size() < 3 || s.gammas.size() < 3)
        throw Error(errc::need_more_coeffs,
                    "dual-pair expressions need beta_0..2, alpha_1..3, gamma_1..3");
    const K &b0 = s.betas[0], &b1 = s.betas[1], &b2 = s.betas[2];
    const K &al1 = s.alphas[0], &al2 = s.alphas[1], &al3 = s.alphas[2];
    const K &g1 = s.gammas[0], &g2 = s.gammas[1], &g3 = s.gammas[2];
    const Poly<K> x = Poly<K>::var();

    DualPairExpressions<K> e;
    e.E1 = (x - Poly<K>(b0)) / g1;
    e.A0 = Poly<K>(-al1 / g1);
    e.B1 = Poly<K>(-al2 / (g1 * g2)) * (x - Poly<K>(b0)) - Poly<K>(K(1) / g2);
    e.F1 = (x - Poly<K>(b1) + Poly<K>(al2 * al1 / g1)) / g2;
    e.E2 = ((x - Poly<K>(b2)) * e.E1 - al3 * e.B1) / g3;
    e.A1 = -(al3 * e.F1 + Poly<K>(K(1)) + (al1 / g1) * (x - Poly<K>(b2))) / g3;
    return e;
}

namespace detail {

// Moment-wise equality on the shared horizon.
template <FieldScalar K>
bool agree(const MomentFunctional<K>& a, const MomentFunctional<K>& b) {
    const int h = std::min(a.horizon(), b.horizon());
    for (int i = 0; i <= h; ++i)
        if (!(a.moment(i) == b.moment(i))) return false;
    return true;
}

}  // namespace detail

/// Verifies x u_n = u_{n-1} + beta_n u_n + alpha_{n+1} u_{n+1} + gamma_{n+1} u_{n+2}
/// on the dual rows, for every n the table horizon supports.
template <FieldScalar K>
bool dual_recurrence_check(const TwoOrthoData<K>& t) {
    const auto& s = t.structure;
    const int N = t.duals.horizon();
    const Poly<K> x = Poly<K>::var();
    for (int n = 0; n + 2 <= N; ++n) {
        if (n >= static_cast<int>(s.betas.size()) || n >= static_cast<int>(s.alphas.size())
            || n >= static_cast<int>(s.gammas.size()))
            break;
        MomentFunctional<K> lhs = left_mul(x, t.duals.dual_row(n));
        MomentFunctional<K> rhs = s.betas[static_cast<std::size_t>(n)] * t.duals.dual_row(n)
                                  + s.alphas[static_cast<std::size_t>(n)] * t.duals.dual_row(n + 1)
                                  + s.gammas[static_cast<std::size_t>(n)] * t.duals.dual_row(n + 2);
        if (n >= 1) rhs = rhs + t.duals.dual_row(n - 1);
        if (!detail::agree(lhs, rhs)) return false;
    }
    return true;
}

/// Verifies the three dual-pair identities as moment identities.
template <FieldScalar K>
bool dual_pair_expressions_check(const TwoOrthoData<K>& t) {
    if (t.duals.horizon() < 4)
        throw Error(errc::horizon_exceeded, "need dual rows through u_4", 4);
    DualPairExpressions<K> e = to_dual_expressions(t);
    const MomentFunctional<K> u0 = t.duals.dual_row(0), u1 = t.duals.dual_row(1);
    auto combo = [&](const Poly<K>& pu0, const Poly<K>& pu1) {
        return left_mul(pu0, u0) + left_mul(pu1, u1);
    };
    return detail::agree(t.duals.dual_row(2), combo(e.E1, e.A0))
           && detail::agree(t.duals.dual_row(3), combo(e.B1, e.F1))
           && detail::agree(t.duals.dual_row(4), combo(e.E2, e.A1));
}

/// Matrix Pearson pair of the vectorial relation D(Phi U) + Psi U = 0 for
/// U = (u_0, u_1)^T.
template <FieldScalar K>
struct MatrixPearson {
    std::array<std::array<Poly<K>, 2>, 2> phi;
    std::array<std::array<Poly<K>, 2>, 2> psi;
};

namespace detail {

// The two-orthogonal fixed-point statement needs J = a_0^[1] D + (a_2/2) D^2
// with a_2 affine: a lowering operator of order one among three-term
// expansions.
template <FieldScalar K>
LoweringProfile<K> require_lowering_one_three_term(const OperatorJ<K>& J) {
    require_canonical(J, "the two-orthogonal fixed-point machinery");
    for (int nu = 3; nu <= J.truncation_order(); ++nu)
        if (!J.coeff(nu).is_zero())
            throw Error(errc::not_lowering, "expected a_nu = 0 for nu >= 3",
                        static_cast<long>(nu));
    LoweringProfile<K> prof = lowering_order(J);
    if (prof.order != 1)
        throw Error(errc::not_lowering, "lowering order is not one",
                    static_cast<long>(prof.order));
    return prof;
}

}  // namespace detail

/// Builds Phi and Psi from the structure coefficients and the lambda ratios
/// of J. Degree bounds deg phi_11 <= 1, deg phi_12 <= 1, deg phi_21 <= 2,
/// deg phi_22 <= 1 are asserted.
template <FieldScalar K>
MatrixPearson<K> build_matrix_pearson(const TwoOrthoData<K>& t, const OperatorJ<K>& J) {
    LoweringProfile<K> prof = detail::require_lowering_one_three_term(J);
    if (prof.horizon < 4)
        throw Error(errc::horizon_exceeded, "need lambda_1..lambda_4", 4);
    DualPairExpressions<K> e = to_dual_expressions(t);
    const auto& s = t.structure;
    const K &b0 = s.betas[0], &b1 = s.betas[1];
    const K &al1 = s.alphas[0], &al2 = s.alphas[1];
    const K &g1 = s.gammas[0], &g2 = s.gammas[1];
    const K &l1 = prof.lambda(1), &l2 = prof.lambda(2), &l3 = prof.lambda(3),
            &l4 = prof.lambda(4);
    const Poly<K> x = Poly<K>::var();
    const K half = K(1) / K(2);

    MatrixPearson<K> mp;
    mp.phi[0][0] = Poly<K>(half) - (al1 * l2 / (K(2) * l1)) * e.E1
                   - (g1 * l3 / (K(2) * l1)) * e.B1;
    mp.phi[0][1] = half * (x - Poly<K>(b0)) - (al1 * l2 / (K(2) * l1)) * e.A0
                   - (g1 * l3 / (K(2) * l1)) * e.F1;
    mp.phi[1][0] = (x - Poly<K>(b1)) * e.E1 - (al2 * l3 / l2) * e.B1 - (g2 * l4 / l2) * e.E2;
    mp.phi[1][1] = (x - Poly<K>(b1)) * e.A0 - (al2 * l3 / l2) * e.F1 - (g2 * l4 / l2) * e.A1;

    mp.psi[0][0] = Poly<K>();
    mp.psi[0][1] = Poly<K>(K(1));
    mp.psi[1][0] = (K(2) / g1) * (x - Poly<K>(b0));
    mp.psi[1][1] = Poly<K>(K(-2) * al1 / g1);

    const int bounds[2][2] = {{1, 1}, {2, 1}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (mp.phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].degree()
                > bounds[i][j])
                throw Error(errc::self_test_failure, "matrix Pearson degree bound violated");
    return mp;
}

/// Checks D(Phi U) + Psi U = 0 componentwise on all computable moments.
/// Precondition: the sequence is a fixed point of its normalized J-image
/// (polynomial side), otherwise NotAFixedPoint.
template <FieldScalar K>
bool verify_matrix_pearson(const TwoOrthoData<K>& t, const MatrixPearson<K>& mp,
                           const OperatorJ<K>& J) {
    LoweringProfile<K> prof = detail::require_lowering_one_three_term(J);
    if (J.truncation_order() < t.mps.horizon())
        throw Error(errc::horizon_exceeded, "operator horizon below sequence horizon",
                    static_cast<long>(t.mps.horizon()));
    for (int n = 0; n + 1 <= t.mps.horizon(); ++n)
        if (apply(J, t.mps.poly(n + 1)) != prof.lambda(n + 1) * t.mps.poly(n))
            throw Error(errc::not_a_fixed_point,
                        "J(P_{n+1}) = lambda_{n+1} P_n fails", static_cast<long>(n));
    const MomentFunctional<K> u[2] = {t.duals.dual_row(0), t.duals.dual_row(1)};
    for (std::size_t i = 0; i < 2; ++i) {
        MomentFunctional<K> row =
            derive(left_mul(mp.phi[i][0], u[0]) + left_mul(mp.phi[i][1], u[1]));
        for (std::size_t j = 0; j < 2; ++j) {
            if (mp.psi[i][j].is_zero()) continue;
            row = row + left_mul(mp.psi[i][j], u[j]);
        }
        if (!row.vanishes()) return false;
    }
    return true;
}

/// Free seeds of the sequential fixed-point solve.
template <FieldScalar K>
struct AppellSeeds {
    K beta0{0};
    K alpha1{1};
    K gamma1{1};
};

/// Constructs a two-orthogonal sequence with J(P_{n+1}) = lambda_{n+1} P_n by
/// solving the structure coefficients degree by degree (exact linear solves).
/// beta_0, alpha_1, gamma_1 are free and supplied as seeds; the solve fails
/// with NoFixedPointSequence if some degree admits no solution.
template <FieldScalar K>
TwoOrthoData<K> find_appell_2ortho(const OperatorJ<K>& J, int N, AppellSeeds<K> seeds = {}) {
    LoweringProfile<K> prof = detail::require_lowering_one_three_term(J);
    if (N < 3) throw Error(errc::bad_parameter, "need N >= 3 for a four-term recurrence");
    if (J.truncation_order() < N)
        throw Error(errc::horizon_exceeded, "operator horizon below N", static_cast<long>(N));
    if (seeds.gamma1 == K(0))
        throw Error(errc::bad_parameter, "seed gamma_1 must be nonzero");

    const Poly<K> x = Poly<K>::var();
    std::vector<Poly<K>> p;
    p.push_back(Poly<K>(K(1)));
    p.push_back(x - Poly<K>(seeds.beta0));
    TwoOrthoCoeffs<K> s;
    s.betas.push_back(seeds.beta0);
    s.alphas.push_back(seeds.alpha1);
    s.gammas.push_back(seeds.gamma1);

    // P_2 = (x - beta_1) P_1 - alpha_1: one unknown, one constant equation.
    {
        Poly<K> base = x * p[1] - Poly<K>(seeds.alpha1);
        Poly<K> r = apply(J, base) - prof.lambda(2) * p[1];
        std::vector<K> c = detail::expand_in_basis(r, std::span<const Poly<K>>(p));
        c.resize(2, K(0));
        if (!(c[1] == K(0)))
            throw Error(errc::no_fixed_point_sequence, "inconsistent system at degree 2", 2);
        K beta1 = c[0] / prof.lambda(1);
        s.betas.push_back(beta1);
        p.push_back(base - beta1 * p[1]);
    }

    // P_m = (x - beta_{m-1}) P_{m-1} - alpha_{m-1} P_{m-2} - gamma_{m-2} P_{m-3}.
    // With J(P_i) = lambda_i P_{i-1} known for i < m, the requirement
    // J(P_m) = lambda_m P_{m-1} pins the three new coefficients and forces
    // every lower component of the residual to vanish.
    for (int m = 3; m <= N; ++m) {
        Poly<K> base = x * p[static_cast<std::size_t>(m - 1)];
        Poly<K> r = apply(J, base) - prof.lambda(m) * p[static_cast<std::size_t>(m - 1)];
        std::vector<K> c =
            detail::expand_in_basis(r, std::span<const Poly<K>>(p).subspan(0, p.size()));
        c.resize(static_cast<std::size_t>(m - 1), K(0));
        K beta = c[static_cast<std::size_t>(m - 2)] / prof.lambda(m - 1);
        K alpha = (m - 2 >= 1) ? c[static_cast<std::size_t>(m - 3)] / prof.lambda(m - 2) : K(0);
        K gamma;
        if (m == 3) {
            gamma = s.gammas[0];  // seed; lambda_0 = 0 leaves it free
        } else {
            gamma = c[static_cast<std::size_t>(m - 4)] / prof.lambda(m - 3);
            for (int j = 0; j <= m - 5; ++j)
                if (!(c[static_cast<std::size_t>(j)] == K(0)))
                    throw Error(errc::no_fixed_point_sequence,
                                "inconsistent system", static_cast<long>(m));
            if (gamma == K(0))
                throw Error(errc::not_regular, "solved gamma vanishes",
                            static_cast<long>(m - 2));
            s.gammas.push_back(gamma);
        }
        s.betas.push_back(beta);
        s.alphas.push_back(alpha);
        p.push_back(base - beta * p[static_cast<std::size_t>(m - 1)]
                    - alpha * p[static_cast<std::size_t>(m - 2)]
                    - gamma * p[static_cast<std::size_t>(m - 3)]);
    }

    Mps<K> mps(StructureCoeffs<K>(s), std::move(p));
    DualTable<K> duals = dual_table(mps);
    return TwoOrthoData<K>{std::move(s), std::move(mps), std::move(duals)};
}

}  // namespace lowerop

#endif
