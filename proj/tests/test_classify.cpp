#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace lowerop;
using testutil::Rng;
using testutil::error_code_of;
using testutil::error_index_of;
using testutil::hermite_ode;
using testutil::laguerre_ode;
using testutil::three_term;

namespace {

RatPoly P(std::vector<Rat> c) { return RatPoly(std::move(c)); }

// Jacobi-type three-term operator for parameters (al, be):
// a_2 = 2(x^2 - 1), a_1 = (al + be + 2) x - (al - be).
RatOperator jacobi_ode(const Rat& al, const Rat& be, int N) {
    return three_term(RatPoly(),
                      P({-(al - be), al + be + Rat(2)}),
                      P({Rat(-2), Rat(0), Rat(2)}), N);
}

MomentFunctional<Surd> to_surd_functional(const RatFunctional& u) {
    std::vector<Surd> m;
    for (int n = 0; n <= u.horizon(); ++n) m.emplace_back(u.moment(n));
    return MomentFunctional<Surd>(std::move(m));
}

template <FieldScalar K>
K ipow(const K& a, int e) {
    K r(1);
    for (int i = 0; i < (e < 0 ? -e : e); ++i) r = r * a;
    return e >= 0 ? r : K(1) / r;
}

// phi~ = A^{-t} phi(Ax+B), psi~ = A^{1-t} psi(Ax+B), t = deg phi.
template <FieldScalar K>
PearsonPair<K> transport_pair(const PearsonPair<K>& p, const K& A, const K& B) {
    const int t = p.phi.degree();
    return PearsonPair<K>{ipow(A, -t) * affine_sub(p.phi, A, B),
                          ipow(A, 1 - t) * affine_sub(p.psi, A, B)};
}

}  // namespace

TEST_CASE("Pearson pair from an isomorphism-type operator") {
    const Rat alpha(2);
    auto [p, beta0] = pearson_from_k0(laguerre_ode(alpha, 4));
    CHECK(p.phi == RatPoly::monomial(1, Rat(2)));
    CHECK(p.psi == P({Rat(-2) * (alpha + Rat(1)), Rat(2)}));
    CHECK(beta0 == alpha + Rat(1));

    auto [ph, beta0h] = pearson_from_k0(hermite_ode(4));
    CHECK(ph.phi == RatPoly(Rat(2)));
    CHECK(ph.psi == RatPoly::monomial(1, Rat(4)));
    CHECK(beta0h == Rat(0));

    CHECK(error_code_of([] { pearson_from_k0(make_identity<Rat>(4)); })
          == errc::no_classical_solution);
    // a_1^[1] = -1, a_2^[2] = 1 makes 2 a_1^[1] + n a_2^[2] vanish at n = 2
    CHECK(error_index_of([] {
              pearson_from_k0(three_term(RatPoly(), P({Rat(0), Rat(-1)}),
                                         RatPoly::monomial(2), 4));
          }) == 2);
}

TEST_CASE("moment recursion") {
    PearsonPair<Rat> hermite{RatPoly(Rat(1)), RatPoly::monomial(1, Rat(2))};
    RatFunctional u = moments_from_pearson(hermite, 4);
    CHECK(u.moments() == std::vector<Rat>{Rat(1), Rat(0), Rat(1, 2), Rat(0), Rat(3, 4)});

    PearsonPair<Rat> laguerre{RatPoly::var(), P({Rat(-3), Rat(1)})};  // alpha = 2
    RatFunctional v = moments_from_pearson(laguerre, 2);
    CHECK(v.moment(0) == Rat(1));
    CHECK(v.moment(1) == Rat(3));
    CHECK(v.moment(2) == Rat(12));

    Rng rng(41);
    for (int i = 0; i < 5; ++i) {
        PearsonPair<Rat> p{rng.poly(2), P({rng.rat(), rng.nonzero_rat()})};
        CHECK(moments_from_pearson(p, 3).moment(0) == Rat(1));
    }

    // pivot psi_1 - n phi_2 vanishes at n = 2 for phi = x^2, psi = 2x
    PearsonPair<Rat> bad{RatPoly::monomial(2), RatPoly::monomial(1, Rat(2))};
    CHECK(error_code_of([&] { moments_from_pearson(bad, 5); }) == errc::inadmissible_pair);
    CHECK(error_index_of([&] { moments_from_pearson(bad, 5); }) == 2);
}

TEST_CASE("affine classification: Laguerre") {
    const Rat alpha(2);
    auto [p, beta0] = pearson_from_k0(laguerre_ode(alpha, 4));
    ClassificationReport rep = classify_affine(p, beta0);
    CHECK(rep.family == ClassicalFamily::Laguerre);
    CHECK(rep.alpha == Surd(alpha));
    CHECK(rep.affine_A == Surd(Rat(1)));
    CHECK(rep.affine_B == Rat(0));
}

TEST_CASE("affine classification: Hermite") {
    auto [p, beta0] = pearson_from_k0(hermite_ode(4));
    ClassificationReport rep = classify_affine(p, beta0);
    CHECK(rep.family == ClassicalFamily::Hermite);
    CHECK(rep.affine_A == Surd(Rat(1)));
    CHECK(rep.affine_B == Rat(0));
    // non-square ratio leaves a surd dilation: a_2 = 4, a_1 = -2x
    auto [p2, b2] = pearson_from_k0(
        three_term(RatPoly(), RatPoly::monomial(1, Rat(-2)), RatPoly(Rat(4)), 4));
    ClassificationReport rep2 = classify_affine(p2, b2);
    CHECK(rep2.affine_A == Surd::sqrt(Rat(2)));
}

TEST_CASE("affine classification: Jacobi parameters recovered") {
    const Rat al(1, 2), be(3, 2);
    auto [p, beta0] = pearson_from_k0(jacobi_ode(al, be, 4));
    ClassificationReport rep = classify_affine(p, beta0);
    CHECK(rep.family == ClassicalFamily::Jacobi);
    CHECK(rep.mu == Rat(1));
    CHECK(rep.d == Rat(0));
    CHECK(rep.alpha == Surd(al));
    CHECK(rep.beta == Surd(be));
}

TEST_CASE("affine classification: Bessel exactly when mu vanishes") {
    // a_2 = (x - 1)^2 has mu = 0; a_1 = x/2
    RatOperator bessel = three_term(RatPoly(), RatPoly::monomial(1, Rat(1, 2)),
                                    P({Rat(1), Rat(-2), Rat(1)}), 4);
    auto [p, beta0] = pearson_from_k0(bessel);
    ClassificationReport rep = classify_affine(p, beta0);
    CHECK(rep.family == ClassicalFamily::Bessel);
    CHECK(rep.mu == Rat(0));
    CHECK(rep.alpha == Surd(Rat(1, 2)));
    CHECK(rep.affine_B == Rat(1));

    // a_2 = x^2 - 2x has mu = 1 != 0: Jacobi branch
    RatOperator notb = three_term(RatPoly(), RatPoly::monomial(1, Rat(1, 2)),
                                  P({Rat(0), Rat(-2), Rat(1)}), 4);
    auto [p2, b2] = pearson_from_k0(notb);
    CHECK(classify_affine(p2, b2).family == ClassicalFamily::Jacobi);

    // negative mu is formal but still classified
    RatOperator formal = three_term(RatPoly(), RatPoly::monomial(1, Rat(1, 2)),
                                    P({Rat(1), Rat(0), Rat(1)}), 4);
    auto [p3, b3] = pearson_from_k0(formal);
    ClassificationReport rep3 = classify_affine(p3, b3);
    CHECK(rep3.mu == Rat(-1));
    CHECK(rep3.affine_A.formal_nonreal());
}

TEST_CASE("classification is scale invariant") {
    Rng rng(42);
    auto [p, beta0] = pearson_from_k0(jacobi_ode(Rat(1, 2), Rat(3, 2), 4));
    ClassificationReport base = classify_affine(p, beta0);
    for (Rat c : {Rat(2), Rat(-3), Rat(1, 5)}) {
        PearsonPair<Rat> scaled{c * p.phi, c * p.psi};
        ClassificationReport rep = classify_affine(scaled, beta0);
        CHECK(rep.family == base.family);
        CHECK(rep.alpha == base.alpha);
        CHECK(rep.beta == base.beta);
        CHECK(rep.affine_A == base.affine_A);
        CHECK(rep.affine_B == base.affine_B);
    }
}

TEST_CASE("solve_k0 on the Laguerre operator") {
    for (Rat alpha : {Rat(1, 2), Rat(2), Rat(5, 3)}) {
        SolveK0Result r = solve_k0(laguerre_ode(alpha, 12), 10);
        CHECK(r.report.family == ClassicalFamily::Laguerre);
        CHECK(r.report.alpha == Surd(alpha));
        for (int n = 0; n <= 10; ++n) CHECK(r.lambdas[static_cast<std::size_t>(n)] == Rat(-n));
        const auto& s = std::get<OrthogonalCoeffs<Rat>>(r.mops.structure());
        Rat A = r.report.affine_A.as_rat().value();
        Rat B = r.report.affine_B;
        for (int n = 0; n < 10; ++n)
            CHECK((s.betas[static_cast<std::size_t>(n)] - B) / A == Rat(2 * n + 1) + alpha);
        for (int n = 0; n < 10; ++n)
            CHECK(s.gammas[static_cast<std::size_t>(n)] / (A * A)
                  == Rat(n + 1) * (Rat(n + 1) + alpha));
    }
}

TEST_CASE("solve_k0 on shifted and scaled Laguerre operators") {
    const Rat alpha(2);
    // a_2 = 2x - 2 shifts the family by B = 1
    RatOperator shifted = three_term(RatPoly(), P({alpha + Rat(2), Rat(-1)}),
                                     P({Rat(-2), Rat(2)}), 12);
    SolveK0Result r = solve_k0(shifted, 8);
    CHECK(r.report.family == ClassicalFamily::Laguerre);
    CHECK(r.report.alpha == Surd(alpha));
    CHECK(r.report.affine_B == Rat(1));
    const auto& s = std::get<OrthogonalCoeffs<Rat>>(r.mops.structure());
    Rat A = r.report.affine_A.as_rat().value();
    for (int n = 0; n < 8; ++n)
        CHECK((s.betas[static_cast<std::size_t>(n)] - r.report.affine_B) / A
              == Rat(2 * n + 1) + alpha);

    // conjugating by x -> 2x halves the reported dilation:
    // a_1 -> a_1(2x)/2, a_2 -> a_2(2x)/4
    RatOperator scaled = three_term(RatPoly(),
                                    P({(alpha + Rat(1)) / Rat(2), Rat(-1)}),
                                    RatPoly::monomial(1), 12);
    SolveK0Result r2 = solve_k0(scaled, 8);
    CHECK(r2.report.alpha == Surd(alpha));
    Rat A2 = r2.report.affine_A.as_rat().value();
    CHECK(A2 == Rat(1, 2));
    const auto& s2 = std::get<OrthogonalCoeffs<Rat>>(r2.mops.structure());
    for (int n = 0; n < 8; ++n) {
        CHECK((s2.betas[static_cast<std::size_t>(n)] - r2.report.affine_B) / A2
              == Rat(2 * n + 1) + alpha);
        CHECK(s2.gammas[static_cast<std::size_t>(n)] / (A2 * A2)
              == Rat(n + 1) * (Rat(n + 1) + alpha));
    }
}

TEST_CASE("solve_k0 on the Hermite operator") {
    SolveK0Result r = solve_k0(hermite_ode(12), 10);
    CHECK(r.report.family == ClassicalFamily::Hermite);
    CHECK(r.report.affine_A == Surd(Rat(1)));
    CHECK(r.report.affine_B == Rat(0));
    for (int n = 0; n <= 10; ++n)
        CHECK(r.lambdas[static_cast<std::size_t>(n)] == Rat(-2 * n));
    const auto& s = std::get<OrthogonalCoeffs<Rat>>(r.mops.structure());
    for (int n = 0; n < 10; ++n) {
        CHECK(s.betas[static_cast<std::size_t>(n)] == Rat(0));
        CHECK(s.gammas[static_cast<std::size_t>(n)] == Rat(n + 1, 2));
    }
}

TEST_CASE("solve_k0 on the Bessel and Jacobi operators") {
    RatOperator bessel = three_term(RatPoly(), RatPoly::monomial(1, Rat(1, 2)),
                                    P({Rat(1), Rat(-2), Rat(1)}), 12);
    SolveK0Result rb = solve_k0(bessel, 8);
    CHECK(rb.report.family == ClassicalFamily::Bessel);
    for (int n = 0; n <= 8; ++n)
        CHECK(rb.lambdas[static_cast<std::size_t>(n)] == Rat(static_cast<long>(n) * n, 2));

    SolveK0Result rj = solve_k0(jacobi_ode(Rat(1, 2), Rat(3, 2), 12), 8);
    CHECK(rj.report.family == ClassicalFamily::Jacobi);
    for (int n = 0; n <= 8; ++n)
        CHECK(rj.lambdas[static_cast<std::size_t>(n)] == Rat(static_cast<long>(n) * (n + 3)));
}

TEST_CASE("solve_k0 rejections") {
    CHECK(error_code_of([] { solve_k0(make_identity<Rat>(12), 5); })
          == errc::no_classical_solution);
    // four-term input is outside this solver's scope
    CHECK(error_code_of([] {
              std::vector<RatPoly> c(13);
              c[1] = RatPoly(Rat(1));
              c[3] = RatPoly(Rat(1));
              solve_k0(RatOperator::from_coeffs(std::move(c)), 5);
          }) == errc::bad_parameter);
}

TEST_CASE("solve_k1 reproduces the DxD family") {
    // 2D + DxD = 3D + xD^2: canonical coefficients via the image recurrence
    std::vector<RatPoly> images;
    for (int n = 0; n <= 12; ++n)
        images.push_back(n == 0 ? RatPoly()
                                : RatPoly::monomial(n - 1, Rat(static_cast<long>(n) * (n + 2))));
    RatOperator J = from_images(images);
    CHECK(J.coeff_entry(2, 0) == Rat(0));
    CHECK(J.coeff_entry(2, 1) == Rat(2));
    CHECK(J.coeff_entry(1, 0) == Rat(3));
    for (int nu = 3; nu <= 12; ++nu) CHECK(J.coeff(nu) == RatPoly());

    SolveFamilyResult r = solve_k1(J, 10);
    CHECK(r.solution.family == ClassicalFamily::Laguerre);
    CHECK(r.solution.alpha == Rat(2));
    CHECK(r.solution.affine_B == Rat(0));
    for (int n = 0; n <= 10; ++n)
        CHECK(r.lambdas[static_cast<std::size_t>(n)] == Rat(n + 1) * (Rat(2) + Rat(n + 1)));
    CHECK(apply(J, r.mps.poly(2)) == Rat(8) * P({Rat(-3), Rat(1)}));

    const auto& s = std::get<OrthogonalCoeffs<Rat>>(r.mps.structure());
    CHECK(s.betas[0] == Rat(3));
    CHECK(s.betas[1] == Rat(5));
    CHECK(s.gammas[0] == Rat(3));
    CHECK(s.gammas[1] == Rat(8));

    // fixed point on both sides of the duality
    FixedPointReport fp = fixed_point_check(r.mps, J);
    CHECK(fp.poly_side);
    CHECK(fp.dual_side);

    // relation chain of the representative
    const Rat a01 = J.coeff_entry(1, 0), a12 = J.coeff_entry(2, 1);
    const Rat g1 = s.gammas[0], g2 = s.gammas[1];
    CHECK(a12 == a01 * (g2 - Rat(2) * g1) / g1);
    const Rat A = g1 * a12 / ((s.betas[1] - s.betas[0]) * a01);
    CHECK(Rat(2) * A == s.betas[1] - s.betas[0]);
    CHECK((*r.solution.alpha + Rat(1)) * A * A == g1);
}

TEST_CASE("solve_k1 with a constant shift in a_2") {
    // a_1 = 3, a_2 = 2 + 2x: alpha = 2, B = -1
    RatOperator J = three_term(RatPoly(), RatPoly(Rat(3)), P({Rat(2), Rat(2)}), 12);
    SolveFamilyResult r = solve_k1(J, 8);
    CHECK(r.solution.alpha == Rat(2));
    CHECK(r.solution.affine_B == Rat(-1));
    const auto& s = std::get<OrthogonalCoeffs<Rat>>(r.mps.structure());
    CHECK(s.betas[0] == Rat(2));
    CHECK(fixed_point_check(r.mps, J).fixed_point());
}

TEST_CASE("solve_k1 Hermite branch for pure derivatives") {
    RatOperator J = three_term(RatPoly(), RatPoly(Rat(5)), RatPoly(), 12);
    SolveFamilyResult r = solve_k1(J, 8);
    CHECK(r.solution.family == ClassicalFamily::Hermite);
    CHECK_FALSE(r.solution.alpha.has_value());
    for (int n = 0; n <= 8; ++n)
        CHECK(r.lambdas[static_cast<std::size_t>(n)] == Rat(5 * (n + 1)));
    CHECK(fixed_point_check(r.mps, J).fixed_point());
    // P'_{n+1} = (n+1) P_n on the representative
    for (int n = 0; n + 1 <= r.mps.horizon(); ++n)
        CHECK(derive(r.mps.poly(n + 1)) == Rat(n + 1) * r.mps.poly(n));
}

TEST_CASE("solve_k1 rejects constant nonzero a_2") {
    RatOperator J = three_term(RatPoly(), RatPoly(Rat(1)), RatPoly(Rat(4)), 12);
    CHECK(error_code_of([&] { solve_k1(J, 6); }) == errc::no_solution);
}

TEST_CASE("alpha = -2 makes lambda_2 vanish") {
    // alpha = 2 a_0^[1]/a_1^[2] - 1 = -2 with a_0^[1] = -1, a_1^[2] = 2
    RatOperator J = three_term(RatPoly(), RatPoly(Rat(-1)), RatPoly::monomial(1, Rat(2)), 12);
    CHECK(error_code_of([&] { solve_k1(J, 6); }) == errc::not_lowering);
    CHECK(error_index_of([&] { solve_k1(J, 6); }) == 2);
}

TEST_CASE("solve_k2 yields the Hermite family") {
    RatOperator J = three_term(RatPoly(), RatPoly(), RatPoly(Rat(1)), 12);
    SolveFamilyResult r = solve_k2(J, 8);
    CHECK(r.solution.family == ClassicalFamily::Hermite);
    for (int n = 0; n <= 8; ++n)
        CHECK(r.lambdas[static_cast<std::size_t>(n)]
              == Rat(static_cast<long>(n + 1) * (n + 2), 2));
    CHECK(derive(r.mps.poly(2), 2) == Rat(2) * r.mps.poly(0));
    for (int n = 0; n + 2 <= r.mps.horizon(); ++n)
        CHECK(derive(r.mps.poly(n + 2), 2)
              == Rat(static_cast<long>(n + 1) * (n + 2)) * r.mps.poly(n));
    CHECK(error_code_of([] {
              solve_k2(three_term(RatPoly(), RatPoly(), RatPoly::monomial(1), 12), 6);
          }) == errc::not_lowering);
}

TEST_CASE("only the Hermite shape survives the k = 2 fixed point") {
    RatOperator J = three_term(RatPoly(), RatPoly(), RatPoly(Rat(1)), 10);
    OrthogonalCoeffs<Rat> bad;
    bad.betas = {Rat(0), Rat(1), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
    for (int n = 0; n < 10; ++n) bad.gammas.push_back(Rat(n + 1, 2));
    FixedPointReport r = fixed_point_check(generate(StructureCoeffs<Rat>(bad), 10), J);
    CHECK_FALSE(r.poly_side);
    CHECK_FALSE(r.dual_side);

    OrthogonalCoeffs<Rat> bad2;
    for (int n = 0; n < 10; ++n) bad2.betas.push_back(Rat(0));
    for (int n = 0; n < 10; ++n) bad2.gammas.push_back(Rat(n + 1, 2));
    bad2.gammas[2] = Rat(7, 3);
    FixedPointReport r2 = fixed_point_check(generate(StructureCoeffs<Rat>(bad2), 10), J);
    CHECK_FALSE(r2.poly_side);
    CHECK_FALSE(r2.dual_side);
}

TEST_CASE("pearson_verify") {
    PearsonPair<Rat> hermite{RatPoly(Rat(2)), RatPoly::monomial(1, Rat(4))};
    RatFunctional u = moments_from_pearson(hermite, 12);
    CHECK(pearson_verify(hermite, u));

    std::vector<Rat> tampered = u.moments();
    tampered[2] += Rat(1, 7);
    CHECK_FALSE(pearson_verify(hermite, RatFunctional(tampered)));

    // rational affine transport
    PearsonPair<Rat> moved = transport_pair(hermite, Rat(3), Rat(2));
    CHECK(pearson_verify(moved, affine_transport(u, Rat(3), Rat(2))));

    // surd affine transport: A = sqrt(2)
    PearsonPair<Surd> hs{to_surd(hermite.phi), to_surd(hermite.psi)};
    const Surd A = Surd::sqrt(Rat(2)), B{Rat(1)};
    PearsonPair<Surd> moved_s = transport_pair(hs, A, B);
    CHECK(pearson_verify(moved_s, affine_transport(to_surd_functional(u), A, B)));
}

TEST_CASE("reconstruction aborts on non-regular forms") {
    // moments of a functional with a vanishing Hankel minor: u = (1, 1, 1, ...)
    // gives <u, P_1^2> = 0
    RatFunctional flat(std::vector<Rat>(9, Rat(1)));
    CHECK(error_code_of([&] { mops_from_moments(flat, 4); }) == errc::not_regular);
    CHECK(error_index_of([&] { mops_from_moments(flat, 4); }) == 1);
}
