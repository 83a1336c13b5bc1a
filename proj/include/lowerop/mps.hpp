#ifndef LOWEROP_MPS_HPP
#define LOWEROP_MPS_HPP

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "lowerop/errors.hpp"
#include "lowerop/functional.hpp"
#include "lowerop/operator_j.hpp"
#include "lowerop/poly.hpp"

namespace lowerop {

// Structure coefficients driving the recurrence that generates a monic
// polynomial sequence. Index conventions: betas[n] = beta_n,
// gammas[i] = gamma_{i+1}, alphas[i] = alpha_{i+1}, chis[n][v] = chi_{n,v}.

template <FieldScalar K>
struct OrthogonalCoeffs {
    std::vector<K> betas;
    std::vector<K> gammas;

    friend bool operator==(const OrthogonalCoeffs&, const OrthogonalCoeffs&) = default;
};

template <FieldScalar K>
struct TwoOrthoCoeffs {
    std::vector<K> betas;
    std::vector<K> alphas;
    std::vector<K> gammas;

    friend bool operator==(const TwoOrthoCoeffs&, const TwoOrthoCoeffs&) = default;
};

template <FieldScalar K>
struct GeneralCoeffs {
    std::vector<K> betas;
    std::vector<std::vector<K>> chis;  // row n holds chi_{n,0..n}

    friend bool operator==(const GeneralCoeffs&, const GeneralCoeffs&) = default;
};

template <FieldScalar K>
using StructureCoeffs = std::variant<OrthogonalCoeffs<K>, TwoOrthoCoeffs<K>, GeneralCoeffs<K>>;

/// Monic polynomial sequence P_0..P_N together with the structure
/// coefficients that generate it. P_n is monic of exact degree n, P_0 = 1.
template <FieldScalar K>
class Mps {
public:
    Mps(StructureCoeffs<K> structure, std::vector<Poly<K>> polys)
        : s_(std::move(structure)), p_(std::move(polys)) {}

    int horizon() const { return static_cast<int>(p_.size()) - 1; }

    const Poly<K>& poly(int n) const {
        if (n < 0 || n > horizon())
            throw Error(errc::horizon_exceeded, "sequence index beyond horizon",
                        static_cast<long>(n));
        return p_[static_cast<std::size_t>(n)];
    }
    const std::vector<Poly<K>>& polys() const { return p_; }
    const StructureCoeffs<K>& structure() const { return s_; }

private:
    StructureCoeffs<K> s_;
    std::vector<Poly<K>> p_;
};

using RatMps = Mps<Rat>;

namespace detail {

template <FieldScalar K>
void check_gammas_nonzero(const std::vector<K>& gammas, std::size_t used) {
    for (std::size_t i = 0; i < used && i < gammas.size(); ++i)
        if (gammas[i] == K(0))
            throw Error(errc::bad_parameter, "gamma_{n+1} must be nonzero",
                        static_cast<long>(i + 1));
}

}  // namespace detail

/// Runs the structure relation through degree N.
template <FieldScalar K>
Mps<K> generate(const StructureCoeffs<K>& s, int N) {
    if (N < 0) throw Error(errc::bad_parameter, "negative horizon");
    std::vector<Poly<K>> p;
    p.reserve(static_cast<std::size_t>(N) + 1);
    p.push_back(Poly<K>(K(1)));
    if (N == 0) return Mps<K>(s, std::move(p));

    auto beta = [&](const std::vector<K>& betas, int n) -> const K& {
        if (n >= static_cast<int>(betas.size()))
            throw Error(errc::need_more_coeffs, "beta list too short", static_cast<long>(n));
        return betas[static_cast<std::size_t>(n)];
    };
    const Poly<K> x = Poly<K>::var();

    if (const auto* o = std::get_if<OrthogonalCoeffs<K>>(&s)) {
        if (static_cast<int>(o->gammas.size()) < N - 1)
            throw Error(errc::need_more_coeffs, "gamma list too short", static_cast<long>(N - 1));
        detail::check_gammas_nonzero(o->gammas, static_cast<std::size_t>(N > 0 ? N - 1 : 0));
        p.push_back(x - Poly<K>(beta(o->betas, 0)));
        for (int m = 2; m <= N; ++m)
            p.push_back((x - Poly<K>(beta(o->betas, m - 1))) * p[m - 1]
                        - o->gammas[static_cast<std::size_t>(m - 2)] * p[m - 2]);
    } else if (const auto* t = std::get_if<TwoOrthoCoeffs<K>>(&s)) {
        if (N >= 2 && static_cast<int>(t->alphas.size()) < N - 1)
            throw Error(errc::need_more_coeffs, "alpha list too short", static_cast<long>(N - 1));
        if (N >= 3 && static_cast<int>(t->gammas.size()) < N - 2)
            throw Error(errc::need_more_coeffs, "gamma list too short", static_cast<long>(N - 2));
        detail::check_gammas_nonzero(t->gammas, static_cast<std::size_t>(N >= 3 ? N - 2 : 0));
        p.push_back(x - Poly<K>(beta(t->betas, 0)));
        if (N >= 2)
            p.push_back((x - Poly<K>(beta(t->betas, 1))) * p[1] - Poly<K>(t->alphas[0]));
        for (int m = 3; m <= N; ++m)
            p.push_back((x - Poly<K>(beta(t->betas, m - 1))) * p[m - 1]
                        - t->alphas[static_cast<std::size_t>(m - 2)] * p[m - 2]
                        - t->gammas[static_cast<std::size_t>(m - 3)] * p[m - 3]);
    } else {
        const auto& g = std::get<GeneralCoeffs<K>>(s);
        p.push_back(x - Poly<K>(beta(g.betas, 0)));
        for (int m = 2; m <= N; ++m) {
            if (static_cast<int>(g.chis.size()) < m - 1)
                throw Error(errc::need_more_coeffs, "chi table too short", static_cast<long>(m - 2));
            const auto& row = g.chis[static_cast<std::size_t>(m - 2)];
            if (static_cast<int>(row.size()) < m - 1)
                throw Error(errc::need_more_coeffs, "chi row too short", static_cast<long>(m - 2));
            Poly<K> next = (x - Poly<K>(beta(g.betas, m - 1))) * p[m - 1];
            for (int v = 0; v <= m - 2; ++v)
                next -= row[static_cast<std::size_t>(v)] * p[static_cast<std::size_t>(v)];
            p.push_back(std::move(next));
        }
    }
    return Mps<K>(s, std::move(p));
}

namespace detail {

// Expands q over the monic degree-exact basis polys[0..deg q]; exact since
// the basis is triangular.
template <FieldScalar K>
std::vector<K> expand_in_basis(Poly<K> q, std::span<const Poly<K>> basis) {
    const int d = q.degree();
    if (d >= static_cast<int>(basis.size()))
        throw Error(errc::horizon_exceeded, "expansion target beyond basis", static_cast<long>(d));
    if (d < 0) return {};
    std::vector<K> c(static_cast<std::size_t>(d) + 1, K(0));
    for (int j = d; j >= 0; --j) {
        K cj = q.coeff(j);
        if (!(cj == K(0))) q -= cj * basis[static_cast<std::size_t>(j)];
        c[static_cast<std::size_t>(j)] = std::move(cj);
    }
    if (!q.is_zero())
        throw Error(errc::self_test_failure, "basis expansion left a remainder");
    return c;
}

template <FieldScalar K>
void check_monic_sequence(std::span<const Poly<K>> polys) {
    for (std::size_t n = 0; n < polys.size(); ++n) {
        if (polys[n].degree() != static_cast<int>(n) || !(polys[n].leading() == K(1)))
            throw Error(errc::not_monic, "P_n must be monic of exact degree n",
                        static_cast<long>(n));
    }
}

}  // namespace detail

/// Reads the structure coefficients off a monic sequence by expanding
/// x P_{n+1} - P_{n+2} = beta_{n+1} P_{n+1} + sum_v chi_{n,v} P_v in the
/// P-basis, the division form of the structure relation.
template <FieldScalar K>
GeneralCoeffs<K> structure_from_polys(std::span<const Poly<K>> polys) {
    if (polys.empty()) throw Error(errc::bad_parameter, "empty sequence");
    detail::check_monic_sequence(polys);
    GeneralCoeffs<K> g;
    const int N = static_cast<int>(polys.size()) - 1;
    if (N >= 1) g.betas.push_back(-polys[1].coeff(0));
    for (int m = 2; m <= N; ++m) {
        Poly<K> q = Poly<K>::var() * polys[static_cast<std::size_t>(m - 1)]
                    - polys[static_cast<std::size_t>(m)];
        std::vector<K> c = detail::expand_in_basis(q, polys.subspan(0, static_cast<std::size_t>(m)));
        c.resize(static_cast<std::size_t>(m), K(0));
        g.betas.push_back(c[static_cast<std::size_t>(m - 1)]);
        c.pop_back();
        g.chis.push_back(std::move(c));
    }
    return g;
}

/// Change-of-basis table x^m = sum_j c_{m,j} P_j. Row m of the table is the
/// moment list of nothing by itself, but column n read down the rows is the
/// dual functional u_n: (u_n)_m = c_{m,n}.
template <FieldScalar K>
class DualTable {
public:
    explicit DualTable(std::vector<std::vector<K>> rows) : c_(std::move(rows)) {}

    int horizon() const { return static_cast<int>(c_.size()) - 1; }

    K entry(int m, int j) const {
        if (m < 0 || m > horizon())
            throw Error(errc::horizon_exceeded, "table row beyond horizon", static_cast<long>(m));
        if (j < 0 || j > m) return K(0);
        return c_[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
    }

    MomentFunctional<K> dual_row(int n) const {
        if (n < 0 || n > horizon())
            throw Error(errc::horizon_exceeded, "dual index beyond horizon", static_cast<long>(n));
        std::vector<K> m(static_cast<std::size_t>(horizon()) + 1, K(0));
        for (int i = 0; i <= horizon(); ++i) m[static_cast<std::size_t>(i)] = entry(i, n);
        return MomentFunctional<K>(std::move(m));
    }

private:
    std::vector<std::vector<K>> c_;
};

template <FieldScalar K>
DualTable<K> dual_table(const Mps<K>& m) {
    std::vector<std::vector<K>> rows;
    rows.reserve(static_cast<std::size_t>(m.horizon()) + 1);
    for (int deg = 0; deg <= m.horizon(); ++deg)
        rows.push_back(detail::expand_in_basis(Poly<K>::monomial(deg),
                                               std::span<const Poly<K>>(m.polys())));
    return DualTable<K>(std::move(rows));
}

enum class OrthoVerdict { Orthogonal, TwoOrthogonalCandidate, Neither };

inline const char* to_string(OrthoVerdict v) {
    switch (v) {
        case OrthoVerdict::Orthogonal: return "orthogonal";
        case OrthoVerdict::TwoOrthogonalCandidate: return "two-orthogonal-candidate";
        default: return "neither";
    }
}

/// Horizon-scoped pattern check on a general chi table. Orthogonal means
/// chi_{n,v} = 0 below the diagonal with chi_{n,n} != 0; the two-orthogonal
/// candidate pattern is a four-term band: chi_{n,v} = 0 for v < n-1 and
/// chi_{n,n-1} != 0 (those entries are the gamma_n of the four-term
/// recurrence; the diagonal holds alpha_{n+1} and may vanish).
template <FieldScalar K>
OrthoVerdict orthogonality_check(const GeneralCoeffs<K>& g) {
    bool orthogonal = true;
    bool two_ortho = true;
    for (std::size_t n = 0; n < g.chis.size(); ++n) {
        const auto& row = g.chis[n];
        for (std::size_t v = 0; v + 1 < row.size(); ++v) {
            if (!(row[v] == K(0))) orthogonal = false;
            if (v + 2 < row.size() && !(row[v] == K(0))) two_ortho = false;
        }
        if (row.empty() || row.back() == K(0)) orthogonal = false;
        if (row.size() >= 2 && row[row.size() - 2] == K(0)) two_ortho = false;
    }
    if (orthogonal) return OrthoVerdict::Orthogonal;
    if (two_ortho) return OrthoVerdict::TwoOrthogonalCandidate;
    return OrthoVerdict::Neither;
}

/// P~_n(x) = A^-n P_n(Ax + B) with the structure coefficients transported by
/// their degree weights: beta -> (beta - B)/A, gamma -> gamma/A^2 (orthogonal),
/// alpha -> alpha/A^2 and gamma -> gamma/A^3 (two-orthogonal),
/// chi_{n,v} -> chi_{n,v}/A^(n+2-v) (general).
template <FieldScalar K>
Mps<K> affine_image(const Mps<K>& m, const K& A, const K& B) {
    if (A == K(0)) throw Error(errc::degenerate_affine, "affine image with A = 0");
    std::vector<Poly<K>> polys;
    polys.reserve(m.polys().size());
    K apow(1);
    for (int n = 0; n <= m.horizon(); ++n) {
        polys.push_back(affine_sub(m.poly(n), A, B) / apow);
        apow = apow * A;
    }
    const K A2 = A * A, A3 = A2 * A;
    auto map_betas = [&](const std::vector<K>& b) {
        std::vector<K> out;
        out.reserve(b.size());
        for (const auto& bi : b) out.push_back((bi - B) / A);
        return out;
    };
    auto scale_all = [&](const std::vector<K>& v, const K& f) {
        std::vector<K> out;
        out.reserve(v.size());
        for (const auto& vi : v) out.push_back(vi / f);
        return out;
    };
    StructureCoeffs<K> s = std::visit(
        [&](const auto& src) -> StructureCoeffs<K> {
            using T = std::decay_t<decltype(src)>;
            if constexpr (std::same_as<T, OrthogonalCoeffs<K>>) {
                return OrthogonalCoeffs<K>{map_betas(src.betas), scale_all(src.gammas, A2)};
            } else if constexpr (std::same_as<T, TwoOrthoCoeffs<K>>) {
                return TwoOrthoCoeffs<K>{map_betas(src.betas), scale_all(src.alphas, A2),
                                         scale_all(src.gammas, A3)};
            } else {
                GeneralCoeffs<K> out;
                out.betas = map_betas(src.betas);
                for (std::size_t n = 0; n < src.chis.size(); ++n) {
                    std::vector<K> row;
                    row.reserve(src.chis[n].size());
                    for (std::size_t v = 0; v < src.chis[n].size(); ++v) {
                        K f(1);
                        for (std::size_t e = 0; e < n + 2 - v; ++e) f = f * A;
                        row.push_back(src.chis[n][v] / f);
                    }
                    out.chis.push_back(std::move(row));
                }
                return out;
            }
        },
        m.structure());
    return Mps<K>(std::move(s), std::move(polys));
}

/// Normalized image sequence P~_n = J(P_{n+k}) / lambda_{n+k}^[k], where k is
/// the lowering order of J. The default target horizon is the largest
/// possible, horizon(m) - k.
template <FieldScalar K>
Mps<K> j_image(const Mps<K>& m, const OperatorJ<K>& J, int target = -1) {
    LoweringProfile<K> prof = lowering_order(J);
    const int k = prof.order;
    if (target < 0) target = m.horizon() - k;
    if (target < 0 || target + k > m.horizon())
        throw Error(errc::horizon_exceeded, "sequence too short for the requested image",
                    static_cast<long>(target));
    if (target + k > J.truncation_order())
        throw Error(errc::horizon_exceeded, "operator horizon too small for the image",
                    static_cast<long>(target + k));
    std::vector<Poly<K>> polys;
    polys.reserve(static_cast<std::size_t>(target) + 1);
    for (int n = 0; n <= target; ++n)
        polys.push_back(apply(J, m.poly(n + k)) / prof.lambda(n + k));
    GeneralCoeffs<K> s = structure_from_polys(std::span<const Poly<K>>(polys));
    return Mps<K>(StructureCoeffs<K>(std::move(s)), std::move(polys));
}

/// Both sides of the fixed-point equivalence: P~_n = P_n for n <= N-k
/// (polynomial side) and J(u_n) = lambda_{n+k}^[k] u_{n+k} as moment
/// identities on the dual rows (dual side). The two verdicts are equivalent
/// on matched horizons; disagreement is a library bug and raises.
struct FixedPointReport {
    int order = 0;
    bool poly_side = false;
    bool dual_side = false;
    int horizon = 0;

    bool fixed_point() const { return poly_side && dual_side; }
};

template <FieldScalar K>
FixedPointReport fixed_point_check(const Mps<K>& m, const OperatorJ<K>& J) {
    LoweringProfile<K> prof = lowering_order(J);
    const int k = prof.order;
    if (J.truncation_order() < m.horizon())
        throw Error(errc::horizon_exceeded,
                    "operator horizon must cover the sequence horizon",
                    static_cast<long>(m.horizon()));
    const int n_max = m.horizon() - k;
    if (n_max < 0)
        throw Error(errc::horizon_exceeded, "sequence shorter than the lowering order",
                    static_cast<long>(k));

    bool poly_side = true;
    for (int n = 0; n <= n_max && poly_side; ++n)
        poly_side = (apply(J, m.poly(n + k)) == prof.lambda(n + k) * m.poly(n));

    DualTable<K> duals = dual_table(m);
    bool dual_side = true;
    for (int n = 0; n <= n_max && dual_side; ++n) {
        MomentFunctional<K> lhs = transpose_apply(J, duals.dual_row(n));
        MomentFunctional<K> rhs = prof.lambda(n + k) * duals.dual_row(n + k);
        const int h = std::min(lhs.horizon(), rhs.horizon());
        for (int i = 0; i <= h && dual_side; ++i)
            dual_side = (lhs.moment(i) == rhs.moment(i));
    }

    if (poly_side != dual_side)
        throw Error(errc::self_test_failure,
                    "fixed-point verdicts disagree between polynomial and dual sides");
    return FixedPointReport{k, poly_side, dual_side, m.horizon()};
}

}  // namespace lowerop

#endif
