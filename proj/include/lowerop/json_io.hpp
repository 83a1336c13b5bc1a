#ifndef LOWEROP_JSON_IO_HPP
#define LOWEROP_JSON_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "lowerop/classify.hpp"
#include "lowerop/errors.hpp"
#include "lowerop/functional.hpp"
#include "lowerop/mps.hpp"
#include "lowerop/operator_j.hpp"
#include "lowerop/poly.hpp"
#include "lowerop/twoortho.hpp"

namespace lowerop {

// Wire formats. Every number is an exact rational string "p/q" (or "p" when
// the denominator is one); insertion order is preserved by ordered_json so
// reports serialize deterministically.
using json = nlohmann::ordered_json;

inline json to_json(const Rat& r) { return json(r.str()); }

inline Rat rat_from_json(const json& j) {
    if (!j.is_string())
        throw Error(errc::parse_error, "expected a rational string, got " + j.dump());
    return Rat::parse(j.get<std::string>());
}

inline json to_json(const Surd& s) {
    return json{{"rat", s.rational_part().str()},
                {"coef", s.surd_part().str()},
                {"rad", s.radicand().str()}};
}

inline Surd surd_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rat") || !j.contains("coef") || !j.contains("rad"))
        throw Error(errc::parse_error, "expected a surd object {rat, coef, rad}");
    return Surd(rat_from_json(j.at("rat")), rat_from_json(j.at("coef")),
                rat_from_json(j.at("rad")));
}

// Polynomial: array of rational strings, low degree to high; [] is zero.
inline json to_json(const RatPoly& p) {
    json a = json::array();
    for (int i = 0; i <= p.degree(); ++i) a.push_back(p.coeff(i).str());
    return a;
}

inline RatPoly poly_from_json(const json& j) {
    if (!j.is_array()) throw Error(errc::parse_error, "expected a coefficient array");
    std::vector<Rat> c;
    c.reserve(j.size());
    for (const auto& e : j) c.push_back(rat_from_json(e));
    return RatPoly(std::move(c));
}

// Operator: {"N": int, "coeffs": [[...], ...]}. Fewer than N+1 coefficient
// arrays declares the remaining ones zero up to the horizon.
inline json to_json(const RatOperator& J) {
    json coeffs = json::array();
    for (int nu = 0; nu <= J.truncation_order(); ++nu) coeffs.push_back(to_json(J.coeff(nu)));
    return json{{"N", J.truncation_order()}, {"coeffs", std::move(coeffs)}};
}

inline RatOperator operator_from_json(const json& j) {
    if (!j.is_object() || !j.contains("N") || !j.contains("coeffs"))
        throw Error(errc::parse_error, "expected an operator object {N, coeffs}");
    if (!j.at("N").is_number_integer())
        throw Error(errc::parse_error, "operator N must be an integer");
    const long N = j.at("N").get<long>();
    if (N < 0) throw Error(errc::parse_error, "operator N must be nonnegative");
    const json& raw = j.at("coeffs");
    if (!raw.is_array()) throw Error(errc::parse_error, "operator coeffs must be an array");
    if (static_cast<long>(raw.size()) > N + 1)
        throw Error(errc::parse_error, "more coefficients than the declared horizon");
    std::vector<RatPoly> c(static_cast<std::size_t>(N) + 1);
    for (std::size_t nu = 0; nu < raw.size(); ++nu) c[nu] = poly_from_json(raw[nu]);
    return RatOperator::from_coeffs(std::move(c));
}

inline json to_json(const RatFunctional& u) {
    json m = json::array();
    for (int n = 0; n <= u.horizon(); ++n) m.push_back(u.moment(n).str());
    return json{{"moments", std::move(m)}};
}

inline RatFunctional functional_from_json(const json& j) {
    if (!j.is_object() || !j.contains("moments"))
        throw Error(errc::parse_error, "expected a functional object {moments}");
    const json& raw = j.at("moments");
    if (!raw.is_array() || raw.empty())
        throw Error(errc::parse_error, "moments must be a nonempty array");
    std::vector<Rat> m;
    m.reserve(raw.size());
    for (const auto& e : raw) m.push_back(rat_from_json(e));
    return RatFunctional(std::move(m));
}

namespace detail {
inline json rat_list(const std::vector<Rat>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(r.str());
    return a;
}
inline std::vector<Rat> rat_list_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw Error(errc::parse_error, std::string(what) + " must be an array");
    std::vector<Rat> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(rat_from_json(e));
    return v;
}
}  // namespace detail

// Structure coefficients:
// {"kind": "orthogonal"|"two-ortho"|"general", "betas": [...],
//  "gammas": [...], "alphas": [...], "chis": [[...], ...]}.
inline json to_json(const StructureCoeffs<Rat>& s) {
    if (const auto* o = std::get_if<OrthogonalCoeffs<Rat>>(&s))
        return json{{"kind", "orthogonal"},
                    {"betas", detail::rat_list(o->betas)},
                    {"gammas", detail::rat_list(o->gammas)}};
    if (const auto* t = std::get_if<TwoOrthoCoeffs<Rat>>(&s))
        return json{{"kind", "two-ortho"},
                    {"betas", detail::rat_list(t->betas)},
                    {"alphas", detail::rat_list(t->alphas)},
                    {"gammas", detail::rat_list(t->gammas)}};
    const auto& g = std::get<GeneralCoeffs<Rat>>(s);
    json chis = json::array();
    for (const auto& row : g.chis) chis.push_back(detail::rat_list(row));
    return json{{"kind", "general"}, {"betas", detail::rat_list(g.betas)}, {"chis", std::move(chis)}};
}

inline StructureCoeffs<Rat> structure_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw Error(errc::parse_error, "expected a structure object with a kind tag");
    const std::string kind = j.at("kind").get<std::string>();
    auto field = [&](const char* name) -> const json& {
        if (!j.contains(name))
            throw Error(errc::parse_error, std::string("missing field ") + name);
        return j.at(name);
    };
    if (kind == "orthogonal")
        return OrthogonalCoeffs<Rat>{detail::rat_list_from_json(field("betas"), "betas"),
                                     detail::rat_list_from_json(field("gammas"), "gammas")};
    if (kind == "two-ortho")
        return TwoOrthoCoeffs<Rat>{detail::rat_list_from_json(field("betas"), "betas"),
                                   detail::rat_list_from_json(field("alphas"), "alphas"),
                                   detail::rat_list_from_json(field("gammas"), "gammas")};
    if (kind == "general") {
        GeneralCoeffs<Rat> g;
        g.betas = detail::rat_list_from_json(field("betas"), "betas");
        const json& chis = field("chis");
        if (!chis.is_array()) throw Error(errc::parse_error, "chis must be an array of rows");
        for (const auto& row : chis)
            g.chis.push_back(detail::rat_list_from_json(row, "chi row"));
        return g;
    }
    throw Error(errc::parse_error, "unknown structure kind: " + kind);
}

inline json to_json(const ClassificationReport& r) {
    json params = json::object();
    if (r.alpha) params["alpha"] = to_json(*r.alpha);
    if (r.beta) params["beta"] = to_json(*r.beta);
    json rep{{"case", case_tag(r.family)},
             {"params", std::move(params)},
             {"affine", json{{"A", to_json(r.affine_A)}, {"B", r.affine_B.str()}}},
             {"admissible_up_to", r.admissible_up_to},
             {"notes", r.notes}};
    if (r.d && r.mu)
        rep["intermediate"] = json{{"d", r.d->str()}, {"mu", r.mu->str()}};
    return rep;
}

inline json to_json(const MatrixPearson<Rat>& mp) {
    auto mat = [](const std::array<std::array<RatPoly, 2>, 2>& m) {
        return json::array({json::array({to_json(m[0][0]), to_json(m[0][1])}),
                            json::array({to_json(m[1][0]), to_json(m[1][1])})});
    };
    return json{{"phi", mat(mp.phi)}, {"psi", mat(mp.psi)}};
}

}  // namespace lowerop

#endif
