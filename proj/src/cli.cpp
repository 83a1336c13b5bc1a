#include "lowerop/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "lowerop/json_io.hpp"

namespace lowerop::cli {

namespace {

long max_horizon() {
    if (const char* env = std::getenv("LOWEROP_MAX_N")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 64;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::parse_error, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(errc::parse_error, path + ": " + e.what());
    }
}

RatOperator load_operator(const std::string& path) {
    RatOperator J = operator_from_json(load_json(path));
    if (J.truncation_order() > max_horizon())
        throw Error(errc::bad_parameter,
                    "operator horizon exceeds LOWEROP_MAX_N", J.truncation_order());
    return J;
}

void check_n(long n) {
    if (n < 1) throw Error(errc::bad_parameter, "N must be >= 1", n);
    if (n > max_horizon())
        throw Error(errc::bad_parameter, "N exceeds LOWEROP_MAX_N", n);
}

// Plain-text rendering of a report, one "key: value" line per scalar.
void render_text(const json& j, std::ostream& os, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() || (value.is_array() && !value.empty()
                                      && (value[0].is_object() || value[0].is_array()))) {
                os << pad << key << ":\n";
                render_text(value, os, depth + 1);
            } else {
                os << pad << key << ": " << value.dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (j[i].is_object() || j[i].is_array()) {
                os << pad << "- [" << i << "]\n";
                render_text(j[i], os, depth + 1);
            } else {
                os << pad << "- " << j[i].dump() << "\n";
            }
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

void emit(const json& report, const std::string& format, const std::string& out_path,
          std::ostream& out) {
    std::ostringstream body;
    if (format == "text")
        render_text(report, body, 0);
    else
        body << report.dump(2) << "\n";
    out << body.str();
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw Error(errc::parse_error, "cannot write " + out_path);
        f << body.str();
    }
}

json family_payload(int k, const SolveFamilyResult& r) {
    json params = json::object();
    if (r.solution.alpha) params["alpha"] = r.solution.alpha->str();
    return json{{"k", k},
                {"family", case_tag(r.solution.family)},
                {"params", std::move(params)},
                {"affine", json{{"A", r.solution.affine_A.str()},
                                {"B", r.solution.affine_B.str()}}},
                {"freedom", r.solution.freedom},
                {"structure", to_json(r.mps.structure())},
                {"lambdas", [&] {
                     json a = json::array();
                     for (const auto& l : r.lambdas) a.push_back(l.str());
                     return a;
                 }()}};
}

std::vector<Rat> parse_seeds(const std::string& s) {
    std::vector<Rat> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) out.push_back(Rat::parse(item));
    if (out.size() != 3)
        throw Error(errc::bad_parameter, "--seeds expects b0,a1,g1");
    return out;
}

int detect_k(const RatOperator& J) {
    try {
        return lowering_order(J).order;
    } catch (const Error& e) {
        // Not lowering in the strict sense; the isomorphism-type solver may
        // still apply (its eigenvalues are allowed to vanish).
        if (e.code() == errc::not_lowering) return 0;
        throw;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"lowerop: exact calculus of degree-nonincreasing operators on polynomials"};
    app.require_subcommand(1);

    std::string in_path, images_path, poly_path, with_path, mps_path, out_path, seeds_str;
    std::string format = "json";
    long n_opt = -1;
    int k_forced = -1;

    app.add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", out_path, "also write the report to this file");

    auto* canon = app.add_subcommand("canon", "canonical coefficients from images of x^n");
    canon->add_option("--images", images_path, "JSON file with the image polynomials")
        ->required();

    auto* apply_cmd = app.add_subcommand("apply", "apply an operator to a polynomial");
    apply_cmd->add_option("--in", in_path, "operator JSON")->required();
    apply_cmd->add_option("--poly", poly_path, "polynomial JSON")->required();

    auto* compose_cmd = app.add_subcommand("compose", "compose two operators (--in after --with)");
    compose_cmd->add_option("--in", in_path, "outer operator JSON")->required();
    compose_cmd->add_option("--with", with_path, "inner operator JSON")->required();

    auto* invert_cmd = app.add_subcommand("invert", "invert an isomorphism on its horizon");
    invert_cmd->add_option("--in", in_path, "operator JSON")->required();

    auto* order_cmd = app.add_subcommand("order", "lowering order and lambda scalars");
    order_cmd->add_option("--in", in_path, "operator JSON")->required();

    auto* solve_cmd = app.add_subcommand("solve", "fixed-point solver for a three-term operator");
    solve_cmd->add_option("--in", in_path, "operator JSON")->required();
    solve_cmd->add_option("--N", n_opt, "verification horizon")->required();
    solve_cmd->add_option("--k", k_forced, "force the solver (0, 1 or 2)")
        ->check(CLI::IsMember({0, 1, 2}));

    auto* verify_cmd =
        app.add_subcommand("verify-fixed-point", "check P~_n = P_n on both sides of the duality");
    verify_cmd->add_option("--in", in_path, "operator JSON")->required();
    verify_cmd->add_option("--mps", mps_path, "structure coefficients JSON")->required();
    verify_cmd->add_option("--N", n_opt, "sequence horizon (default: operator horizon)");

    auto* two_cmd = app.add_subcommand("two-ortho", "two-orthogonal fixed point and matrix Pearson");
    two_cmd->add_option("--in", in_path, "operator JSON")->required();
    two_cmd->add_option("--N", n_opt, "construction horizon")->required();
    two_cmd->add_option("--seeds", seeds_str, "free seeds b0,a1,g1 (default 0,1,1)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    std::vector<std::string> diagnostics;
    try {
        json payload;
        if (canon->parsed()) {
            json j = load_json(images_path);
            const json& arr = j.is_object() && j.contains("images") ? j.at("images") : j;
            if (!arr.is_array() || arr.empty())
                throw Error(errc::parse_error, "expected a nonempty array of image polynomials");
            std::vector<RatPoly> images;
            images.reserve(arr.size());
            for (const auto& e : arr) images.push_back(poly_from_json(e));
            if (static_cast<long>(images.size()) - 1 > max_horizon())
                throw Error(errc::bad_parameter, "image list exceeds LOWEROP_MAX_N");
            payload = to_json(from_images(images));
        } else if (apply_cmd->parsed()) {
            RatOperator J = load_operator(in_path);
            RatPoly p = poly_from_json(load_json(poly_path));
            payload = json{{"result", to_json(apply(J, p))}};
        } else if (compose_cmd->parsed()) {
            RatOperator K = load_operator(in_path);
            RatOperator J = load_operator(with_path);
            payload = to_json(compose(K, J));
        } else if (invert_cmd->parsed()) {
            RatOperator J = load_operator(in_path);
            payload = to_json(invert(J));
        } else if (order_cmd->parsed()) {
            RatOperator J = load_operator(in_path);
            LoweringProfile<Rat> prof = lowering_order(J);
            json lambdas = json::array();
            for (const auto& l : prof.lambdas) lambdas.push_back(l.str());
            payload = json{{"k", prof.order}, {"lambdas", std::move(lambdas)}};
            diagnostics.push_back("lambda nonvanishing certified up to n = "
                                  + std::to_string(prof.horizon));
        } else if (solve_cmd->parsed()) {
            check_n(n_opt);
            RatOperator J = load_operator(in_path);
            int k = k_forced >= 0 ? k_forced : detect_k(J);
            if (k > 2)
                throw Error(errc::bad_parameter, "no solver for lowering order > 2",
                            static_cast<long>(k));
            if (k == 0) {
                SolveK0Result r = solve_k0(J, static_cast<int>(n_opt));
                json lambdas = json::array();
                for (const auto& l : r.lambdas) lambdas.push_back(l.str());
                payload = json{{"k", 0},
                               {"report", to_json(r.report)},
                               {"structure", to_json(r.mops.structure())},
                               {"lambdas", std::move(lambdas)}};
            } else if (k == 1) {
                payload = family_payload(1, solve_k1(J, static_cast<int>(n_opt)));
            } else {
                payload = family_payload(2, solve_k2(J, static_cast<int>(n_opt)));
            }
            diagnostics.push_back("verified exactly up to n = " + std::to_string(n_opt));
        } else if (verify_cmd->parsed()) {
            RatOperator J = load_operator(in_path);
            long n = n_opt >= 0 ? n_opt : J.truncation_order();
            check_n(n);
            StructureCoeffs<Rat> s = structure_from_json(load_json(mps_path));
            Mps<Rat> m = generate(s, static_cast<int>(n));
            FixedPointReport fp = fixed_point_check(m, J);
            payload = json{{"k", fp.order},
                           {"poly_side", fp.poly_side},
                           {"dual_side", fp.dual_side},
                           {"fixed_point", fp.fixed_point()},
                           {"horizon", fp.horizon}};
        } else if (two_cmd->parsed()) {
            check_n(n_opt);
            RatOperator J = load_operator(in_path);
            AppellSeeds<Rat> seeds;
            if (!seeds_str.empty()) {
                std::vector<Rat> v = parse_seeds(seeds_str);
                seeds = AppellSeeds<Rat>{v[0], v[1], v[2]};
            }
            TwoOrthoData<Rat> t = find_appell_2ortho(J, static_cast<int>(n_opt), seeds);
            FixedPointReport fp = fixed_point_check(t.mps, J);
            MatrixPearson<Rat> mp = build_matrix_pearson(t, J);
            json mpj = to_json(mp);
            payload = json{{"structure", to_json(StructureCoeffs<Rat>(t.structure))},
                           {"fixed_point", fp.fixed_point()},
                           {"dual_recurrence", dual_recurrence_check(t)},
                           {"pair_expressions", dual_pair_expressions_check(t)},
                           {"phi", mpj.at("phi")},
                           {"psi", mpj.at("psi")},
                           {"matrix_pearson", verify_matrix_pearson(t, mp, J)}};
        }
        json report{{"status", "ok"}, {"payload", std::move(payload)},
                    {"diagnostics", diagnostics}};
        emit(report, format, out_path, out);
        return 0;
    } catch (const Error& e) {
        json error{{"code", e.code()}};
        if (e.index()) error["index"] = *e.index();
        error["message"] = e.what();
        json report{{"status", "error"}, {"error", std::move(error)},
                    {"diagnostics", json::array()}};
        emit(report, format, out_path, out);
        return e.code() == errc::parse_error ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace lowerop::cli
