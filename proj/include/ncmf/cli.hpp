#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "copoint.hpp"
#include "io.hpp"
#include "nmf.hpp"
#include "twist.hpp"

namespace ncmf {

struct CliResult {
    int code = 0;
    std::string output;
};

namespace cli_detail {

inline std::string render(const Json& j, bool text) {
    if (!text) return j.dump(2) + "\n";
    // terse line-per-key form
    std::string out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out += it.key();
        out += ": ";
        out += it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
        out += "\n";
    }
    return out;
}

inline Json summand_to_json(const TrivialSummand& s) {
    Json j;
    j["kind"] = s.kind == TrivialKind::Right ? "right" : "left";
    j["shift"] = s.shift;
    return j;
}

inline Json betti_to_json(const ResolutionWindow& res) {
    Json betti = Json::array();
    for (const auto& degs : res.generator_degrees) betti.push_back(degs);
    return betti;
}

} // namespace cli_detail

/// Runs one CLI invocation; output is the full report text.  Exit codes:
/// 0 success, 1 verification/domain failure, 2 input error.
inline CliResult run_cli(std::vector<std::string> args) {
    CLI::App app{"noncommutative graded matrix factorization toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    int window = 8;
    int max_ell = 8;
    std::uint64_t seed = 1;
    int trials = 16;
    int steps = 6;
    bool normalize = false;
    bool text = false;
    std::string input_path, twist_path, point_path, points_path, quotient_poly;

    app.add_option("--window", window, "degree window")->capture_default_str();
    app.add_option("--max", max_ell, "maximum period to search")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed")->capture_default_str();
    app.add_option("--trials", trials, "random trials per candidate")->capture_default_str();
    app.add_option("--steps", steps, "orbit / resolution steps")->capture_default_str();
    app.add_flag("--normalize", normalize, "run eps-normalization before twisting");
    app.add_flag("--text", text, "plain-text report instead of JSON");

    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("input", input_path, "input JSON file")->required();
    };
    CLI::App* c_verify = app.add_subcommand("verify", "verify a factorization");
    add_input(c_verify);
    CLI::App* c_complete = app.add_subcommand("complete", "complete a (Phi0, Phi1) pair");
    add_input(c_complete);
    CLI::App* c_rescale = app.add_subcommand("rescale", "rescale a lambda-family");
    add_input(c_rescale);
    CLI::App* c_twist = app.add_subcommand("twist", "twist by an automorphism");
    add_input(c_twist);
    c_twist->add_option("--twist", twist_path, "twist JSON file")->required();
    CLI::App* c_period = app.add_subcommand("period", "find the period");
    add_input(c_period);
    CLI::App* c_resolve = app.add_subcommand("resolve", "minimal resolution window");
    add_input(c_resolve);
    CLI::App* c_from_module = app.add_subcommand("from-module", "factorization from a module");
    add_input(c_from_module);
    CLI::App* c_from_point = app.add_subcommand("from-point", "factorization from a point");
    add_input(c_from_point);
    c_from_point->add_option("--point", point_path, "point JSON file")->required();
    CLI::App* c_extension = app.add_subcommand("extension", "block extension factorization");
    add_input(c_extension);
    c_extension->add_option("--points", points_path, "points JSON file")->required();
    CLI::App* c_hilbert = app.add_subcommand("hilbert", "Hilbert window of an algebra");
    add_input(c_hilbert);
    c_hilbert->add_option("--quotient", quotient_poly, "divide by the two-sided ideal (f)");
    CLI::App* c_dual = app.add_subcommand("dual", "dual factorization over S^op");
    add_input(c_dual);
    CLI::App* c_reduce = app.add_subcommand("reduce", "strip trivial summands");
    add_input(c_reduce);
    CLI::App* c_ext1 = app.add_subcommand("ext1", "Ext^1 between point modules");
    add_input(c_ext1);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        Json err;
        err["error"] = e.what();
        return {2, err.dump(2) + "\n"};
    }

    if (const char* env = std::getenv("NCMF_SEED")) seed = std::strtoull(env, nullptr, 10);

    Json report;
    int code = 0;
    try {
        if (app.got_subcommand(c_verify)) {
            NMF phi = [&] {
                Json j = read_json_file(input_path);
                AlgebraPtr A = algebra_from_json(j.at("algebra"));
                NormalElement f = normal_element_from_json(A, j, window);
                ShiftVector s0 = j.at("shifts0").get<ShiftVector>();
                ShiftVector s1 = j.at("shifts1").get<ShiftVector>();
                GradedMatrix p0 = entries_matrix_from_json(A, j.at("phi0"), s0, s1);
                GradedMatrix p1 =
                    entries_matrix_from_json(A, j.at("phi1"), s1, shifted(s0, f.degree));
                return NMF(A, f, p0, p1);
            }();
            VerifyReport vr = nmf_verify(phi, window);
            report["command"] = "verify";
            report["window"] = window;
            report["ok"] = vr.ok;
            report["rank"] = phi.rank();
            report["failures"] = vr.failures;
            if (!vr.ok) code = 1;
        } else if (app.got_subcommand(c_complete)) {
            NMF phi = nmf_from_json(read_json_file(input_path), window);
            report["command"] = "complete";
            report["window"] = window;
            report["ok"] = true;
            report["nmf"] = nmf_to_json(phi);
        } else if (app.got_subcommand(c_rescale)) {
            Json j = read_json_file(input_path);
            AlgebraPtr A = algebra_from_json(j.at("algebra"));
            NormalElement f = normal_element_from_json(A, j, window);
            std::vector<GradedMatrix> phis;
            for (const auto& mj : j.at("phis")) phis.push_back(matrix_from_json(A, mj));
            std::vector<FieldElem> lambdas;
            for (const auto& lj : j.at("lambdas"))
                lambdas.push_back(field_elem_from_json(A->field(), lj));
            NMF psi = nmf_rescale(A, f, phis, lambdas, window);
            report["command"] = "rescale";
            report["window"] = window;
            report["ok"] = true;
            report["nmf"] = nmf_to_json(psi);
        } else if (app.got_subcommand(c_twist)) {
            NMF phi = nmf_from_json(read_json_file(input_path), window);
            Json tj = read_json_file(twist_path);
            GradedAutomorphism sigma =
                automorphism_from_json(phi.algebra(), tj.at("sigma"));
            FieldElem lambda = FieldElem::one(phi.algebra()->field());
            if (tj.contains("lambda")) {
                lambda = field_elem_from_json(phi.algebra()->field(), tj.at("lambda"));
                if (sigma.apply(phi.f().f) != phi.f().f * lambda) throw NotEigenvector();
            }
            if (normalize) {
                auto [nsigma, nlambda] = eps_normalize(sigma, phi.f().f, phi.degree_of_f());
                sigma = nsigma;
                lambda = nlambda;
            }
            TwistedNMF tw = twist_nmf(phi, sigma, window);
            report["command"] = "twist";
            report["window"] = window;
            report["normalize"] = normalize;
            report["lambda"] = lambda.str();
            report["sigma"] = automorphism_to_json(sigma);
            report["ok"] = true;
            report["phi0"] = matrix_entries_to_json(tw.phi0);
            report["phi1"] = matrix_entries_to_json(tw.phi1);
            Json comps = Json::array();
            for (int i = -4; i <= 4; ++i) {
                Json c;
                c["i"] = i;
                c["entries"] = matrix_entries_to_json(tw.component(i));
                comps.push_back(c);
            }
            report["components"] = comps;
        } else if (app.got_subcommand(c_period)) {
            NMF phi = nmf_from_json(read_json_file(input_path), window);
            PeriodResult pr = nmf_period(phi, max_ell, window, seed, trials);
            report["command"] = "period";
            report["window"] = window;
            report["max"] = max_ell;
            report["seed"] = seed;
            report["trials"] = trials;
            if (pr.period) {
                report["period"] = *pr.period;
                report["shift"] = pr.shift;
                report["certified"] = true;
            } else {
                report["period"] = nullptr;
                report["certified"] = false;
            }
        } else if (app.got_subcommand(c_resolve)) {
            Json j = read_json_file(input_path);
            AlgebraPtr A = algebra_from_json(j.at("algebra"));
            Ring ring = Ring::plain(A);
            if (j.contains("f")) {
                AlgebraElement f = parse_poly(j.at("f").get<std::string>(), A);
                ring = Ring::quotient(A, f);
            }
            GradedMatrix pres = matrix_from_json(A, j.at("matrix"));
            ResolutionWindow res =
                minimal_resolution_window(ModulePresentation{ring, pres}, steps, window);
            report["command"] = "resolve";
            report["window"] = window;
            report["steps"] = steps;
            report["betti"] = cli_detail::betti_to_json(res);
            report["truncated"] = res.truncated;
            Json diffs = Json::array();
            for (const auto& d : res.differentials) diffs.push_back(matrix_to_json(d));
            report["differentials"] = diffs;
        } else if (app.got_subcommand(c_from_module)) {
            Json j = read_json_file(input_path);
            AlgebraPtr A = algebra_from_json(j.at("algebra"));
            NormalElement f = normal_element_from_json(A, j, window);
            GradedMatrix pres = matrix_from_json(A, j.at("matrix"));
            NMF phi = nmf_from_module(A, f, pres, window);
            report["command"] = "from-module";
            report["window"] = window;
            report["ok"] = true;
            report["nmf"] = nmf_to_json(phi);
        } else if (app.got_subcommand(c_from_point)) {
            SkewContext C = context_from_json(read_json_file(input_path), window);
            Point p = point_from_json(C.S->field(), read_json_file(point_path));
            PointFactorization pf = nmf_from_point(C, p, steps, window);
            report["command"] = "from-point";
            report["window"] = window;
            report["steps"] = steps;
            report["ok"] = true;
            Json orbit = Json::array();
            for (const Point& q : pf.orbit.points) orbit.push_back(point_to_json(q)["coords"]);
            report["orbit"] = orbit;
            Json scalars = Json::array();
            for (const FieldElem& c : pf.orbit.scalars) scalars.push_back(c.str());
            report["scalars"] = scalars;
            report["period"] = pf.orbit_period ? Json(*pf.orbit_period) : Json(nullptr);
            report["nmf"] = nmf_to_json(pf.nmf);
        } else if (app.got_subcommand(c_extension)) {
            SkewContext C = context_from_json(read_json_file(input_path), window);
            Json pj = read_json_file(points_path);
            std::vector<Point> pts;
            for (const auto& one : pj) pts.push_back(point_from_json(C.S->field(), one));
            ExtensionResult ext = build_extension_nmf(C, pts, window, seed);
            report["command"] = "extension";
            report["window"] = window;
            report["seed"] = seed;
            report["ok"] = true;
            report["nontrivial"] = ext.nontrivial;
            report["betti"] = cli_detail::betti_to_json(ext.resolution);
            report["truncated"] = ext.resolution.truncated;
            report["nmf"] = nmf_to_json(ext.nmf);
        } else if (app.got_subcommand(c_hilbert)) {
            Json j = read_json_file(input_path);
            AlgebraPtr A = algebra_from_json(j);
            report["command"] = "hilbert";
            report["window"] = window;
            if (quotient_poly.empty()) {
                report["dims"] = hilbert_to_json(hilbert_window(A, window));
            } else {
                AlgebraElement f = parse_poly(quotient_poly, A);
                report["quotient"] = print_poly(f);
                report["dims"] = hilbert_to_json(quotient_hilbert_window(A, f, window));
            }
        } else if (app.got_subcommand(c_dual)) {
            NMF phi = nmf_from_json(read_json_file(input_path), window);
            DualNMF dual = nmf_dual(phi, window);
            report["command"] = "dual";
            report["window"] = window;
            report["ok"] = true;
            report["nmf"] = nmf_to_json(dual.nmf);
        } else if (app.got_subcommand(c_reduce)) {
            NMF phi = nmf_from_json(read_json_file(input_path), window);
            ReduceResult r = nmf_reduce(phi);
            report["command"] = "reduce";
            report["window"] = window;
            report["ok"] = true;
            report["rank"] = r.reduced.rank();
            Json summands = Json::array();
            for (const auto& s : r.summands) summands.push_back(cli_detail::summand_to_json(s));
            report["summands"] = summands;
            report["nmf"] = nmf_to_json(r.reduced);
        } else if (app.got_subcommand(c_ext1)) {
            Json j = read_json_file(input_path);
            FieldSpec field = field_from_json(j.at("field"));
            int n = j.at("n").get<int>();
            AlgebraPtr P =
                make_skew_algebra(field, n, constant_alpha(field, n, -FieldElem::one(field)));
            Point p = point_from_json(field, j.at("p"));
            Point q = point_from_json(field, j.at("q"));
            report["command"] = "ext1";
            report["window"] = window;
            report["dim"] = point_ext1_dim(P, p, q, window);
        }
    } catch (const InputError& e) {
        Json err;
        err["error"] = e.what();
        return {2, cli_detail::render(err, text)};
    } catch (const DomainError& e) {
        Json err;
        err["ok"] = false;
        err["error"] = e.what();
        return {1, cli_detail::render(err, text)};
    } catch (const nlohmann::json::exception& e) {
        Json err;
        err["error"] = std::string("malformed JSON: ") + e.what();
        return {2, cli_detail::render(err, text)};
    }

    return {code, cli_detail::render(report, text)};
}

} // namespace ncmf
