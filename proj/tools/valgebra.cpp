// valgebra: mixed volumes, valuation convolution, norms, dynamical degrees
// and the variational Minkowski solver on polytopes, over float or exact
// rational coordinates.

#include "valgebra/valgebra.hpp"
#include "valgebra/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace valgebra;

namespace {

constexpr int kExitBadInput = 2;      // malformed JSON / unreadable files
constexpr int kExitPrecondition = 3;  // operation preconditions violated
constexpr int kExitNonConverged = 4;  // solver gave up; partial artifact written

struct GlobalOpts {
    std::string mode = "float";
    std::string conv_mode = "unit";
    std::string config_path;
    json config; // optional JSON mirror of the flags
};

ConvMode parse_conv_mode(const std::string& s) {
    if (s == "unit") return ConvMode::UnitNormalized;
    if (s == "paper") return ConvMode::PaperLiteral;
    throw std::invalid_argument("conv-mode must be 'unit' or 'paper'");
}

// config file values fill in options the command line left untouched
template <class T>
void merge_config(const json& cfg, const CLI::Option* opt, const std::string& key, T& value) {
    if (opt != nullptr && opt->count() > 0) return;
    if (!cfg.contains(key)) return;
    value = cfg.at(key).get<T>();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

RunStamp make_stamp(const GlobalOpts& g, const std::string& ref_id) {
    return RunStamp{ref_id, g.mode, g.conv_mode};
}

// ---------------------------------------------------------------------------
// per-command drivers, templated over the arithmetic mode
// ---------------------------------------------------------------------------

template <class S>
int run_mixed_volume(const GlobalOpts& g, const std::string& bodies_list, const std::string& out_path) {
    std::vector<Polytope<S>> bodies;
    for (const auto& path : split_list(bodies_list)) bodies.push_back(body_from_json<S>(read_json_file(path)));
    S v = mixed_volume(bodies);
    std::cout << (scalar_traits<S>::exact ? scalar_traits<S>::to_string(v) : format_double(to_double(v))) << "\n";
    if (!out_path.empty()) {
        json out{{"mixed_volume", scalar_to_json(v)}, {"stamp", stamp_to_json(make_stamp(g, "none"))}};
        write_text_file(out_path, out.dump(2) + "\n");
    }
    return 0;
}

template <class S>
int run_convolve(const GlobalOpts& g, const std::string& a_path, const std::string& b_path,
                 const std::string& out_path) {
    Valuation<S> a = valuation_from_json<S>(read_json_file(a_path));
    Valuation<S> b = valuation_from_json<S>(read_json_file(b_path));
    Valuation<S> c = convolve(a, b, parse_conv_mode(g.conv_mode));
    json out{{"valuation", valuation_to_json(c)}, {"stamp", stamp_to_json(make_stamp(g, "none"))}};
    if (c.degree() == 0) out["scalar"] = scalar_to_json(c.scalar_value());
    if (out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        write_text_file(out_path, out.dump(2) + "\n");
    return 0;
}

template <class S>
int run_norms(const GlobalOpts& g, const std::string& val_path, int ball_res, int samples, std::uint64_t seed,
              const std::string& out_path) {
    Valuation<S> phi = valuation_from_json<S>(read_json_file(val_path));
    auto ref = ball_polytope<S>(phi.dim(), ball_res);
    S cn = cone_norm(phi, ref);
    json out{{"cone_norm", scalar_to_json(cn)}, {"stamp", stamp_to_json(make_stamp(g, ref.id))}};
    if (phi.degree() >= 1) {
        Rng rng(seed);
        auto pn = p_norm_estimate(phi, ref, samples, rng);
        out["p_norm_lower_bound"] = scalar_to_json(pn.lower_bound);
        out["p_norm_samples"] = pn.samples_used;
        json tuple = json::array();
        for (const auto& b : pn.argmax) tuple.push_back(body_to_json(b));
        out["p_norm_argmax"] = tuple;
    }
    if (out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        write_text_file(out_path, out.dump(2) + "\n");
    return 0;
}

template <class S>
int run_dyndeg(const GlobalOpts& g, const std::string& matrix_path, int codeg, int kmax,
               const std::string& body_path, int ball_res, const std::string& out_path) {
    LinearMap<S> map = matrix_from_json<S>(read_json_file(matrix_path));
    Polytope<S> body = Polytope<S>::unit_cube(map.dim());
    std::string ref_id;
    if (!body_path.empty()) {
        body = body_from_json<S>(read_json_file(body_path));
        ref_id = "file:" + body_path;
    } else {
        auto ref = ball_polytope<S>(map.dim(), ball_res);
        body = ref.body;
        ref_id = ref.id;
    }
    auto rep = dynamical_degree_empirical(map, codeg, body, kmax, ref_id);
    std::string csv = degree_report_csv(rep, make_stamp(g, ref_id));
    if (out_path.empty())
        std::cout << csv;
    else
        write_text_file(out_path, csv);
    return 0;
}

template <class S>
int run_invariants(const GlobalOpts& g, const std::string& matrix_path, int codeg, int disk_res,
                   std::uint64_t seed, const std::string& out_path) {
    LinearMap<S> map = matrix_from_json<S>(read_json_file(matrix_path));
    Rng rng(seed);
    auto inv = invariant_valuation<S>(map, codeg, disk_res, rng);
    json out{{"valuation", valuation_to_json(inv.phi)},
             {"eigenvalue", inv.d},
             {"residual", inv.residual},
             {"rotation_take", inv.has_rotation_take},
             {"disk_resolution", inv.disk_resolution},
             {"stamp", stamp_to_json(make_stamp(g, "none"))}};
    if (out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        write_text_file(out_path, out.dump(2) + "\n");
    return 0;
}

template <class S>
int run_vanishing(const GlobalOpts& g, const std::string& matrix_path, int i, int s, int ball_res, int disk_res,
                  std::uint64_t seed, const std::string& out_path) {
    LinearMap<S> map = matrix_from_json<S>(read_json_file(matrix_path));
    auto ref = ball_polytope<S>(map.dim(), ball_res);
    Rng rng(seed);
    auto v = vanishing_check<S>(map, i, s, ref, disk_res, rng);
    json out{{"scalar", scalar_to_json(v.scalar)},
             {"margin", v.margin},
             {"residual_1", v.residual_1},
             {"residual_2", v.residual_2},
             {"stamp", stamp_to_json(make_stamp(g, ref.id))}};
    std::cout << format_double(to_double(v.scalar)) << "\n";
    if (!out_path.empty()) write_text_file(out_path, out.dump(2) + "\n");
    return 0;
}

int run_minkowski(const GlobalOpts& g, const std::string& val_path, int fan, int starts, std::uint64_t seed,
                  int ball_res, const std::string& out_path) {
    Valuation<double> psi = valuation_from_json<double>(read_json_file(val_path));
    auto ref = ball_polytope<double>(psi.dim(), ball_res);
    Rng rng(seed);
    auto cert = certify_strict_positivity(psi, ref, 40, rng);
    SolverConfig cfg;
    cfg.fan_resolution = fan;
    cfg.multistart = starts;
    cfg.seed = seed;
    MinkowskiSolution sol = variational_minimize(cert, ref, cfg);

    Rng rng2(seed + 1);
    std::vector<Polytope<double>> tests;
    for (int t = 0; t < 20; ++t) tests.push_back(random_body<double>(rng2, psi.dim(), psi.dim() + 3));
    auto [min_gap, eq_gap] = stationarity_residual(psi, sol.body, tests);

    json trace = json::array();
    for (const auto& row : sol.trace)
        trace.push_back(json{{"iter", row.iter},
                             {"objective", row.objective},
                             {"volume", row.volume},
                             {"step", row.step}});
    json out{{"body", body_to_json(sol.body)},
             {"c", sol.c},
             {"min_gap", min_gap},
             {"eq_gap", eq_gap},
             {"converged", sol.converged},
             {"trace", trace},
             {"stamp", stamp_to_json(make_stamp(g, ref.id))}};
    if (starts > 1) {
        auto ms = multistart_solution_set(cert, ref, cfg);
        out["multistart_diameter"] = ms.diameter;
        json sols = json::array();
        for (const auto& b : ms.solutions) sols.push_back(body_to_json(b));
        out["multistart_solutions"] = sols;
    }
    if (out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        write_text_file(out_path, out.dump(2) + "\n");
    return sol.converged ? 0 : kExitNonConverged;
}

int run_verify(const GlobalOpts& g, std::uint64_t seed, const std::string& dims_str, const std::string& out_path) {
    std::vector<int> dims;
    for (const auto& d : split_list(dims_str)) dims.push_back(std::stoi(d));
    if (dims.empty()) dims = {2, 3};
    VerifyResult res = run_verify_suite(seed, dims, parse_conv_mode(g.conv_mode));
    std::string header = "# seed=" + std::to_string(seed) + " mode=" + g.mode + " conv_mode=" + g.conv_mode + "\n";
    std::string report = header + res.report;
    if (out_path.empty())
        std::cout << report;
    else
        write_text_file(out_path, report);
    return res.all_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"valgebra: computing with translation-invariant valuations on polytopes"};
    app.require_subcommand(1);

    GlobalOpts g;
    auto* mode_opt = app.add_option("--mode", g.mode, "arithmetic mode: float or rational")
                         ->check(CLI::IsMember({"float", "rational"}));
    auto* conv_opt = app.add_option("--conv-mode", g.conv_mode, "convolution coefficient: unit or paper")
                         ->check(CLI::IsMember({"unit", "paper"}));
    app.add_option("--config", g.config_path, "JSON config file mirroring the flags");

    std::string bodies_list, a_path, b_path, val_path, matrix_path, body_path, out_path, dims_str = "2,3";
    int codeg = 1, kmax = 30, ball_res = 16, disk_res = 64, fan = 64, starts = 1, van_i = 1, van_s = 1;
    int samples = 200;
    std::uint64_t seed = 1;

    auto* c_mv = app.add_subcommand("mixed-volume", "mixed volume of n bodies in dimension n");
    c_mv->add_option("--bodies", bodies_list, "comma-separated body JSON files")->required();
    c_mv->add_option("--out", out_path, "JSON output path");

    auto* c_conv = app.add_subcommand("convolve", "convolution of two valuations");
    c_conv->add_option("--a", a_path, "first valuation JSON")->required();
    c_conv->add_option("--b", b_path, "second valuation JSON")->required();
    c_conv->add_option("--out", out_path, "JSON output path");

    auto* c_norms = app.add_subcommand("norms", "cone norm and P-norm lower bound of a valuation");
    c_norms->add_option("--valuation", val_path, "valuation JSON")->required();
    c_norms->add_option("--ball-res", ball_res, "reference ball resolution");
    c_norms->add_option("--samples", samples, "sampling budget for the P-norm");
    c_norms->add_option("--seed", seed, "sampling seed");
    c_norms->add_option("--out", out_path, "JSON output path");

    auto* c_dyn = app.add_subcommand("dyndeg", "empirical and spectral dynamical degrees");
    c_dyn->add_option("--matrix", matrix_path, "matrix JSON")->required();
    c_dyn->add_option("--codeg", codeg, "codegree n-i")->required();
    c_dyn->add_option("--kmax", kmax, "largest exponent");
    c_dyn->add_option("--body", body_path, "reference body JSON (default: ball polytope)");
    c_dyn->add_option("--ball-res", ball_res, "reference ball resolution");
    c_dyn->add_option("--out", out_path, "CSV output path");

    auto* c_inv = app.add_subcommand("invariants", "invariant valuation for the top eigenvalue moduli");
    c_inv->add_option("--matrix", matrix_path, "matrix JSON")->required();
    c_inv->add_option("--codeg", codeg, "degree of the invariant valuation")->required();
    c_inv->add_option("--disk-res", disk_res, "rotation-block polygon resolution");
    c_inv->add_option("--seed", seed, "residual sampling seed");
    c_inv->add_option("--out", out_path, "JSON output path");

    auto* c_van = app.add_subcommand("vanishing", "vanishing scalar psi1 * psi2 * phi_B");
    c_van->add_option("--matrix", matrix_path, "matrix JSON")->required();
    c_van->add_option("--i", van_i, "degree index i (2i <= n)")->required();
    c_van->add_option("--s", van_s, "strictness shift s");
    c_van->add_option("--ball-res", ball_res, "reference ball resolution");
    c_van->add_option("--disk-res", disk_res, "rotation-block polygon resolution");
    c_van->add_option("--seed", seed, "sampling seed");
    c_van->add_option("--out", out_path, "JSON output path");

    auto* c_mink = app.add_subcommand("minkowski", "variational Minkowski solver");
    c_mink->add_option("--valuation", val_path, "strictly positive valuation JSON")->required();
    c_mink->add_option("--fan", fan, "number of fan directions");
    c_mink->add_option("--starts", starts, "multistart count");
    c_mink->add_option("--seed", seed, "start seed");
    c_mink->add_option("--ball-res", ball_res, "reference ball resolution");
    c_mink->add_option("--out", out_path, "solution JSON path");

    auto* c_ver = app.add_subcommand("verify-suite", "seeded invariant battery with margins report");
    c_ver->add_option("--seed", seed, "battery seed");
    c_ver->add_option("--dims", dims_str, "comma-separated dimensions");
    c_ver->add_option("--out", out_path, "report output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!g.config_path.empty()) {
            g.config = read_json_file(g.config_path);
            merge_config(g.config, mode_opt, "mode", g.mode);
            merge_config(g.config, conv_opt, "conv-mode", g.conv_mode);
        }
        bool exact = (g.mode == "rational");

        if (*c_mv)
            return exact ? run_mixed_volume<Rational>(g, bodies_list, out_path)
                         : run_mixed_volume<double>(g, bodies_list, out_path);
        if (*c_conv)
            return exact ? run_convolve<Rational>(g, a_path, b_path, out_path)
                         : run_convolve<double>(g, a_path, b_path, out_path);
        if (*c_norms)
            return exact ? run_norms<Rational>(g, val_path, ball_res, samples, seed, out_path)
                         : run_norms<double>(g, val_path, ball_res, samples, seed, out_path);
        if (*c_dyn)
            return exact ? run_dyndeg<Rational>(g, matrix_path, codeg, kmax, body_path, ball_res, out_path)
                         : run_dyndeg<double>(g, matrix_path, codeg, kmax, body_path, ball_res, out_path);
        if (*c_inv)
            return exact ? run_invariants<Rational>(g, matrix_path, codeg, disk_res, seed, out_path)
                         : run_invariants<double>(g, matrix_path, codeg, disk_res, seed, out_path);
        if (*c_van)
            return exact ? run_vanishing<Rational>(g, matrix_path, van_i, van_s, ball_res, disk_res, seed, out_path)
                         : run_vanishing<double>(g, matrix_path, van_i, van_s, ball_res, disk_res, seed, out_path);
        if (*c_mink) {
            if (exact) throw std::invalid_argument("the variational solver runs in float mode only");
            return run_minkowski(g, val_path, fan, starts, seed, ball_res, out_path);
        }
        if (*c_ver) return run_verify(g, seed, dims_str, out_path);
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::domain_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return 0;
}
