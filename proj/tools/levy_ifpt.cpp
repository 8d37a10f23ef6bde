// levy-ifpt: command-line front end for the inverse first-passage-time
// library. Subcommands print machine-readable JSON (or CSV where noted) on
// stdout; diagnostics go to stderr. Exit codes: 0 success, 2 validation
// error, 3 numerical failure.

#include "levyifpt/cva.hpp"
#include "levyifpt/errors.hpp"
#include "levyifpt/ifpt.hpp"
#include "levyifpt/jsonio.hpp"
#include "levyifpt/mc.hpp"
#include "levyifpt/qid.hpp"
#include "levyifpt/spectral.hpp"
#include "levyifpt/wiener_hopf.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

using nlohmann::json;
using namespace levyifpt;

namespace {

json complex_json(Complex z) {
    if (std::abs(z.imag()) < 1e-12 * (1.0 + std::abs(z.real()))) return json(z.real());
    return json{{"re", z.real()}, {"im", z.imag()}};
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ValidationError("cannot write output file: " + out_path);
    f << text << "\n";
}

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json qid_json(const QuasiInvariantDist& dist) {
    json out{{"lambda", dist.lambda()}, {"lambda_star", dist.lambda_star()}};
    if (dist.all_real()) {
        out["rates"] = dist.real_rates();
        out["weights"] = dist.real_weights();
    } else {
        json rates = json::array(), weights = json::array();
        for (const auto& t : dist.terms()) {
            rates.push_back(complex_json(t.rate));
            weights.push_back(complex_json(t.weight));
        }
        out["rates"] = rates;
        out["weights"] = weights;
    }
    return out;
}

void write_density_csv(const QuasiInvariantDist& dist, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write CSV file: " + path);
    f << "x,density,cdf\n";
    double min_rate = std::numeric_limits<double>::infinity();
    for (const auto& t : dist.terms()) min_rate = std::min(min_rate, t.rate.real());
    const double x_hi = std::log(1e10) / min_rate;
    const double x_lo = 1e-4;
    const double ratio = std::pow(x_hi / x_lo, 1.0 / 2047.0);
    double x = x_lo;
    for (int i = 0; i < 2048; ++i, x *= ratio)
        f << csv_number(x) << "," << csv_number(dist.density(x)) << ","
          << csv_number(dist.cdf(x)) << "\n";
}

double resolve_lambda(const LevyModel& model, double lam, double lam_frac) {
    if (lam > 0.0) return lam;
    if (lam_frac > 0.0) return lam_frac * compute_spectral(model).lambda_star;
    throw ValidationError("provide --lambda or --lambda-frac");
}

int run(int argc, char** argv) {
    CLI::App app{"Randomized inverse first-passage times for Levy processes"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "Write machine output to a file instead of stdout");

    // roots
    auto* roots_cmd = app.add_subcommand("roots", "Classified Cramer-Lundberg roots");
    std::string roots_model;
    double roots_q = 0.0;
    roots_cmd->add_option("--model", roots_model, "Model JSON file")->required();
    roots_cmd->add_option("--q", roots_q, "Level q")->required();

    // wh
    auto* wh_cmd = app.add_subcommand("wh", "Wiener-Hopf factors at (q, theta)");
    std::string wh_model;
    double wh_q = 0.0, wh_theta = 0.0;
    wh_cmd->add_option("--model", wh_model, "Model JSON file")->required();
    wh_cmd->add_option("--q", wh_q, "Level q")->required();
    wh_cmd->add_option("--theta", wh_theta, "Transform argument theta")->required();

    // qid
    auto* qid_cmd = app.add_subcommand("qid", "Quasi-invariant initial distribution");
    std::string qid_model, qid_csv;
    double qid_lambda = 0.0, qid_frac = 0.0;
    qid_cmd->add_option("--model", qid_model, "Model JSON file")->required();
    qid_cmd->add_option("--lambda", qid_lambda, "Killing rate lambda");
    qid_cmd->add_option("--lambda-frac", qid_frac, "Lambda as a fraction of lambda*");
    qid_cmd->add_option("--density-csv", qid_csv, "Optional x,density,cdf CSV output path");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve the RIFPT problem for a curve");
    std::string solve_model, solve_curve, solve_tc_csv;
    double solve_lambda = 0.0, solve_norm = 0.0;
    solve_cmd->add_option("--model", solve_model, "Model JSON file")->required();
    solve_cmd->add_option("--curve", solve_curve, "Curve JSON file")->required();
    solve_cmd->add_option("--lambda", solve_lambda, "Explicit killing rate");
    solve_cmd->add_option("--normalize", solve_norm, "Normalize so that I(T) = T");
    solve_cmd->add_option("--timechange-csv", solve_tc_csv, "Optional t,I CSV output path");

    // validate
    auto* val_cmd = app.add_subcommand("validate", "Monte Carlo check of the solved curve");
    std::string val_model, val_curve;
    double val_lambda = 0.0, val_norm = 0.0;
    std::uint64_t val_paths = 100000, val_seed = 42;
    int val_grid = 20;
    val_cmd->add_option("--model", val_model, "Model JSON file")->required();
    val_cmd->add_option("--curve", val_curve, "Curve JSON file")->required();
    val_cmd->add_option("--lambda", val_lambda, "Explicit killing rate");
    val_cmd->add_option("--normalize", val_norm, "Normalize so that I(T) = T");
    val_cmd->add_option("--paths", val_paths, "Path count");
    val_cmd->add_option("--seed", val_seed, "RNG seed");
    val_cmd->add_option("--grid", val_grid, "Survival grid size");

    // frailty
    auto* fr_cmd = app.add_subcommand("frailty", "Multivariate frailty construction");
    std::string fr_spec;
    std::uint64_t fr_paths = 0, fr_seed = 42;
    int fr_grid = 5;
    double fr_horizon = 0.0;
    fr_cmd->add_option("--spec", fr_spec, "Frailty spec JSON file")->required();
    fr_cmd->add_option("--paths", fr_paths, "Monte Carlo paths (0 disables the check)");
    fr_cmd->add_option("--seed", fr_seed, "RNG seed");
    fr_cmd->add_option("--grid", fr_grid, "Joint survival grid per axis");
    fr_cmd->add_option("--horizon", fr_horizon, "Grid horizon (default: min curve horizon)");

    // cva
    auto* cva_cmd = app.add_subcommand("cva", "Vulnerable-call counterparty valuation");
    std::string cva_spec_path;
    std::uint64_t cva_paths = 1000000, cva_seed = 42;
    bool cva_mc_check = false;
    cva_cmd->add_option("--spec", cva_spec_path, "CVA spec JSON file")->required();
    cva_cmd->add_option("--paths", cva_paths, "Monte Carlo paths for --mc-check");
    cva_cmd->add_flag("--mc-check", cva_mc_check, "Also run the joint Monte Carlo estimate");
    cva_cmd->add_option("--seed", cva_seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (roots_cmd->parsed()) {
        const LevyModel model = load_model(roots_model);
        const RootSet rs = cramer_lundberg_roots(model, Complex(roots_q));
        json plus = json::array(), minus = json::array();
        for (const auto& r : rs.plus_roots) plus.push_back(complex_json(r));
        for (const auto& r : rs.minus_roots) minus.push_back(complex_json(r));
        json out{{"q", roots_q}, {"plus", plus}, {"minus", minus}};
        if (rs.phi_bar) out["phi_bar"] = *rs.phi_bar;
        emit(dump_json17(out), out_path);
    } else if (wh_cmd->parsed()) {
        const LevyModel model = load_model(wh_model);
        const RootSet rs = cramer_lundberg_roots(model, Complex(wh_q));
        json out{{"q", wh_q},
                 {"theta", wh_theta},
                 {"psi_plus", complex_json(wh_plus(model, rs, Complex(wh_theta)).value)},
                 {"psi_minus", complex_json(wh_minus(model, rs, Complex(wh_theta)).value)}};
        emit(dump_json17(out), out_path);
    } else if (qid_cmd->parsed()) {
        const LevyModel model = load_model(qid_model);
        const double lam = resolve_lambda(model, qid_lambda, qid_frac);
        const QuasiInvariantDist dist = build_qid(model, lam);
        if (!qid_csv.empty()) write_density_csv(dist, qid_csv);
        emit(dump_json17(qid_json(dist)), out_path);
    } else if (solve_cmd->parsed()) {
        const LevyModel model = load_model(solve_model);
        const SurvivalCurve curve = load_curve(solve_curve);
        const RifptSolution sol = solve_norm > 0.0
                                      ? solve_rifpt_normalized(model, curve, solve_norm)
                                      : solve_rifpt(model, curve,
                                                    resolve_lambda(model, solve_lambda, 0.0));
        if (!solve_tc_csv.empty()) {
            std::ofstream f(solve_tc_csv, std::ios::binary);
            if (!f) throw ValidationError("cannot write CSV file: " + solve_tc_csv);
            f << "t,I\n";
            for (int i = 0; i <= 200; ++i) {
                const double t = curve.horizon() * static_cast<double>(i) / 200.0;
                f << csv_number(t) << "," << csv_number(sol.time_change(t)) << "\n";
            }
        }
        json out{{"lambda", sol.lam},
                 {"lambda_star", sol.dist.lambda_star()},
                 {"qid", qid_json(sol.dist)}};
        if (!solve_tc_csv.empty()) out["timechange_csv"] = solve_tc_csv;
        emit(dump_json17(out), out_path);
    } else if (val_cmd->parsed()) {
        const LevyModel model = load_model(val_model);
        const SurvivalCurve curve = load_curve(val_curve);
        const RifptSolution sol = val_norm > 0.0
                                      ? solve_rifpt_normalized(model, curve, val_norm)
                                      : solve_rifpt(model, curve,
                                                    resolve_lambda(model, val_lambda, 0.0));
        McParams params;
        params.paths = val_paths;
        params.seed = val_seed;
        params.horizon = curve.horizon();
        const auto samples = simulate_time_changed_fp(sol, params);
        std::vector<double> taus;
        taus.reserve(samples.size());
        for (const auto& s : samples) taus.push_back(s.tau);
        std::vector<double> grid;
        for (int i = 1; i <= val_grid; ++i)
            grid.push_back(curve.horizon() * static_cast<double>(i) /
                           static_cast<double>(val_grid));
        std::string csv = "t,target_survival,mc_survival,se\n";
        for (const auto& pt : survival_grid(taus, grid))
            csv += csv_number(pt.t) + "," + csv_number(curve.survival(pt.t)) + "," +
                   csv_number(pt.survival) + "," + csv_number(pt.se) + "\n";
        csv.pop_back();
        emit(csv, out_path);
    } else if (fr_cmd->parsed()) {
        const FrailtySpec spec = load_frailty(fr_spec);
        const FrailtySolution sol = solve_frailty(spec);
        double horizon = fr_horizon;
        if (!(horizon > 0.0)) {
            horizon = std::numeric_limits<double>::infinity();
            for (const auto& st : spec.states)
                for (const auto& nm : st.names) horizon = std::min(horizon, nm.curve.horizon());
        }
        json axes = json::array(), surv = json::array();
        std::vector<double> ticks;
        for (int i = 1; i <= fr_grid; ++i)
            ticks.push_back(horizon * static_cast<double>(i) / static_cast<double>(fr_grid));
        for (double t : ticks) axes.push_back(t);
        const std::size_t d = spec.dimension();
        if (d == 2) {
            for (double t1 : ticks) {
                json row = json::array();
                for (double t2 : ticks) row.push_back(sol.joint_survival({t1, t2}));
                surv.push_back(row);
            }
        } else {
            for (double t : ticks) surv.push_back(sol.joint_survival(std::vector<double>(d, t)));
        }
        json out{{"dimension", d}, {"grid", axes}, {"joint_survival", surv}};
        if (fr_paths > 0) {
            McParams params;
            params.paths = fr_paths;
            params.seed = fr_seed;
            params.horizon = horizon;
            const auto sims = simulate_frailty(sol, params);
            json mc = json::array();
            if (d == 2) {
                for (double t1 : ticks) {
                    json row = json::array();
                    for (double t2 : ticks) {
                        std::size_t alive = 0;
                        for (const auto& pair : sims)
                            if (pair[0] > t1 && pair[1] > t2) ++alive;
                        row.push_back(static_cast<double>(alive) /
                                      static_cast<double>(sims.size()));
                    }
                    mc.push_back(row);
                }
            } else {
                for (double t : ticks) {
                    std::size_t alive = 0;
                    for (const auto& v : sims) {
                        bool all = true;
                        for (double tau : v) all = all && tau > t;
                        if (all) ++alive;
                    }
                    mc.push_back(static_cast<double>(alive) / static_cast<double>(sims.size()));
                }
            }
            out["mc_survival"] = mc;
            out["paths"] = fr_paths;
        }
        emit(dump_json17(out), out_path);
    } else if (cva_cmd->parsed()) {
        const CvaSpec spec = load_cva_spec(cva_spec_path);
        const CvaPricer pricer(spec);
        const CvaResult res = pricer.value();
        json curve_json = json::array();
        for (const auto& pt : res.exposure_curve)
            curve_json.push_back({{"t", pt.t}, {"value", pt.value}});
        json out{{"pi", res.pi},
                 {"lambda0", pricer.lambda0()},
                 {"exposure_curve", curve_json},
                 {"diagnostics",
                  {{"fourier_tail_ratio", res.diagnostics.fourier_tail_ratio},
                   {"negative_clip", res.diagnostics.negative_clip},
                   {"origin_strip_bound", res.diagnostics.origin_strip_bound}}}};
        if (cva_mc_check) {
            const CvaMcResult mc = pricer.value_mc(cva_paths, cva_seed);
            out["mc"] = {{"pi", mc.pi}, {"se", mc.se}, {"paths", cva_paths}};
        }
        emit(dump_json17(out), out_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
