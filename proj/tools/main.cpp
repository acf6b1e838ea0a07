// fractrace command line: fractional-calculus operators, weighted norms,
// fundamental-solution diagnostics, IVP solvers, and the inequality harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fractrace/config.hpp"
#include "fractrace/frac_calculus.hpp"
#include "fractrace/function_spaces.hpp"
#include "fractrace/fundamental_solution.hpp"
#include "fractrace/ivp_solver.hpp"
#include "fractrace/mittag_leffler.hpp"
#include "fractrace/report.hpp"
#include "fractrace/verify.hpp"

using namespace fractrace;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParam = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitAssertion = 4;

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CommonOpts {
    std::string config_path;
    std::string report_path;
    std::string csv_path;
    std::vector<std::string> sets; // key=value overrides
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "key = value configuration file");
    cmd->add_option("--report", c.report_path, "JSON report output path");
    cmd->add_option("--csv", c.csv_path, "CSV table output path");
    cmd->add_option("--set", c.sets, "override: key=value (repeatable)")->take_all();
}

RunConfig resolve_config(const CommonOpts& c) {
    RunConfig cfg;
    if (!c.config_path.empty()) cfg = parse_config_file(c.config_path);
    for (const std::string& kv : c.sets) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos) throw param_error("--set expects key=value, got " + kv);
        apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
    cfg.validate();
    return cfg;
}

void emit(const CommonOpts& c, const RunConfig& cfg, const std::string& command,
          const ordered_json& results) {
    std::string text = make_run_report(command, cfg.echo(), results.dump());
    if (c.report_path.empty())
        std::cout << text << "\n";
    else
        write_text_file(c.report_path, text);
}

void emit_csv(const CommonOpts& c, const std::string& csv) {
    if (!c.csv_path.empty()) write_text_file(c.csv_path, csv);
}

ordered_json report_json(const InequalityReport& rep) {
    return ordered_json::parse(report_to_json(rep));
}

// time series CSV: optional "t,value" header then rows
std::pair<std::vector<double>, std::vector<double>> read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw param_error("cannot open time series " + path);
    std::vector<double> t, v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("t,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
            throw param_error("malformed series row: " + line);
        t.push_back(std::stod(a));
        v.push_back(std::stod(b));
    }
    return {t, v};
}

std::string series_csv(const std::vector<double>& t, const std::vector<double>& v) {
    std::string out = "t,value\n";
    char buf[96];
    for (size_t i = 0; i < t.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t[i], v[i]);
        out += buf;
    }
    return out;
}

std::vector<cd> resolve_u0(const RunConfig& cfg, const std::string& preset,
                           const std::string& file, const SpaceGrid& g) {
    if (!file.empty()) {
        SampledField f = load_field(file);
        if (!(f.sgrid == g)) throw param_error("field file grid does not match configuration");
        auto s = f.slice(0);
        return std::vector<cd>(s.begin(), s.end());
    }
    if (preset == "gaussian") return preset_gaussian(g, cfg.extra_num("sigma", 1.0));
    if (preset == "single-mode") return preset_single_mode(g, int(cfg.extra_num("mode", 1)));
    if (preset == "random-bandlimited")
        return preset_random_annulus(g, cfg.seed, cfg.extra_num("band_lo", 1.0),
                                     cfg.extra_num("band_hi", 4.0));
    throw param_error("unknown preset '" + preset +
                      "' (gaussian | single-mode | random-bandlimited)");
}

// ---------------------------------------------------------------------------
// subcommand runners
// ---------------------------------------------------------------------------

int run_ml(const CommonOpts& copts, double beta, double c, double v, double delta, double vswitch,
           int sweep_count, double sweep_to) {
    RunConfig cfg = resolve_config(copts);
    MittagLefflerParams p;
    p.beta = beta;
    p.c = c;
    if (delta > 0.0) p.delta = delta;
    if (vswitch >= 0.0) p.v_switch = vswitch;
    p.validate();

    ordered_json results;
    if (sweep_count > 1) {
        std::string csv = "v,value\n";
        for (int i = 0; i < sweep_count; ++i) {
            double vi = v + (sweep_to - v) * i / (sweep_count - 1);
            double val = ml_eval(p, vi);
            csv += num17(vi) + "," + num17(val) + "\n";
        }
        emit_csv(copts, csv);
        if (copts.csv_path.empty()) std::cout << csv;
        results["sweep_points"] = sweep_count;
    } else {
        double val = ml_eval(p, v);
        const char* branch =
            (v <= p.v_switch && ml_series_condition(beta, c, v) <= 4.0) ? "series" : "integral";
        std::printf("%.10g  (branch: %s)\n", val, branch);
        results["value"] = num17(val);
        results["branch"] = branch;
    }
    emit(copts, cfg, "ml eval", results);
    return kExitOk;
}

int run_frac(const CommonOpts& copts, const std::string& op, const std::string& input) {
    RunConfig cfg = resolve_config(copts);
    std::vector<double> t, v;
    if (!input.empty()) {
        std::tie(t, v) = read_series(input);
    } else {
        throw param_error("frac: --input series.csv is required");
    }
    ordered_json results;
    results["nodes"] = t.size();
    if (op == "hardy") {
        double ratio = hardy_ratio(t, v, cfg.alpha, cfg.q, cfg.mu);
        results["hardy_ratio"] = num17(ratio);
        std::printf("hardy ratio = %.10g\n", ratio);
        emit(copts, cfg, "frac hardy", results);
        return kExitOk;
    }
    std::vector<double> out;
    if (op == "ialpha") out = rl_integral(t, v, cfg.alpha);
    else if (op == "caputo") out = caputo_derivative(t, v, v.front(), cfg.alpha);
    else if (op == "marchaud") out = marchaud_derivative(t, v, v.front(), cfg.alpha);
    else throw param_error("frac: unknown operator " + op);
    std::string csv = series_csv(t, out);
    emit_csv(copts, csv);
    if (copts.csv_path.empty()) std::cout << csv;
    emit(copts, cfg, "frac " + op, results);
    return kExitOk;
}

int run_norm(const CommonOpts& copts, const std::string& which, const std::string& preset,
             const std::string& field_file, double s, double eps) {
    RunConfig cfg = resolve_config(copts);
    SpaceGrid g = cfg.space_grid();
    ordered_json results;
    if (which == "mixed") {
        if (field_file.empty()) throw param_error("norm mixed: --field file required");
        SampledField f = load_field(field_file);
        double val = mixed_norm(f, cfg.p, cfg.q, cfg.weight());
        results["mixed_norm"] = num17(val);
        std::printf("mixed norm = %.10g\n", val);
        emit(copts, cfg, "norm mixed", results);
        return kExitOk;
    }
    std::vector<cd> f = resolve_u0(cfg, preset, field_file, g);
    double val = 0.0;
    ordered_json shells = ordered_json::array();
    if (which == "besov") {
        LPFamily fam = build_lp_family(g);
        BesovParams bp;
        bp.s = s;
        bp.p = cfg.p;
        bp.q = cfg.q;
        bp.w = cfg.weight();
        val = besov_norm(f, bp, fam);
        // per-shell contributions for debugging
        std::vector<cd> spec = dft_forward(f, g);
        shells.push_back(
            ordered_json{{"shell", 0},
                         {"norm", num17(spatial_lp_norm(lp_project(fam, spec, 0), g, cfg.p, cfg.nu))}});
        for (int j = 1; j <= fam.j_max; ++j)
            shells.push_back(ordered_json{
                {"shell", j},
                {"norm", num17(spatial_lp_norm(lp_project(fam, spec, j), g, cfg.p, cfg.nu))}});
        results["per_shell"] = shells;
    } else if (which == "sobolev") {
        val = sobolev_norm(f, g, s, cfg.p, cfg.nu);
    } else if (which == "bdiff") {
        val = besov_norm_differences(f, g, s, cfg.p, cfg.q);
    } else if (which == "kfun") {
        val = k_functional(f, g, eps, cfg.p, cfg.nu);
    } else {
        throw param_error("norm: unknown norm " + which);
    }
    results["value"] = num17(val);
    std::printf("%s norm = %.10g\n", which.c_str(), val);
    emit(copts, cfg, "norm " + which, results);
    return kExitOk;
}

int run_kernel(const CommonOpts& copts, const std::string& which, double beta, double t) {
    RunConfig cfg = resolve_config(copts);
    SpaceGrid g = cfg.space_grid();
    ordered_json results;
    if (which == "build") {
        KernelSpec spec{beta, t, g};
        KernelField kf = kernel_field(spec);
        if (!kf.resolved)
            std::cerr << "warning: symbol tail " << kf.tail
                      << " at |xi|_max exceeds 1e-12 (unresolved multiplier)\n";
        results["mass"] = num17(kernel_mass(kf));
        results["resolved"] = kf.resolved;
        results["tail"] = num17(kf.tail);
        std::string csv = "x,value\n";
        char buf[96];
        for (size_t i = 0; i < kf.values.size(); ++i) {
            auto ijk = g.unflatten(i);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", g.coord(ijk[0]), kf.values[i]);
            csv += buf;
        }
        emit_csv(copts, csv);
    } else if (which == "check-scaling") {
        double err = check_scaling(beta, t, g);
        results["scaling_error"] = num17(err);
        std::printf("scaling error = %.6g\n", err);
    } else if (which == "check-decay") {
        DecayReport rep = check_decay(beta, g);
        results["sigma"] = num17(rep.sigma);
        results["r_squared"] = num17(rep.r_squared);
        results["n_tail"] = num17(rep.n_tail);
        results["n_near"] = num17(rep.n_near);
        std::printf("sigma = %.6g  (R^2 = %.4f)\n", rep.sigma, rep.r_squared);
    } else if (which == "moments") {
        std::vector<double> ts;
        for (double tt = 0.25; tt <= 4.0 + 1e-12; tt *= 2.0) ts.push_back(tt);
        MomentReport rep = moment_slope(beta, g, ts);
        results["slope"] = num17(rep.fit.slope);
        std::string csv = "t,m2\n";
        for (size_t i = 0; i < rep.t.size(); ++i)
            csv += num17(rep.t[i]) + "," + num17(rep.m2[i]) + "\n";
        emit_csv(copts, csv);
        std::printf("second-moment slope = %.6g\n", rep.fit.slope);
    } else {
        throw param_error("kernel: unknown action " + which);
    }
    emit(copts, cfg, "kernel " + which, results);
    return kExitOk;
}

int run_solve(const CommonOpts& copts, const std::string& kind, const std::string& preset,
              const std::string& u0_file, const std::string& u1_preset,
              const std::string& out_field) {
    RunConfig cfg = resolve_config(copts);
    IVPProblem prob;
    prob.order = FracOrder{cfg.alpha, kind == "super" ? 1 : 0};
    prob.tgrid = cfg.time_grid();
    prob.sgrid = cfg.space_grid();
    prob.u0 = resolve_u0(cfg, preset, u0_file, prob.sgrid);
    if (prob.order.k == 1) {
        std::string p1 = u1_preset.empty() ? preset : u1_preset;
        prob.u1 = resolve_u0(cfg, p1, "", prob.sgrid);
    }
    SampledField U = solve_ivp(prob, cfg.threads);
    if (!out_field.empty()) save_field(U, out_field);
    double res = residual(U, prob, cfg.p, cfg.q, cfg.weight(), cfg.threads);
    ordered_json results;
    results["residual"] = num17(res);
    results["field_file"] = out_field;
    std::printf("residual = %.6g\n", res);
    emit(copts, cfg, "solve " + kind, results);
    return kExitOk;
}

int run_verify(const CommonOpts& copts, const std::string& which) {
    RunConfig cfg = resolve_config(copts);
    SpaceGrid sg = cfg.space_grid();
    TimeGrid tg = cfg.time_grid();
    int count = int(cfg.extra_num("count", 10));
    double band_lo = cfg.extra_num("band_lo", 1.0);
    double band_hi = cfg.extra_num("band_hi", 4.0);
    ordered_json results;
    bool pass = true;

    auto mixed_ensemble = [&](const TimeGrid& tgrid) {
        EnsembleSpec spec;
        spec.kind = EnsembleKind::Mixed;
        spec.count = count;
        spec.seed = cfg.seed;
        spec.tgrid = tgrid;
        spec.sgrid = sg;
        spec.order = cfg.order();
        spec.band_lo = band_lo;
        spec.band_hi = band_hi;
        return ensemble_generate(spec, cfg.threads);
    };
    auto data_ensemble = [&]() {
        std::vector<std::vector<cd>> out;
        for (int i = 0; i < count; ++i)
            out.push_back(preset_random_annulus(sg, cfg.seed + 77 * (i + 1), band_lo, band_hi));
        return out;
    };

    if (which == "trace" || which == "trace-div") {
        TraceParams par{cfg.k, int(cfg.extra_num("trace_n", 0)), cfg.alpha, cfg.p, cfg.q, cfg.mu,
                        cfg.nu};
        auto run_on = [&](const TimeGrid& tgrid) {
            auto ens = mixed_ensemble(tgrid);
            return which == "trace" ? trace_constant(par, ens, cfg.threads)
                                    : trace_constant_div(par, ens, cfg.threads);
        };
        InequalityReport coarse = run_on(tg);
        TimeGrid fine(tg.T, tg.M * 2, tg.r);
        InequalityReport finer = run_on(fine);
        finer.drift = refinement_drift(coarse, finer);
        finer.pass = finer.drift <= 0.5;
        pass = finer.pass;
        results["coarse"] = report_json(coarse);
        results["fine"] = report_json(finer);
        emit_csv(copts, report_to_csv(finer));
    } else if (which == "extension") {
        auto u0s = data_ensemble();
        std::vector<std::vector<cd>> u1s;
        if (cfg.k == 1)
            for (int i = 0; i < count; ++i)
                u1s.push_back(preset_random_annulus(sg, cfg.seed + 991 * (i + 1), band_lo, band_hi));
        auto run_on = [&](const TimeGrid& tgrid) {
            return extension_constant(cfg.order(), cfg.p, cfg.q, cfg.weight(), u0s, u1s, tgrid, sg,
                                      SolutionForm::NonDivergence, cfg.threads);
        };
        InequalityReport coarse = run_on(tg);
        TimeGrid fine(tg.T, tg.M * 2, tg.r);
        InequalityReport finer = run_on(fine);
        finer.drift = refinement_drift(coarse, finer);
        finer.pass = finer.drift <= 0.5;
        pass = finer.pass;
        results["coarse"] = report_json(coarse);
        results["fine"] = report_json(finer);
        emit_csv(copts, report_to_csv(finer));
    } else if (which == "decay") {
        double kappa = cfg.extra_num("kappa", 0.5 * (cfg.alpha + (1.0 + cfg.mu) / cfg.q));
        std::vector<double> ts;
        for (double t = std::exp2(-8); t <= 4.0 + 1e-12; t *= 2.0) ts.push_back(t);
        std::vector<cd> f = preset_gaussian(sg, cfg.extra_num("sigma", 1.0));
        InequalityReport rep = kernel_decay_envelope(DecayKernel::Subdiffusion, cfg.alpha, kappa,
                                                     1, 6, ts, f, sg, cfg.p, cfg.nu);
        double slope = rep.stat("slope_j6");
        rep.pass = std::abs(slope + kappa) <= 0.1 && rep.max_ratio < HUGE_VAL;
        rep.set_stat("slope_target", -kappa);
        pass = rep.pass;
        results["report"] = report_json(rep);
        emit_csv(copts, report_to_csv(rep));
    } else if (which == "prop0201") {
        auto run_on = [&](const TimeGrid& tgrid) {
            return mixed_kernel_constant(cfg.alpha, cfg.p, cfg.q, cfg.weight(), data_ensemble(),
                                         tgrid, sg, cfg.threads);
        };
        InequalityReport coarse = run_on(tg);
        TimeGrid fine(tg.T, tg.M * 2, tg.r);
        InequalityReport finer = run_on(fine);
        finer.drift = refinement_drift(coarse, finer);
        finer.pass = finer.drift <= 0.5;
        pass = finer.pass;
        results["coarse"] = report_json(coarse);
        results["fine"] = report_json(finer);
        emit_csv(copts, report_to_csv(finer));
    } else if (which == "counterexample") {
        std::vector<int> ns;
        for (int n = 1; n <= int(cfg.extra_num("n_max", 64)); n *= 2) ns.push_back(n);
        std::vector<cd> bump = preset_gaussian(sg, cfg.extra_num("sigma", 1.0));
        InequalityReport rep =
            subcritical_counterexample(cfg.alpha, cfg.p, cfg.q, cfg.mu, ns, tg, sg, bump);
        rep.pass = rep.stat("ratio_growth") >= 10.0 && rep.stat("caputo_norm_monotone") == 1.0;
        pass = rep.pass;
        results["report"] = report_json(rep);
        emit_csv(copts, report_to_csv(rep));
    } else if (which == "necessity") {
        InequalityReport rep = besov_necessity(cfg.alpha, cfg.p, cfg.q, cfg.mu, 1,
                                               int(cfg.extra_num("j_max", 6)), sg);
        double expect = rep.stat("expected_growth");
        rep.pass = rep.stat("per_level_growth_min") >= 0.95 * expect &&
                   rep.stat("per_level_growth_max") <= 1.05 * expect;
        pass = rep.pass;
        results["report"] = report_json(rep);
        emit_csv(copts, report_to_csv(rep));
    } else {
        throw param_error("verify: unknown check " + which);
    }
    results["pass"] = pass;
    emit(copts, cfg, "verify " + which, results);
    return pass ? kExitOk : kExitAssertion;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional-calculus operators, weighted function-space norms, and "
                 "trace/extension inequality verification"};
    app.require_subcommand(1);

    // ml
    auto* ml = app.add_subcommand("ml", "Mittag-Leffler evaluation");
    auto* ml_eval_cmd = ml->add_subcommand("eval", "evaluate E_{beta,c}(-v)");
    CommonOpts ml_opts;
    double a_beta = 0.5, a_c = 1.0, a_v = 1.0, a_delta = 0.0, a_switch = -1.0, a_sweep_to = 0.0;
    int a_sweep = 0;
    ml_eval_cmd->add_option("--beta", a_beta, "order beta in (0,2]")->required();
    ml_eval_cmd->add_option("--c", a_c, "second parameter");
    ml_eval_cmd->add_option("--v", a_v, "argument E(-v)")->required();
    ml_eval_cmd->add_option("--delta", a_delta, "contour angle (0 = default)");
    ml_eval_cmd->add_option("--switch", a_switch, "series/integral crossover");
    ml_eval_cmd->add_option("--sweep-count", a_sweep, "CSV sweep point count");
    ml_eval_cmd->add_option("--sweep-to", a_sweep_to, "sweep upper v");
    add_common(ml_eval_cmd, ml_opts);

    // frac
    auto* frac = app.add_subcommand("frac", "fractional operators on time series");
    CommonOpts frac_opts;
    std::string frac_input;
    std::vector<CLI::App*> frac_cmds;
    for (const char* name : {"ialpha", "caputo", "marchaud", "hardy"}) {
        auto* c = frac->add_subcommand(name);
        c->add_option("--input", frac_input, "time-series CSV (t,value)");
        add_common(c, frac_opts);
        frac_cmds.push_back(c);
    }

    // norm
    auto* norm = app.add_subcommand("norm", "function-space norms");
    CommonOpts norm_opts;
    std::string norm_preset = "gaussian", norm_field;
    double norm_s = 0.0, norm_eps = 1.0;
    std::vector<CLI::App*> norm_cmds;
    for (const char* name : {"besov", "sobolev", "mixed", "bdiff", "kfun"}) {
        auto* c = norm->add_subcommand(name);
        c->add_option("--preset", norm_preset, "gaussian | single-mode | random-bandlimited");
        c->add_option("--field", norm_field, "field file");
        c->add_option("--s", norm_s, "smoothness index");
        c->add_option("--eps", norm_eps, "K-functional epsilon");
        add_common(c, norm_opts);
        norm_cmds.push_back(c);
    }

    // kernel
    auto* kernel = app.add_subcommand("kernel", "fundamental-solution diagnostics");
    CommonOpts kernel_opts;
    double k_beta = 0.5, k_t = 1.0;
    std::vector<CLI::App*> kernel_cmds;
    for (const char* name : {"build", "check-scaling", "check-decay", "moments"}) {
        auto* c = kernel->add_subcommand(name);
        c->add_option("--beta", k_beta, "time-fractional order")->required();
        c->add_option("--t", k_t, "time");
        add_common(c, kernel_opts);
        kernel_cmds.push_back(c);
    }

    // solve
    auto* solve = app.add_subcommand("solve", "sub/super-diffusion initial value problems");
    CommonOpts solve_opts;
    std::string s_preset = "gaussian", s_u0file, s_u1preset, s_outfield;
    std::vector<CLI::App*> solve_cmds;
    for (const char* name : {"sub", "super"}) {
        auto* c = solve->add_subcommand(name);
        c->add_option("--u0", s_preset, "preset name for u0");
        c->add_option("--u0-file", s_u0file, "field file for u0");
        c->add_option("--u1", s_u1preset, "preset name for u1 (super)");
        c->add_option("--out", s_outfield, "output field file");
        add_common(c, solve_opts);
        solve_cmds.push_back(c);
    }

    // verify
    auto* verify = app.add_subcommand("verify", "inequality harness");
    CommonOpts verify_opts;
    std::vector<CLI::App*> verify_cmds;
    for (const char* name :
         {"trace", "trace-div", "extension", "decay", "prop0201", "counterexample", "necessity"}) {
        auto* c = verify->add_subcommand(name);
        add_common(c, verify_opts);
        verify_cmds.push_back(c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (ml_eval_cmd->parsed())
            return run_ml(ml_opts, a_beta, a_c, a_v, a_delta, a_switch, a_sweep, a_sweep_to);
        for (auto* c : frac_cmds)
            if (c->parsed()) return run_frac(frac_opts, c->get_name(), frac_input);
        for (auto* c : norm_cmds)
            if (c->parsed())
                return run_norm(norm_opts, c->get_name(), norm_preset, norm_field, norm_s,
                                norm_eps);
        for (auto* c : kernel_cmds)
            if (c->parsed()) return run_kernel(kernel_opts, c->get_name(), k_beta, k_t);
        for (auto* c : solve_cmds)
            if (c->parsed())
                return run_solve(solve_opts, c->get_name(), s_preset, s_u0file, s_u1preset,
                                 s_outfield);
        for (auto* c : verify_cmds)
            if (c->parsed()) return run_verify(verify_opts, c->get_name());
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const param_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitParam;
    } catch (const accuracy_error& e) {
        std::cerr << "accuracy error: " << e.what() << "\n";
        return kExitAccuracy;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParam;
    }
}
