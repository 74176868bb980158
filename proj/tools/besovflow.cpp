// besovflow: numerical experiments on Besov regularity of periodic fields,
// pressure double-regularity, and space-to-time regularity transfer.
//
// Exit codes: 0 all pass flags true; 1 a ran-but-failed experiment or usage
// error; 2 a theorem-hypothesis violation (named on stderr); 3 I/O errors.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "besovflow/experiments.hpp"
#include "besovflow/field_io.hpp"

using namespace besovflow;

namespace {

Grid parse_grid(const std::string& text) {
    std::vector<int> sizes;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto x = text.find('x', pos);
        std::string tok = x == std::string::npos ? text.substr(pos) : text.substr(pos, x - pos);
        sizes.push_back(std::stoi(tok));
        if (x == std::string::npos) break;
        pos = x + 1;
    }
    return Grid::make(sizes);
}

double parse_r(const std::string& text) {
    if (text == "inf" || text == "INF") return kInf;
    return std::stod(text);
}

void require_r_open_interval(double r) {
    if (!(r > 1.0 && r < kInf))
        throw HypothesisError("requires r in (1,inf), got r = " + std::to_string(r));
}

int finish(const ExperimentReport& rep, const std::string& out_dir) {
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_report(rep, out_dir + "/" + rep.claim + ".json");
    }
    std::cout << to_json(rep).dump(2) << "\n";
    return rep.pass ? 0 : 1;
}

MollifierKernel parse_kernel(const std::string& name) {
    if (name == "gaussian") return MollifierKernel::gaussian_truncated;
    if (name == "bump") return MollifierKernel::polynomial_bump;
    throw CLI::ValidationError("--kernel must be gaussian or bump");
}

int run_report_claim(const ConfigMap& cfg, const std::string& out_dir) {
    const std::string claim = cfg.get("claim");
    const Grid grid = parse_grid(cfg.get("grid", "128x128"));
    if (claim == "molli") {
        MollificationClaimParams p;
        p.theta = cfg.get_double("theta", 0.5);
        p.r = parse_r(cfg.get("r", "2"));
        p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 11));
        return finish(run_mollification_claim(p, grid, out_dir), out_dir);
    }
    if (claim == "interp-ineq") {
        InterpInequalityClaimParams p;
        p.corpus_size = cfg.get_int("corpus", 20);
        p.r = parse_r(cfg.get("r", "2"));
        p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 23));
        return finish(run_interp_inequality_claim(p, grid), out_dir);
    }
    if (claim == "kfun-bilinear" || claim == "kfun-trilinear") {
        KInequalityClaimParams p;
        p.trilinear = claim == "kfun-trilinear";
        p.corpus_size = cfg.get_int("corpus", 10);
        p.theta = cfg.get_double("theta", 0.6);
        p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 37));
        p.jmax = cfg.get_int("jmax", 4);
        p.t_grid.t_min = cfg.get_double("t_min", 1e-3);
        p.t_grid.t_max = cfg.get_double("t_max", 1e3);
        p.t_grid.points = cfg.get_int("t_points", 61);
        return finish(run_k_inequality_claim(p, grid), out_dir);
    }
    if (claim == "pressure-double") {
        DoubleRegularityParams p;
        p.theta = cfg.get_double("theta", 0.4);
        p.r = parse_r(cfg.get("r", "2"));
        require_r_open_interval(p.r);
        p.corpus_size = cfg.get_int("corpus", 10);
        p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
        return finish(run_pressure_double_claim(p, grid), out_dir);
    }
    if (claim == "besov-equiv") {
        BesovEquivalenceClaimParams p;
        p.corpus_size = cfg.get_int("corpus", 10);
        p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 51));
        p.jmax = cfg.get_int("jmax", 5);
        return finish(run_besov_equivalence_claim(p, grid), out_dir);
    }
    if (claim == "time-reg") {
        TimeRegularityClaimParams p;
        p.claim = cfg.get("part", "i");
        p.theta = cfg.get_double("theta", 0.5);
        p.s = parse_r(cfg.get("s", "2"));
        p.r = parse_r(cfg.get("r", "2"));
        require_r_open_interval(p.r);
        p.beta = cfg.get_double("beta", 0.0);
        p.epsilon = cfg.get_double("epsilon", 0.01);
        p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 67));
        p.jmax = cfg.get_int("jmax", 5);
        p.frames = cfg.get_int("frames", 513);
        return finish(run_time_regularity_claim(p, grid), out_dir);
    }
    if (claim == "dtp-identity") {
        DtIdentityClaimParams p;
        p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 5));
        p.dt_base = cfg.get_double("dt", 2.5e-4);
        p.t_end = cfg.get_double("t_end", 0.05);
        return finish(run_dt_identity_claim(p, grid), out_dir);
    }
    std::cerr << "unknown claim: " << claim << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"besovflow: Besov-regularity measurements for periodic flows"};
    app.require_subcommand(1);

    std::string grid_text = "128x128", out_path, in_path, kernel_name = "gaussian";
    std::string kind = "lacunary", estimator = "lp", r_text = "2", s_text = "2";
    std::string claim = "i", config_path, report_claim;
    double theta = 0.5, amplitude = 1.0, beta = 0.0, epsilon = 0.01;
    double dt = 1e-3, t_end = 0.1, t_min = 1e-3, t_max = 1e3;
    int jmax = 5, corpus = 10, stride = 1, frames = 513, t_points = 61;
    std::uint64_t seed = 1;
    bool div_free = false, project = false, trilinear = false;
    int components = 1;

    auto* gen = app.add_subcommand("gen", "generate a field and write it as PFLD");
    gen->add_option("--kind", kind, "lacunary | power");
    gen->add_option("--theta", theta);
    gen->add_option("--jmax", jmax);
    gen->add_option("--seed", seed);
    gen->add_option("--grid", grid_text);
    gen->add_option("--components", components);
    gen->add_flag("--div-free", div_free);
    gen->add_option("--amplitude", amplitude);
    gen->add_option("--out", out_path)->required();

    auto* norm = app.add_subcommand("norm", "compute a norm of a PFLD field");
    norm->add_option("--in", in_path)->required();
    norm->add_option("--estimator", estimator, "lp | diff | lr");
    norm->add_option("--theta", theta);
    norm->add_option("--r", r_text);

    auto* molli = app.add_subcommand("mollify-scan", "mollification scaling scans");
    molli->add_option("--theta", theta);
    molli->add_option("--grid", grid_text);
    molli->add_option("--r", r_text);
    molli->add_option("--seed", seed);
    molli->add_option("--jmax", jmax)->default_val(0);
    molli->add_option("--kernel", kernel_name, "gaussian | bump");
    molli->add_option("--out", out_path);

    std::string in_u, in_w;
    auto* pressure = app.add_subcommand("pressure", "pressure double-regularity experiment");
    pressure->add_option("--theta", theta);
    pressure->add_option("--corpus", corpus);
    pressure->add_option("--r", r_text);
    pressure->add_option("--grid", grid_text)->default_val("256x256");
    pressure->add_option("--seed", seed);
    pressure->add_option("--in-u", in_u, "solve for the PFLD fields instead of a corpus");
    pressure->add_option("--in-w", in_w);
    pressure->add_flag("--project", project, "Leray-project inputs instead of rejecting");

    auto* kfun = app.add_subcommand("kfun", "K-functional product-bound verification");
    kfun->add_flag("--trilinear", trilinear);
    kfun->add_option("--theta", theta)->default_val(0.6);
    kfun->add_option("--corpus", corpus);
    kfun->add_option("--grid", grid_text);
    kfun->add_option("--jmax", jmax)->default_val(4);
    kfun->add_option("--seed", seed);
    kfun->add_option("--t-min", t_min);
    kfun->add_option("--t-max", t_max);
    kfun->add_option("--t-points", t_points);
    kfun->add_option("--out", out_path);

    auto* euler = app.add_subcommand("euler", "integrate and write snapshots");
    euler->add_option("--grid", grid_text);
    euler->add_option("--dt", dt);
    euler->add_option("--t-end", t_end);
    euler->add_option("--stride", stride)->default_val(4);
    euler->add_option("--seed", seed);
    euler->add_option("--out", out_path)->required();

    auto* timereg = app.add_subcommand("timereg", "time-regularity transfer experiment");
    timereg->add_option("--claim", claim, "i | ii | iii | iv");
    timereg->add_option("--theta", theta);
    timereg->add_option("--s", s_text);
    timereg->add_option("--r", r_text);
    timereg->add_option("--beta", beta);
    timereg->add_option("--epsilon", epsilon);
    timereg->add_option("--grid", grid_text);
    timereg->add_option("--jmax", jmax);
    timereg->add_option("--frames", frames);
    timereg->add_option("--seed", seed);
    timereg->add_option("--out", out_path);

    auto* report = app.add_subcommand("report", "run a claim from a config file");
    report->add_option("--config", config_path);
    report->add_option("--claim", report_claim, "override/select the claim");
    report->add_option("--theta", theta);
    report->add_option("--grid", grid_text);
    report->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            RoughFieldSpec spec;
            spec.kind = kind == "power" ? FieldKind::power_spectrum : FieldKind::lacunary;
            spec.theta = theta;
            spec.jmax = jmax;
            spec.seed = seed;
            spec.divergence_free = div_free;
            spec.amplitude = amplitude;
            Grid grid = parse_grid(grid_text);
            if (div_free) components = grid.dim;
            write_field(rough_field(spec, grid, components), out_path);
            std::cout << "wrote " << out_path << "\n";
            return 0;
        }
        if (norm->parsed()) {
            Field f = read_field(in_path);
            const double r = parse_r(r_text);
            double value = 0.0;
            if (estimator == "lr") {
                value = lp_norm(f, r);
            } else {
                BesovParams p{theta, r, kInf,
                              estimator == "diff" ? BesovEstimator::difference
                                                  : BesovEstimator::littlewood_paley};
                value = besov_seminorm(f, p);
            }
            std::cout.precision(17);
            std::cout << value << "\n";
            return 0;
        }
        if (molli->parsed()) {
            MollificationClaimParams p;
            p.theta = theta;
            p.r = parse_r(r_text);
            p.seed = seed;
            p.jmax = jmax;
            p.kernel = parse_kernel(kernel_name);
            return finish(run_mollification_claim(p, parse_grid(grid_text), out_path), out_path);
        }
        if (pressure->parsed()) {
            if (!in_u.empty()) {
                // single solve on user fields; --project controls whether
                // non-solenoidal inputs are projected or rejected
                Field u = read_field(in_u);
                Field w = in_w.empty() ? u : read_field(in_w);
                auto handling =
                    project ? DivergenceHandling::project : DivergenceHandling::reject;
                auto res = solve_bilinear(u, w, handling);
                nlohmann::json j{{"residual", res.residual},
                                 {"mean_abs", res.mean_abs},
                                 {"p_l2", lp_norm(res.p, 2.0)}};
                if (!out_path.empty()) {
                    write_field(res.p, out_path);
                    j["out"] = out_path;
                }
                std::cout << j.dump(2) << "\n";
                return 0;
            }
            DoubleRegularityParams p;
            p.theta = theta;
            p.r = parse_r(r_text);
            require_r_open_interval(p.r);
            p.corpus_size = corpus;
            p.seed = seed;
            return finish(run_pressure_double_claim(p, parse_grid(grid_text)), out_path);
        }
        if (kfun->parsed()) {
            KInequalityClaimParams p;
            p.trilinear = trilinear;
            p.theta = theta;
            p.corpus_size = corpus;
            p.seed = seed;
            p.jmax = jmax;
            p.t_grid = TGrid{t_min, t_max, t_points};
            return finish(run_k_inequality_claim(p, parse_grid(grid_text), out_path), out_path);
        }
        if (euler->parsed()) {
            Grid grid = parse_grid(grid_text);
            Field u0 = smooth_initial_data(grid, seed);
            EulerRunParams params;
            params.dt = dt;
            params.t_end = t_end;
            params.snapshot_stride = stride;
            params.seed = seed;
            EulerRun run = run_euler(u0, params);
            write_run(run, out_path);
            std::cout << "wrote " << run.snapshots.size() << " snapshots to " << out_path
                      << "\n";
            return 0;
        }
        if (timereg->parsed()) {
            TimeRegularityClaimParams p;
            p.claim = claim;
            p.theta = theta;
            p.s = parse_r(s_text);
            p.r = parse_r(r_text);
            require_r_open_interval(p.r);
            p.beta = beta;
            p.epsilon = epsilon;
            p.seed = seed;
            p.jmax = jmax;
            p.frames = frames;
            return finish(run_time_regularity_claim(p, parse_grid(grid_text)), out_path);
        }
        if (report->parsed()) {
            ConfigMap cfg;
            if (!config_path.empty()) cfg = ConfigMap::parse_file(config_path);
            if (!report_claim.empty()) cfg.set("claim", report_claim);
            if (report->count("--theta") > 0) cfg.set("theta", std::to_string(theta));
            if (report->count("--grid") > 0) cfg.set("grid", grid_text);
            if (!cfg.has("claim")) {
                std::cerr << "report: no claim selected\n";
                return 1;
            }
            return run_report_claim(cfg, out_path);
        }
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
