#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "geq/acceptance.hpp"
#include "geq/config.hpp"
#include "geq/dijkstra.hpp"
#include "geq/errors.hpp"
#include "geq/homogenize.hpp"
#include "geq/report.hpp"
#include "geq/svg.hpp"

namespace {

using namespace geq;

FieldSpec spec_from_flags(const std::string& family, double A, double kappa, double cx, double cy,
                          double intensity, double rb, double window, double alpha, double dx,
                          double dy) {
    FieldSpec s;
    s.family = family_from_name(family);
    switch (s.family) {
        case FieldFamily::Zero:
            break;
        case FieldFamily::Constant:
            s.constant = Vec(cx, cy);
            break;
        case FieldFamily::PeriodicCellular:
            s.amplitude = A;
            s.wavenumber = kappa;
            break;
        case FieldFamily::RandomPhaseStream:
            s = FieldSpec::default_random_phase(A);
            break;
        case FieldFamily::PoissonBumpStream:
            s.bump_amplitude = A;
            s.intensity = intensity;
            s.bump_radius = rb;
            s.window = window;
            s.drift = Vec(dx, dy);
            break;
        case FieldFamily::CounterexampleShear:
            s.gap.alpha = alpha;
            s.gap.xm = 1.0;
            s.window = window;
            break;
    }
    s.validate();
    return s;
}

int cmd_field(const RunConfig& cfg) {
    const FieldRealization f = make_field(cfg.field, cfg.seed);
    std::printf("field %s dim=%d seed=%llu\n", family_name(cfg.field.family).c_str(), f.dim(),
                static_cast<unsigned long long>(cfg.seed));
    std::printf("  v_max=%.6g M=%.6g lipschitz=%.6g\n", f.v_max(), f.bound_M(), f.lipschitz());
    const Vec mean = mean_velocity_estimate(f, std::min(cfg.grid_L, f.realized_window()), 20000);
    std::printf("  spatial mean over box: (%.4g, %.4g)\n", mean[0], mean[1]);
    Rng rng(mix64(cfg.seed, 0xd1f));
    double worst_div = 0.0;
    for (int i = 0; i < 100; ++i) {
        Vec x(rng.uniform(-cfg.grid_L, cfg.grid_L), rng.uniform(-cfg.grid_L, cfg.grid_L));
        if (cfg.field.dim == 3) x[2] = rng.uniform(-cfg.grid_L, cfg.grid_L);
        worst_div = std::max(worst_div, std::fabs(divergence_estimate(f, x, 1e-3)));
    }
    std::printf("  max |div| over 100 probes at h=1e-3: %.3g\n", worst_div);

    ensure_directory(cfg.out_dir);
    const std::string hash = config_hash(cfg.canonical());
    CsvWriter csv(cfg.out_dir + "/field.csv", {"x1", "x2", "V1", "V2"},
                  provenance_line(cfg.seed, hash));
    const Grid g = cfg.make_grid();
    const int stride = std::max(1, g.n / 64);
    for (int iy = 0; iy < g.n; iy += stride)
        for (int ix = 0; ix < g.n; ix += stride) {
            const Vec x = g.coord(ix, iy);
            const Vec v = f.velocity(x);
            csv.row({x[0], x[1], v[0], v[1]});
        }
    std::printf("  wrote %s\n", (cfg.out_dir + "/field.csv").c_str());
    return 0;
}

int cmd_mintime(const RunConfig& cfg) {
    const FieldRealization f = make_field(cfg.field, cfg.seed);
    SchemeParams params;
    params.cfl = cfg.cfl;
    params.max_cycles = cfg.max_cycles;
    const MinTimeResult mt = solve_min_time(f, Vec(), cfg.make_grid(), params);
    std::printf("mintime: cycles=%d residual=%.3g converged=%d trust_time=%.4g\n", mt.cycles,
                mt.residual, mt.converged, mt.trust_time);
    ensure_directory(cfg.out_dir);
    const std::string hash = config_hash(cfg.canonical());
    mt.theta.save_binary(cfg.out_dir + "/theta.bin");
    mt.theta.save_csv(cfg.out_dir + "/theta.csv", provenance_line(cfg.seed, hash));
    std::printf("  wrote %s and %s\n", (cfg.out_dir + "/theta.bin").c_str(),
                (cfg.out_dir + "/theta.csv").c_str());
    if (!mt.converged && f.v_max() < 1.0) {
        std::fprintf(stderr, "mintime: sweep did not converge on a coercive problem\n");
        return 3;
    }
    return 0;
}

int cmd_timeconst(const RunConfig& cfg) {
    std::vector<uint64_t> seeds;
    for (int s = 0; s < cfg.ensemble; ++s) seeds.push_back(mix64(cfg.seed, s));
    SchemeParams params;
    params.cfl = cfg.cfl;
    params.max_cycles = cfg.max_cycles;
    const Grid g = cfg.make_grid();
    const MinTimeEnsemble ens = solve_ensemble(cfg.field, seeds, g, params, cfg.threads);
    const double rmax = 0.8 * g.covered_half_width() / ens.bound_M;
    const std::vector<double> radii{0.5 * rmax, 0.75 * rmax, rmax};
    const SupportFunctionTable tab = support_table(ens, 16, radii);

    ensure_directory(cfg.out_dir);
    const std::string hash = config_hash(cfg.canonical());
    CsvWriter csv(cfg.out_dir + "/timeconst.csv", {"dir1", "dir2", "qbar", "spread"},
                  provenance_line(cfg.seed, hash));
    for (size_t k = 0; k < tab.directions.size(); ++k) {
        csv.row({tab.directions[k][0], tab.directions[k][1], tab.q[k], tab.spread[k]});
        std::printf("  v=(%+.3f,%+.3f)  qbar=%.4f  spread=%.4f\n", tab.directions[k][0],
                    tab.directions[k][1], tab.q[k], tab.spread[k]);
    }
    SvgPlot plot("shape set K = {v : q(v) <= 1}", "x1", "x2");
    plot.add_polygon(tab.shape_polygon(), "#c22", "K");
    plot.write(cfg.out_dir + "/shape.svg", provenance_line(cfg.seed, hash));
    std::printf("timeconst: wrote %s (partial=%d)\n", csv.path().c_str(), tab.partial);
    return 0;
}

int cmd_heff(const RunConfig& cfg) {
    std::vector<uint64_t> seeds;
    for (int s = 0; s < cfg.ensemble; ++s) seeds.push_back(mix64(cfg.seed, s));
    const FieldRealization probe = make_field(cfg.field, seeds[0]);
    SchemeParams params;
    params.cfl = cfg.cfl;
    params.max_cycles = std::max(cfg.max_cycles, 40000);

    // PDE estimators on the configured grid (periodic when the field
    // allows it), minimal-time table on a larger internal grid.
    const Grid pde_grid = cfg.make_grid();
    Boundary bc = Boundary::Extrapolate;
    const auto per = probe.periods();
    bool periodic_ok = true;
    for (int d = 0; d < cfg.field.dim; ++d) {
        if (per[static_cast<size_t>(d)] < 0.0) periodic_ok = false;
        else if (per[static_cast<size_t>(d)] > 0.0) {
            const double w = 2.0 * pde_grid.covered_half_width() / per[static_cast<size_t>(d)];
            periodic_ok = periodic_ok && std::fabs(w - std::round(w)) < 1e-9;
        }
    }
    if (periodic_ok) bc = Boundary::Periodic;

    const double M = probe.bound_M();
    const double rmax = 4.0;
    const Grid mt_grid = Grid::make(cfg.field.dim, std::max(cfg.grid_h, 1.0 / 16),
                                    1.1 * M * rmax + 1.0);
    const MinTimeEnsemble ens = solve_ensemble(cfg.field, seeds, mt_grid, SchemeParams{},
                                               cfg.threads);
    const SupportFunctionTable tab =
        support_table(ens, 16, {0.5 * rmax, 0.75 * rmax, rmax});

    const Vec mean = probe.mean_exact();
    const FieldSpec centered = [&] {
        FieldSpec s = cfg.field;
        s.drift = Vec();
        if (s.family == FieldFamily::Constant) s.constant = Vec();
        return s;
    }();
    (void)centered;
    const double h_dual = mean_shift_reduce(effective_hamiltonian_dual(tab, cfg.p), Vec(), cfg.p);
    const double h_disc = effective_hamiltonian_discounted(cfg.field, seeds, cfg.p,
                                                           {0.2, 0.1, 0.05}, pde_grid, params, bc)
                              .extrapolated;
    const double h_time = effective_hamiltonian_time(cfg.field, seeds, cfg.p,
                                                     std::max(cfg.T, 10.0), pde_grid, params, bc);
    const double dis = pairwise_relative_disagreement(h_dual, h_disc, h_time);
    std::printf("heff p=(%.3g,%.3g): dual=%.5f disc=%.5f time=%.5f disagreement=%.3f\n",
                cfg.p[0], cfg.p[1], h_dual, h_disc, h_time, dis);
    const double lower = norm(cfg.p) + dot(mean, cfg.p) - 0.03 * norm(cfg.p);
    std::printf("  lower bound |p| + <E[V],p> - 3%%: %.5f\n", lower);

    ensure_directory(cfg.out_dir);
    const std::string hash = config_hash(cfg.canonical());
    CsvWriter csv(cfg.out_dir + "/heff.csv",
                  {"p1", "p2", "h_dual", "h_disc", "h_time", "disagreement"},
                  provenance_line(cfg.seed, hash));
    csv.row({cfg.p[0], cfg.p[1], h_dual, h_disc, h_time, dis});
    return 0;
}

int cmd_gequation(const RunConfig& cfg) {
    const FieldRealization f = make_field(cfg.field, cfg.seed);
    SchemeParams params;
    params.cfl = cfg.cfl;
    const Grid g = cfg.make_grid();
    Boundary bc = Boundary::Extrapolate;
    const auto per = f.periods();
    bool periodic_ok = true;
    for (int d = 0; d < cfg.field.dim; ++d) {
        if (per[static_cast<size_t>(d)] < 0.0) periodic_ok = false;
        else if (per[static_cast<size_t>(d)] > 0.0) {
            const double w = 2.0 * g.covered_half_width() / per[static_cast<size_t>(d)];
            periodic_ok = periodic_ok && std::fabs(w - std::round(w)) < 1e-9;
        }
    }
    if (periodic_ok) bc = Boundary::Periodic;
    const TimeDependentResult r = solve_time_dependent(f, cfg.p, nullptr, cfg.T, g, params, bc);
    std::printf("gequation: steps=%ld dt=%.3g z(0,T)/T=%.6f (boundary=%s)\n", r.steps, r.dt,
                r.value_at_origin() / cfg.T, bc == Boundary::Periodic ? "periodic" : "extrapolate");
    ensure_directory(cfg.out_dir);
    const std::string hash = config_hash(cfg.canonical());
    r.final_slice().save_binary(cfg.out_dir + "/z_final.bin");
    r.final_slice().save_csv(cfg.out_dir + "/z_final.csv", provenance_line(cfg.seed, hash));
    std::printf("  wrote %s\n", (cfg.out_dir + "/z_final.csv").c_str());
    return 0;
}

int report_exit(const ExperimentReport& rep) {
    rep.print();
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"G-equation homogenization toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string family = "zero";
    double A = 2.0, kappa = 2.0 * geq::kPi, cx = 0.4, cy = 0.0;
    double intensity = 0.08, rb = 1.0, window = 64.0, dx = 0.0, dy = 0.0;
    std::string p_str = "1,0";

    app.add_option("--config", config_path, "JSON config file (keys mirror the flags)");
    app.add_option("--seed", cfg.seed, "master seed (SEED env var overrides)");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--threads", cfg.threads, "worker pool cap");
    app.add_option("--h", cfg.grid_h, "grid spacing");
    app.add_option("--L", cfg.grid_L, "grid half-width");
    app.add_option("--cfl", cfg.cfl, "CFL number in (0,1]");
    app.add_option("--max-cycles", cfg.max_cycles, "sweep cycle cap");
    app.add_option("--T", cfg.T, "time horizon");
    app.add_option("--ensemble", cfg.ensemble, "number of field realizations");
    app.add_option("--field", family, "field family name");
    app.add_option("--A", A, "field amplitude");
    app.add_option("--kappa", kappa, "cellular wavenumber");
    app.add_option("--cx", cx, "constant field x component");
    app.add_option("--cy", cy, "constant field y component");
    app.add_option("--intensity", intensity, "Poisson bump intensity");
    app.add_option("--rb", rb, "Poisson bump radius");
    app.add_option("--window", window, "field window half-width");
    app.add_option("--drift-x", dx, "Poisson drift x");
    app.add_option("--drift-y", dy, "Poisson drift y");
    app.add_option("--p", p_str, "direction p as 'x,y'");
    app.add_option("--alpha", cfg.alpha, "counterexample gap shape");
    app.add_option("--n", cfg.samples, "counterexample sample count");
    app.add_option("--profile", cfg.profile, "acceptance profile: quick | thorough");
    app.add_flag("--oracle", cfg.oracle, "recompute frozen margins at finer resolution");

    auto* sc_field = app.add_subcommand("field", "inspect a field realization");
    auto* sc_mintime = app.add_subcommand("mintime", "solve the minimal-time equation");
    auto* sc_timeconst = app.add_subcommand("timeconst", "time constants over 16 directions");
    auto* sc_heff = app.add_subcommand("heff", "three effective-Hamiltonian estimates");
    auto* sc_geq = app.add_subcommand("gequation", "time-dependent G-equation solve");
    auto* sc_enh = app.add_subcommand("enhance", "enhancement dichotomy experiment");
    auto* sc_cex = app.add_subcommand("counterexample", "non-integrable minimal time experiment");
    auto* sc_rc = app.add_subcommand("control-study", "random-control drift experiment");
    auto* sc_acc = app.add_subcommand("acceptance", "run the acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw geq::ConfigError("config: cannot open " + config_path);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            geq::apply_config_json(cfg, text);
        }
        if (const char* env_seed = std::getenv("SEED")) cfg.seed = std::strtoull(env_seed, nullptr, 10);

        cfg.field = spec_from_flags(family, A, kappa, cx, cy, intensity, rb, window, cfg.alpha,
                                    dx, dy);
        {
            size_t comma = p_str.find(',');
            if (comma == std::string::npos) throw geq::ConfigError("config: --p must be 'x,y'");
            cfg.p = geq::Vec(std::stod(p_str.substr(0, comma)), std::stod(p_str.substr(comma + 1)));
        }

        geq::ExperimentOptions opt;
        opt.out_dir = cfg.out_dir;
        opt.master_seed = cfg.seed;
        opt.threads = cfg.threads;
        opt.oracle = cfg.oracle;

        if (sc_field->parsed()) {
            cfg.subcommand = "field";
            cfg.validate();
            return cmd_field(cfg);
        }
        if (sc_mintime->parsed()) {
            cfg.subcommand = "mintime";
            cfg.validate();
            return cmd_mintime(cfg);
        }
        if (sc_timeconst->parsed()) {
            cfg.subcommand = "timeconst";
            cfg.validate();
            return cmd_timeconst(cfg);
        }
        if (sc_heff->parsed()) {
            cfg.subcommand = "heff";
            cfg.validate();
            return cmd_heff(cfg);
        }
        if (sc_geq->parsed()) {
            cfg.subcommand = "gequation";
            cfg.validate();
            return cmd_gequation(cfg);
        }
        if (sc_enh->parsed()) {
            cfg.subcommand = "enhance";
            geq::EnhancementConfig ecfg;
            return report_exit(geq::run_enhancement(ecfg, opt));
        }
        if (sc_cex->parsed()) {
            cfg.subcommand = "counterexample";
            geq::CounterexampleConfig ccfg;
            ccfg.shapes = {cfg.alpha, 3.0};
            ccfg.sample_sizes = {std::max(1L, cfg.samples / 100), std::max(1L, cfg.samples / 10),
                                 cfg.samples};
            return report_exit(geq::run_counterexample(ccfg, opt));
        }
        if (sc_rc->parsed()) {
            cfg.subcommand = "control-study";
            geq::RandomControlConfig rcfg;
            return report_exit(geq::run_random_control_study(rcfg, opt));
        }
        if (sc_acc->parsed()) {
            cfg.subcommand = "acceptance";
            const geq::AcceptanceReport rep = geq::run_acceptance(cfg.profile, opt);
            return rep.all_pass() ? 0 : 1;
        }
        throw geq::ConfigError("no subcommand given");
    } catch (const geq::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const geq::IterationLimitError& e) {
        std::fprintf(stderr, "numerical non-convergence: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
