#include "geq/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>

#include "geq/dijkstra.hpp"
#include "geq/errors.hpp"
#include "geq/frozen.hpp"
#include "geq/homogenize.hpp"
#include "geq/rng.hpp"
#include "geq/trajectory.hpp"

namespace geq {

namespace {

struct Check {
    bool ok = true;
    std::string notes;
};

// Appends "label=value" (tagged [FAIL] when violated) so the one-line
// summary stays readable.
void check(Check& c, bool cond, const std::string& what) {
    c.ok = c.ok && cond;
    c.notes += (c.notes.empty() ? "" : "; ") + what + (cond ? "" : " [FAIL]");
}

FieldSpec cellular_spec(double amplitude = 2.0) {
    FieldSpec s;
    s.family = FieldFamily::PeriodicCellular;
    s.amplitude = amplitude;
    s.wavenumber = 2.0 * kPi;
    return s;
}

FieldSpec constant_spec(double c1, double c2 = 0.0) {
    FieldSpec s;
    s.family = FieldFamily::Constant;
    s.constant = Vec(c1, c2);
    return s;
}

FieldSpec poisson_spec(double amplitude, double intensity, const Vec& drift, double window) {
    FieldSpec s;
    s.family = FieldFamily::PoissonBumpStream;
    s.bump_amplitude = amplitude;
    s.intensity = intensity;
    s.bump_radius = 1.0;
    s.drift = drift;
    s.window = window;
    return s;
}

// Oracle for the constant-drift time constant: the positive root of
// |v - q c| = q, found by bisection.
double constant_drift_qbar(const Vec& v, const Vec& c) {
    double lo = 0.0, hi = 64.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (norm(v - mid * c) - mid > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct Shared {
    // Cellular A=2 benchmark objects reused across criteria 3, 4, 5, 8.
    std::optional<MinTimeEnsemble> cellular_ens;
    std::optional<SupportFunctionTable> cellular_table;
    std::vector<double> cellular_radii{3.0, 4.5, 6.0};

    const MinTimeEnsemble& cellular(const ExperimentOptions& opt) {
        if (!cellular_ens) {
            const Grid g = Grid::make(2, 1.0 / 16, 20.0);
            cellular_ens = solve_ensemble(cellular_spec(), {opt.master_seed}, g, SchemeParams{},
                                          opt.threads);
        }
        return *cellular_ens;
    }
    const SupportFunctionTable& table(const ExperimentOptions& opt) {
        if (!cellular_table) cellular_table = support_table(cellular(opt), 16, cellular_radii);
        return *cellular_table;
    }
};

}  // namespace

bool AcceptanceReport::all_pass() const {
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return true;
}

AcceptanceReport run_acceptance(const std::string& profile, const ExperimentOptions& opt) {
    if (profile != "quick" && profile != "thorough")
        throw ConfigError("acceptance: unknown profile '" + profile + "'");
    const bool thorough = profile == "thorough";
    ensure_directory(opt.out_dir);

    AcceptanceReport report;
    Shared shared;
    const auto run = [&](int number, const std::string& name,
                         const std::function<Check()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        r.number = number;
        r.name = name;
        try {
            Check c = body();
            r.pass = c.ok;
            r.detail = c.notes;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] C%02d %-28s %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.number,
                    r.name.c_str(), r.detail.c_str(), r.seconds);
        std::fflush(stdout);
        report.criteria.push_back(std::move(r));
    };

    // 1. Unit-speed eikonal against the exact distance.
    run(1, "eikonal-oracle", [&] {
        Check c;
        const Grid g = Grid::make(2, 0.02, 2.0);
        const auto t0 = std::chrono::steady_clock::now();
        const MinTimeResult mt =
            solve_min_time(make_field(FieldSpec{}, 0), Vec(), g, SchemeParams{});
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        mt.require_converged();
        double worst = 0.0;
        for (int64_t i = 0; i < g.size(); ++i) {
            if (!mt.theta.finite_at(i) || mt.theta.at(i) > mt.trust_time) continue;
            worst = std::max(worst, std::fabs(mt.theta.at(i) - norm(g.coord(i))));
        }
        check(c, worst <= 2.0 * g.h, strf("max|theta-|y||=%.4f <= %.4f", worst, 2.0 * g.h));
        check(c, secs <= 10.0, strf("runtime=%.2fs <= 10s", secs));
        return c;
    });

    // 2. Constant drift against the implicit-equation root.
    run(2, "constant-drift-oracle", [&] {
        Check c;
        const Vec drift(0.4, 0.0);
        const Grid g = Grid::make(2, 1.0 / 32, 10.0);
        const MinTimeEnsemble ens =
            solve_ensemble(constant_spec(0.4), {opt.master_seed}, g, SchemeParams{}, opt.threads);
        const std::vector<double> radii{3.0, 4.5, 6.0};
        const std::vector<double> radii_back{2.0, 3.0, 4.0};
        const TimeConstantEstimate fwd = time_constant(ens, Vec(1, 0), radii);
        const TimeConstantEstimate bwd = time_constant(ens, Vec(-1, 0), radii_back);
        const double q_fwd = constant_drift_qbar(Vec(1, 0), drift);   // 1/1.4
        const double q_bwd = constant_drift_qbar(Vec(-1, 0), drift);  // 1/0.6
        check(c, std::fabs(fwd.q_bar - q_fwd) <= 0.02 * q_fwd,
              strf("q(e1)=%.4f vs %.4f", fwd.q_bar, q_fwd));
        check(c, std::fabs(bwd.q_bar - q_bwd) <= 0.02 * q_bwd,
              strf("q(-e1)=%.4f vs %.4f", bwd.q_bar, q_bwd));
        return c;
    });

    // 3. Time-constant bounds on the cellular benchmark.
    run(3, "time-constant-bounds", [&] {
        Check c;
        const SupportFunctionTable& tab = shared.table(opt);
        const double M = shared.cellular(opt).bound_M;
        double qmin = 1e9, qmax = -1e9;
        for (double q : tab.q) {
            qmin = std::min(qmin, q);
            qmax = std::max(qmax, q);
        }
        check(c, qmin >= 1.0 / M - 0.03 && qmax <= 1.03,
              strf("q in [%.3f, %.3f] vs [%.3f, 1.03]", qmin, qmax, 1.0 / M - 0.03));
        check(c, !tab.partial, "all radii inside the trusted region");
        return c;
    });

    // 4. Convexity and 1-Lipschitz continuity of the table.
    run(4, "q-convexity-lipschitz", [&] {
        Check c;
        const SupportFunctionTable& tab = shared.table(opt);
        const double conv = tab.convexity_violation();
        double qscale = 0.0;
        for (double q : tab.q) qscale = std::max(qscale, q);
        const double lip = tab.lipschitz_excess();
        check(c, conv <= 0.03, strf("midpoint convexity violation %.4f <= 0.03", conv));
        check(c, lip <= 0.03 * qscale, strf("lipschitz excess %.4f <= %.4f", lip, 0.03 * qscale));
        return c;
    });

    // 5. Agreement of the three estimators on the cellular benchmark.
    run(5, "estimator-agreement", [&] {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        const SupportFunctionTable& tab = shared.table(opt);
        const Grid cell = Grid::make(2, 1.0 / 64, 0.5);
        SchemeParams params;
        params.max_cycles = 40000;
        const std::vector<uint64_t> seeds{opt.master_seed};
        const std::vector<Vec> ps{Vec(1, 0), Vec(0, 1),
                                  Vec(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0))};
        for (const Vec& p : ps) {
            const double h_dual = effective_hamiltonian_dual(tab, p);
            const double h_disc =
                effective_hamiltonian_discounted(cellular_spec(), seeds, p, {0.2, 0.1, 0.05},
                                                 cell, params, Boundary::Periodic)
                    .extrapolated;
            const double h_time = effective_hamiltonian_time(cellular_spec(), seeds, p, 20.0,
                                                             cell, params, Boundary::Periodic);
            const double dis = pairwise_relative_disagreement(h_dual, h_disc, h_time);
            check(c, dis <= 0.05,
                  strf("p=(%.2g,%.2g): dual=%.3f disc=%.3f time=%.3f dis=%.3f", p[0], p[1],
                       h_dual, h_disc, h_time, dis));
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        check(c, secs <= 300.0, strf("runtime=%.0fs <= 300s", secs));
        return c;
    });

    // 6. Enhancement dichotomy on the sinusoidal shear.
    run(6, "enhancement-dichotomy", [&] {
        Check c;
        EnhancementConfig cfg;
        if (!thorough) cfg.amplitudes = {0.5, 1.0, 2.0};
        ExperimentOptions sub = opt;
        sub.out_dir = opt.out_dir + "/enhancement";
        const ExperimentReport rep = run_enhancement(cfg, sub);
        for (const auto& v : rep.verdicts)
            check(c, v.pass, v.claim_id);
        return c;
    });

    // 7. Duality lower bound on a drifted Poisson bump field.
    run(7, "duality-lower-bound", [&] {
        Check c;
        const Vec drift(0.2, 0.0);
        const int n_seeds = thorough ? 6 : 3;
        std::vector<uint64_t> seeds;
        for (int s = 0; s < n_seeds; ++s) seeds.push_back(mix64(opt.master_seed, 70 + s));
        const FieldSpec centered = poisson_spec(0.6, 0.08, Vec(), 34.0);
        const Grid g = Grid::make(2, 1.0 / 8, 30.0);
        const MinTimeEnsemble ens = solve_ensemble(centered, seeds, g, SchemeParams{}, opt.threads);
        const SupportFunctionTable tab = support_table(ens, 16, {2.0, 3.0, 4.0});
        double worst = 1e9;
        for (int k = 0; k < 8; ++k) {
            const Vec p = unit2(2.0 * kPi * k / 8.0 + 0.1);
            const double h_tilde = effective_hamiltonian_dual(tab, p);
            const double h_dual = mean_shift_reduce(h_tilde, drift, p);
            const double bound = norm(p) + dot(drift, p) - 0.03 * norm(p);
            worst = std::min(worst, h_dual - bound);
        }
        check(c, worst >= 0.0, strf("min margin over 8 directions = %.4f >= 0", worst));
        return c;
    });

    // 8. Isoperimetric growth of the reachable sets.
    run(8, "isoperimetric-growth", [&] {
        Check c;
        const double floor_ = std::sqrt(kPi);
        {
            const Grid g = Grid::make(2, 0.01, 3.0);
            const MinTimeResult mt =
                solve_min_time(make_field(FieldSpec{}, 0), Vec(), g, SchemeParams{});
            const VolumeGrowthReport rep = volume_growth_check(mt, {2.0});
            const double ratio = rep.rows[0].growth_ratio;
            check(c, std::fabs(ratio - floor_) <= 0.02 * floor_,
                  strf("V=0: vol^(1/2)/t=%.4f vs sqrt(pi)=%.4f", ratio, floor_));
        }
        {
            const Grid g = Grid::make(2, 1.0 / 32, 13.0);
            const FieldRealization f = make_field(cellular_spec(), opt.master_seed);
            const MinTimeResult mt = solve_min_time(f, Vec(), g, SchemeParams{});
            const VolumeGrowthReport rep = volume_growth_check(mt, {0.5, 1.0, 2.0, 4.0});
            double worst = 1e9, worst_per = -1e9;
            for (const auto& row : rep.rows) {
                worst = std::min(worst, row.growth_ratio);
                worst_per = std::max(worst_per, row.perimeter_window_min);
            }
            check(c, worst >= floor_ * 0.95,
                  strf("cellular: min vol^(1/2)/t=%.4f >= %.4f", worst, floor_ * 0.95));
            check(c, worst_per <= rep.perimeter_constant,
                  strf("perimeter window %.1f <= K=%.1f", worst_per, rep.perimeter_constant));
        }
        return c;
    });

    // 9. Shape theorem: R_t/t against {q <= 1}.
    run(9, "shape-theorem", [&] {
        Check c;
        {
            const Grid g = Grid::make(2, 1.0 / 32, 10.0);
            const MinTimeEnsemble ens =
                solve_ensemble(FieldSpec{}, {opt.master_seed}, g, SchemeParams{}, opt.threads);
            const SupportFunctionTable tab = support_table(ens, 16, {4.0, 6.0, 8.0});
            const double f4 = shape_check(ens.solves[0], tab, 4.0);
            const double f8 = shape_check(ens.solves[0], tab, 8.0);
            check(c, f8 <= f4 + 1e-9 && f8 <= 0.10,
                  strf("V=0: frac(8)=%.3f <= frac(4)=%.3f, <= 0.10", f8, f4));
        }
        {
            const Grid g = Grid::make(2, 1.0 / 32, 12.0);
            const MinTimeEnsemble ens = solve_ensemble(constant_spec(0.4), {opt.master_seed}, g,
                                                       SchemeParams{}, opt.threads);
            const SupportFunctionTable tab = support_table(ens, 16, {3.0, 4.0, 5.0});
            const double f4 = shape_check(ens.solves[0], tab, 4.0);
            const double f8 = shape_check(ens.solves[0], tab, 8.0);
            check(c, f8 <= f4 + 1e-9 && f8 <= 0.10,
                  strf("V=c: frac(8)=%.3f <= frac(4)=%.3f, <= 0.10", f8, f4));
        }
        return c;
    });

    // 10. The non-integrable counterexample.
    run(10, "counterexample", [&] {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        CounterexampleConfig cfg;
        ExperimentOptions sub = opt;
        sub.out_dir = opt.out_dir + "/counterexample";
        const ExperimentReport rep = run_counterexample(cfg, sub);
        for (const auto& v : rep.verdicts) check(c, v.pass, v.claim_id);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        check(c, secs <= 180.0, strf("runtime=%.0fs <= 180s", secs));
        return c;
    });

    // 11. Homogenization convergence with affine data.
    run(11, "homogenization", [&] {
        Check c;
        HomogenizationConfig cfg;
        if (thorough) cfg.points_per_period = 48;
        ExperimentOptions sub = opt;
        sub.out_dir = opt.out_dir + "/homogenization";
        const ExperimentReport rep = run_homogenization(cfg, sub);
        for (const auto& v : rep.verdicts) check(c, v.pass, v.claim_id);
        return c;
    });

    // 12. Random-control drift and schedule moments.
    run(12, "random-control-drift", [&] {
        Check c;
        RandomControlConfig cfg;
        ExperimentOptions sub = opt;
        sub.out_dir = opt.out_dir + "/random_control";
        const ExperimentReport rep = run_random_control_study(cfg, sub);
        for (const auto& v : rep.verdicts) check(c, v.pass, v.claim_id);
        return c;
    });

    // 13. Two-dimensional collinearity of constant-control trajectories.
    run(13, "2d-collinearity", [&] {
        Check c;
        const FieldRealization f = make_field(cellular_spec(), opt.master_seed);
        const Vec a(0.5, 0.0);
        const Vec dir = constant_control_direction(f, a, 5000.0);
        const double along = dot(dir, a) / norm(a);
        const double orth = std::fabs(dir[0] * a[1] - dir[1] * a[0]) / norm(a);
        check(c, orth <= 0.02 * norm(dir),
              strf("a=(0.5,0): X_T/T=(%.4f,%.4f), orth=%.2g <= 2%%", dir[0], dir[1], orth));
        check(c, along > 0.0, "drift points along a");
        return c;
    });

    // 14. Monotone-scheme property suite.
    run(14, "monotone-scheme-suite", [&] {
        Check c;
        // consistency + monotonicity probe of the flux
        {
            Rng rng(mix64(opt.master_seed, 14));
            SchemeParams params;
            bool consistent = true, monotone = true;
            for (int trial = 0; trial < 1000; ++trial) {
                Vec pm(rng.uniform(-2, 2), rng.uniform(-2, 2));
                Vec pp(rng.uniform(-2, 2), rng.uniform(-2, 2));
                Vec V(rng.uniform(-2, 2), rng.uniform(-2, 2));
                params.sigma = {1.0 + std::fabs(V[0]), 1.0 + std::fabs(V[1]), 0.0};
                const double h0 = numerical_hamiltonian(pm, pm, V, params, 2);
                consistent = consistent && std::fabs(h0 - (norm(pm) + dot(V, pm))) <= 1e-12;
                const double base = numerical_hamiltonian(pm, pp, V, params, 2);
                for (int ax = 0; ax < 2; ++ax) {
                    Vec pp2 = pp;
                    pp2[ax] += 0.1;
                    monotone = monotone && numerical_hamiltonian(pm, pp2, V, params, 2) <= base + 1e-12;
                    Vec pm2 = pm;
                    pm2[ax] += 0.1;
                    monotone = monotone && numerical_hamiltonian(pm2, pp, V, params, 2) >= base - 1e-12;
                }
            }
            check(c, consistent, "flux consistency Hhat(p,p,V)=|p|+<V,p>");
            check(c, monotone, "flux monotone in one-sided arguments");
        }
        // discrete comparison principle on random data pairs
        {
            Rng rng(mix64(opt.master_seed, 141));
            const Grid g = Grid::make(2, 1.0 / 16, 1.0);
            const FieldRealization f = make_field(cellular_spec(1.0), 0);
            const auto mk = [&](uint64_t s) {
                Rng r(s);
                const double a1 = r.uniform(-1, 1), a2 = r.uniform(-1, 1);
                const double b1 = r.uniform(0.2, 1.0), b2 = r.uniform(0.2, 1.0);
                return std::function<double(const Vec&)>([=](const Vec& x) {
                    return a1 * std::sin(2 * kPi * b1 * x[0]) + a2 * std::cos(2 * kPi * b2 * x[1]);
                });
            };
            bool preserved = true;
            for (int trial = 0; trial < 4; ++trial) {
                const auto u0 = mk(rng.next_u64());
                const auto bump = mk(rng.next_u64());
                const auto w0 = [&](const Vec& x) { return u0(x) + std::fabs(bump(x)) + 0.01; };
                const double T = 0.12;
                const auto ru = solve_time_dependent(f, Vec(1, 0), u0, T, g, SchemeParams{},
                                                     Boundary::Extrapolate, {T / 2});
                const auto rw = solve_time_dependent(f, Vec(1, 0), w0, T, g, SchemeParams{},
                                                     Boundary::Extrapolate, {T / 2});
                for (size_t s = 0; s < ru.slices.size(); ++s)
                    for (int64_t i = 0; i < g.size(); ++i)
                        preserved = preserved &&
                                    ru.slices[s].z.at(i) <= rw.slices[s].z.at(i) + 1e-12;
            }
            check(c, preserved, "comparison preserved at every step");
        }
        // grid subadditivity of theta with 4h slack
        {
            const Grid g = Grid::make(2, 1.0 / 16, 6.0);
            const FieldRealization f = make_field(cellular_spec(), opt.master_seed);
            const MinTimeResult from0 = solve_min_time(f, Vec(), g, SchemeParams{});
            const Vec y(1.5, 0.5);
            const MinTimeResult fromy = solve_min_time(f, y, g, SchemeParams{});
            Rng rng(mix64(opt.master_seed, 142));
            bool subadd = true;
            int tested = 0;
            for (int trial = 0; trial < 4000 && tested < 200; ++trial) {
                const Vec z(rng.uniform(-4, 4), rng.uniform(-4, 4));
                const double t0z = from0.theta.interp(z);
                const double t0y = from0.theta.interp(y);
                const double tyz = fromy.theta.interp(z);
                if (!std::isfinite(t0z) || !std::isfinite(t0y) || !std::isfinite(tyz)) continue;
                if (t0z > from0.trust_time || tyz > fromy.trust_time) continue;
                ++tested;
                subadd = subadd && t0z <= t0y + tyz + 4.0 * g.h;
            }
            check(c, subadd && tested >= 100, strf("subadditivity on %d sampled triples", tested));
        }
        // Dijkstra oracle equivalence on a 101^2 instance
        {
            const Grid g = Grid::make(2, 0.03, 1.5);
            const FieldRealization f = make_field(cellular_spec(), opt.master_seed);
            const MinTimeResult mt = solve_min_time(f, Vec(), g, SchemeParams{});
            const ScalarField dj = dijkstra_oracle(f, Vec(), g, 2);
            double worst = 0.0;
            const double cut = g.L / (2.0 * f.bound_M());
            for (int64_t i = 0; i < g.size(); ++i) {
                if (!mt.theta.finite_at(i) || mt.theta.at(i) > cut) continue;
                const double gap = std::fabs(mt.theta.at(i) - dj.at(i));
                const double allowed = 3.0 * g.h + 0.05 * mt.theta.at(i);
                worst = std::max(worst, gap - allowed);
            }
            check(c, worst <= 0.0, strf("dijkstra gap slack %.4f <= 0", worst));
        }
        return c;
    });

    std::printf("acceptance: %zu criteria, %s\n", report.criteria.size(),
                report.all_pass() ? "ALL PASS" : "FAILURES PRESENT");
    return report;
}

}  // namespace geq
