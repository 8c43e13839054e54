#include "geq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "geq/errors.hpp"
#include "geq/frozen.hpp"
#include "geq/homogenize.hpp"
#include "geq/svg.hpp"
#include "geq/trajectory.hpp"

namespace geq {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

double frozen_shear_margin(double amplitude) {
    if (std::fabs(amplitude - 0.5) < 1e-9) return frozen::kShearMarginA05;
    if (std::fabs(amplitude - 1.0) < 1e-9) return frozen::kShearMarginA1;
    if (std::fabs(amplitude - 2.0) < 1e-9) return frozen::kShearMarginA2;
    return -1.0;  // no frozen margin for this amplitude
}

}  // namespace

ExperimentReport run_enhancement(const EnhancementConfig& cfg, const ExperimentOptions& opt) {
    Timer timer;
    ensure_directory(opt.out_dir);
    ExperimentReport rep;
    rep.id = "enhancement";
    rep.params["amplitudes"] = strf("%zu", cfg.amplitudes.size());
    rep.params["T"] = strf("%g", cfg.time_horizon);

    const int ppp = opt.oracle ? 2 * cfg.points_per_period : cfg.points_per_period;
    const double T = opt.oracle ? 2.0 * cfg.time_horizon : cfg.time_horizon;
    std::vector<double> deltas = cfg.deltas;
    if (opt.oracle) deltas.push_back(deltas.back() / 2.0);

    const std::string hash = config_hash(strf("enh,%d,%g", ppp, T));
    const std::string prov = provenance_line(opt.master_seed, hash);
    CsvWriter csv(opt.out_dir + "/enhancement.csv",
                  {"amplitude", "direction", "estimator", "value"}, prov);

    const Vec e1(1, 0), e2(0, 1);
    std::vector<double> h_disc_e2, h_time_e2;
    for (double A : cfg.amplitudes) {
        const FieldSpec spec = FieldSpec::sinusoidal_shear(A);
        const Grid grid = Grid::make(2, 1.0 / ppp, 0.5);
        const SchemeParams params;
        const std::vector<uint64_t> seeds{opt.master_seed};

        const double d_e1 =
            effective_hamiltonian_discounted(spec, seeds, e1, deltas, grid, params,
                                             Boundary::Periodic)
                .extrapolated;
        const double t_e1 = effective_hamiltonian_time(spec, seeds, e1, T, grid, params,
                                                       Boundary::Periodic);
        const double d_e2 =
            effective_hamiltonian_discounted(spec, seeds, e2, deltas, grid, params,
                                             Boundary::Periodic)
                .extrapolated;
        const double t_e2 = effective_hamiltonian_time(spec, seeds, e2, T, grid, params,
                                                       Boundary::Periodic);
        csv.row({A, 1, 0, d_e1});
        csv.row({A, 1, 1, t_e1});
        csv.row({A, 2, 0, d_e2});
        csv.row({A, 2, 1, t_e2});
        h_disc_e2.push_back(d_e2);
        h_time_e2.push_back(t_e2);

        rep.add(Verdict::within(strf("enh.orthogonal-flat-disc-A%g", A), d_e1, 1.0, cfg.tol_flat,
                                "Hbar(e1) = 1 when <V,p> vanishes"));
        rep.add(Verdict::within(strf("enh.orthogonal-flat-time-A%g", A), t_e1, 1.0, cfg.tol_flat,
                                ""));
        const double margin = frozen_shear_margin(A);
        if (margin > 0.0 && A >= 2.0 - 1e-9) {
            rep.add(Verdict::ge("enh.active-margin-disc", d_e2, 1.0 + margin,
                                "frozen oracle margin"));
            rep.add(Verdict::ge("enh.active-margin-time", t_e2, 1.0 + margin, ""));
        }
        if (opt.oracle)
            std::printf("oracle: shear A=%g  Hbar(e2) disc=%.4f time=%.4f  margin=%.4f\n", A,
                        d_e2, t_e2, std::min(d_e2, t_e2) - 1.0);
    }

    bool mono = true;
    for (size_t i = 1; i < h_disc_e2.size(); ++i) {
        mono = mono && h_disc_e2[i] >= h_disc_e2[i - 1] * (1.0 - cfg.mono_slack);
        mono = mono && h_time_e2[i] >= h_time_e2[i - 1] * (1.0 - cfg.mono_slack);
    }
    rep.add(Verdict::boolean("enh.monotone-amplitude", mono,
                             "Hbar(e2) nondecreasing in amplitude within slack"));

    SvgPlot plot("shear enhancement", "amplitude", "Hbar(e2)");
    plot.add_line(cfg.amplitudes, h_disc_e2, "#c22", "discounted");
    plot.add_line(cfg.amplitudes, h_time_e2, "#22c", "time-dependent");
    plot.write(opt.out_dir + "/enhancement.svg", prov);
    rep.artifacts = {csv.path(), opt.out_dir + "/enhancement.svg",
                     opt.out_dir + "/enhancement_report.json"};

    rep.wall_seconds = timer.seconds();
    std::ofstream(opt.out_dir + "/enhancement_report.json")
        << rep.to_json(opt.master_seed, hash);
    return rep;
}

ExperimentReport run_counterexample(const CounterexampleConfig& cfg,
                                    const ExperimentOptions& opt) {
    Timer timer;
    ensure_directory(opt.out_dir);
    ExperimentReport rep;
    rep.id = "counterexample";
    const long n_max = *std::max_element(cfg.sample_sizes.begin(), cfg.sample_sizes.end());
    rep.params["n_max"] = strf("%ld", n_max);

    const std::string hash = config_hash(strf("cex,%ld", n_max));
    const std::string prov = provenance_line(opt.master_seed, hash);
    CsvWriter means_csv(opt.out_dir + "/counterexample_means.csv",
                        {"shape", "n", "mean_delta"}, prov);
    CsvWriter delta_csv(opt.out_dir + "/counterexample_delta.csv",
                        {"shape", "index", "delta", "window"}, prov);

    std::vector<std::vector<double>> mean_curves;
    for (size_t si = 0; si < cfg.shapes.size(); ++si) {
        const double shape = cfg.shapes[si];
        GapLaw law;
        law.alpha = shape;
        law.xm = 1.0;
        const uint64_t stream = mix64(opt.master_seed, 0xce0 + si);
        std::vector<double> deltas;
        double running = 0.0;
        double max_window = 0.0;
        std::vector<double> prefix_means;
        size_t next_size = 0;
        for (long i = 0; i < n_max; ++i) {
            const FieldRealization f =
                build_counterexample_field(law, 4.0, mix64(stream, static_cast<uint64_t>(i)));
            const double d = delta_of_realization(f);
            deltas.push_back(d);
            running += d;
            max_window = std::max(max_window, f.realized_window());
            if (i < 256) delta_csv.row({shape, static_cast<double>(i), d, f.realized_window()});
            if (next_size < cfg.sample_sizes.size() && i + 1 == cfg.sample_sizes[next_size]) {
                prefix_means.push_back(running / static_cast<double>(i + 1));
                means_csv.row({shape, static_cast<double>(i + 1), prefix_means.back()});
                ++next_size;
            }
        }
        mean_curves.push_back(prefix_means);
        rep.params[strf("max_window_shape_%g", shape)] = strf("%.1f", max_window);

        const bool divergent_regime = shape < 2.0;
        if (divergent_regime) {
            const int k = static_cast<int>(n_max / cfg.hill_fraction);
            const double hill = hill_tail_index(deltas, k);
            rep.add(Verdict::within(strf("cex.hill-window-%g", shape), hill,
                                    0.5 * (frozen::kHillLo + frozen::kHillHi),
                                    0.5 * (frozen::kHillHi - frozen::kHillLo),
                                    strf("tail index of delta, k=%d", k)));
            bool increasing = true;
            for (size_t q = 1; q < prefix_means.size(); ++q)
                increasing = increasing && prefix_means[q] > prefix_means[q - 1];
            rep.add(Verdict::boolean(strf("cex.running-mean-increasing-%g", shape), increasing,
                                     "running mean of delta grows across decades"));
            if (prefix_means.size() >= 2)
                rep.add(Verdict::ge(strf("cex.heavy-growth-%g", shape),
                                    prefix_means.back() / prefix_means.front(),
                                    frozen::kCexGrowthFactor,
                                    "mean(n_max) / mean(n_min)"));

            // Spot-check the trajectory argument: while |V2| > 1 around the
            // origin the vertical motion cannot change sign before delta.
            long consistent = 0, probed = 0;
            for (long i = 0; i < n_max && probed < cfg.trajectory_probes; ++i) {
                const FieldRealization f = build_counterexample_field(
                    law, 4.0, mix64(stream, static_cast<uint64_t>(i)));
                const double d = deltas[static_cast<size_t>(i)];
                if (d < 0.05) continue;
                const double v20 = f.velocity(Vec(0, 0))[1];
                if (std::fabs(v20) <= 1.0) continue;
                ++probed;
                const double sgn = v20 > 0 ? 1.0 : -1.0;
                const double horizon = std::min(d * 0.999, 20.0);
                // adversarial control pushing against the trapped direction
                const TrajectoryRecord tr =
                    integrate(f, Vec(), 0.0, Vec(0.0, -sgn), horizon);
                bool ok = true;
                for (size_t q = 1; q < tr.t.size(); ++q)
                    ok = ok && sgn * tr.x[q][1] > 0.0;
                consistent += ok;
            }
            rep.add(Verdict::boolean(strf("cex.trajectory-bound-%g", shape),
                                     probed > 0 && consistent == probed,
                                     strf("theta(0,e2)+theta(0,-e2) >= delta on %ld probes",
                                          probed)));
        } else {
            if (prefix_means.size() >= 2) {
                const double ratio = prefix_means.back() / prefix_means[prefix_means.size() - 2];
                rep.add(Verdict::within(strf("cex.control-stabilizes-%g", shape), ratio, 1.0,
                                        cfg.control_band,
                                        "finite-mean control: running mean flattens"));
            }
        }
    }

    SvgPlot plot("counterexample running means", "log10 n", "mean delta");
    for (size_t si = 0; si < cfg.shapes.size() && si < mean_curves.size(); ++si) {
        std::vector<double> xs;
        for (size_t q = 0; q < mean_curves[si].size(); ++q)
            xs.push_back(std::log10(static_cast<double>(cfg.sample_sizes[q])));
        plot.add_line(xs, mean_curves[si], si == 0 ? "#c22" : "#22c",
                      strf("shape %.2g", cfg.shapes[si]));
    }
    plot.write(opt.out_dir + "/counterexample.svg", prov);
    rep.artifacts = {means_csv.path(), delta_csv.path(), opt.out_dir + "/counterexample.svg",
                     opt.out_dir + "/counterexample_report.json"};

    rep.wall_seconds = timer.seconds();
    std::ofstream(opt.out_dir + "/counterexample_report.json")
        << rep.to_json(opt.master_seed, hash);
    return rep;
}

ExperimentReport run_homogenization(const HomogenizationConfig& cfg,
                                    const ExperimentOptions& opt) {
    Timer timer;
    ensure_directory(opt.out_dir);
    ExperimentReport rep;
    rep.id = "homogenization";
    const Vec p(0.0, cfg.p2);
    rep.params["p"] = strf("(0,%g)", cfg.p2);

    const std::string hash =
        config_hash(strf("hom,%g,%d,%g", cfg.amplitude, cfg.points_per_period, cfg.p2));
    const std::string prov = provenance_line(opt.master_seed, hash);

    FieldSpec base;
    base.family = FieldFamily::PeriodicCellular;
    base.amplitude = cfg.amplitude;
    base.wavenumber = 2.0 * kPi;
    const std::vector<uint64_t> seeds{opt.master_seed};

    // Reference effective Hamiltonian from the estimator pipeline.
    const Grid ref_grid = Grid::make(2, 1.0 / 64, 0.5);
    const double h_ref = effective_hamiltonian_time(base, seeds, p, cfg.reference_T, ref_grid,
                                                    SchemeParams{}, Boundary::Periodic);
    rep.params["H_ref"] = strf("%.6f", h_ref);

    CsvWriter csv(opt.out_dir + "/homogenization.csv", {"epsilon", "h", "sup_error"}, prov);
    std::vector<double> errors;
    for (double eps : cfg.epsilons) {
        FieldSpec spec = base;
        spec.wavenumber = 2.0 * kPi / eps;  // V(x / eps)
        const double h = eps / cfg.points_per_period;
        const Grid grid = Grid::make(2, h, 0.5);
        const FieldRealization f = make_field(spec, opt.master_seed);
        const TimeDependentResult r =
            solve_time_dependent(f, p, nullptr, 1.0, grid, SchemeParams{}, Boundary::Periodic);
        // u^eps = <p,x> + z; the homogenized solution is <p,x> + t Hbar(p),
        // so the sup-norm error at t=1 is sup |z - Hbar|.
        double err = 0.0;
        const ScalarField& z = r.final_slice();
        for (int64_t i = 0; i < grid.size(); ++i)
            err = std::max(err, std::fabs(z.at(i) - h_ref));
        errors.push_back(err);
        csv.row({eps, h, err});
    }

    bool decreasing = true;
    for (size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] < errors[i - 1];
    rep.add(Verdict::boolean("hom.error-decreasing", decreasing,
                             "sup-norm error shrinks along the epsilon list"));
    rep.add(Verdict::le("hom.final-error", errors.back(),
                        cfg.final_error_cap * (1.0 + norm(p)),
                        "error at the finest epsilon"));

    SvgPlot plot("homogenization convergence", "epsilon", "sup error at t=1");
    plot.add_line(cfg.epsilons, errors, "#c22", "");
    plot.add_points(cfg.epsilons, errors, "#c22", "");
    plot.write(opt.out_dir + "/homogenization.svg", prov);
    rep.artifacts = {csv.path(), opt.out_dir + "/homogenization.svg",
                     opt.out_dir + "/homogenization_report.json"};

    rep.wall_seconds = timer.seconds();
    std::ofstream(opt.out_dir + "/homogenization_report.json")
        << rep.to_json(opt.master_seed, hash);
    return rep;
}

ExperimentReport run_random_control_study(const RandomControlConfig& cfg,
                                          const ExperimentOptions& opt) {
    Timer timer;
    ensure_directory(opt.out_dir);
    ExperimentReport rep;
    rep.id = "random_control";
    const Vec a_bar(cfg.a_bar1, 0.0);
    rep.params["a_bar"] = strf("(%g,0)", cfg.a_bar1);

    const std::string hash = config_hash(strf("rc,%g,%g,%g", cfg.a_bar1, cfg.eps_c, cfg.horizon));
    const std::string prov = provenance_line(opt.master_seed, hash);

    FieldSpec spec;
    spec.family = FieldFamily::PeriodicCellular;
    spec.amplitude = 2.0;
    spec.wavenumber = 2.0 * kPi;
    const FieldRealization field = make_field(spec, opt.master_seed);

    // Moment checks of the sampled schedules (eq-level properties of the
    // gap density and the index distribution).
    {
        const double delta = cfg.delta_list[0];
        Rng rng(mix64(opt.master_seed, 0x300e27));
        const long n = cfg.moment_samples;
        ControlSchedule s = sample_random_control(a_bar, cfg.eps_c, delta,
                                                  delta * static_cast<double>(n) * 1.05, 2, rng);
        const size_t m = std::min<size_t>(s.k.size(), static_cast<size_t>(n));
        double sum = 0.0, sum_dev = 0.0;
        std::vector<long> freq(4, 0);
        for (size_t i = 0; i < m; ++i) {
            const double gap = s.sigma[i + 1] - s.sigma[i];
            sum += gap;
            sum_dev += std::fabs(gap - delta);
            freq[static_cast<size_t>(s.k[i] - 1)] += 1;
        }
        const double mean_gap = sum / static_cast<double>(m);
        const double sd = delta * delta / std::sqrt(3.0);
        rep.add(Verdict::within("rc.moment-gap-mean", mean_gap, delta,
                                3.0 * sd / std::sqrt(static_cast<double>(m)),
                                "empirical mean gap vs delta at 3 sigma"));
        rep.add(Verdict::le("rc.moment-gap-dev", sum_dev / static_cast<double>(m),
                            delta * delta, "E|t - delta| <= delta^2"));
        double worst_freq_err = 0.0;
        for (long f : freq)
            worst_freq_err = std::max(
                worst_freq_err, std::fabs(static_cast<double>(f) / static_cast<double>(m) - 0.25));
        rep.add(Verdict::le("rc.moment-index-freq", worst_freq_err,
                            3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(m)),
                            "each index frequency vs 1/(2N) at 3 sigma"));
    }

    CsvWriter drift_csv(opt.out_dir + "/random_control_drift.csv",
                        {"delta", "traj", "drift", "ratio"}, prov);
    std::vector<double> ratios;
    TrajectoryRecord gamma_traj;
    ControlSchedule gamma_sched;
    for (size_t di = 0; di < cfg.delta_list.size(); ++di) {
        const double delta = cfg.delta_list[di];
        double acc = 0.0;
        for (int j = 0; j < cfg.n_traj; ++j) {
            Rng rng(mix64(opt.master_seed, 0xd21f7 + 64 * di + static_cast<size_t>(j)));
            const ControlSchedule sched =
                sample_random_control(a_bar, cfg.eps_c, delta, cfg.horizon, 2, rng);
            IntegrateOptions io;
            io.record_stride = 1 << 4;
            const TrajectoryRecord tr = integrate(field, Vec(), 0.0, sched, cfg.horizon, io);
            const double d = drift_statistic(tr, a_bar);
            acc += d;
            drift_csv.row({delta, static_cast<double>(j), d, d / delta});
            if (di == 1 && j == 0) {
                gamma_traj = tr;
                gamma_sched = sched;
            }
        }
        const double mean_drift = acc / cfg.n_traj;
        ratios.push_back(mean_drift / delta);
        rep.add(Verdict::le(strf("rc.drift-bounded-%g", delta), mean_drift,
                            frozen::kDriftCap * delta, "drift <= C delta, frozen C"));
    }
    const double ratio_spread =
        *std::max_element(ratios.begin(), ratios.end()) /
        std::max(1e-12, *std::min_element(ratios.begin(), ratios.end()));
    rep.add(Verdict::le("rc.drift-ratio-stable", ratio_spread, cfg.ratio_stability,
                        "fitted C stable across the delta list"));
    if (opt.oracle)
        std::printf("oracle: drift/delta ratios max=%.3f -> suggest kDriftCap >= %.3f\n",
                    *std::max_element(ratios.begin(), ratios.end()),
                    2.0 * *std::max_element(ratios.begin(), ratios.end()));

    // Gamma diagnostic: theta(0, X_sigma_n)/sigma_n along the random
    // trajectory, Cesaro-averaged. The limit itself is random; only the
    // stabilization is asserted.
    {
        const Grid grid = Grid::make(2, 1.0 / 12, 18.0);
        const MinTimeResult mt = solve_min_time(field, Vec(), grid, SchemeParams{});
        CsvWriter gcsv(opt.out_dir + "/random_control_gamma.csv",
                       {"n", "sigma_n", "theta", "ratio", "cesaro"}, prov);
        std::vector<double> cesaro;
        double acc = 0.0;
        long n = 0;
        for (size_t i = 0; i < gamma_sched.sigma.size(); ++i) {
            const double t = gamma_sched.sigma[i];
            if (t <= 0.0) continue;
            const Vec x = gamma_traj.at(t);
            if (norm(x) > 0.9 * grid.covered_half_width()) break;
            const double th = mt.theta.interp(x);
            if (!std::isfinite(th) || th > mt.trust_time) break;
            ++n;
            acc += th / t;
            cesaro.push_back(acc / static_cast<double>(n));
            if (n % 8 == 0 || n < 32)
                gcsv.row({static_cast<double>(n), t, th, th / t, cesaro.back()});
        }
        double osc = 1.0;
        if (cesaro.size() >= 20) {
            const size_t lo = cesaro.size() - cesaro.size() / 10;
            double cmin = cesaro[lo], cmax = cesaro[lo];
            for (size_t i = lo; i < cesaro.size(); ++i) {
                cmin = std::min(cmin, cesaro[i]);
                cmax = std::max(cmax, cesaro[i]);
            }
            osc = (cmax - cmin) / std::max(1e-12, 0.5 * (cmax + cmin));
        }
        rep.add(Verdict::le("rc.gamma-cesaro", osc, frozen::kGammaOscillationCap,
                            strf("last-decade oscillation over %zu points", cesaro.size())));
        rep.artifacts.push_back(gcsv.path());
    }

    SvgPlot plot("random-control drift", "delta", "drift / delta");
    plot.add_line(cfg.delta_list, ratios, "#c22", "");
    plot.add_points(cfg.delta_list, ratios, "#c22", "");
    plot.write(opt.out_dir + "/random_control.svg", prov);
    rep.artifacts.push_back(drift_csv.path());
    rep.artifacts.push_back(opt.out_dir + "/random_control.svg");
    rep.artifacts.push_back(opt.out_dir + "/random_control_report.json");

    rep.wall_seconds = timer.seconds();
    std::ofstream(opt.out_dir + "/random_control_report.json")
        << rep.to_json(opt.master_seed, hash);
    return rep;
}

}  // namespace geq
