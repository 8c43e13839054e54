#include "geq/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "geq/errors.hpp"

namespace geq {

MinTimeEnsemble solve_ensemble(const FieldSpec& spec, const std::vector<uint64_t>& seeds,
                               const Grid& grid, const SchemeParams& params, int threads) {
    if (seeds.empty()) throw ConfigError("solve_ensemble: need at least one seed");
    MinTimeEnsemble ens;
    ens.spec = spec;
    ens.seeds = seeds;
    ens.grid = grid;
    ens.solves.resize(seeds.size());
    const int nw = std::max(1, std::min<int>(threads, static_cast<int>(seeds.size())));
    const auto work = [&](size_t begin, size_t step) {
        for (size_t i = begin; i < seeds.size(); i += step) {
            const FieldRealization f = make_field(spec, seeds[i]);
            ens.solves[i] = solve_min_time(f, Vec(), grid, params);
        }
    };
    if (nw == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(work, static_cast<size_t>(w), nw);
        for (auto& t : pool) t.join();
    }
    ens.bound_M = make_field(spec, seeds[0]).bound_M();
    return ens;
}

TimeConstantEstimate time_constant(const MinTimeEnsemble& ens, const Vec& v,
                                   const std::vector<double>& radii, double bound_tol) {
    if (radii.size() < 2) throw ConfigError("time_constant: need at least two radii");
    for (size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw ConfigError("time_constant: radii must increase");

    TimeConstantEstimate est;
    est.direction = v;
    est.radii = radii;
    est.ratios.assign(radii.size(), 0.0);
    std::vector<int> counts(radii.size(), 0);

    std::vector<double> seed_intercepts;
    std::vector<double> pooled_x, pooled_y;
    for (const MinTimeResult& mt : ens.solves) {
        std::vector<double> xs, ys;
        for (size_t j = 0; j < radii.size(); ++j) {
            const double r = radii[j];
            const double th = mt.theta.interp(r * v);
            if (!std::isfinite(th) || th > mt.trust_time) {
                est.partial = true;
                continue;
            }
            xs.push_back(1.0 / r);
            ys.push_back(th / r);
            est.ratios[j] += th / r;
            counts[j] += 1;
        }
        if (xs.size() >= 2) {
            seed_intercepts.push_back(fit_line(xs, ys).intercept);
            pooled_x.insert(pooled_x.end(), xs.begin(), xs.end());
            pooled_y.insert(pooled_y.end(), ys.begin(), ys.end());
        } else {
            est.partial = true;
        }
    }
    for (size_t j = 0; j < radii.size(); ++j)
        est.ratios[j] = counts[j] ? est.ratios[j] / counts[j] : std::numeric_limits<double>::quiet_NaN();
    if (pooled_x.size() < 2) throw TrustRegionError("time_constant: no radius inside the trusted region");
    est.q_bar = fit_line(pooled_x, pooled_y).intercept;
    for (double qi : seed_intercepts) est.spread = std::max(est.spread, std::fabs(qi - est.q_bar));
    const double lo = 1.0 / ens.bound_M - bound_tol, hi = 1.0 + bound_tol;
    est.bounds_ok = est.q_bar >= lo && est.q_bar <= hi;
    return est;
}

std::vector<Vec> SupportFunctionTable::shape_points() const {
    std::vector<Vec> pts;
    for (size_t k = 0; k < directions.size(); ++k)
        pts.push_back((1.0 / q[k]) * directions[k]);
    return pts;
}

std::vector<Vec> SupportFunctionTable::shape_polygon() const { return convex_hull(shape_points()); }

double SupportFunctionTable::convexity_violation() const {
    // Midpoint test on adjacent triples: the 1-homogeneous extension is
    // convex iff q(v_{k-1} + v_{k+1}) <= q(v_{k-1}) + q(v_{k+1}); for
    // uniform circle directions v_{k-1} + v_{k+1} is parallel to v_k.
    const size_t n = directions.size();
    double worst = 0.0;
    for (size_t k = 0; k < n; ++k) {
        const size_t a = (k + n - 1) % n, b = (k + 1) % n;
        const double len = norm(directions[a] + directions[b]);
        const double lhs = len * q[k];
        const double rhs = q[a] + q[b];
        if (lhs > rhs) worst = std::max(worst, (lhs - rhs) / rhs);
    }
    return worst;
}

double SupportFunctionTable::lipschitz_excess() const {
    const size_t n = directions.size();
    double worst = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double gap = std::fabs(q[i] - q[j]) - norm(directions[i] - directions[j]);
            worst = std::max(worst, gap);
        }
    return worst;
}

SupportFunctionTable support_table(const MinTimeEnsemble& ens, int k_directions,
                                   const std::vector<double>& radii) {
    if (k_directions < 8) throw ConfigError("support_table: need at least 8 directions");
    SupportFunctionTable tab;
    for (int k = 0; k < k_directions; ++k) {
        const Vec v = unit2(2.0 * kPi * k / k_directions);
        const TimeConstantEstimate est = time_constant(ens, v, radii);
        tab.directions.push_back(v);
        tab.q.push_back(est.q_bar);
        tab.spread.push_back(est.spread);
        tab.partial = tab.partial || est.partial;
    }
    return tab;
}

double effective_hamiltonian_dual(const SupportFunctionTable& table, const Vec& p) {
    if (table.directions.empty()) throw ConfigError("effective_hamiltonian_dual: empty table");
    double best = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < table.directions.size(); ++k)
        best = std::max(best, dot(p, (-1.0 / table.q[k]) * table.directions[k]));
    return best;
}

DiscountedEstimate effective_hamiltonian_discounted(const FieldSpec& spec,
                                                    const std::vector<uint64_t>& seeds,
                                                    const Vec& p, std::vector<double> deltas,
                                                    const Grid& grid, const SchemeParams& params,
                                                    Boundary bc) {
    if (deltas.empty()) throw ConfigError("discounted estimate: empty delta schedule");
    for (size_t i = 1; i < deltas.size(); ++i)
        if (deltas[i] >= deltas[i - 1])
            throw ConfigError("discounted estimate: delta schedule must decrease");
    DiscountedEstimate est;
    est.deltas = deltas;
    for (double d : deltas) {
        double acc = 0.0;
        for (uint64_t s : seeds) {
            const FieldRealization f = make_field(spec, s);
            acc += solve_discounted(f, p, d, grid, params, bc).hbar_estimate();
        }
        est.values.push_back(acc / static_cast<double>(seeds.size()));
    }
    est.extrapolated =
        deltas.size() >= 2 ? fit_line(est.deltas, est.values).intercept : est.values[0];
    return est;
}

double effective_hamiltonian_time(const FieldSpec& spec, const std::vector<uint64_t>& seeds,
                                  const Vec& P, double T, const Grid& grid,
                                  const SchemeParams& params, Boundary bc) {
    double acc = 0.0;
    for (uint64_t s : seeds) {
        const FieldRealization f = make_field(spec, s);
        const TimeDependentResult r = solve_time_dependent(f, P, nullptr, T, grid, params, bc);
        acc += r.value_at_origin() / T;
    }
    return acc / static_cast<double>(seeds.size());
}

double mean_shift_reduce(double h_tilde_at_p, const Vec& mean_velocity, const Vec& p) {
    return h_tilde_at_p + dot(mean_velocity, p);
}

double pairwise_relative_disagreement(double a, double b, double c) {
    const double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(c), 1e-12});
    const double spread = std::max({a, b, c}) - std::min({a, b, c});
    return spread / scale;
}

VolumeGrowthReport volume_growth_check(const MinTimeResult& mt, const std::vector<double>& times) {
    if (mt.theta.grid.dim != 2)
        throw ConfigError("volume_growth_check: 2D only");
    VolumeGrowthReport rep;
    rep.isoperimetric_floor = std::sqrt(kPi);
    // Perimeter-window constant with gamma1 = 1/2, gamma2 = 1:
    // K > N |B(0,1)| (M gamma2)^N / (gamma2^N - gamma1^N).
    const double M = (mt.trust_time > 0.0)
                         ? (mt.theta.grid.covered_half_width() - norm(mt.source)) / mt.trust_time
                         : 1.0;
    rep.perimeter_constant = 2.0 * kPi * M * M / (1.0 - 0.25);
    for (double t : times) {
        VolumeGrowthRow row;
        row.t = t;
        const ReachableSet rs = reachable_set(mt, t);
        row.volume = rs.volume;
        row.growth_ratio = std::sqrt(rs.volume) / t;
        row.perimeter_window_min = std::numeric_limits<double>::infinity();
        for (int q = 0; q <= 8; ++q) {
            const double s = t * (0.5 + 0.5 * q / 8.0);
            const ReachableSet rss = reachable_set(mt, s);
            row.perimeter_window_min = std::min(row.perimeter_window_min, rss.perimeter / s);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

double shape_check(const MinTimeResult& mt, const SupportFunctionTable& table, double t) {
    return symmetric_difference_fraction(mt, t, table.shape_polygon());
}

ReachabilityFit reachability_fit(const MinTimeEnsemble& ens, double r_lo, double r_hi) {
    ReachabilityFit fit;
    std::vector<double> xs, ys;
    for (const MinTimeResult& mt : ens.solves) {
        const Grid& g = mt.theta.grid;
        for (int64_t i = 0; i < g.size(); ++i) {
            const Vec y = g.coord(i);
            const double r = norm(y);
            if (r < r_lo || r > r_hi) continue;
            if (!mt.theta.finite_at(i) || mt.theta.at(i) > mt.trust_time) {
                ++fit.unreachable;
                continue;
            }
            xs.push_back(r);
            ys.push_back(mt.theta.at(i));
        }
    }
    fit.samples = static_cast<long>(xs.size());
    if (fit.samples >= 2) {
        const LineFit lf = fit_line(xs, ys);
        fit.slope = lf.slope;
        fit.intercept = lf.intercept;
    }
    return fit;
}

double hill_tail_index(std::vector<double> samples, int k_upper) {
    if (k_upper < 2 || static_cast<size_t>(k_upper) + 1 > samples.size())
        throw ConfigError("hill_tail_index: need 2 <= k < n order statistics");
    std::sort(samples.begin(), samples.end(), std::greater<double>());
    const double x_k = samples[static_cast<size_t>(k_upper)];
    if (!(x_k > 0.0)) throw ConfigError("hill_tail_index: nonpositive order statistic");
    double acc = 0.0;
    for (int i = 0; i < k_upper; ++i) acc += std::log(samples[static_cast<size_t>(i)] / x_k);
    return static_cast<double>(k_upper) / acc;
}

}  // namespace geq
