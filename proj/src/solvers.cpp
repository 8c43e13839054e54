#include "geq/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geq/errors.hpp"

namespace geq {

namespace {

// Working value for "not yet reached". The Gauss-Seidel halo decays
// geometrically from this level, so it must sit a few octaves above any
// legitimate arrival time, not at float extremes.
constexpr double kBig = 1e6;
constexpr double kBigCut = 1e5;  // values above this report as the sentinel
const double kInf = std::numeric_limits<double>::infinity();

std::vector<Vec> cache_velocity(const FieldRealization& f, const Grid& g) {
    std::vector<Vec> V(static_cast<size_t>(g.size()));
    for (int64_t i = 0; i < g.size(); ++i) V[static_cast<size_t>(i)] = f.velocity(g.coord(i));
    return V;
}

SchemeParams resolve_sigma(const FieldRealization& f, const Grid& g, const SchemeParams& params,
                           const std::vector<Vec>& V) {
    SchemeParams p = params;
    p.validate(g.dim);
    std::array<double, 3> bound{0.0, 0.0, 0.0};
    for (const Vec& v : V)
        for (int d = 0; d < g.dim; ++d)
            bound[static_cast<size_t>(d)] = std::max(bound[static_cast<size_t>(d)], std::fabs(v[d]));
    if (p.sigma_is_auto()) {
        for (int d = 0; d < g.dim; ++d) p.sigma[static_cast<size_t>(d)] = 1.0 + bound[static_cast<size_t>(d)];
    } else {
        for (int d = 0; d < g.dim; ++d)
            if (p.sigma[static_cast<size_t>(d)] + 1e-12 < 1.0 + bound[static_cast<size_t>(d)])
                throw ConfigError(
                    "scheme: sigma_" + std::to_string(d + 1) +
                    " violates the monotonicity requirement sigma_i >= 1 + max|V_i|");
    }
    (void)f;
    return p;
}

void check_periodic_compatible(const FieldRealization& f, const Grid& g) {
    const auto per = f.periods();
    const double width = 2.0 * g.covered_half_width();
    for (int d = 0; d < g.dim; ++d) {
        const double p = per[static_cast<size_t>(d)];
        if (p == 0.0) continue;
        if (p < 0.0)
            throw ConfigError("periodic boundary requested for an aperiodic field axis");
        const double q = width / p;
        if (std::fabs(q - std::round(q)) > 1e-9 * std::max(1.0, q))
            throw ConfigError(
                "periodic boundary: covered width " + std::to_string(width) +
                " is not an integer multiple of the field period " + std::to_string(p));
    }
}

// Neighbor index along one axis with periodic wrap; nodes 0 and n-1 are
// the same physical point, so stepping past n-1 lands on 1.
inline int wrap_index(int i, int n) {
    if (i < 0) return i + (n - 1);
    if (i >= n) return i - (n - 1);
    return i;
}

}  // namespace

double segment_travel_time(const Vec& d, const Vec& V) {
    // smallest t >= 0 with |d - tV|^2 <= t^2, i.e. with
    // a t^2 + 2<d,V> t - |d|^2 >= 0 where a = 1 - |V|^2.
    const double dd = dot(d, d);
    if (dd == 0.0) return 0.0;
    const double dv = dot(d, V);
    const double a = 1.0 - dot(V, V);
    const double disc = dv * dv + a * dd;
    if (std::fabs(a) < 1e-14) return dv > 0.0 ? dd / (2.0 * dv) : kInf;
    if (a > 0.0) return (-dv + std::sqrt(disc)) / a;
    // |V| > 1: traversable only along the drift; take the smaller root.
    if (dv <= 0.0 || disc < 0.0) return kInf;
    return (dv - std::sqrt(disc)) / (-a);
}

const MinTimeResult& MinTimeResult::require_converged() const {
    if (!converged)
        throw IterationLimitError(
            strf("min-time sweep hit the cycle cap (residual %.3g after %d cycles)", residual,
                 cycles),
            residual, cycles);
    return *this;
}

MinTimeResult solve_min_time(const FieldRealization& f, const Vec& source, const Grid& g,
                             const SchemeParams& params0) {
    const std::vector<Vec> V = cache_velocity(f, g);
    const SchemeParams params = resolve_sigma(f, g, params0, V);
    const double h = g.h;
    const double sigsum = params.sigma_sum(g.dim);
    const double tol = params.tol_factor * h;

    MinTimeResult res;
    const auto src_idx = g.nearest(source);
    const Vec snapped = g.coord(src_idx[0], src_idx[1], src_idx[2]);
    res.source = snapped;
    res.source_snapped = dist(snapped, source) > 1e-12;
    res.trust_time = (g.covered_half_width() - norm(snapped)) / f.bound_M();

    const int n = g.n;
    const int nz = g.dim == 3 ? n : 1;
    std::vector<double> w(static_cast<size_t>(g.size()), kBig);
    std::vector<uint8_t> pinned(static_cast<size_t>(g.size()), 0);

    // Exact local travel times on a ball around the source remove the
    // cone-singularity error of the scheme. The segment formula freezes
    // V at the midpoint, so its bias ~ Lip r^2 / 2 must stay below h/4;
    // smooth slow fields get a large exact ball, rough ones only the
    // immediate ring.
    const double lip = f.lipschitz();
    double ball = std::min(0.45, 0.5 * g.covered_half_width());
    if (lip > 0.0) ball = std::min(ball, std::sqrt(h / (2.0 * lip)));
    ball = std::max(ball, 2.1 * h);
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Vec x = g.coord(ix, iy, iz);
                const double r = dist(x, snapped);
                if (r > ball) continue;
                const int64_t id = g.flat(ix, iy, iz);
                const double t = segment_travel_time(x - snapped, f.velocity(0.5 * (x + snapped)));
                if (std::isfinite(t)) {
                    w[static_cast<size_t>(id)] = t;
                    pinned[static_cast<size_t>(id)] = 1;
                }
            }
    w[static_cast<size_t>(g.flat(src_idx[0], src_idx[1], src_idx[2]))] = 0.0;
    pinned[static_cast<size_t>(g.flat(src_idx[0], src_idx[1], src_idx[2]))] = 1;

    const int64_t sx = 1, sy = n, sz = static_cast<int64_t>(n) * n;
    const int64_t strides[3] = {sx, sy, sz};

    // One-sided extrapolation ghost at the box edge, clamped from below
    // so the boundary can only behave as outflow.
    const auto neighbor = [&](int64_t id, const std::array<int, 3>& ijk, int axis, int dir) {
        const int pos = ijk[static_cast<size_t>(axis)];
        const int npos = pos + dir;
        if (npos < 0 || npos >= n) {
            const double vb = w[static_cast<size_t>(id)];
            const double vin = w[static_cast<size_t>(id - dir * strides[axis])];
            return std::max(2.0 * vb - vin, vb);
        }
        return w[static_cast<size_t>(id + dir * strides[axis])];
    };

    double residual = kBig;
    int cycle = 0;
    int clean_cycles = 0;
    bool converged = false;
    for (; cycle < params.max_cycles && !converged; ++cycle) {
        residual = 0.0;
        int64_t newly = 0;
        for (int ord = 0; ord < (1 << g.dim); ++ord) {
            const int dx = (ord & 1) ? -1 : 1;
            const int dy = (ord & 2) ? -1 : 1;
            const int dz = (ord & 4) ? -1 : 1;
            const int x0 = dx > 0 ? 0 : n - 1, x1 = dx > 0 ? n : -1;
            const int y0 = dy > 0 ? 0 : n - 1, y1 = dy > 0 ? n : -1;
            const int z0 = g.dim == 3 ? (dz > 0 ? 0 : n - 1) : 0;
            const int z1 = g.dim == 3 ? (dz > 0 ? n : -1) : 1;
            for (int iz = z0; iz != z1; iz += dz)
                for (int iy = y0; iy != y1; iy += dy)
                    for (int ix = x0; ix != x1; ix += dx) {
                        const int64_t id = g.flat(ix, iy, iz);
                        if (pinned[static_cast<size_t>(id)]) continue;
                        const std::array<int, 3> ijk{ix, iy, iz};
                        Vec pbar;
                        double avg = 0.0;
                        for (int ax = 0; ax < g.dim; ++ax) {
                            const double tp = neighbor(id, ijk, ax, +1);
                            const double tm = neighbor(id, ijk, ax, -1);
                            pbar[ax] = (tp - tm) / (2.0 * h);
                            avg += params.sigma[static_cast<size_t>(ax)] * (tp + tm);
                        }
                        const Vec& Vx = V[static_cast<size_t>(id)];
                        const double H = norm(pbar) + dot(Vx, pbar);
                        const double cand = (1.0 - H) * h / sigsum + avg / (2.0 * sigsum);
                        const double old = w[static_cast<size_t>(id)];
                        if (cand < old) {
                            w[static_cast<size_t>(id)] = cand;
                            if (old >= kBigCut && cand < kBigCut)
                                ++newly;
                            else if (old < kBigCut)
                                residual = std::max(residual, old - cand);
                        }
                    }
        }
        // The decaying halo above the cut is invisible to the residual,
        // so demand two consecutive clean cycles.
        clean_cycles = (residual < tol && newly == 0) ? clean_cycles + 1 : 0;
        converged = clean_cycles >= 2;
    }

    res.residual = residual;
    res.cycles = cycle;
    res.converged = converged;
    res.theta.grid = g;
    res.theta.kind = FieldKind::MinTime;
    res.theta.v.resize(w.size());
    res.theta.reached.resize(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        const bool ok = w[i] < kBigCut;
        res.theta.reached[i] = ok;
        res.theta.v[i] = ok ? w[i] : kInf;
    }
    return res;
}

double TimeDependentResult::value_at_origin() const {
    const ScalarField& z = final_slice();
    return z.at(z.grid.flat(z.grid.n_half, z.grid.n_half, z.grid.dim == 3 ? z.grid.n_half : 0));
}

TimeDependentResult solve_time_dependent(const FieldRealization& f, const Vec& P,
                                         const std::function<double(const Vec&)>& z0, double T,
                                         const Grid& g, const SchemeParams& params0, Boundary bc,
                                         const std::vector<double>& snapshots) {
    if (!(T > 0.0)) throw ConfigError("time-dependent solve: T must be positive");
    const std::vector<Vec> V = cache_velocity(f, g);
    const SchemeParams params = resolve_sigma(f, g, params0, V);
    if (bc == Boundary::Periodic) {
        check_periodic_compatible(f, g);
    } else {
        const double need = 0.5 * g.L + 2.0 * f.bound_M() * T;
        if (g.L < need)
            throw ConfigError(strf(
                "time-dependent solve: domain of dependence violated, need L >= L/2 + 2MT "
                "(L = %.3g, required %.3g)",
                g.L, need));
    }

    const double h = g.h;
    const int n = g.n;
    const int nz = g.dim == 3 ? n : 1;
    const double dt_max = params.dt(g);
    const long steps = std::max(1L, static_cast<long>(std::ceil(T / dt_max - 1e-12)));
    const double dt = T / static_cast<double>(steps);

    std::vector<double> z(static_cast<size_t>(g.size()), 0.0);
    if (z0)
        for (int64_t i = 0; i < g.size(); ++i) z[static_cast<size_t>(i)] = z0(g.coord(i));
    std::vector<double> znew(z.size());

    std::vector<long> snap_steps;
    for (double s : snapshots) {
        long k = std::lround(s / dt);
        snap_steps.push_back(std::clamp(k, 0L, steps));
    }

    TimeDependentResult out;
    out.dt = dt;
    out.steps = steps;
    out.core_half_width = bc == Boundary::Periodic ? g.covered_half_width() : 0.5 * g.L;

    const int64_t strides[3] = {1, n, static_cast<int64_t>(n) * n};
    const bool periodic = bc == Boundary::Periodic;

    const auto take_snapshot = [&](long k) {
        TimeSlice s;
        s.t = dt * static_cast<double>(k);
        s.z.grid = g;
        s.z.kind = FieldKind::TimeSlice;
        s.z.v = z;
        out.slices.push_back(std::move(s));
    };
    for (long k : snap_steps)
        if (k == 0) take_snapshot(0);

    for (long step = 0; step < steps; ++step) {
        for (int iz = 0; iz < nz; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const int64_t id = g.flat(ix, iy, iz);
                    const int ijk[3] = {ix, iy, iz};
                    Vec dplus, dminus;
                    for (int ax = 0; ax < g.dim; ++ax) {
                        double vp, vm;
                        const int pos = ijk[ax];
                        if (periodic) {
                            const int64_t base = id - pos * strides[ax];
                            vp = z[static_cast<size_t>(base + wrap_index(pos + 1, n) * strides[ax])];
                            vm = z[static_cast<size_t>(base + wrap_index(pos - 1, n) * strides[ax])];
                        } else {
                            const double vc = z[static_cast<size_t>(id)];
                            vp = pos + 1 < n
                                     ? z[static_cast<size_t>(id + strides[ax])]
                                     : 2.0 * vc - z[static_cast<size_t>(id - strides[ax])];
                            vm = pos - 1 >= 0
                                     ? z[static_cast<size_t>(id - strides[ax])]
                                     : 2.0 * vc - z[static_cast<size_t>(id + strides[ax])];
                        }
                        const double vc = z[static_cast<size_t>(id)];
                        dplus[ax] = (vp - vc) / h + P[ax];
                        dminus[ax] = (vc - vm) / h + P[ax];
                    }
                    // Swapped one-sided arguments so the flux dissipation
                    // acts diffusively for an equation with H on the right.
                    const double Hhat = numerical_hamiltonian(dplus, dminus,
                                                              V[static_cast<size_t>(id)], params,
                                                              g.dim);
                    znew[static_cast<size_t>(id)] = z[static_cast<size_t>(id)] + dt * Hhat;
                }
        z.swap(znew);
        for (size_t q = 0; q < snap_steps.size(); ++q)
            if (snap_steps[q] == step + 1) take_snapshot(step + 1);
    }
    if (out.slices.empty() || out.slices.back().t < T - 1e-12) take_snapshot(steps);
    return out;
}

double DiscountedResult::hbar_estimate() const {
    const Grid& g = v.grid;
    return delta * v.at(g.flat(g.n_half, g.n_half, g.dim == 3 ? g.n_half : 0));
}

const DiscountedResult& DiscountedResult::require_converged() const {
    if (!converged)
        throw IterationLimitError(
            strf("discounted solve hit the cycle cap (residual %.3g after %d cycles)", residual,
                 cycles),
            residual, cycles);
    return *this;
}

DiscountedResult solve_discounted(const FieldRealization& f, const Vec& p, double delta,
                                  const Grid& g, const SchemeParams& params0, Boundary bc,
                                  DiscountedScheme scheme) {
    if (!(delta > 0.0)) throw ConfigError("discounted solve: delta must be positive");
    const std::vector<Vec> V = cache_velocity(f, g);
    const SchemeParams params = resolve_sigma(f, g, params0, V);
    if (bc == Boundary::Periodic) {
        check_periodic_compatible(f, g);
    } else {
        const double need = 2.0 * f.bound_M() / delta;
        if (g.L < need)
            throw ConfigError(strf(
                "discounted solve: need L >= 2M/delta for the core to decouple from the "
                "boundary (L = %.3g, required %.3g)",
                g.L, need));
    }

    const double h = g.h;
    const int n = g.n;
    const double sigsum = params.sigma_sum(g.dim);
    // Sweep convergence is judged on the equation residual in H units;
    // Jacobi on the per-step increment.
    const double tol = scheme == DiscountedScheme::Sweep
                           ? params.tol_factor * (1.0 + norm(p))
                           : params.tol_factor * h / delta;
    const bool periodic = bc == Boundary::Periodic;
    const int64_t strides[3] = {1, n, static_cast<int64_t>(n) * n};

    // Flat warm start at the mean-field value.
    Vec vbar;
    for (const Vec& w : V) vbar += w;
    vbar *= 1.0 / static_cast<double>(g.size());
    std::vector<double> v(static_cast<size_t>(g.size()), (norm(p) + dot(vbar, p)) / delta);
    std::vector<double> vnew;
    if (scheme == DiscountedScheme::Jacobi) vnew.assign(v.size(), 0.0);

    const auto fetch = [&](const std::vector<double>& buf, int64_t id, const int* ijk, int ax,
                           int dir) {
        const int pos = ijk[ax];
        const int npos = pos + dir;
        if (periodic) {
            const int64_t base = id - pos * strides[ax];
            return buf[static_cast<size_t>(base + wrap_index(npos, n) * strides[ax])];
        }
        if (npos < 0 || npos >= n)
            return 2.0 * buf[static_cast<size_t>(id)] -
                   buf[static_cast<size_t>(id - dir * strides[ax])];
        return buf[static_cast<size_t>(id + dir * strides[ax])];
    };

    // Equation residual R_i = Hhat_i(Dv + p) - delta v_i; Hhat depends on
    // differences only, so v += mean(R)/delta cancels the mean residual
    // exactly. That uniform mode is the slow one under plain relaxation.
    const auto equation_residual = [&](double& mean_out) {
        double worst = 0.0;
        double mean = 0.0;
        const int nz2 = g.dim == 3 ? n : 1;
        for (int iz = 0; iz < nz2; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const int64_t id = g.flat(ix, iy, iz);
                    const int ijk[3] = {ix, iy, iz};
                    Vec pbar;
                    double diss = 0.0;
                    for (int ax = 0; ax < g.dim; ++ax) {
                        const double vp = fetch(v, id, ijk, ax, +1);
                        const double vm = fetch(v, id, ijk, ax, -1);
                        pbar[ax] = (vp - vm) / (2.0 * h) + p[ax];
                        diss += params.sigma[static_cast<size_t>(ax)] *
                                (vp + vm - 2.0 * v[static_cast<size_t>(id)]);
                    }
                    const double hhat = norm(pbar) + dot(V[static_cast<size_t>(id)], pbar) +
                                        diss / (2.0 * h);
                    const double r = hhat - delta * v[static_cast<size_t>(id)];
                    mean += r;
                    worst = std::max(worst, std::fabs(r));
                }
        mean_out = mean / static_cast<double>(g.size());
        return worst;
    };

    double residual = kBig;
    int cycle = 0;
    bool converged = false;
    const double dt = params.dt(g);
    for (; cycle < params.max_cycles && !converged; ++cycle) {
        residual = 0.0;
        const int orderings = scheme == DiscountedScheme::Sweep ? (1 << g.dim) : 1;
        for (int ord = 0; ord < orderings; ++ord) {
            const int dx = (ord & 1) ? -1 : 1;
            const int dy = (ord & 2) ? -1 : 1;
            const int dz = (ord & 4) ? -1 : 1;
            const int x0 = dx > 0 ? 0 : n - 1, x1 = dx > 0 ? n : -1;
            const int y0 = dy > 0 ? 0 : n - 1, y1 = dy > 0 ? n : -1;
            const int z0 = g.dim == 3 ? (dz > 0 ? 0 : n - 1) : 0;
            const int z1 = g.dim == 3 ? (dz > 0 ? n : -1) : 1;
            for (int iz = z0; iz != z1; iz += dz)
                for (int iy = y0; iy != y1; iy += dy)
                    for (int ix = x0; ix != x1; ix += dx) {
                        const int64_t id = g.flat(ix, iy, iz);
                        const int ijk[3] = {ix, iy, iz};
                        Vec pbar;
                        double avg = 0.0;
                        for (int ax = 0; ax < g.dim; ++ax) {
                            const double vp = fetch(v, id, ijk, ax, +1);
                            const double vm = fetch(v, id, ijk, ax, -1);
                            pbar[ax] = (vp - vm) / (2.0 * h) + p[ax];
                            avg += params.sigma[static_cast<size_t>(ax)] * (vp + vm);
                        }
                        const Vec& Vx = V[static_cast<size_t>(id)];
                        const double H = norm(pbar) + dot(Vx, pbar);
                        const double old = v[static_cast<size_t>(id)];
                        if (scheme == DiscountedScheme::Sweep) {
                            const double next = (H + avg / (2.0 * h)) / (delta + sigsum / h);
                            v[static_cast<size_t>(id)] = next;
                            residual = std::max(residual, std::fabs(next - old));
                        } else {
                            // v <- v + dt (-delta v + Hhat(Dv + p)) with the
                            // diffusive argument order, expanded inline.
                            const double hhat = H + (avg - 2.0 * sigsum * old) / (2.0 * h);
                            const double next = old + dt * (-delta * old + hhat);
                            vnew[static_cast<size_t>(id)] = next;
                            residual = std::max(residual, std::fabs(next - old));
                        }
                    }
        }
        if (scheme == DiscountedScheme::Jacobi) {
            v.swap(vnew);
            converged = residual < tol;
        } else {
            double mean_r = 0.0;
            const double worst_r = equation_residual(mean_r);
            const double shift = mean_r / delta;
            for (double& x : v) x += shift;
            residual = worst_r;
            converged = residual < tol;
        }
    }

    DiscountedResult out;
    out.delta = delta;
    out.residual = residual;
    out.cycles = cycle;
    out.converged = converged;
    out.v.grid = g;
    out.v.kind = FieldKind::Discounted;
    out.v.v = std::move(v);
    return out;
}

}  // namespace geq
