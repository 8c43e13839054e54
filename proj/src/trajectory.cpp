#include "geq/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "geq/errors.hpp"

namespace geq {

Vec TrajectoryRecord::at(double s) const {
    if (t.empty()) throw Error("empty trajectory");
    if (s <= t.front()) return x.front();
    if (s >= t.back()) return x.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const size_t i = static_cast<size_t>(it - t.begin());
    const double w = (s - t[i - 1]) / (t[i] - t[i - 1]);
    return (1.0 - w) * x[i - 1] + w * x[i];
}

namespace {

double pick_step(const FieldRealization& f, const IntegrateOptions& opt) {
    if (opt.step > 0.0) return opt.step;
    const double lip = f.lipschitz();
    double h = 1e-2;
    if (lip > 0.0) h = std::min(h, 0.1 / lip);
    return h;
}

Vec rk4_step(const FieldRealization& f, const Vec& x, const Vec& a, double h, double sign) {
    const auto rhs = [&](const Vec& y) { return a + sign * f.velocity(y); };
    const Vec k1 = rhs(x);
    const Vec k2 = rhs(x + (0.5 * h) * k1);
    const Vec k3 = rhs(x + (0.5 * h) * k2);
    const Vec k4 = rhs(x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrates one constant-control segment, appending to the record.
void run_segment(const FieldRealization& f, TrajectoryRecord& rec, const Vec& a, double t_begin,
                 double t_end, double h, double sign, int stride) {
    if (t_end <= t_begin) return;
    const double span = t_end - t_begin;
    const long nsteps = std::max(1L, static_cast<long>(std::ceil(span / h - 1e-12)));
    const double hh = span / static_cast<double>(nsteps);
    Vec x = rec.x.back();
    for (long i = 0; i < nsteps; ++i) {
        x = rk4_step(f, x, a, hh, sign);
        const bool keep = (i + 1 == nsteps) || (stride > 0 && ((i + 1) % stride == 0));
        if (keep) {
            rec.t.push_back(t_begin + hh * static_cast<double>(i + 1));
            rec.x.push_back(x);
        }
    }
}

}  // namespace

TrajectoryRecord integrate(const FieldRealization& f, const Vec& x0, double t0, const Vec& a,
                           double t1, const IntegrateOptions& opt) {
    if (t1 < t0) throw ConfigError("integrate: t1 < t0 (run the sign-flipped field forward)");
    TrajectoryRecord rec;
    rec.t0 = t0;
    rec.x0 = x0;
    rec.t.push_back(t0);
    rec.x.push_back(x0);
    run_segment(f, rec, a, t0, t1, pick_step(f, opt), opt.flow_sign,
                std::max(1, opt.record_stride));
    return rec;
}

TrajectoryRecord integrate(const FieldRealization& f, const Vec& x0, double t0,
                           const ControlSchedule& ctrl, double t1, const IntegrateOptions& opt) {
    if (t1 < t0) throw ConfigError("integrate: t1 < t0 (run the sign-flipped field forward)");
    if (t0 < 0.0 || t1 > ctrl.horizon())
        throw HorizonError("integrate: control schedule does not cover [t0, t1]");
    TrajectoryRecord rec;
    rec.t0 = t0;
    rec.x0 = x0;
    rec.t.push_back(t0);
    rec.x.push_back(x0);
    const double h = pick_step(f, opt);
    const int stride = std::max(1, opt.record_stride);
    int n = ctrl.segment(t0);
    double t = t0;
    while (t < t1 - 1e-14) {
        const double seg_end = std::min(t1, ctrl.sigma[static_cast<size_t>(n + 1)]);
        run_segment(f, rec, ctrl.perturbed(ctrl.k[static_cast<size_t>(n)]), t, seg_end, h,
                    opt.flow_sign, stride);
        t = seg_end;
        ++n;
        if (n >= static_cast<int>(ctrl.k.size()) && t < t1 - 1e-14)
            throw HorizonError("integrate: ran out of control segments");
    }
    return rec;
}

double drift_statistic(const TrajectoryRecord& traj, const Vec& a_bar) {
    const double T = traj.horizon();
    if (T <= 0.0) throw ConfigError("drift_statistic: empty horizon");
    double worst = 0.0;
    for (size_t i = 0; i < traj.t.size(); ++i) {
        if (traj.t[i] < 0.5 * T || traj.t[i] <= 0.0) continue;
        worst = std::max(worst, norm((1.0 / traj.t[i]) * traj.x[i] - a_bar));
    }
    return worst;
}

Vec constant_control_direction(const FieldRealization& f, const Vec& a, double T,
                               const IntegrateOptions& opt) {
    IntegrateOptions o = opt;
    if (o.record_stride == 1) o.record_stride = 1 << 10;
    const TrajectoryRecord rec = integrate(f, Vec(), 0.0, a, T, o);
    return (1.0 / T) * rec.final_position();
}

}  // namespace geq
