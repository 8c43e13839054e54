#ifndef GEQ_TRAJECTORY_HPP
#define GEQ_TRAJECTORY_HPP

#include <vector>

#include "geq/common.hpp"
#include "geq/control.hpp"
#include "geq/field.hpp"

namespace geq {

struct TrajectoryRecord {
    double t0 = 0.0;
    Vec x0;
    std::vector<double> t;  // recorded times, t.front() == t0
    std::vector<Vec> x;     // positions at the recorded times

    double horizon() const { return t.back(); }
    Vec final_position() const { return x.back(); }

    /// Position at time s by linear interpolation of the record.
    Vec at(double s) const;
};

struct IntegrateOptions {
    /// RK4 step; <= 0 picks min(1e-2, 0.1 / lipschitz bound).
    double step = 0.0;
    /// +1 integrates x' = alpha + V, -1 integrates x' = alpha - V
    /// (backward reachability run forward).
    double flow_sign = 1.0;
    /// Keep every record_stride-th step in the record (segment
    /// boundaries are always kept).
    int record_stride = 1;
};

/// Classical RK4 for x' = alpha(s) + V(x) with constant control.
TrajectoryRecord integrate(const FieldRealization& f, const Vec& x0, double t0, const Vec& a,
                           double t1, const IntegrateOptions& opt = {});

/// Same with a piecewise-constant schedule; steps are subdivided at the
/// switch times so the control is constant within every RK4 step.
/// Throws HorizonError if [t0, t1] is not covered by the schedule.
TrajectoryRecord integrate(const FieldRealization& f, const Vec& x0, double t0,
                           const ControlSchedule& ctrl, double t1,
                           const IntegrateOptions& opt = {});

/// sup over the recorded second half of |X_t/t - a_bar|.
double drift_statistic(const TrajectoryRecord& traj, const Vec& a_bar);

/// X_T / T for the constant control a started at the origin.
Vec constant_control_direction(const FieldRealization& f, const Vec& a, double T,
                               const IntegrateOptions& opt = {});

}  // namespace geq

#endif
