#ifndef GEQ_SOLVERS_HPP
#define GEQ_SOLVERS_HPP

#include <functional>
#include <vector>

#include "geq/grid.hpp"

namespace geq {

enum class Boundary {
    Extrapolate,  // one-sided linear extrapolation ghosts
    Periodic,     // field period must divide the covered width
};

/// Minimal time to reach x' from x when the field is frozen at the
/// constant value V along the segment d = x' - x: smallest t >= 0 with
/// |d - t V| <= t. Returns +inf when the segment is not traversable.
double segment_travel_time(const Vec& d, const Vec& V);

struct MinTimeResult {
    ScalarField theta;  // kind MinTime
    Vec source;         // after snapping to the nearest node
    bool source_snapped = false;
    double residual = 0.0;
    int cycles = 0;
    bool converged = false;
    double trust_time = 0.0;  // (covered half width - |source|) / M

    /// Throws IterationLimitError when the sweep hit its cycle cap.
    const MinTimeResult& require_converged() const;
};

/// Lax-Friedrichs fast sweeping for |D theta| + <V, D theta> = 1 with
/// theta(source) = 0. Gauss-Seidel min-updates over the 2^dim sweep
/// orderings; nodes never reached stay flagged as the +inf sentinel.
/// Convergence is judged on the reached region; when ||V|| >= 1 the
/// equation loses coercivity and the solve may legitimately end
/// non-converged with sentinels left in slow regions.
MinTimeResult solve_min_time(const FieldRealization& f, const Vec& source, const Grid& g,
                             const SchemeParams& params);

struct TimeSlice {
    double t = 0.0;
    ScalarField z;
};

struct TimeDependentResult {
    std::vector<TimeSlice> slices;  // requested snapshots plus the final time
    double dt = 0.0;
    long steps = 0;
    double core_half_width = 0.0;  // trusted region for Extrapolate runs

    const ScalarField& final_slice() const { return slices.back().z; }
    double value_at_origin() const;
};

/// Forward-Euler monotone scheme for z_t = |Dz + P| + <V, Dz + P>,
/// z(.,0) = z0 (null = 0). The solution of the G-equation with affine
/// data <P,x> is u = <P,x> + z. Snapshot times are rounded to steps.
/// Extrapolate boundaries require L >= L/2 + 2 M T (domain of
/// dependence of the reported core); Periodic requires a commensurate
/// grid and lifts that restriction.
TimeDependentResult solve_time_dependent(const FieldRealization& f, const Vec& P,
                                         const std::function<double(const Vec&)>& z0, double T,
                                         const Grid& g, const SchemeParams& params,
                                         Boundary bc = Boundary::Extrapolate,
                                         const std::vector<double>& snapshots = {});

enum class DiscountedScheme {
    Sweep,   // Gauss-Seidel with alternating orderings (default)
    Jacobi,  // the plain fixed-point iteration v <- v + dt(-delta v + Hhat)
};

struct DiscountedResult {
    ScalarField v;  // kind Discounted
    double delta = 0.0;
    double residual = 0.0;
    int cycles = 0;
    bool converged = false;

    /// delta * v(0), the effective-Hamiltonian estimate.
    double hbar_estimate() const;
    const DiscountedResult& require_converged() const;
};

/// Solves delta v = |Dv + p| + <Dv + p, V>. Extrapolate boundaries
/// require L >= 2 M / delta so the discount decouples the core from the
/// boundary; Periodic lifts that.
DiscountedResult solve_discounted(const FieldRealization& f, const Vec& p, double delta,
                                  const Grid& g, const SchemeParams& params,
                                  Boundary bc = Boundary::Extrapolate,
                                  DiscountedScheme scheme = DiscountedScheme::Sweep);

}  // namespace geq

#endif
