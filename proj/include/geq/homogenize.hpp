#ifndef GEQ_HOMOGENIZE_HPP
#define GEQ_HOMOGENIZE_HPP

#include <cstdint>
#include <vector>

#include "geq/geometry.hpp"
#include "geq/grid.hpp"
#include "geq/solvers.hpp"

namespace geq {

/// Minimal-time solves for one field spec across an ensemble of seeds,
/// all sourced at the origin. Shared by every direction read.
struct MinTimeEnsemble {
    FieldSpec spec;
    std::vector<uint64_t> seeds;
    Grid grid;
    std::vector<MinTimeResult> solves;
    double bound_M = 1.0;
};

MinTimeEnsemble solve_ensemble(const FieldSpec& spec, const std::vector<uint64_t>& seeds,
                               const Grid& grid, const SchemeParams& params, int threads = 1);

struct TimeConstantEstimate {
    Vec direction;               // unit
    std::vector<double> radii;
    std::vector<double> ratios;  // pooled mean of theta(0, r v)/r per radius
    double q_bar = 0.0;          // 1/r-extrapolated intercept
    double spread = 0.0;         // max |per-seed intercept - pooled|
    bool partial = false;        // some radii fell outside the trusted region
    bool bounds_ok = true;       // 1/M - tol <= q_bar <= 1 + tol
};

/// Reads theta at r v across the ensemble and extrapolates the ratio
/// theta/r against 1/r to its intercept.
TimeConstantEstimate time_constant(const MinTimeEnsemble& ens, const Vec& v,
                                   const std::vector<double>& radii, double bound_tol = 0.03);

struct SupportFunctionTable {
    std::vector<Vec> directions;  // unit, uniform on the circle
    std::vector<double> q;        // q_bar per direction
    std::vector<double> spread;
    bool partial = false;

    /// Scaled direction cloud {v_k / q_k}; its hull represents K.
    std::vector<Vec> shape_points() const;
    std::vector<Vec> shape_polygon() const;  // convex hull of the cloud

    /// Worst relative midpoint-convexity violation over adjacent triples
    /// of the 1-homogeneous extension (0 when convex on the table).
    double convexity_violation() const;
    /// Worst violation of |q(v) - q(w)| <= |v - w| over table pairs.
    double lipschitz_excess() const;
};

SupportFunctionTable support_table(const MinTimeEnsemble& ens, int k_directions,
                                   const std::vector<double>& radii);

/// H(p) = max_k <p, -v_k / q_k>: support function of -K evaluated on
/// the table's polygonal shape.
double effective_hamiltonian_dual(const SupportFunctionTable& table, const Vec& p);

/// delta v_delta(0) per delta averaged over seeds, extrapolated
/// linearly in delta to zero.
struct DiscountedEstimate {
    std::vector<double> deltas;
    std::vector<double> values;  // seed-averaged delta v(0)
    double extrapolated = 0.0;
};
DiscountedEstimate effective_hamiltonian_discounted(const FieldSpec& spec,
                                                    const std::vector<uint64_t>& seeds,
                                                    const Vec& p, std::vector<double> deltas,
                                                    const Grid& grid, const SchemeParams& params,
                                                    Boundary bc = Boundary::Extrapolate);

/// z(0, T)/T averaged over seeds.
double effective_hamiltonian_time(const FieldSpec& spec, const std::vector<uint64_t>& seeds,
                                  const Vec& P, double T, const Grid& grid,
                                  const SchemeParams& params, Boundary bc);

/// Mean-shift reduction: Hbar(p) = Htilde(p) + <E[V], p> with Htilde
/// computed on the centered field.
double mean_shift_reduce(double h_tilde_at_p, const Vec& mean_velocity, const Vec& p);

/// Three independent estimates of Hbar(p) with their disagreement.
struct HamiltonianEstimate {
    Vec p;
    double h_dual = 0.0;
    double h_disc = 0.0;
    double h_time = 0.0;
    Vec mean_velocity;          // E[V] used for the mean shift
    double disagreement = 0.0;  // max pairwise relative difference
    bool lower_bound_ok = true; // each estimate >= |p| + <E[V],p> - tol
};

double pairwise_relative_disagreement(double a, double b, double c);

/// Volume and perimeter growth of the reachable sets.
struct VolumeGrowthRow {
    double t = 0.0;
    double volume = 0.0;
    double growth_ratio = 0.0;  // volume^(1/N) / t
    double perimeter_window_min = 0.0;  // min over s in [t/2, t] of Per(R_s)/s
};
struct VolumeGrowthReport {
    std::vector<VolumeGrowthRow> rows;
    double isoperimetric_floor = 0.0;  // sqrt(pi) in 2D
    double perimeter_constant = 0.0;   // K from the window bound
};
VolumeGrowthReport volume_growth_check(const MinTimeResult& mt, const std::vector<double>& times);

/// Symmetric-difference fraction between R_t/t and the table's shape.
double shape_check(const MinTimeResult& mt, const SupportFunctionTable& table, double t);

/// Least-squares fit of theta(0, y) against |y| over trusted nodes with
/// |y| in [r_lo, r_hi]; pools the ensemble.
struct ReachabilityFit {
    double slope = 0.0;      // target <= 1 + eps for mean-zero fields
    double intercept = 0.0;  // the T(omega, eps) overhead
    long samples = 0;
    long unreachable = 0;    // sampled nodes outside the trusted/reached set
};
ReachabilityFit reachability_fit(const MinTimeEnsemble& ens, double r_lo, double r_hi);

/// Standard Hill tail-index estimator from the k upper order statistics.
double hill_tail_index(std::vector<double> samples, int k_upper);

}  // namespace geq

#endif
