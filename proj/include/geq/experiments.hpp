#ifndef GEQ_EXPERIMENTS_HPP
#define GEQ_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "geq/report.hpp"

namespace geq {

/// Shared experiment options. Every run is a pure function of
/// (config, master_seed); artifacts are overwritten bit-identically.
struct ExperimentOptions {
    std::string out_dir = "out";
    uint64_t master_seed = 1;
    int threads = 1;
    bool oracle = false;  // recompute frozen margins at finer resolution
};

struct EnhancementConfig {
    std::vector<double> amplitudes{0.5, 1.0, 2.0};
    std::vector<double> deltas{0.2, 0.1, 0.05};
    double time_horizon = 20.0;
    int points_per_period = 64;
    double tol_flat = 0.02;        // |Hbar(e1) - 1| tolerance
    double mono_slack = 0.02;      // amplitude-monotonicity slack
};
ExperimentReport run_enhancement(const EnhancementConfig& cfg, const ExperimentOptions& opt);

struct CounterexampleConfig {
    std::vector<double> shapes{1.5, 3.0};
    std::vector<long> sample_sizes{100, 1000, 10000};
    int hill_fraction = 20;        // k = n / hill_fraction upper stats
    double control_band = 0.10;    // stabilization band for the finite-mean control
    int trajectory_probes = 32;    // per-realization bound spot checks
};
ExperimentReport run_counterexample(const CounterexampleConfig& cfg,
                                    const ExperimentOptions& opt);

struct HomogenizationConfig {
    std::vector<double> epsilons{0.25, 0.125, 0.0625};
    double amplitude = 2.0;
    int points_per_period = 32;  // grid resolution per oscillation period
    double p2 = 1.0;             // data is <p, x> with p = p2 * e2
    double final_error_cap = 0.1;  // error(last eps) <= cap * (1 + |p|)
    double reference_T = 32.0;     // horizon of the reference estimate
};
ExperimentReport run_homogenization(const HomogenizationConfig& cfg,
                                    const ExperimentOptions& opt);

struct RandomControlConfig {
    std::vector<double> delta_list{0.2, 0.1, 0.05};
    double a_bar1 = 0.3;  // base direction a_bar = a_bar1 * e1
    double eps_c = 0.2;
    double horizon = 2000.0;
    int n_traj = 4;
    double ratio_stability = 2.0;  // max/min of drift/delta across the list
    long moment_samples = 100000;
};
ExperimentReport run_random_control_study(const RandomControlConfig& cfg,
                                          const ExperimentOptions& opt);

}  // namespace geq

#endif
