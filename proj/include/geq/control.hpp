#ifndef GEQ_CONTROL_HPP
#define GEQ_CONTROL_HPP

#include <vector>

#include "geq/common.hpp"
#include "geq/rng.hpp"

namespace geq {

/// Piecewise-constant random control oscillating around a base
/// direction: on [sigma_n, sigma_{n+1}) the control is
/// a_k = a_bar +- eps e_j with k drawn uniformly from {1,...,2N} and the
/// gap drawn from the uniform density on [delta - delta^2, delta + delta^2].
struct ControlSchedule {
    Vec a_bar;
    double eps = 0.0;
    double delta = 0.0;
    int dim = 2;
    std::vector<double> sigma;  // switch times, sigma[0] = 0
    std::vector<int> k;         // k[n] active on [sigma[n], sigma[n+1]), 1-based

    double horizon() const { return sigma.empty() ? 0.0 : sigma.back(); }

    /// a_bar + eps e_k for k = 1..N, a_bar - eps e_{k-N} for k = N+1..2N.
    Vec perturbed(int k_index) const;

    /// Control active at time t; throws HorizonError past the horizon.
    Vec at(double t) const;

    /// Index n with sigma[n] <= t < sigma[n+1].
    int segment(double t) const;
};

ControlSchedule sample_random_control(const Vec& a_bar, double eps, double delta,
                                      double horizon, int dim, Rng& rng);

}  // namespace geq

#endif
