#include "geq/control.hpp"

#include <algorithm>
#include <cmath>

#include "geq/errors.hpp"

namespace geq {

Vec ControlSchedule::perturbed(int k_index) const {
    Vec a = a_bar;
    if (k_index >= 1 && k_index <= dim) {
        a[k_index - 1] += eps;
    } else if (k_index >= dim + 1 && k_index <= 2 * dim) {
        a[k_index - dim - 1] -= eps;
    } else {
        throw ConfigError("control schedule: index out of {1,...,2N}");
    }
    return a;
}

int ControlSchedule::segment(double t) const {
    if (t < 0.0 || t > horizon()) throw HorizonError("control evaluated beyond its horizon");
    const auto it = std::upper_bound(sigma.begin(), sigma.end(), t);
    int n = static_cast<int>(it - sigma.begin()) - 1;
    if (n >= static_cast<int>(k.size())) n = static_cast<int>(k.size()) - 1;
    return n;
}

Vec ControlSchedule::at(double t) const { return perturbed(k[static_cast<size_t>(segment(t))]); }

ControlSchedule sample_random_control(const Vec& a_bar, double eps, double delta, double horizon,
                                      int dim, Rng& rng) {
    if (!(eps > 0.0) || !(eps < 1.0 - norm(a_bar)))
        throw ConfigError("random control: need 0 < eps < 1 - |a_bar|");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw ConfigError("random control: need 0 < delta < 1");
    if (!(horizon > 0.0)) throw ConfigError("random control: horizon must be positive");

    ControlSchedule s;
    s.a_bar = a_bar;
    s.eps = eps;
    s.delta = delta;
    s.dim = dim;
    s.sigma.push_back(0.0);
    const double d2 = delta * delta;
    while (s.sigma.back() < horizon) {
        s.k.push_back(1 + rng.uniform_int(2 * dim));
        s.sigma.push_back(s.sigma.back() + rng.uniform(delta - d2, delta + d2));
    }
    return s;
}

}  // namespace geq
