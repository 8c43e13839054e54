#include "geq/point_process.hpp"

#include <algorithm>
#include <cmath>

#include "geq/errors.hpp"

namespace geq {

double GapLaw::mean() const {
    return kind == Kind::Fixed ? xm : alpha * xm / (alpha - 1.0);
}

double GapLaw::sample(Rng& rng) const {
    return kind == Kind::Fixed ? xm : rng.pareto(alpha, xm);
}

double GapLaw::sample_size_biased(Rng& rng) const {
    // Size-biasing a Pareto(alpha, xm) gives Pareto(alpha-1, xm); a point
    // mass is its own size-biased law.
    return kind == Kind::Fixed ? xm : rng.pareto(alpha - 1.0, xm);
}

void GapLaw::validate() const {
    if (!(xm > 0.0)) throw ConfigError("gap law: scale xm must be positive");
    if (kind == Kind::Pareto && !(alpha > 1.0))
        throw ConfigError("gap law: shape alpha must exceed 1 (finite mean gap required)");
}

StationaryInterval sample_stationary_interval(const GapLaw& mu, Rng& rng) {
    mu.validate();
    const double v = mu.sample_size_biased(rng);
    const double s = rng.uniform() * v;
    return {-s, v - s};
}

PointProcessRealization::PointProcessRealization(const GapLaw& mu, double half_width,
                                                 uint64_t seed)
    : mu_(mu) {
    mu_.validate();
    if (!(half_width >= 0.0)) throw ConfigError("point process: negative window");

    Rng straddle_rng(mix64(seed, 0));
    sigma0_ = straddle_rng.sign();
    const StationaryInterval s = sample_stationary_interval(mu_, straddle_rng);

    // Right side: y_1, y_2, ... ; left side: y_0, y_-1, ... Each side has
    // its own stream so the realization is a prefix-stable function of
    // the requested window.
    std::vector<double> right{s.y1};
    Rng right_rng(mix64(seed, 1));
    while (right.back() < half_width) right.push_back(right.back() + mu_.sample(right_rng));
    right.push_back(right.back() + mu_.sample(right_rng));

    std::vector<double> left{s.y0};
    Rng left_rng(mix64(seed, 2));
    while (left.back() > -half_width) left.push_back(left.back() - mu_.sample(left_rng));
    left.push_back(left.back() - mu_.sample(left_rng));

    first_ = -(static_cast<int>(left.size()) - 1);
    points_.assign(left.rbegin(), left.rend());
    points_.insert(points_.end(), right.begin(), right.end());
}

int PointProcessRealization::gap_containing(double x) const {
    if (x < points_.front() || x >= points_.back())
        throw WindowError(
            "point process: evaluation outside realized window; rebuild with a larger "
            "half-width");
    const auto it = std::upper_bound(points_.begin(), points_.end(), x);
    return first_ + static_cast<int>(it - points_.begin());
}

}  // namespace geq
