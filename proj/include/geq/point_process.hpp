#ifndef GEQ_POINT_PROCESS_HPP
#define GEQ_POINT_PROCESS_HPP

#include <cstdint>
#include <vector>

#include "geq/rng.hpp"

namespace geq {

/// Gap law: Pareto with density alpha*xm^alpha/v^(alpha+1) on [xm, inf),
/// or a point mass at xm (degenerate control case).
struct GapLaw {
    enum class Kind { Pareto, Fixed };
    Kind kind = Kind::Pareto;
    double alpha = 1.5;
    double xm = 1.0;

    double mean() const;  // finite for alpha > 1
    double sample(Rng& rng) const;
    double sample_size_biased(Rng& rng) const;
    void validate() const;
};

/// The interval of a stationary renewal process that straddles the
/// origin: gap length drawn from the size-biased law v*mu(dv)/m, origin
/// placed uniformly inside. Returns (y0, y1) with y0 <= 0 < y1.
struct StationaryInterval {
    double y0;
    double y1;
};
StationaryInterval sample_stationary_interval(const GapLaw& mu, Rng& rng);

/// One realization of the alternating marked point process: points y_n
/// strictly increasing with y_0 <= 0 < y_1, marks +-1 alternating. The
/// mark of the interval (y_{n-1}, y_n) is sigma_{n-1} = mark(n-1).
class PointProcessRealization {
  public:
    /// Builds the process covering at least [-half_width, half_width].
    /// The realized window is extended automatically when the straddling
    /// gap (or its neighbors) overshoot the request; points are drawn
    /// from outward per-side streams so a wider request reproduces the
    /// same points.
    PointProcessRealization(const GapLaw& mu, double half_width, uint64_t seed);

    int count() const { return static_cast<int>(points_.size()); }
    /// Point y_n for n in [first_index(), first_index()+count()-1].
    double point(int n) const { return points_[static_cast<size_t>(n - first_)]; }
    int first_index() const { return first_; }
    int last_index() const { return first_ + count() - 1; }
    int mark(int n) const { return ((n & 1) == 0) ? sigma0_ : -sigma0_; }

    double covered_left() const { return points_.front(); }
    double covered_right() const { return points_.back(); }

    /// Index n of the gap [y_{n-1}, y_n) containing x; throws WindowError
    /// outside the covered range.
    int gap_containing(double x) const;

    const GapLaw& law() const { return mu_; }

  private:
    GapLaw mu_;
    std::vector<double> points_;  // y_{first_}, ..., increasing
    int first_ = 0;
    int sigma0_ = 1;  // mark of index 0; marks alternate from it
};

}  // namespace geq

#endif
