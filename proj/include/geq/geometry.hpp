#ifndef GEQ_GEOMETRY_HPP
#define GEQ_GEOMETRY_HPP

#include <vector>

#include "geq/grid.hpp"
#include "geq/solvers.hpp"

namespace geq {

/// Sublevel set {theta <= t} of a minimal-time field.
struct ReachableSet {
    double t = 0.0;
    std::vector<uint8_t> inside;  // node-indexed indicator
    double volume = 0.0;          // h^N * node count
    double perimeter = 0.0;       // marching-squares interface length (2D only)
};

/// Extracts the reachable set at time t. Throws TrustRegionError when t
/// exceeds the solve's trusted horizon.
ReachableSet reachable_set(const MinTimeResult& mt, double t);

/// Convex hull (2D, counterclockwise) of a point cloud.
std::vector<Vec> convex_hull(std::vector<Vec> pts);

double polygon_area(const std::vector<Vec>& poly);
bool point_in_convex_polygon(const std::vector<Vec>& poly, const Vec& p);

/// Fraction |(R_t / t) delta K| / |K| between the scaled reachable set
/// and a convex polygon K, measured on the grid.
double symmetric_difference_fraction(const MinTimeResult& mt, double t,
                                     const std::vector<Vec>& polygon);

}  // namespace geq

#endif
