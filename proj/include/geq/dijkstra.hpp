#ifndef GEQ_DIJKSTRA_HPP
#define GEQ_DIJKSTRA_HPP

#include "geq/grid.hpp"
#include "geq/solvers.hpp"

namespace geq {

/// Brute-force oracle for the minimal time: shortest path on the
/// directed grid graph whose edge x -> x' costs the straight-segment
/// traversal time under the field frozen at the segment midpoint.
/// Neighbor offsets are the coprime integer vectors with max-norm at
/// most radius (radius 2 gives the 16-point stencil in 2D).
/// Coarse grids only; independent of the sweeping discretization.
ScalarField dijkstra_oracle(const FieldRealization& f, const Vec& source, const Grid& g,
                            int radius = 2);

}  // namespace geq

#endif
