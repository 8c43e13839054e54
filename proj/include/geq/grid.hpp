#ifndef GEQ_GRID_HPP
#define GEQ_GRID_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geq/common.hpp"
#include "geq/field.hpp"

namespace geq {

/// Uniform Cartesian grid over [-n_half h, n_half h]^dim with a node at
/// the origin: 2*floor(L/h)+1 nodes per axis.
struct Grid {
    int dim = 2;
    double h = 0.02;
    double L = 2.0;
    int n_half = 0;
    int n = 0;  // nodes per axis

    static Grid make(int dim, double h, double L);

    int64_t size() const;
    double covered_half_width() const { return n_half * h; }

    int64_t flat(int ix, int iy, int iz = 0) const {
        return (static_cast<int64_t>(iz) * n + iy) * n + ix;
    }
    std::array<int, 3> unflat(int64_t f) const {
        const int ix = static_cast<int>(f % n);
        const int iy = static_cast<int>((f / n) % n);
        const int iz = static_cast<int>(f / (static_cast<int64_t>(n) * n));
        return {ix, iy, iz};
    }
    Vec coord(int ix, int iy, int iz = 0) const {
        return Vec((ix - n_half) * h, (iy - n_half) * h,
                   dim == 3 ? (iz - n_half) * h : 0.0);
    }
    Vec coord(int64_t f) const {
        const auto i = unflat(f);
        return coord(i[0], i[1], i[2]);
    }
    /// Nearest node to x (clamped into the box).
    std::array<int, 3> nearest(const Vec& x) const;
};

enum class FieldKind { MinTime, Discounted, TimeSlice };

/// Node-indexed scalar values. MinTime fields carry a reached mask; the
/// +inf sentinel is the mask, values at unreached nodes are IEEE +inf.
struct ScalarField {
    Grid grid;
    FieldKind kind = FieldKind::TimeSlice;
    std::vector<double> v;
    std::vector<uint8_t> reached;  // empty means "all nodes valid"

    static ScalarField zeros(const Grid& g, FieldKind kind);

    double at(int64_t f) const { return v[static_cast<size_t>(f)]; }
    bool finite_at(int64_t f) const {
        return reached.empty() || reached[static_cast<size_t>(f)] != 0;
    }
    /// Multilinear interpolation; +inf if any stencil corner is unreached
    /// or x leaves the covered box.
    double interp(const Vec& x) const;

    void save_binary(const std::string& path) const;
    static ScalarField load_binary(const std::string& path);
    void save_csv(const std::string& path, const std::string& header_note) const;
};

/// Lax-Friedrichs dissipation and stepping parameters. sigma = 0 means
/// "derive 1 + max_grid |V_i| per axis from the field".
struct SchemeParams {
    std::array<double, 3> sigma{0.0, 0.0, 0.0};
    double cfl = 0.5;
    double tol_factor = 1e-6;  // sweep tolerance = tol_factor * h
    int max_cycles = 500;

    bool sigma_is_auto() const { return sigma[0] <= 0.0; }
    double sigma_sum(int dim) const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += sigma[i];
        return s;
    }
    double dt(const Grid& g) const { return cfl * g.h / sigma_sum(g.dim); }
    void validate(int dim) const;

    static SchemeParams for_field(const FieldRealization& f, const Grid& g);
};

/// Per-axis max of |V_i| over the grid nodes.
std::array<double, 3> per_axis_field_bound(const FieldRealization& f, const Grid& g);

/// Lax-Friedrichs numerical Hamiltonian for H(p) = |p| + <V, p>:
///   Hhat = |pbar| + <V, pbar> - sum_i sigma_i (pplus_i - pminus_i) / 2,
/// with pbar = (pplus + pminus)/2. Nonincreasing in every pplus_i and
/// nondecreasing in every pminus_i once sigma_i >= 1 + |V_i|.
double numerical_hamiltonian(const Vec& p_minus, const Vec& p_plus, const Vec& V_at_x,
                             const SchemeParams& params, int dim);

}  // namespace geq

#endif
