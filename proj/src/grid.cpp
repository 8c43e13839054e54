#include "geq/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "geq/errors.hpp"

namespace geq {

Grid Grid::make(int dim, double h, double L) {
    if (dim != 2 && dim != 3) throw ConfigError("grid: dimension must be 2 or 3");
    if (!(h > 0.0)) throw ConfigError("grid: spacing h must be positive");
    if (!(L >= 10.0 * h)) throw ConfigError("grid: half-width L must be at least 10 h");
    Grid g;
    g.dim = dim;
    g.h = h;
    g.L = L;
    g.n_half = static_cast<int>(std::floor(L / h + 1e-12));
    g.n = 2 * g.n_half + 1;
    return g;
}

int64_t Grid::size() const {
    int64_t s = static_cast<int64_t>(n) * n;
    if (dim == 3) s *= n;
    return s;
}

std::array<int, 3> Grid::nearest(const Vec& x) const {
    std::array<int, 3> idx{n_half, n_half, dim == 3 ? n_half : 0};
    for (int d = 0; d < dim; ++d) {
        int i = n_half + static_cast<int>(std::lround(x[d] / h));
        idx[static_cast<size_t>(d)] = std::clamp(i, 0, n - 1);
    }
    return idx;
}

ScalarField ScalarField::zeros(const Grid& g, FieldKind kind) {
    ScalarField s;
    s.grid = g;
    s.kind = kind;
    s.v.assign(static_cast<size_t>(g.size()), 0.0);
    return s;
}

double ScalarField::interp(const Vec& x) const {
    const Grid& g = grid;
    const double inf = std::numeric_limits<double>::infinity();
    double fx = x[0] / g.h + g.n_half;
    double fy = x[1] / g.h + g.n_half;
    double fz = g.dim == 3 ? x[2] / g.h + g.n_half : 0.0;
    if (fx < 0 || fy < 0 || fz < 0 || fx > g.n - 1 || fy > g.n - 1 ||
        (g.dim == 3 && fz > g.n - 1))
        return inf;
    const int ix = std::min(static_cast<int>(fx), g.n - 2);
    const int iy = std::min(static_cast<int>(fy), g.n - 2);
    const int iz = g.dim == 3 ? std::min(static_cast<int>(fz), g.n - 2) : 0;
    const double wx = fx - ix, wy = fy - iy, wz = g.dim == 3 ? fz - iz : 0.0;
    double acc = 0.0;
    for (int dz = 0; dz <= (g.dim == 3 ? 1 : 0); ++dz)
        for (int dy = 0; dy <= 1; ++dy)
            for (int dx = 0; dx <= 1; ++dx) {
                const int64_t f = g.flat(ix + dx, iy + dy, iz + dz);
                if (!finite_at(f)) return inf;
                const double w = (dx ? wx : 1 - wx) * (dy ? wy : 1 - wy) *
                                 (g.dim == 3 ? (dz ? wz : 1 - wz) : 1.0);
                acc += w * at(f);
            }
    return acc;
}

void ScalarField::save_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path);
    const int32_t dim = grid.dim;
    const int32_t counts[3] = {grid.n, grid.n, grid.dim == 3 ? grid.n : 1};
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(counts), 12);
    out.write(reinterpret_cast<const char*>(&grid.h), 8);
    out.write(reinterpret_cast<const char*>(&grid.L), 8);
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * 8));
}

ScalarField ScalarField::load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    int32_t dim = 0;
    int32_t counts[3] = {0, 0, 0};
    double h = 0, L = 0;
    in.read(reinterpret_cast<char*>(&dim), 4);
    in.read(reinterpret_cast<char*>(counts), 12);
    in.read(reinterpret_cast<char*>(&h), 8);
    in.read(reinterpret_cast<char*>(&L), 8);
    ScalarField s;
    s.grid = Grid::make(dim, h, L);
    if (s.grid.n != counts[0]) throw Error("scalar field header mismatch in " + path);
    s.v.assign(static_cast<size_t>(s.grid.size()), 0.0);
    in.read(reinterpret_cast<char*>(s.v.data()), static_cast<std::streamsize>(s.v.size() * 8));
    if (!in) throw Error("truncated scalar field file " + path);
    for (double x : s.v)
        if (std::isinf(x)) {
            s.reached.assign(s.v.size(), 1);
            for (size_t i = 0; i < s.v.size(); ++i) s.reached[i] = std::isfinite(s.v[i]);
            break;
        }
    return s;
}

void ScalarField::save_csv(const std::string& path, const std::string& header_note) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << "# " << header_note << "\n";
    out << (grid.dim == 3 ? "x1,x2,x3,value\n" : "x1,x2,value\n");
    char buf[160];
    for (int64_t f = 0; f < grid.size(); ++f) {
        const Vec x = grid.coord(f);
        if (grid.dim == 3)
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.17g\n", x[0], x[1], x[2], at(f));
        else
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.17g\n", x[0], x[1], at(f));
        out << buf;
    }
}

void SchemeParams::validate(int dim) const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("scheme: CFL number must lie in (0, 1]");
    if (!(tol_factor > 0.0)) throw ConfigError("scheme: tolerance must be positive");
    if (max_cycles < 1) throw ConfigError("scheme: max cycles must be at least 1");
    if (!sigma_is_auto())
        for (int i = 0; i < dim; ++i)
            if (!(sigma[static_cast<size_t>(i)] >= 1.0))
                throw ConfigError("scheme: dissipation sigma_i must be at least 1");
}

std::array<double, 3> per_axis_field_bound(const FieldRealization& f, const Grid& g) {
    std::array<double, 3> b{0.0, 0.0, 0.0};
    for (int64_t idx = 0; idx < g.size(); ++idx) {
        const Vec V = f.velocity(g.coord(idx));
        for (int d = 0; d < g.dim; ++d)
            b[static_cast<size_t>(d)] = std::max(b[static_cast<size_t>(d)], std::fabs(V[d]));
    }
    return b;
}

SchemeParams SchemeParams::for_field(const FieldRealization& f, const Grid& g) {
    SchemeParams p;
    const auto b = per_axis_field_bound(f, g);
    for (int d = 0; d < g.dim; ++d) p.sigma[static_cast<size_t>(d)] = 1.0 + b[static_cast<size_t>(d)];
    return p;
}

double numerical_hamiltonian(const Vec& p_minus, const Vec& p_plus, const Vec& V_at_x,
                             const SchemeParams& params, int dim) {
    Vec pbar = 0.5 * (p_minus + p_plus);
    double hval = norm(pbar) + dot(V_at_x, pbar);
    for (int i = 0; i < dim; ++i)
        hval -= 0.5 * params.sigma[static_cast<size_t>(i)] * (p_plus[i] - p_minus[i]);
    return hval;
}

}  // namespace geq
