#include "geq/dijkstra.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "geq/errors.hpp"

namespace geq {

ScalarField dijkstra_oracle(const FieldRealization& f, const Vec& source, const Grid& g,
                            int radius) {
    if (g.size() > 101L * 101L * 101L)
        throw ConfigError("dijkstra oracle: grid too large for the brute-force oracle");
    if (radius < 1) throw ConfigError("dijkstra oracle: radius must be at least 1");

    struct Offset {
        int dx, dy, dz;
    };
    std::vector<Offset> offsets;
    const int rz = g.dim == 3 ? radius : 0;
    for (int dz = -rz; dz <= rz; ++dz)
        for (int dy = -radius; dy <= radius; ++dy)
            for (int dx = -radius; dx <= radius; ++dx) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                const int gcd = std::gcd(std::gcd(std::abs(dx), std::abs(dy)), std::abs(dz));
                if (gcd != 1) continue;
                offsets.push_back({dx, dy, dz});
            }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist_(static_cast<size_t>(g.size()), inf);
    const auto src = g.nearest(source);
    const int64_t s0 = g.flat(src[0], src[1], src[2]);
    dist_[static_cast<size_t>(s0)] = 0.0;

    using Item = std::pair<double, int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, s0});
    while (!heap.empty()) {
        const auto [d, id] = heap.top();
        heap.pop();
        if (d > dist_[static_cast<size_t>(id)]) continue;
        const auto ijk = g.unflat(id);
        const Vec x = g.coord(ijk[0], ijk[1], ijk[2]);
        for (const auto& off : offsets) {
            const int nx = ijk[0] + off.dx, ny = ijk[1] + off.dy, nz = ijk[2] + off.dz;
            if (nx < 0 || nx >= g.n || ny < 0 || ny >= g.n) continue;
            if (g.dim == 3 && (nz < 0 || nz >= g.n)) continue;
            if (g.dim == 2 && nz != 0) continue;
            const int64_t nid = g.flat(nx, ny, nz);
            const Vec y = g.coord(nx, ny, nz);
            const double cost = segment_travel_time(y - x, f.velocity(0.5 * (x + y)));
            if (!std::isfinite(cost)) continue;
            const double nd = d + cost;
            if (nd < dist_[static_cast<size_t>(nid)]) {
                dist_[static_cast<size_t>(nid)] = nd;
                heap.push({nd, nid});
            }
        }
    }

    ScalarField out;
    out.grid = g;
    out.kind = FieldKind::MinTime;
    out.v = std::move(dist_);
    out.reached.resize(out.v.size());
    for (size_t i = 0; i < out.v.size(); ++i) out.reached[i] = std::isfinite(out.v[i]);
    return out;
}

}  // namespace geq
