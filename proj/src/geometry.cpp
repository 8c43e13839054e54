#include "geq/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "geq/errors.hpp"

namespace geq {

namespace {

struct Pt {
    double x, y;
};

// Crossing of the level {theta = t} on an edge with exactly one inside
// endpoint; +inf outside values land the crossing at the inside corner.
double edge_fraction(double ta, double tb, double t) {
    if (std::isinf(tb)) return 0.0;
    if (std::isinf(ta)) return 1.0;
    const double d = tb - ta;
    if (d == 0.0) return 0.5;
    return std::clamp((t - ta) / d, 0.0, 1.0);
}

}  // namespace

ReachableSet reachable_set(const MinTimeResult& mt, double t) {
    if (!(t >= 0.0)) throw ConfigError("reachable_set: t must be nonnegative");
    if (t > mt.trust_time)
        throw TrustRegionError(strf(
            "reachable_set: t = %.3g exceeds the trusted horizon %.3g of this solve", t,
            mt.trust_time));
    const ScalarField& th = mt.theta;
    const Grid& g = th.grid;

    ReachableSet rs;
    rs.t = t;
    rs.inside.assign(static_cast<size_t>(g.size()), 0);
    int64_t count = 0;
    for (int64_t i = 0; i < g.size(); ++i) {
        const bool in = th.finite_at(i) && th.at(i) <= t;
        rs.inside[static_cast<size_t>(i)] = in;
        count += in;
    }
    double cell = g.h * g.h;
    if (g.dim == 3) cell *= g.h;
    rs.volume = cell * static_cast<double>(count);

    if (g.dim == 2) {
        const int n = g.n;
        double per = 0.0;
        for (int iy = 0; iy + 1 < n; ++iy) {
            for (int ix = 0; ix + 1 < n; ++ix) {
                const int64_t ia = g.flat(ix, iy), ib = g.flat(ix + 1, iy);
                const int64_t ic = g.flat(ix + 1, iy + 1), id = g.flat(ix, iy + 1);
                const int mask = (rs.inside[static_cast<size_t>(ia)] ? 1 : 0) |
                                 (rs.inside[static_cast<size_t>(ib)] ? 2 : 0) |
                                 (rs.inside[static_cast<size_t>(ic)] ? 4 : 0) |
                                 (rs.inside[static_cast<size_t>(id)] ? 8 : 0);
                if (mask == 0 || mask == 15) continue;
                const double ta = th.at(ia), tb = th.at(ib), tc = th.at(ic), td = th.at(id);
                // crossing points in cell-local coordinates
                const Pt e0{edge_fraction(ta, tb, t), 0.0};
                const Pt e1{1.0, edge_fraction(tb, tc, t)};
                const Pt e2{1.0 - edge_fraction(tc, td, t), 1.0};
                const Pt e3{0.0, 1.0 - edge_fraction(td, ta, t)};
                const auto seg = [&](const Pt& p, const Pt& q) {
                    per += std::hypot(p.x - q.x, p.y - q.y);
                };
                switch (mask) {
                    case 1: seg(e3, e0); break;
                    case 2: seg(e0, e1); break;
                    case 3: seg(e3, e1); break;
                    case 4: seg(e1, e2); break;
                    case 6: seg(e0, e2); break;
                    case 7: seg(e3, e2); break;
                    case 8: seg(e2, e3); break;
                    case 9: seg(e0, e2); break;
                    case 11: seg(e1, e2); break;
                    case 12: seg(e1, e3); break;
                    case 13: seg(e0, e1); break;
                    case 14: seg(e3, e0); break;
                    case 5:
                    case 10: {
                        double center = 0.0;
                        bool center_in = std::isfinite(ta) && std::isfinite(tb) &&
                                         std::isfinite(tc) && std::isfinite(td);
                        if (center_in) {
                            center = 0.25 * (ta + tb + tc + td);
                            center_in = center <= t;
                        }
                        const bool diag_ac = (mask == 5);
                        if (center_in == diag_ac) {
                            seg(e0, e1);
                            seg(e2, e3);
                        } else {
                            seg(e3, e0);
                            seg(e1, e2);
                        }
                        break;
                    }
                    default: break;
                }
            }
        }
        rs.perimeter = per * g.h;
    }
    return rs;
}

std::vector<Vec> convex_hull(std::vector<Vec> pts) {
    if (pts.size() < 3) return pts;
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    const auto cr = [](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Vec> hull(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cr(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cr(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_area(const std::vector<Vec>& poly) {
    double a = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec& p = poly[i];
        const Vec& q = poly[(i + 1) % n];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::fabs(a);
}

bool point_in_convex_polygon(const std::vector<Vec>& poly, const Vec& p) {
    const size_t n = poly.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        const Vec& a = poly[i];
        const Vec& b = poly[(i + 1) % n];
        const double c = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        if (c < -1e-12) return false;
    }
    return true;
}

double symmetric_difference_fraction(const MinTimeResult& mt, double t,
                                     const std::vector<Vec>& polygon) {
    if (mt.theta.grid.dim != 2)
        throw ConfigError("symmetric_difference_fraction: 2D only");
    if (t > mt.trust_time)
        throw TrustRegionError("symmetric_difference_fraction: t beyond the trusted horizon");
    double reach = 0.0;
    for (const Vec& v : polygon) reach = std::max(reach, norm(v));
    const Grid& g = mt.theta.grid;
    if (t * reach > g.covered_half_width() + g.h)
        throw TrustRegionError("symmetric_difference_fraction: polygon exceeds the grid");
    const double area_k = polygon_area(polygon);
    if (!(area_k > 0.0)) throw ConfigError("symmetric_difference_fraction: degenerate polygon");
    int64_t diff = 0;
    for (int64_t i = 0; i < g.size(); ++i) {
        const bool in_r = mt.theta.finite_at(i) && mt.theta.at(i) <= t;
        const Vec y = g.coord(i);
        const bool in_k = point_in_convex_polygon(polygon, (1.0 / t) * y);
        diff += (in_r != in_k);
    }
    const double cell = (g.h / t) * (g.h / t);
    return cell * static_cast<double>(diff) / area_k;
}

}  // namespace geq
