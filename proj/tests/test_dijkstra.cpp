#include <cmath>

#include "doctest.h"
#include "geq/dijkstra.hpp"
#include "geq/errors.hpp"
#include "geq/rng.hpp"

using namespace geq;

TEST_CASE("segment travel time against a feasibility scan") {
    // oracle: smallest t on a fine grid with |d - tV| <= t
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const Vec d(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const Vec V(rng.uniform(-2, 2), rng.uniform(-2, 2));
        const double t = segment_travel_time(d, V);
        const double tmax = 20.0, dt = 1e-3;
        double scan = std::numeric_limits<double>::infinity();
        for (double s = 0.0; s <= tmax; s += dt) {
            if (norm(d - s * V) <= s) {
                scan = s;
                break;
            }
        }
        if (std::isfinite(scan) && scan < tmax - 1.0) {
            REQUIRE(std::isfinite(t));
            CHECK(t == doctest::Approx(scan).epsilon(0.01));
        } else if (!std::isfinite(t)) {
            CHECK(!std::isfinite(scan));
        }
    }
    CHECK(segment_travel_time(Vec(1, 0), Vec()) == doctest::Approx(1.0));
    CHECK(segment_travel_time(Vec(1, 0), Vec(0.5, 0)) == doctest::Approx(1.0 / 1.5));
    CHECK(!std::isfinite(segment_travel_time(Vec(-1, 0), Vec(1.5, 0))));
}

TEST_CASE("dijkstra on the zero field is the grid metric") {
    const Grid g = Grid::make(2, 0.04, 2.0);
    const ScalarField d = dijkstra_oracle(make_field(FieldSpec{}, 0), Vec(), g, 2);
    for (int64_t i = 0; i < g.size(); ++i) {
        const double r = norm(g.coord(i));
        if (r < 5.0 * g.h) continue;
        CHECK(d.at(i) >= r - 1e-9);
        CHECK(d.at(i) - r <= 0.09 * r);
    }
}

TEST_CASE("dijkstra matches constant-drift travel times on the axis") {
    const Grid g = Grid::make(2, 0.04, 2.0);
    FieldSpec cs;
    cs.family = FieldFamily::Constant;
    cs.constant = Vec(0.4, 0.0);
    const ScalarField d = dijkstra_oracle(make_field(cs, 0), Vec(), g, 2);
    const auto at = [&](double x) { return d.at(g.flat(g.n_half + static_cast<int>(std::lround(x / g.h)), g.n_half)); };
    CHECK(std::fabs(at(1.0) - 1.0 / 1.4) <= 3.0 * g.h);
    CHECK(std::fabs(at(-1.0) - 1.0 / 0.6) <= 3.0 * g.h);
}

TEST_CASE("dijkstra refuses oversized grids") {
    const Grid g = Grid::make(2, 0.002, 2.0);
    CHECK_THROWS_AS(dijkstra_oracle(make_field(FieldSpec{}, 0), Vec(), g, 2), ConfigError);
}
