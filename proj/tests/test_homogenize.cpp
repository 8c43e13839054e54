#include <cmath>

#include "doctest.h"
#include "geq/errors.hpp"
#include "geq/homogenize.hpp"

using namespace geq;

namespace {

FieldSpec cellular(double A, double k = 2.0 * kPi) {
    FieldSpec s;
    s.family = FieldFamily::PeriodicCellular;
    s.amplitude = A;
    s.wavenumber = k;
    return s;
}

FieldSpec constant(double cx, double cy = 0.0) {
    FieldSpec s;
    s.family = FieldFamily::Constant;
    s.constant = Vec(cx, cy);
    return s;
}

FieldSpec poisson(double A, double intensity, double window, Vec drift = Vec()) {
    FieldSpec s;
    s.family = FieldFamily::PoissonBumpStream;
    s.bump_amplitude = A;
    s.intensity = intensity;
    s.bump_radius = 1.0;
    s.window = window;
    s.drift = drift;
    return s;
}

}  // namespace

TEST_CASE("time constant of the zero field is one in every direction") {
    const Grid g = Grid::make(2, 0.02, 2.0);
    const MinTimeEnsemble ens = solve_ensemble(FieldSpec{}, {1}, g, SchemeParams{});
    for (int k = 0; k < 8; ++k) {
        const TimeConstantEstimate est =
            time_constant(ens, unit2(2.0 * kPi * k / 8.0), {0.8, 1.2, 1.6});
        CHECK(est.q_bar == doctest::Approx(1.0).epsilon(0.02));
        CHECK(est.bounds_ok);
        CHECK(!est.partial);
    }
    CHECK_THROWS_AS(time_constant(ens, Vec(1, 0), {1.6}), ConfigError);       // one radius
    CHECK_THROWS_AS(time_constant(ens, Vec(1, 0), {1.6, 0.8}), ConfigError);  // not increasing
}

TEST_CASE("support table of a constant field is the shifted disc") {
    const Vec drift(0.4, 0.0);
    const Grid g = Grid::make(2, 1.0 / 32, 12.0);
    const MinTimeEnsemble ens = solve_ensemble(constant(0.4), {1}, g, SchemeParams{});
    const SupportFunctionTable tab = support_table(ens, 16, {3.0, 4.0, 5.0});
    for (const Vec& pt : tab.shape_points()) CHECK(norm(pt - drift) == doctest::Approx(1.0).epsilon(0.03));
    CHECK(tab.convexity_violation() <= 0.03);
    CHECK(tab.lipschitz_excess() <= 0.03 * (1.0 / 0.6));

    SUBCASE("dual values on the shifted disc") {
        for (const Vec& p : {Vec(1, 0), Vec(0, 1), Vec(-0.3, 0.8)}) {
            const double expected = norm(p) - dot(drift, p);
            CHECK(effective_hamiltonian_dual(tab, p) ==
                  doctest::Approx(expected).epsilon(0.03));
        }
        const Vec p(0.3, 0.7);
        CHECK(effective_hamiltonian_dual(tab, 2.0 * p) ==
              doctest::Approx(2.0 * effective_hamiltonian_dual(tab, p)).epsilon(1e-14));
    }
}

TEST_CASE("dual of the zero-field table is the euclidean norm") {
    const Grid g = Grid::make(2, 0.02, 2.0);
    const MinTimeEnsemble ens = solve_ensemble(FieldSpec{}, {1}, g, SchemeParams{});
    const SupportFunctionTable tab = support_table(ens, 16, {0.8, 1.2, 1.6});
    for (const Vec& p : {Vec(1, 0), Vec(0.6, -0.8), Vec(-2, 1)})
        CHECK(effective_hamiltonian_dual(tab, p) == doctest::Approx(norm(p)).epsilon(0.02));
}

TEST_CASE("mean shift reduction") {
    CHECK(mean_shift_reduce(1.7, Vec(), Vec(1, 0)) == 1.7);
    CHECK(mean_shift_reduce(1.0, Vec(0.4, 0.0), Vec(1, 0)) == doctest::Approx(1.4));
}

TEST_CASE("mean shift consistency on a drifted bump field") {
    // direct discounted estimate on the drifted field vs the centered
    // estimate plus <E[V], p>
    const Vec drift(0.2, 0.0);
    const Vec p(1.0, 0.0);
    const FieldSpec drifted = poisson(0.4, 0.05, 34.0, drift);
    const FieldSpec centered = poisson(0.4, 0.05, 34.0);
    const Grid g = Grid::make(2, 1.0 / 8, 32.0);
    SchemeParams params;
    params.max_cycles = 20000;
    const std::vector<uint64_t> seeds{11, 12};
    const std::vector<double> deltas{0.5, 0.35, 0.25};
    const double direct =
        effective_hamiltonian_discounted(drifted, seeds, p, deltas, g, params).extrapolated;
    const double reduced = mean_shift_reduce(
        effective_hamiltonian_discounted(centered, seeds, p, deltas, g, params).extrapolated,
        drift, p);
    CHECK(direct == doctest::Approx(reduced).epsilon(0.04));
}

TEST_CASE("reachable sets of the unit-speed front") {
    const Grid g = Grid::make(2, 0.02, 2.0);
    const MinTimeResult mt = solve_min_time(make_field(FieldSpec{}, 0), Vec(), g, SchemeParams{});
    const ReachableSet r1 = reachable_set(mt, 1.0);
    CHECK(r1.volume == doctest::Approx(kPi).epsilon(0.03));
    CHECK(r1.perimeter == doctest::Approx(2.0 * kPi).epsilon(0.05));
    const ReachableSet r05 = reachable_set(mt, 0.5);
    CHECK(r05.volume <= r1.volume);  // sublevel nesting
    for (size_t i = 0; i < r05.inside.size(); ++i)
        if (r05.inside[i]) CHECK(r1.inside[i]);
    CHECK_THROWS_AS(reachable_set(mt, 100.0), TrustRegionError);

    const VolumeGrowthReport rep = volume_growth_check(mt, {1.5});
    CHECK(rep.rows[0].growth_ratio == doctest::Approx(std::sqrt(kPi)).epsilon(0.02));
    CHECK(rep.rows[0].perimeter_window_min <= rep.perimeter_constant);
}

TEST_CASE("shape check of the unit disc") {
    const Grid g = Grid::make(2, 0.02, 2.0);
    const MinTimeEnsemble ens = solve_ensemble(FieldSpec{}, {1}, g, SchemeParams{});
    const SupportFunctionTable tab = support_table(ens, 16, {0.8, 1.2, 1.6});
    CHECK(shape_check(ens.solves[0], tab, 1.5) <= 0.05);
}

TEST_CASE("cellular shape fraction shrinks with time") {
    const Grid g = Grid::make(2, 1.0 / 12, 26.0);
    const MinTimeEnsemble ens = solve_ensemble(cellular(2.0), {1}, g, SchemeParams{});
    const SupportFunctionTable tab = support_table(ens, 16, {4.0, 6.0, 8.0});
    const double f4 = shape_check(ens.solves[0], tab, 4.0);
    const double f8 = shape_check(ens.solves[0], tab, 8.0);
    CHECK(f8 <= f4 + 1e-9);
}

TEST_CASE("hill estimator recovers a synthetic tail index") {
    Rng rng(3);
    std::vector<double> xs;
    for (int i = 0; i < 20000; ++i) xs.push_back(rng.pareto(0.5, 1.0));
    CHECK(hill_tail_index(xs, 1000) == doctest::Approx(0.5).epsilon(0.1));
    CHECK_THROWS_AS(hill_tail_index(xs, 1), ConfigError);
}

TEST_CASE("reachability fit") {
    SUBCASE("unit-speed front has slope one and no overhead") {
        const Grid g = Grid::make(2, 0.02, 2.0);
        const MinTimeEnsemble ens = solve_ensemble(FieldSpec{}, {1}, g, SchemeParams{});
        const ReachabilityFit fit = reachability_fit(ens, 0.5, 1.8);
        CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.02));
        CHECK(std::fabs(fit.intercept) <= 0.05);
        CHECK(fit.unreachable == 0);
    }
    SUBCASE("mean-zero cellular flow stays within the reachability budget") {
        const Grid g = Grid::make(2, 1.0 / 8, 52.0);
        const MinTimeEnsemble ens = solve_ensemble(cellular(2.0), {1}, g, SchemeParams{});
        const ReachabilityFit fit = reachability_fit(ens, 8.0, 16.0);
        CHECK(fit.slope <= 1.1);
        CHECK(fit.samples > 1000);
    }
    SUBCASE("super-unit drift leaves upwind targets unreachable") {
        const Grid g = Grid::make(2, 0.05, 2.0);
        const MinTimeEnsemble ens = solve_ensemble(constant(1.5), {1}, g, SchemeParams{});
        const ReachabilityFit fit = reachability_fit(ens, 0.5, 1.8);
        CHECK(fit.unreachable > 0);
    }
}

TEST_CASE("cross-seed spread concentrates with radius") {
    // the time constant is deterministic, so per-seed ratios tighten as
    // the radius grows
    const FieldSpec spec = poisson(0.25, 0.04, 70.0);
    const Grid g = Grid::make(2, 0.25, 62.0);
    std::vector<uint64_t> seeds;
    for (int s = 0; s < 8; ++s) seeds.push_back(mix64(0xabc, s));
    const MinTimeEnsemble ens = solve_ensemble(spec, seeds, g, SchemeParams{});
    const auto spread_at = [&](double r) {
        std::vector<double> ratios;
        for (const MinTimeResult& mt : ens.solves) {
            const double th = mt.theta.interp(Vec(r, 0.0));
            REQUIRE(std::isfinite(th));
            REQUIRE(th <= mt.trust_time);
            ratios.push_back(th / r);
        }
        double mean = 0.0;
        for (double q : ratios) mean += q;
        mean /= ratios.size();
        double worst = 0.0;
        for (double q : ratios) worst = std::max(worst, std::fabs(q - mean));
        return worst;
    };
    CHECK(spread_at(24.0) <= 0.5 * spread_at(6.0));
}

TEST_CASE("off-origin sources approach the same time constant") {
    // PointFinal smoke test: theta(rx, r(x+v))/r near q(v) for two
    // off-origin sources (no rate is asserted, only closeness).
    const Grid g = Grid::make(2, 1.0 / 12, 14.0);
    const FieldRealization f = make_field(cellular(2.0), 1);
    const MinTimeEnsemble ens = solve_ensemble(cellular(2.0), {1}, g, SchemeParams{});
    const SupportFunctionTable tab = support_table(ens, 16, {2.0, 3.0, 4.0});
    const double q_e1 = tab.q[0];
    const double r = 3.0;
    for (const Vec& x : {Vec(0.7, 0.3), Vec(-0.5, 0.8)}) {
        const MinTimeResult mt = solve_min_time(f, r * x, g, SchemeParams{});
        const double th = mt.theta.interp(r * x + r * Vec(1, 0));
        REQUIRE(std::isfinite(th));
        CHECK(th / r == doctest::Approx(q_e1).epsilon(0.15));
    }
}
