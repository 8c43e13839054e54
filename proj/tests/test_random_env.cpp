#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "geq/errors.hpp"
#include "geq/field.hpp"
#include "geq/rng.hpp"

using namespace geq;

namespace {

FieldSpec cellular(double A = 2.0, double k = 2.0 * kPi) {
    FieldSpec s;
    s.family = FieldFamily::PeriodicCellular;
    s.amplitude = A;
    s.wavenumber = k;
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

// Two-sample Kolmogorov-Smirnov distance; ties (the +-2 plateau atoms)
// must advance both sides before the gap is measured.
double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const size_t n = a.size(), m = b.size();
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < n && j < m) {
        const double t = std::min(a[i], b[j]);
        while (i < n && a[i] <= t) ++i;
        while (j < m && b[j] <= t) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

}  // namespace

TEST_CASE("zero and constant fields") {
    const FieldRealization z = make_field(FieldSpec{}, 42);
    CHECK(z.velocity(Vec(3, -5))[0] == 0.0);
    CHECK(z.velocity(Vec(3, -5))[1] == 0.0);
    CHECK(z.v_max() == 0.0);
    CHECK(z.bound_M() == 1.0);

    FieldSpec cs;
    cs.family = FieldFamily::Constant;
    cs.constant = Vec(0.4, 0.0);
    const FieldRealization c = make_field(cs, 7);
    CHECK(c.velocity(Vec(11.3, -2.2))[0] == doctest::Approx(0.4));
    CHECK(c.velocity(Vec(11.3, -2.2))[1] == 0.0);
    CHECK(c.v_max() == doctest::Approx(0.4));
    CHECK(c.bound_M() == doctest::Approx(1.4));
}

TEST_CASE("cellular field matches the stream-function derivative") {
    const FieldSpec spec = cellular(2.0, 2.0 * kPi);
    const FieldRealization f = make_field(spec, 0);
    // Independent oracle: finite differences of the stream function
    // Psi = (A/k) sin(k x1) sin(k x2).
    const auto psi = [&](double x, double y) {
        return spec.amplitude / spec.wavenumber * std::sin(spec.wavenumber * x) *
               std::sin(spec.wavenumber * y);
    };
    Rng rng(5);
    const double e = 1e-6;
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform(-3, 3), y = rng.uniform(-3, 3);
        const Vec v = f.velocity(Vec(x, y));
        CHECK(v[0] == doctest::Approx((psi(x, y + e) - psi(x, y - e)) / (2 * e)).epsilon(1e-5));
        CHECK(v[1] == doctest::Approx(-(psi(x + e, y) - psi(x - e, y)) / (2 * e)).epsilon(1e-5));
    }
    CHECK(f.v_max() == doctest::Approx(2.0));
    CHECK(f.bound_M() == doctest::Approx(3.0));
}

TEST_CASE("determinism in (spec, seed)") {
    const FieldSpec spec = poisson(1.0, 0.1, 32.0);
    const FieldRealization a = make_field(spec, 99);
    const FieldRealization b = make_field(spec, 99);
    const FieldRealization c = make_field(spec, 100);
    Rng rng(17);
    bool identical = true, differs = false;
    for (int i = 0; i < 100; ++i) {
        const Vec x(rng.uniform(-30, 30), rng.uniform(-30, 30));
        identical = identical && a.velocity(x) == b.velocity(x);
        differs = differs || !(a.velocity(x) == c.velocity(x));
    }
    CHECK(identical);
    CHECK(differs);

    const FieldRealization cex1 = build_counterexample_field(GapLaw{}, 8.0, 5);
    const FieldRealization cex2 = build_counterexample_field(GapLaw{}, 8.0, 5);
    for (double x = -3.0; x <= 3.0; x += 0.37)
        CHECK(cex1.velocity(Vec(x, 0))[1] == cex2.velocity(Vec(x, 0))[1]);
}

TEST_CASE("divergence vanishes to discretization error") {
    Rng rng(3);
    const double h = 1e-3;
    for (const FieldSpec& spec :
         {cellular(2.0), FieldSpec::default_random_phase(1.0), poisson(1.0, 0.1, 16.0)}) {
        const FieldRealization f = make_field(spec, 11);
        for (int i = 0; i < 100; ++i) {
            const Vec x(rng.uniform(-8, 8), rng.uniform(-8, 8));
            const double div = divergence_estimate(f, x, h);
            CHECK(std::fabs(div) <= 10.0 * h * h * std::max(f.deriv2_bound(), 1.0));
        }
    }
    const FieldRealization z = make_field(FieldSpec{}, 0);
    CHECK(divergence_estimate(z, Vec(1, 2), h) == 0.0);
}

TEST_CASE("divergence-free in 3D") {
    FieldSpec spec = cellular(1.0);
    spec.dim = 3;
    const FieldRealization f = make_field(spec, 0);
    FieldSpec ps = poisson(1.0, 0.05, 8.0);
    ps.dim = 3;
    const FieldRealization g = make_field(ps, 4);
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        const Vec x(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
        CHECK(std::fabs(divergence_estimate(f, x, 1e-3)) <= 1e-4 * std::max(f.deriv2_bound(), 1.0));
        CHECK(std::fabs(divergence_estimate(g, x, 1e-3)) <= 1e-4 * std::max(g.deriv2_bound(), 1.0));
    }
}

TEST_CASE("certified bound holds pointwise") {
    Rng rng(23);
    for (const FieldSpec& spec : {cellular(2.0), FieldSpec::default_random_phase(0.7),
                                  poisson(0.8, 0.1, 24.0), FieldSpec::sinusoidal_shear(2.0)}) {
        const FieldRealization f = make_field(spec, 31);
        for (int i = 0; i < 10000; ++i) {
            const Vec x(rng.uniform(-20, 20), rng.uniform(-20, 20));
            CHECK(norm_inf(f.velocity(x)) <= f.v_max() * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("mean velocity estimates") {
    CHECK(norm(mean_velocity_estimate(make_field(FieldSpec{}, 0), 10.0, 100)) == 0.0);

    FieldSpec cs;
    cs.family = FieldFamily::Constant;
    cs.constant = Vec(0.4, 0.0);
    const Vec m = mean_velocity_estimate(make_field(cs, 0), 10.0, 1000);
    CHECK(m[0] == doctest::Approx(0.4));
    CHECK(m[1] == 0.0);

    const FieldRealization f = make_field(poisson(1.0, 0.1, 256.0), 8);
    const Vec mp = mean_velocity_estimate(f, 200.0, 100000);
    CHECK(norm(mp) < 0.05 * f.v_max());
    CHECK(norm(mp) < 0.02);  // bump stream integrals vanish identically
}

TEST_CASE("random phase stream requires independent wavevectors") {
    FieldSpec s;
    s.family = FieldFamily::RandomPhaseStream;
    s.modes = {{1.0, Vec(2.0 * kPi, 0.0), -1.0}};
    CHECK_THROWS_AS(make_field(s, 0), ConfigError);
    s.modes.push_back({1.0, Vec(4.0 * kPi, 0.0), -1.0});  // parallel, commensurate
    CHECK_THROWS_AS(make_field(s, 0), ConfigError);
    s.allow_single_mode = true;
    CHECK_NOTHROW(make_field(s, 0));
    CHECK_NOTHROW(make_field(FieldSpec::default_random_phase(1.0), 0));
}

TEST_CASE("invalid specs are rejected") {
    FieldSpec s = cellular(0.0);
    CHECK_THROWS_AS(make_field(s, 0), ConfigError);
    FieldSpec cex;
    cex.family = FieldFamily::CounterexampleShear;
    cex.gap.alpha = 0.5;  // infinite mean gap
    CHECK_THROWS_AS(make_field(cex, 0), ConfigError);
    cex.gap.alpha = 1.5;
    cex.dim = 3;
    CHECK_THROWS_AS(make_field(cex, 0), ConfigError);
}

TEST_CASE("window is enforced") {
    const FieldRealization f = make_field(poisson(1.0, 0.1, 8.0), 3);
    CHECK_THROWS_AS(f.velocity(Vec(9.5, 0.0)), WindowError);
    const FieldRealization cex = build_counterexample_field(GapLaw{}, 4.0, 3);
    CHECK_THROWS_AS(cex.velocity(Vec(cex.points().covered_right() + 1.0, 0.0)), WindowError);
}

TEST_CASE("shifted evaluation") {
    const FieldRealization f = make_field(cellular(1.5), 0);
    const Vec y(0.3, -0.7);
    const FieldRealization g = f.shifted(y);
    CHECK(g.velocity(Vec(0.1, 0.2)) == f.velocity(Vec(0.1, 0.2) + y));
}

TEST_CASE("stationary interval sampling") {
    SUBCASE("point mass at 2") {
        GapLaw law;
        law.kind = GapLaw::Kind::Fixed;
        law.xm = 2.0;
        Rng rng(1);
        double max_y0 = -1e9;
        for (int i = 0; i < 2000; ++i) {
            const StationaryInterval s = sample_stationary_interval(law, rng);
            CHECK(s.y1 - s.y0 == doctest::Approx(2.0));
            CHECK(s.y0 <= 0.0);
            CHECK(s.y1 > 0.0);
            max_y0 = std::max(max_y0, s.y0);
        }
        CHECK(max_y0 > -0.05);  // -y0 is uniform on (0,2)
    }
    SUBCASE("pareto 3 has the closed-form straddle moment") {
        // E[min(-y0, y1)] = (1/m) int v^2/4 dmu; quadrature oracle below.
        GapLaw law{GapLaw::Kind::Pareto, 3.0, 1.0};
        double quad = 0.0;
        const int n = 400000;
        double prev = 1.0;
        for (int i = 1; i <= n; ++i) {
            const double v = std::exp(std::log(1.0) + 12.0 * i / n);  // up to e^12
            const double density = 3.0 * std::pow(v, -4.0);
            quad += (v - prev) * (v * v / 4.0) * density;
            prev = v;
        }
        quad /= law.mean();
        CHECK(quad == doctest::Approx(0.5).epsilon(0.01));

        Rng rng(7);
        double acc = 0.0;
        const int samples = 200000;
        for (int i = 0; i < samples; ++i) {
            const StationaryInterval s = sample_stationary_interval(law, rng);
            acc += std::min(-s.y0, s.y1);
        }
        CHECK(acc / samples == doctest::Approx(0.5).epsilon(0.05));
    }
    SUBCASE("pareto 1.5 straddle moment diverges") {
        // fixed-seed surrogate for an a.s. divergence statement; heavy
        // tails make the running mean noisy, so the seed is pinned
        GapLaw law{GapLaw::Kind::Pareto, 1.5, 1.0};
        Rng rng(13);
        double acc = 0.0;
        std::vector<double> means;
        long next = 100;
        for (long i = 1; i <= 100000; ++i) {
            const StationaryInterval s = sample_stationary_interval(law, rng);
            acc += std::min(-s.y0, s.y1);
            if (i == next) {
                means.push_back(acc / static_cast<double>(i));
                next *= 10;
            }
        }
        for (size_t k = 1; k < means.size(); ++k) CHECK(means[k] > means[k - 1]);
    }
}

TEST_CASE("counterexample structure") {
    for (uint64_t seed = 0; seed < 50; ++seed) {
        const FieldRealization f = build_counterexample_field(GapLaw{}, 12.0, seed);
        const auto& pp = f.points();
        CHECK(pp.point(0) <= 0.0);
        CHECK(pp.point(1) > 0.0);
        for (int n = pp.first_index(); n + 1 <= pp.last_index(); ++n) {
            CHECK(pp.point(n + 1) > pp.point(n));
            CHECK(pp.mark(n + 1) == -pp.mark(n));
        }
        for (int n = pp.first_index() + 1; n <= pp.last_index(); ++n) {
            const double yl = pp.point(n - 1), yr = pp.point(n);
            if (yl < -12.0 || yr > 12.0) continue;
            // vanishes at the points themselves
            CHECK(std::fabs(f.velocity(Vec(yl, 0))[1]) < 1e-12);
            // sign inside the gap matches the mark, plateau when long
            const double mid = 0.5 * (yl + yr);
            const double v = f.velocity(Vec(mid, 0))[1];
            if (yr - yl > 1e-3) CHECK(v * pp.mark(n - 1) >= 0.0);
            if (yr - yl >= 3.0) {
                CHECK(std::fabs(v) == doctest::Approx(2.0));
                CHECK(f.velocity(Vec(yl + 1.0, 0))[1] == doctest::Approx(2.0 * pp.mark(n - 1)));
            }
            CHECK(std::fabs(v) <= 2.0 + 1e-12);
        }
    }
}

TEST_CASE("delta of a realization") {
    int zero_cases = 0, plateau_cases = 0;
    for (uint64_t seed = 0; seed < 400; ++seed) {
        const FieldRealization f = build_counterexample_field(GapLaw{}, 4.0, seed);
        const double d = delta_of_realization(f);
        CHECK(d >= 0.0);
        const double v0 = std::fabs(f.velocity(Vec(0, 0))[1]);
        if (v0 <= 1.0) {
            CHECK(d == 0.0);
            ++zero_cases;
        } else if (d > 5e-3) {
            // strictly inside the trapped interval the speed exceeds one
            CHECK(std::fabs(f.velocity(Vec(d - 2e-3, 0))[1]) > 1.0);
            CHECK(std::fabs(f.velocity(Vec(2e-3 - d, 0))[1]) > 1.0);
        }
        // deltadist bound: delta >= dist(0, points) - 1 when dist >= 2
        const auto& pp = f.points();
        const double dist0 = std::min(-pp.point(0), pp.point(1));
        if (dist0 >= 2.0) {
            CHECK(d >= dist0 - 1.0 - 2e-3);
            ++plateau_cases;
        }
    }
    CHECK(zero_cases > 0);
    CHECK(plateau_cases > 0);
}

TEST_CASE("counterexample one-point statistics are stationary") {
    std::vector<double> at0, at173;
    for (uint64_t seed = 0; seed < 2000; ++seed) {
        const FieldRealization f =
            build_counterexample_field(GapLaw{}, 20.0, mix64(0x57a7, seed));
        at0.push_back(f.velocity(Vec(0.0, 0.0))[1]);
        at173.push_back(f.velocity(Vec(17.3, 0.0))[1]);
    }
    CHECK(ks_distance(at0, at173) <= 0.05);
}

TEST_CASE("tail of dist(0, N) follows the size-bias integral") {
    // P[-y0 > x, y1 > x] = (1/m) int_{2x}^inf (v - 2x) dmu(v); for the
    // Pareto(1.5, 1) default this is c x^{-1/2} beyond x = 1/2, so the
    // log-log slope of the quadrature must be -(alpha - 1).
    const GapLaw law{};
    const auto tail = [&](double x) {
        double acc = 0.0;
        double prev = std::max(2.0 * x, law.xm);
        for (int i = 1; i <= 200000; ++i) {
            const double v = prev * std::exp(14.0 / 200000.0);
            const double mid = 0.5 * (prev + v);
            acc += (v - prev) * (mid - 2.0 * x) * 1.5 * std::pow(mid, -2.5);
            prev = v;
        }
        return acc / law.mean();
    };
    const double slope =
        (std::log(tail(8.0)) - std::log(tail(1.0))) / (std::log(8.0) - std::log(1.0));
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.02));
}

TEST_CASE("field spec json round trip") {
    FieldSpec s = poisson(0.8, 0.05, 48.0, Vec(0.2, 0.0));
    const FieldSpec t = FieldSpec::from_json_string(s.to_json_string());
    CHECK(t.family == s.family);
    CHECK(t.bump_amplitude == s.bump_amplitude);
    CHECK(t.intensity == s.intensity);
    CHECK(t.drift[0] == s.drift[0]);
    CHECK_THROWS_WITH_AS(FieldSpec::from_json_string("{\"family\":\"zero\",\"bogus\":1}"),
                         doctest::Contains("bogus"), ConfigError);
}
