#include <cmath>

#include "doctest.h"
#include "geq/errors.hpp"
#include "geq/trajectory.hpp"

using namespace geq;

namespace {

FieldSpec cellular(double A, double k = 2.0 * kPi) {
    FieldSpec s;
    s.family = FieldFamily::PeriodicCellular;
    s.amplitude = A;
    s.wavenumber = k;
    return s;
}

}  // namespace

TEST_CASE("straight line in a zero field") {
    const FieldRealization f = make_field(FieldSpec{}, 0);
    const TrajectoryRecord tr = integrate(f, Vec(), 0.0, Vec(1, 0), 5.0);
    CHECK(std::fabs(tr.final_position()[0] - 5.0) < 1e-10);
    CHECK(std::fabs(tr.final_position()[1]) < 1e-10);
}

TEST_CASE("superposition with a constant field") {
    FieldSpec cs;
    cs.family = FieldFamily::Constant;
    cs.constant = Vec(0.4, 0.0);
    const TrajectoryRecord tr = integrate(make_field(cs, 0), Vec(), 0.0, Vec(0, 1), 2.0);
    CHECK(tr.final_position()[0] == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(tr.final_position()[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("stationarity shift identity") {
    // X^{x0,t0,alpha,tau_y omega}_t = X^{x0+y,t0,alpha,omega}_t - y
    const FieldRealization f = make_field(FieldSpec::default_random_phase(0.2), 3);
    const Vec y(0.37, -1.21);
    const Vec x0(0.1, 0.4);
    Rng rng(5);
    const ControlSchedule ctrl = sample_random_control(Vec(0.3, 0.1), 0.2, 0.1, 3.0, 2, rng);
    const TrajectoryRecord shifted = integrate(f.shifted(y), x0, 0.0, ctrl, 2.0);
    const TrajectoryRecord base = integrate(f, x0 + y, 0.0, ctrl, 2.0);
    CHECK(dist(shifted.final_position(), base.final_position() - y) < 1e-8);
}

TEST_CASE("semigroup property at a switch time") {
    const FieldRealization f = make_field(cellular(0.5), 0);
    Rng rng(9);
    const ControlSchedule ctrl = sample_random_control(Vec(0.2, 0.0), 0.3, 0.1, 2.0, 2, rng);
    const double s = ctrl.sigma[5];
    const TrajectoryRecord whole = integrate(f, Vec(), 0.0, ctrl, 1.0);
    const TrajectoryRecord first = integrate(f, Vec(), 0.0, ctrl, s);
    const TrajectoryRecord second = integrate(f, first.final_position(), s, ctrl, 1.0);
    CHECK(dist(whole.final_position(), second.final_position()) < 1e-8);
}

TEST_CASE("time reversal returns to the start") {
    const FieldRealization f = make_field(cellular(0.5), 0);
    IntegrateOptions opt;
    opt.step = 2e-3;
    const Vec a(0.4, 0.2);
    const TrajectoryRecord fwd = integrate(f, Vec(0.1, 0.2), 0.0, a, 1.0, opt);
    IntegrateOptions back = opt;
    back.flow_sign = -1.0;  // x' = alpha - V run forward
    const TrajectoryRecord rev = integrate(f, fwd.final_position(), 0.0, -a, 1.0, back);
    CHECK(dist(rev.final_position(), Vec(0.1, 0.2)) < 1e-6);
}

TEST_CASE("advected area is conserved near an eddy center") {
    // 4x4 corner mesh of a small square around the elliptic stagnation
    // point; the divergence-free flow keeps the shoelace area within 1%.
    const FieldRealization f = make_field(cellular(0.25), 0);
    const Vec center(0.25, 0.25);
    const double half = 0.08;
    std::vector<Vec> boundary;
    for (int i = 0; i < 3; ++i) boundary.push_back(center + Vec(-half + i * half * 2 / 3.0, -half));
    for (int i = 0; i < 3; ++i) boundary.push_back(center + Vec(half, -half + i * half * 2 / 3.0));
    for (int i = 0; i < 3; ++i) boundary.push_back(center + Vec(half - i * half * 2 / 3.0, half));
    for (int i = 0; i < 3; ++i) boundary.push_back(center + Vec(-half, half - i * half * 2 / 3.0));
    const auto area = [](const std::vector<Vec>& poly) {
        double acc = 0.0;
        for (size_t i = 0; i < poly.size(); ++i) {
            const Vec& p = poly[i];
            const Vec& q = poly[(i + 1) % poly.size()];
            acc += p[0] * q[1] - q[0] * p[1];
        }
        return 0.5 * std::fabs(acc);
    };
    const double a0 = area(boundary);
    std::vector<Vec> advected;
    for (const Vec& p : boundary)
        advected.push_back(integrate(f, p, 0.0, Vec(0, 0), 10.0).final_position());
    CHECK(area(advected) == doctest::Approx(a0).epsilon(0.01));
}

TEST_CASE("speed bound along trajectories") {
    const FieldRealization f = make_field(cellular(2.0), 1);
    Rng rng(2);
    const ControlSchedule ctrl = sample_random_control(Vec(0.3, 0.0), 0.2, 0.1, 30.0, 2, rng);
    const TrajectoryRecord tr = integrate(f, Vec(), 0.0, ctrl, 25.0);
    const double M = f.bound_M();
    for (size_t i = 1; i < tr.t.size(); ++i) {
        const double dt = tr.t[i] - tr.t[i - 1];
        CHECK(dist(tr.x[i], tr.x[i - 1]) <= M * dt * (1.0 + 1e-6));
    }
}

TEST_CASE("random control schedule moments") {
    Rng rng(7);
    const double delta = 0.1;
    const ControlSchedule s = sample_random_control(Vec(0.3, 0.0), 0.2, delta, 3000.0, 2, rng);
    const size_t n = s.k.size();
    REQUIRE(n > 20000);
    double mean = 0.0, dev = 0.0;
    std::vector<long> freq(4, 0);
    double lo = 1e9, hi = -1e9;
    for (size_t i = 0; i < n; ++i) {
        const double gap = s.sigma[i + 1] - s.sigma[i];
        mean += gap;
        dev += std::fabs(gap - delta);
        lo = std::min(lo, gap);
        hi = std::max(hi, gap);
        freq[static_cast<size_t>(s.k[i] - 1)]++;
    }
    mean /= n;
    dev /= n;
    CHECK(lo >= delta - delta * delta);
    CHECK(hi <= delta + delta * delta);
    const double se = delta * delta / std::sqrt(3.0) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(mean - delta) <= 3.0 * se);
    CHECK(dev <= delta * delta);
    for (long f_ : freq)
        CHECK(std::fabs(static_cast<double>(f_) / n - 0.25) <=
              3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(n)));
}

TEST_CASE("control parameter validation and horizon") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_random_control(Vec(0.9, 0.0), 0.2, 0.1, 1.0, 2, rng), ConfigError);
    CHECK_THROWS_AS(sample_random_control(Vec(0.3, 0.0), 0.2, 1.5, 1.0, 2, rng), ConfigError);
    const ControlSchedule s = sample_random_control(Vec(0.3, 0.0), 0.2, 0.1, 1.0, 2, rng);
    CHECK_THROWS_AS(s.at(s.horizon() + 1.0), HorizonError);
    const FieldRealization f = make_field(FieldSpec{}, 0);
    CHECK_THROWS_AS(integrate(f, Vec(), 0.0, s, s.horizon() + 1.0), HorizonError);
}

TEST_CASE("drift statistic on the zero field matches the control average") {
    const FieldRealization f = make_field(FieldSpec{}, 0);
    const Vec a_bar(0.3, 0.0);
    const double eps = 0.2, delta = 0.1, T = 400.0;
    Rng rng(13);
    const ControlSchedule ctrl = sample_random_control(a_bar, eps, delta, T, 2, rng);
    const TrajectoryRecord tr = integrate(f, Vec(), 0.0, ctrl, T);
    const double drift = drift_statistic(tr, a_bar);
    CHECK(drift <= eps + 0.01);

    // independent oracle: running average of the sampled controls
    double worst = 0.0;
    Vec acc;
    for (size_t i = 0; i + 1 < ctrl.sigma.size(); ++i) {
        const double t1 = std::min(ctrl.sigma[i + 1], T);
        acc += (t1 - ctrl.sigma[i]) * ctrl.perturbed(ctrl.k[i]);
        if (t1 >= 0.5 * T) worst = std::max(worst, norm((1.0 / t1) * acc - a_bar));
        if (t1 >= T) break;
    }
    // recorded sampling vs switch-time sampling differ by at most one segment
    CHECK(drift == doctest::Approx(worst).epsilon(0.02));
}

TEST_CASE("constant control direction") {
    const FieldRealization z = make_field(FieldSpec{}, 0);
    const Vec d = constant_control_direction(z, Vec(1, 0), 1000.0);
    CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(d[1]) < 1e-12);
}

TEST_CASE("poisson ensemble constant-control mean drift") {
    // ergodic average over realizations approaches the control
    FieldSpec spec;
    spec.family = FieldFamily::PoissonBumpStream;
    spec.bump_amplitude = 0.25;
    spec.intensity = 0.04;
    spec.bump_radius = 1.0;
    spec.window = 700.0;
    const Vec a(0.5, 0.0);
    Vec mean;
    const int n = 50;
    for (int s = 0; s < n; ++s)
        mean += constant_control_direction(make_field(spec, mix64(0xcc, s)), a, 1000.0);
    mean *= 1.0 / n;
    CHECK(norm(mean - a) < 0.1);
}
