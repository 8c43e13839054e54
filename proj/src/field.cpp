#include "geq/field.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "geq/errors.hpp"
#include "geq/rng.hpp"
#include "json.hpp"

namespace geq {

namespace {

// Smoothstep ramp: 0 below 0, 1 above 1, 3s^2-2s^3 between.
double ramp(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * (3.0 - 2.0 * s);
}

// Bump profile phi(a, s) = 2 ramp(s) ramp(a-s): vanishes off [0,a],
// equals 2 on [1, a-1] once a >= 2.
double bump_phi(double a, double s) { return 2.0 * ramp(s) * ramp(a - s); }

// Radial stream profile g and |g'| bound for Poisson bumps.
double bump_g_prime(double rho) {
    if (rho >= 1.0) return 0.0;
    const double u = 1.0 - rho * rho;
    return -6.0 * rho * u * u;
}
const double kG1 = 96.0 / (25.0 * std::sqrt(5.0));  // max |g'|
const double kG2 = 6.0;                             // bounds |g''| and |g'/rho|
const double kG3 = 48.0;                            // bounds |g'''|

struct CellKey {
    int64_t i, j, k;
    bool operator==(const CellKey& o) const { return i == o.i && j == o.j && k == o.k; }
};
struct CellKeyHash {
    size_t operator()(const CellKey& c) const {
        return static_cast<size_t>(mix64(mix64(static_cast<uint64_t>(c.i) * 0x9e3779b9ULL,
                                               static_cast<uint64_t>(c.j)),
                                         static_cast<uint64_t>(c.k)));
    }
};

}  // namespace

struct FieldRealization::PhaseData {
    std::vector<double> phase;      // per mode
    std::vector<Vec> span_dir;      // unit vector orthogonal to the wavevector
};

struct FieldRealization::BumpData {
    std::vector<Vec> center;
    std::vector<double> sign;   // 2D stream sign
    std::vector<Vec> axis;      // 3D potential axis (unit)
    std::unordered_map<CellKey, std::pair<int, int>, CellKeyHash> cells;
    double cell = 1.0;
    double half_width = 0.0;
    int max_overlap = 0;
};

struct FieldRealization::CexData {
    PointProcessRealization pp;
};

std::string family_name(FieldFamily f) {
    switch (f) {
        case FieldFamily::Zero: return "zero";
        case FieldFamily::Constant: return "constant";
        case FieldFamily::PeriodicCellular: return "cellular";
        case FieldFamily::RandomPhaseStream: return "random_phase";
        case FieldFamily::PoissonBumpStream: return "poisson_bumps";
        case FieldFamily::CounterexampleShear: return "counterexample_shear";
    }
    return "?";
}

FieldFamily family_from_name(const std::string& name) {
    for (FieldFamily f : {FieldFamily::Zero, FieldFamily::Constant, FieldFamily::PeriodicCellular,
                          FieldFamily::RandomPhaseStream, FieldFamily::PoissonBumpStream,
                          FieldFamily::CounterexampleShear}) {
        if (family_name(f) == name) return f;
    }
    throw ConfigError("unknown field family: " + name);
}

namespace {

// True when u/v looks like p/q with a small denominator.
bool close_to_rational(double r, int max_den, double tol) {
    for (int q = 1; q <= max_den; ++q) {
        const double p = std::round(r * q);
        if (std::fabs(r - p / q) < tol) return true;
    }
    return false;
}

// Rational-independence safeguard for a pair of wavevectors: rejects
// parallel pairs and pairs commensurate with small denominators.
bool independent_pair(const Vec& a, const Vec& b) {
    const double cross = std::fabs(a[0] * b[1] - a[1] * b[0]) +
                         std::fabs(a[1] * b[2] - a[2] * b[1]) +
                         std::fabs(a[0] * b[2] - a[2] * b[0]);
    if (cross < 1e-12 * (norm(a) * norm(b) + 1e-300)) return false;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (std::fabs(a[i]) > 1e-12 && std::fabs(b[j]) > 1e-12) {
                if (!close_to_rational(b[j] / a[i], 12, 1e-9)) return true;
            }
        }
    }
    return false;
}

}  // namespace

void FieldSpec::validate() const {
    if (dim != 2 && dim != 3) throw ConfigError("field spec: dimension must be 2 or 3");
    switch (family) {
        case FieldFamily::Zero:
            break;
        case FieldFamily::Constant:
            if (dim == 2 && constant[2] != 0.0)
                throw ConfigError("field spec: constant has a z component in 2D");
            break;
        case FieldFamily::PeriodicCellular:
            if (!(amplitude > 0.0)) throw ConfigError("field spec: cellular amplitude must be positive");
            if (!(wavenumber > 0.0)) throw ConfigError("field spec: cellular wavenumber must be positive");
            break;
        case FieldFamily::RandomPhaseStream: {
            if (modes.empty()) throw ConfigError("field spec: random phase stream needs modes");
            for (const auto& m : modes) {
                if (!(m.amplitude > 0.0)) throw ConfigError("field spec: mode amplitude must be positive");
                if (norm(m.wavevec) <= 0.0) throw ConfigError("field spec: zero wavevector");
                if (dim == 2 && m.wavevec[2] != 0.0)
                    throw ConfigError("field spec: 3D wavevector in a 2D spec");
            }
            if (!allow_single_mode) {
                bool ok = false;
                for (size_t a = 0; a < modes.size() && !ok; ++a)
                    for (size_t b = a + 1; b < modes.size() && !ok; ++b)
                        ok = independent_pair(modes[a].wavevec, modes[b].wavevec);
                if (!ok)
                    throw ConfigError(
                        "field spec: random phase stream requires two rationally independent "
                        "wavevectors (set allow_single_mode to override)");
            }
            break;
        }
        case FieldFamily::PoissonBumpStream:
            if (!(intensity > 0.0)) throw ConfigError("field spec: Poisson intensity must be positive");
            if (!(bump_radius > 0.0)) throw ConfigError("field spec: bump radius must be positive");
            if (!(bump_amplitude > 0.0)) throw ConfigError("field spec: bump amplitude must be positive");
            if (!(window > 0.0)) throw ConfigError("field spec: window must be positive");
            if (dim == 2 && drift[2] != 0.0)
                throw ConfigError("field spec: drift has a z component in 2D");
            break;
        case FieldFamily::CounterexampleShear:
            if (dim != 2) throw ConfigError("field spec: counterexample shear is 2D");
            gap.validate();
            if (!(window > 0.0)) throw ConfigError("field spec: window must be positive");
            break;
    }
}

FieldSpec FieldSpec::default_random_phase(double amplitude) {
    FieldSpec s;
    s.family = FieldFamily::RandomPhaseStream;
    s.modes = {
        {amplitude, Vec(2.0 * kPi, 0.0), -1.0},
        {amplitude, Vec(std::sqrt(2.0) * kPi, std::sqrt(3.0) * kPi), -1.0},
    };
    return s;
}

FieldSpec FieldSpec::sinusoidal_shear(double amplitude, double wavenumber) {
    // Stream mode with wavevector (k,0) and pinned phase pi/2 gives
    // V = (0, A sin(k x1)).
    FieldSpec s;
    s.family = FieldFamily::RandomPhaseStream;
    s.allow_single_mode = true;
    s.modes = {{amplitude, Vec(wavenumber, 0.0), kPi / 2.0}};
    return s;
}

FieldRealization make_field(const FieldSpec& spec, uint64_t seed) {
    spec.validate();
    FieldRealization f;
    f.spec_ = spec;
    f.seed_ = seed;

    switch (spec.family) {
        case FieldFamily::Zero:
            f.v_max_ = 0.0;
            f.lipschitz_ = 0.0;
            f.deriv2_ = 0.0;
            break;

        case FieldFamily::Constant:
            f.v_max_ = norm(spec.constant);
            f.lipschitz_ = 0.0;
            f.deriv2_ = 0.0;
            break;

        case FieldFamily::PeriodicCellular: {
            const double A = spec.amplitude, k = spec.wavenumber;
            // 2D: V = (A sin(kx1) cos(kx2), -A cos(kx1) sin(kx2)); sup |V| = A exactly.
            // 3D: equal-coefficient ABC flow; sqrt(6) A is a certified bound.
            f.v_max_ = (spec.dim == 2) ? A : A * std::sqrt(6.0);
            f.lipschitz_ = 2.0 * A * k;
            f.deriv2_ = 2.0 * A * k * k;
            break;
        }

        case FieldFamily::RandomPhaseStream: {
            auto data = std::make_shared<FieldRealization::PhaseData>();
            Rng rng(mix64(seed, 0x5eedu));
            double euclid = 0.0, lip = 0.0, d2 = 0.0;
            for (const auto& m : spec.modes) {
                data->phase.push_back(m.phase >= 0.0 ? m.phase : rng.uniform(0.0, 2.0 * kPi));
                Vec w;
                if (spec.dim == 2) {
                    w = Vec(m.wavevec[1], -m.wavevec[0]);
                } else {
                    // Any unit vector orthogonal to the wavevector works;
                    // cross with the most orthogonal coordinate axis.
                    Vec ref(1, 0, 0);
                    if (std::fabs(m.wavevec[0]) >= std::fabs(m.wavevec[1]) &&
                        std::fabs(m.wavevec[0]) >= std::fabs(m.wavevec[2]))
                        ref = Vec(0, 1, 0);
                    w = Vec(m.wavevec[1] * ref[2] - m.wavevec[2] * ref[1],
                            m.wavevec[2] * ref[0] - m.wavevec[0] * ref[2],
                            m.wavevec[0] * ref[1] - m.wavevec[1] * ref[0]);
                }
                w *= 1.0 / norm(w);
                data->span_dir.push_back(w);
                euclid += m.amplitude;
                lip += m.amplitude * norm(m.wavevec);
                d2 += m.amplitude * dot(m.wavevec, m.wavevec);
            }
            // Triangle inequality over modes; exact for a single mode.
            f.v_max_ = euclid;
            f.lipschitz_ = lip;
            f.deriv2_ = d2;
            f.phases_ = data;
            break;
        }

        case FieldFamily::PoissonBumpStream: {
            auto data = std::make_shared<FieldRealization::BumpData>();
            const double rb = spec.bump_radius;
            data->cell = rb;
            data->half_width = spec.window;
            const int64_t nc = static_cast<int64_t>(std::ceil(spec.window / rb)) + 1;
            const int64_t kc = (spec.dim == 3) ? nc : 0;
            std::vector<std::pair<CellKey, std::vector<int>>> filled;
            for (int64_t i = -nc; i <= nc; ++i) {
                for (int64_t j = -nc; j <= nc; ++j) {
                    for (int64_t k = -kc; k <= kc; ++k) {
                        CellKey key{i, j, k};
                        Rng rng(mix64(seed, CellKeyHash{}(key)));
                        const double cell_vol =
                            (spec.dim == 2) ? rb * rb : rb * rb * rb;
                        const long cnt = rng.poisson(spec.intensity * cell_vol);
                        if (cnt == 0) continue;
                        std::vector<int> ids;
                        for (long q = 0; q < cnt; ++q) {
                            Vec c(rb * (static_cast<double>(i) + rng.uniform()),
                                  rb * (static_cast<double>(j) + rng.uniform()),
                                  spec.dim == 3 ? rb * (static_cast<double>(k) + rng.uniform())
                                                : 0.0);
                            ids.push_back(static_cast<int>(data->center.size()));
                            data->center.push_back(c);
                            data->sign.push_back(rng.sign());
                            if (spec.dim == 3) {
                                Vec ax;
                                double n2;
                                do {
                                    ax = Vec(rng.uniform(-1, 1), rng.uniform(-1, 1),
                                             rng.uniform(-1, 1));
                                    n2 = dot(ax, ax);
                                } while (n2 < 1e-4 || n2 > 1.0);
                                ax *= 1.0 / std::sqrt(n2);
                                data->axis.push_back(ax);
                            }
                        }
                        const int start = ids.front();
                        data->cells[key] = {start, static_cast<int>(ids.size())};
                    }
                }
            }
            // Certified overlap bound: any point lies in at most
            // 1 + max_j #{k != j : |c_k - c_j| < 2 rb} bump supports.
            int max_near = 0;
            for (size_t a = 0; a < data->center.size(); ++a) {
                int near = 0;
                const Vec& ca = data->center[a];
                const int64_t ci = static_cast<int64_t>(std::floor(ca[0] / rb));
                const int64_t cj = static_cast<int64_t>(std::floor(ca[1] / rb));
                const int64_t ck =
                    spec.dim == 3 ? static_cast<int64_t>(std::floor(ca[2] / rb)) : 0;
                for (int64_t di = -2; di <= 2; ++di)
                    for (int64_t dj = -2; dj <= 2; ++dj)
                        for (int64_t dk = (spec.dim == 3 ? -2 : 0); dk <= (spec.dim == 3 ? 2 : 0);
                             ++dk) {
                            auto it = data->cells.find(CellKey{ci + di, cj + dj, ck + dk});
                            if (it == data->cells.end()) continue;
                            for (int q = 0; q < it->second.second; ++q) {
                                const size_t b = static_cast<size_t>(it->second.first + q);
                                if (b == a) continue;
                                if (dist(data->center[b], ca) < 2.0 * rb) ++near;
                            }
                        }
                max_near = std::max(max_near, near);
            }
            data->max_overlap = data->center.empty() ? 0 : 1 + max_near;
            const double A = spec.bump_amplitude;
            f.v_max_ = A * kG1 * data->max_overlap + norm(spec.drift);
            f.lipschitz_ = A * kG2 / rb * data->max_overlap;
            f.deriv2_ = A * kG3 / (rb * rb) * data->max_overlap;
            f.bumps_ = data;
            break;
        }

        case FieldFamily::CounterexampleShear: {
            auto data = std::make_shared<FieldRealization::CexData>(
                FieldRealization::CexData{PointProcessRealization(spec.gap, spec.window, seed)});
            f.cex_ = data;
            f.v_max_ = 2.0;  // ||V2|| <= 2 by the bump construction
            f.lipschitz_ = 6.0;
            f.deriv2_ = 36.0;
            break;
        }
    }
    return f;
}

FieldRealization build_counterexample_field(const GapLaw& mu, double half_width, uint64_t seed) {
    FieldSpec s;
    s.family = FieldFamily::CounterexampleShear;
    s.dim = 2;
    s.gap = mu;
    s.window = half_width;
    return make_field(s, seed);
}

Vec FieldRealization::velocity(const Vec& pos) const {
    const Vec x = pos + shift_;
    switch (spec_.family) {
        case FieldFamily::Zero:
            return Vec();
        case FieldFamily::Constant:
            return spec_.constant;
        case FieldFamily::PeriodicCellular: {
            const double A = spec_.amplitude, k = spec_.wavenumber;
            if (spec_.dim == 2)
                return Vec(A * std::sin(k * x[0]) * std::cos(k * x[1]),
                           -A * std::cos(k * x[0]) * std::sin(k * x[1]));
            return Vec(A * (std::sin(k * x[2]) + std::cos(k * x[1])),
                       A * (std::sin(k * x[0]) + std::cos(k * x[2])),
                       A * (std::sin(k * x[1]) + std::cos(k * x[0])));
        }
        case FieldFamily::RandomPhaseStream: {
            Vec v;
            for (size_t m = 0; m < spec_.modes.size(); ++m) {
                const auto& mode = spec_.modes[m];
                const double c =
                    mode.amplitude * std::cos(dot(mode.wavevec, x) + phases_->phase[m]);
                v += c * phases_->span_dir[m];
            }
            return v;
        }
        case FieldFamily::PoissonBumpStream: {
            const double rb = spec_.bump_radius;
            if (norm_inf(x) > bumps_->half_width)
                throw WindowError("poisson bump field evaluated outside its window");
            Vec v = spec_.drift;
            const int64_t ci = static_cast<int64_t>(std::floor(x[0] / rb));
            const int64_t cj = static_cast<int64_t>(std::floor(x[1] / rb));
            const int64_t ck = spec_.dim == 3 ? static_cast<int64_t>(std::floor(x[2] / rb)) : 0;
            for (int64_t di = -1; di <= 1; ++di)
                for (int64_t dj = -1; dj <= 1; ++dj)
                    for (int64_t dk = (spec_.dim == 3 ? -1 : 0); dk <= (spec_.dim == 3 ? 1 : 0);
                         ++dk) {
                        auto it = bumps_->cells.find(CellKey{ci + di, cj + dj, ck + dk});
                        if (it == bumps_->cells.end()) continue;
                        for (int q = 0; q < it->second.second; ++q) {
                            const size_t b = static_cast<size_t>(it->second.first + q);
                            const Vec r = x - bumps_->center[b];
                            const double rr = norm(r);
                            const double rho = rr / rb;
                            if (rho >= 1.0 || rr < 1e-14) continue;
                            const double gp = bump_g_prime(rho);
                            const Vec u = (1.0 / rr) * r;
                            const double s = bumps_->sign[b];
                            if (spec_.dim == 2) {
                                v += (s * spec_.bump_amplitude * gp) * Vec(u[1], -u[0]);
                            } else {
                                const Vec& d = bumps_->axis[b];
                                v += (s * spec_.bump_amplitude * gp) *
                                     Vec(u[1] * d[2] - u[2] * d[1], u[2] * d[0] - u[0] * d[2],
                                         u[0] * d[1] - u[1] * d[0]);
                            }
                        }
                    }
            return v;
        }
        case FieldFamily::CounterexampleShear: {
            const auto& pp = cex_->pp;
            const int n = pp.gap_containing(x[0]);
            const double yl = pp.point(n - 1), yr = pp.point(n);
            const double v2 = pp.mark(n - 1) * bump_phi(yr - yl, x[0] - yl);
            return Vec(0.0, v2);
        }
    }
    return Vec();
}

Vec FieldRealization::mean_exact() const {
    switch (spec_.family) {
        case FieldFamily::Constant:
            return spec_.constant;
        case FieldFamily::PoissonBumpStream:
            return spec_.drift;
        default:
            return Vec();
    }
}

std::array<double, 3> FieldRealization::periods() const {
    switch (spec_.family) {
        case FieldFamily::Zero:
        case FieldFamily::Constant:
            return {0.0, 0.0, 0.0};
        case FieldFamily::PeriodicCellular: {
            const double p = 2.0 * kPi / spec_.wavenumber;
            return {p, p, spec_.dim == 3 ? p : 0.0};
        }
        case FieldFamily::RandomPhaseStream: {
            // Single pinned-axis mode: periodic along its axis, constant
            // along the others. General mode sets are aperiodic.
            std::array<double, 3> p{0.0, 0.0, 0.0};
            for (const auto& m : spec_.modes) {
                for (int i = 0; i < 3; ++i) {
                    if (std::fabs(m.wavevec[i]) < 1e-14) continue;
                    const double pi_ = 2.0 * kPi / std::fabs(m.wavevec[i]);
                    if (p[i] == 0.0)
                        p[i] = pi_;
                    else if (std::fabs(p[i] - pi_) > 1e-12)
                        p[i] = -1.0;
                }
            }
            return p;
        }
        case FieldFamily::PoissonBumpStream:
            return {-1.0, -1.0, spec_.dim == 3 ? -1.0 : 0.0};
        case FieldFamily::CounterexampleShear:
            return {-1.0, 0.0, 0.0};
    }
    return {-1.0, -1.0, -1.0};
}

FieldRealization FieldRealization::shifted(const Vec& y) const {
    FieldRealization f = *this;
    f.shift_ += y;
    return f;
}

const PointProcessRealization& FieldRealization::points() const {
    if (!cex_) throw ConfigError("points(): not a counterexample realization");
    return cex_->pp;
}

double FieldRealization::realized_window() const {
    if (cex_) return std::min(-cex_->pp.covered_left(), cex_->pp.covered_right());
    if (bumps_) return bumps_->half_width;
    return std::numeric_limits<double>::infinity();
}

double divergence_estimate(const FieldRealization& f, const Vec& x, double h) {
    if (!(h > 0.0)) throw ConfigError("divergence_estimate: h must be positive");
    double div = 0.0;
    for (int i = 0; i < f.dim(); ++i) {
        Vec e;
        e[i] = h;
        div += (f.velocity(x + e)[i] - f.velocity(x - e)[i]) / (2.0 * h);
    }
    return div;
}

Vec mean_velocity_estimate(const FieldRealization& f, double R, long n) {
    if (!(R > 0.0) || n < 1) throw ConfigError("mean_velocity_estimate: need R > 0, n >= 1");
    Rng rng(mix64(f.seed(), 0x3ea11u));
    Vec sum;
    for (long i = 0; i < n; ++i) {
        Vec x;
        for (int d = 0; d < f.dim(); ++d) x[d] = rng.uniform(-R, R);
        sum += f.velocity(x);
    }
    return (1.0 / static_cast<double>(n)) * sum;
}

double delta_of_realization(const FieldRealization& f) {
    if (f.spec().family != FieldFamily::CounterexampleShear)
        throw ConfigError("delta_of_realization: not a counterexample realization");
    const auto& pp = f.points();
    const auto v2_abs = [&](double r) { return std::fabs(f.velocity(Vec(r, 0.0))[1]); };
    if (v2_abs(0.0) <= 1.0) return 0.0;

    // |V2| > 1 at the origin, so 0 sits inside the high plateau of its
    // gap; |V2| <= 1 within 1/2 of every point y_n, so the two crossings
    // bracketing 0 live in this gap. Bisect each side to 1e-3.
    const int n = pp.gap_containing(0.0);
    const double yl = pp.point(n - 1), yr = pp.point(n);
    // invariant: |V2(good)| <= 1 < |V2(bad)|
    const auto crossing = [&](double good, double bad) {
        while (std::fabs(good - bad) > 1e-4) {
            const double mid = 0.5 * (good + bad);
            if (v2_abs(mid) <= 1.0)
                good = mid;
            else
                bad = mid;
        }
        return 0.5 * (good + bad);
    };
    const double left = crossing(yl, 0.0);
    const double right = crossing(yr, 0.0);
    return std::min(0.0 - left, right - 0.0);
}

// --- JSON serialization -------------------------------------------------

using nlohmann::json;

std::string FieldSpec::to_json_string() const {
    json j;
    j["family"] = family_name(family);
    j["dim"] = dim;
    switch (family) {
        case FieldFamily::Zero:
            break;
        case FieldFamily::Constant:
            j["constant"] = {constant[0], constant[1], constant[2]};
            break;
        case FieldFamily::PeriodicCellular:
            j["amplitude"] = amplitude;
            j["wavenumber"] = wavenumber;
            break;
        case FieldFamily::RandomPhaseStream: {
            json ms = json::array();
            for (const auto& m : modes)
                ms.push_back({{"amplitude", m.amplitude},
                              {"wavevec", {m.wavevec[0], m.wavevec[1], m.wavevec[2]}},
                              {"phase", m.phase}});
            j["modes"] = ms;
            j["allow_single_mode"] = allow_single_mode;
            break;
        }
        case FieldFamily::PoissonBumpStream:
            j["intensity"] = intensity;
            j["bump_radius"] = bump_radius;
            j["bump_amplitude"] = bump_amplitude;
            j["drift"] = {drift[0], drift[1], drift[2]};
            j["window"] = window;
            break;
        case FieldFamily::CounterexampleShear:
            j["gap_alpha"] = gap.alpha;
            j["gap_xm"] = gap.xm;
            j["window"] = window;
            break;
    }
    return j.dump();
}

FieldSpec FieldSpec::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field spec: bad JSON: ") + e.what());
    }
    static const std::vector<std::string> known = {
        "family",    "dim",         "constant",          "amplitude", "wavenumber",
        "modes",     "intensity",   "bump_radius",       "bump_amplitude",
        "drift",     "window",      "gap_alpha",         "gap_xm",    "allow_single_mode"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("field spec: unknown key '" + it.key() + "'");
    }
    FieldSpec s;
    s.family = family_from_name(j.at("family").get<std::string>());
    s.dim = j.value("dim", 2);
    const auto get_vec = [&](const char* key, Vec def) {
        if (!j.contains(key)) return def;
        auto a = j.at(key);
        Vec v;
        for (size_t i = 0; i < a.size() && i < 3; ++i) v[static_cast<int>(i)] = a[i].get<double>();
        return v;
    };
    s.constant = get_vec("constant", Vec());
    s.amplitude = j.value("amplitude", s.amplitude);
    s.wavenumber = j.value("wavenumber", s.wavenumber);
    s.intensity = j.value("intensity", s.intensity);
    s.bump_radius = j.value("bump_radius", s.bump_radius);
    s.bump_amplitude = j.value("bump_amplitude", s.bump_amplitude);
    s.drift = get_vec("drift", Vec());
    s.window = j.value("window", s.window);
    s.gap.alpha = j.value("gap_alpha", s.gap.alpha);
    s.gap.xm = j.value("gap_xm", s.gap.xm);
    s.allow_single_mode = j.value("allow_single_mode", false);
    if (j.contains("modes")) {
        for (const auto& m : j.at("modes")) {
            StreamMode sm;
            sm.amplitude = m.at("amplitude").get<double>();
            auto w = m.at("wavevec");
            for (size_t i = 0; i < w.size() && i < 3; ++i)
                sm.wavevec[static_cast<int>(i)] = w[i].get<double>();
            sm.phase = m.value("phase", -1.0);
            s.modes.push_back(sm);
        }
    }
    s.validate();
    return s;
}

}  // namespace geq
