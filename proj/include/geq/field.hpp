#ifndef GEQ_FIELD_HPP
#define GEQ_FIELD_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "geq/common.hpp"
#include "geq/point_process.hpp"

namespace geq {

enum class FieldFamily {
    Zero,
    Constant,
    PeriodicCellular,
    RandomPhaseStream,
    PoissonBumpStream,
    CounterexampleShear,
};

std::string family_name(FieldFamily f);
FieldFamily family_from_name(const std::string& name);

/// One Fourier mode of a stream-function field. A negative phase means
/// "draw the phase from the realization seed"; a value in [0, 2pi)
/// pins it (used for deterministic shears).
struct StreamMode {
    double amplitude = 1.0;
    Vec wavevec;
    double phase = -1.0;
};

struct FieldSpec {
    FieldFamily family = FieldFamily::Zero;
    int dim = 2;

    Vec constant;  // Constant

    double amplitude = 2.0;           // PeriodicCellular
    double wavenumber = 2.0 * kPi;    // PeriodicCellular

    std::vector<StreamMode> modes;    // RandomPhaseStream
    bool allow_single_mode = false;   // opt-out of the ergodicity safeguard

    double intensity = 0.1;      // PoissonBumpStream: points per unit volume
    double bump_radius = 1.0;    // PoissonBumpStream
    double bump_amplitude = 1.0; // PoissonBumpStream
    Vec drift;                   // PoissonBumpStream: added constant part

    GapLaw gap;           // CounterexampleShear
    double window = 256;  // PoissonBumpStream / CounterexampleShear half-width

    void validate() const;  // throws ConfigError

    /// Default two-mode spec satisfying the rational-independence safeguard.
    static FieldSpec default_random_phase(double amplitude = 1.0);
    /// Single-mode shear V = (0, A sin(k x1 + phase)).
    static FieldSpec sinusoidal_shear(double amplitude, double wavenumber = 2.0 * kPi);

    std::string to_json_string() const;
    static FieldSpec from_json_string(const std::string& text);
};

/// A frozen sample of the random field: immutable after construction,
/// deterministic in (spec, seed), safe to evaluate concurrently.
class FieldRealization {
  public:
    FieldRealization() = default;

    Vec velocity(const Vec& x) const;

    int dim() const { return spec_.dim; }
    const FieldSpec& spec() const { return spec_; }
    uint64_t seed() const { return seed_; }

    /// Certified bound on sup_x |V(x)| (Euclidean; also bounds every
    /// component). Exact for the analytic families.
    double v_max() const { return v_max_; }
    /// M = v_max + 1, the global speed bound of the controlled flow.
    double bound_M() const { return v_max_ + 1.0; }

    /// Exact mean E[V] of the family (drift for Poisson bumps, the
    /// constant for Constant, zero otherwise).
    Vec mean_exact() const;

    /// Certified Lipschitz constant of x -> V(x).
    double lipschitz() const { return lipschitz_; }
    /// Certified bound on second derivatives (scales divergence checks).
    double deriv2_bound() const { return deriv2_; }

    /// Spatial period per axis: p > 0 periodic with period p, 0 constant
    /// along the axis, -1 aperiodic.
    std::array<double, 3> periods() const;

    /// Same realization evaluated in a translated frame:
    /// result.velocity(x) == this->velocity(x + y). Cheap (shares data).
    FieldRealization shifted(const Vec& y) const;

    /// Counterexample-only access.
    const PointProcessRealization& points() const;
    double realized_window() const;

    friend FieldRealization make_field(const FieldSpec&, uint64_t);

  private:
    struct PhaseData;
    struct BumpData;
    struct CexData;

    FieldSpec spec_;
    uint64_t seed_ = 0;
    Vec shift_;
    double v_max_ = 0.0;
    double lipschitz_ = 0.0;
    double deriv2_ = 0.0;
    std::shared_ptr<const PhaseData> phases_;
    std::shared_ptr<const BumpData> bumps_;
    std::shared_ptr<const CexData> cex_;
};

FieldRealization make_field(const FieldSpec& spec, uint64_t seed);

/// Convenience: the counterexample shear V = (0, V2(x1)).
FieldRealization build_counterexample_field(const GapLaw& mu, double half_width,
                                            uint64_t seed);

/// Central-difference divergence at x with stencil width h.
double divergence_estimate(const FieldRealization& f, const Vec& x, double h);

/// Monte Carlo spatial average of V over [-R, R]^dim with n samples.
Vec mean_velocity_estimate(const FieldRealization& f, double R, long n);

/// Smallest |r| with |V2(r)| <= 1 for a counterexample realization,
/// located by an outward scan refined by bisection to 1e-3.
double delta_of_realization(const FieldRealization& f);

}  // namespace geq

#endif
