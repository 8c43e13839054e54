#ifndef GEQ_ERRORS_HPP
#define GEQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace geq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid specification, grid precondition or CLI/config input.
struct ConfigError : Error {
    using Error::Error;
};

/// Iterative solve hit its cycle cap while still changing.
struct IterationLimitError : Error {
    double residual;
    int cycles;
    IterationLimitError(const std::string& what, double res, int cyc)
        : Error(what), residual(res), cycles(cyc) {}
};

/// Control evaluated beyond the horizon it was sampled for.
struct HorizonError : Error {
    using Error::Error;
};

/// Field evaluated outside the realized window.
struct WindowError : Error {
    using Error::Error;
};

/// Geometry requested beyond the solve's trusted region.
struct TrustRegionError : Error {
    using Error::Error;
};

}  // namespace geq

#endif
