#ifndef GEQ_RNG_HPP
#define GEQ_RNG_HPP

#include <cmath>
#include <cstdint>

namespace geq {

/// Mixes two 64-bit words into a stream seed. Used to derive
/// independent substreams (per realization, per cell, per axis) so
/// ensemble output does not depend on evaluation order.
inline uint64_t mix64(uint64_t a, uint64_t b) {
    uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Deterministic splitmix64 generator. Identical seeds give identical
/// streams on every platform; no libc distribution objects involved.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Integer in {0,...,n-1}, bias-free for the n used here (n << 2^32).
    int uniform_int(int n) {
        return static_cast<int>((next_u64() >> 33) % static_cast<uint64_t>(n));
    }

    /// +1 or -1 with equal probability.
    int sign() { return (next_u64() & 1) ? 1 : -1; }

    double exponential() {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -std::log(u);
    }

    /// Pareto with shape alpha and scale xm: P[X > x] = (x/xm)^-alpha.
    double pareto(double alpha, double xm) {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return xm * std::pow(u, -1.0 / alpha);
    }

    /// Poisson count by summing exponential arrivals (counts stay small
    /// here: one spatial cell at a time).
    long poisson(double mean) {
        long k = 0;
        double t = exponential();
        while (t <= mean) {
            ++k;
            t += exponential();
        }
        return k;
    }

  private:
    uint64_t state_;
};

}  // namespace geq

#endif
