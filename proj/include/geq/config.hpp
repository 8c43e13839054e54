#ifndef GEQ_CONFIG_HPP
#define GEQ_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "geq/field.hpp"
#include "geq/grid.hpp"

namespace geq {

/// Validated run configuration shared by the CLI subcommands. Flags
/// mirror the JSON keys; SEED in the environment overrides the seed.
struct RunConfig {
    std::string subcommand;
    FieldSpec field;
    double grid_h = 0.02;
    double grid_L = 2.0;
    double cfl = 0.5;
    int max_cycles = 500;
    double T = 1.0;           // horizon for time-dependent runs
    Vec p = Vec(1.0, 0.0);    // direction for heff / gequation
    uint64_t seed = 1;
    int ensemble = 1;
    std::string out_dir = "out";
    int threads = 1;
    std::string profile = "quick";
    double alpha = 1.5;       // counterexample gap shape
    long samples = 10000;     // counterexample sample count
    bool oracle = false;

    Grid make_grid() const { return Grid::make(field.dim, grid_h, grid_L); }
    /// Cross-field preconditions (domain-of-dependence and the like).
    void validate() const;
    std::string canonical() const;  // stable serialization for hashing
};

/// Parses a JSON config file; unknown keys are rejected with a
/// diagnostic naming the key.
RunConfig parse_config_file(const std::string& path);
void apply_config_json(RunConfig& cfg, const std::string& json_text);

}  // namespace geq

#endif
