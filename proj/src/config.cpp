#include "geq/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "geq/errors.hpp"
#include "json.hpp"

namespace geq {

void RunConfig::validate() const {
    field.validate();
    Grid::make(field.dim, grid_h, grid_L);  // grid invariants
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("config: cfl must lie in (0,1]");
    if (max_cycles < 1) throw ConfigError("config: max_cycles must be positive");
    if (ensemble < 1) throw ConfigError("config: ensemble must be at least 1");
    if (threads < 1) throw ConfigError("config: threads must be at least 1");
    if (subcommand == "gequation" || subcommand == "mintime") {
        // Domain of dependence: the trusted core must not see the boundary.
        const double v = field.family == FieldFamily::Zero ? 0.0
                         : field.family == FieldFamily::Constant ? norm(field.constant)
                                                                  : -1.0;
        if (v >= 0.0 && subcommand == "gequation") {
            const double M = v + 1.0;
            if (grid_L < 0.5 * grid_L + 2.0 * M * T)
                throw ConfigError(strf(
                    "config: grid too small for T=%g, need L >= L/2 + 2*M*T = %g (domain of "
                    "dependence)",
                    T, 0.5 * grid_L + 2.0 * M * T));
        }
    }
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << subcommand << "|" << field.to_json_string() << "|" << grid_h << "|" << grid_L << "|"
       << cfl << "|" << max_cycles << "|" << T << "|" << p[0] << "," << p[1] << "," << p[2]
       << "|" << seed << "|" << ensemble << "|" << profile << "|" << alpha << "|" << samples;
    return os.str();
}

void apply_config_json(RunConfig& cfg, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: bad JSON: ") + e.what());
    }
    static const std::vector<std::string> known = {
        "subcommand", "field", "h",       "L",       "cfl",     "max_cycles", "T",
        "p",          "seed",  "ensemble", "out_dir", "threads", "profile",    "alpha",
        "samples",    "oracle"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("config: unknown key '" + it.key() + "'");

    if (j.contains("subcommand")) cfg.subcommand = j["subcommand"].get<std::string>();
    if (j.contains("field")) cfg.field = FieldSpec::from_json_string(j["field"].dump());
    if (j.contains("h")) cfg.grid_h = j["h"].get<double>();
    if (j.contains("L")) cfg.grid_L = j["L"].get<double>();
    if (j.contains("cfl")) cfg.cfl = j["cfl"].get<double>();
    if (j.contains("max_cycles")) cfg.max_cycles = j["max_cycles"].get<int>();
    if (j.contains("T")) cfg.T = j["T"].get<double>();
    if (j.contains("p")) {
        const auto a = j["p"];
        if (!a.is_array() || a.size() < 2 || a.size() > 3)
            throw ConfigError("config: key 'p' must be an array of 2 or 3 numbers");
        for (size_t i = 0; i < a.size(); ++i) cfg.p[static_cast<int>(i)] = a[i].get<double>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    if (j.contains("ensemble")) cfg.ensemble = j["ensemble"].get<int>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("profile")) cfg.profile = j["profile"].get<std::string>();
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("samples")) cfg.samples = j["samples"].get<long>();
    if (j.contains("oracle")) cfg.oracle = j["oracle"].get<bool>();
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig cfg;
    apply_config_json(cfg, ss.str());
    cfg.validate();
    return cfg;
}

}  // namespace geq
