#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "geq/config.hpp"
#include "geq/errors.hpp"
#include "geq/report.hpp"

using namespace geq;

TEST_CASE("minimal config parses and validates") {
    RunConfig cfg;
    apply_config_json(cfg,
                      R"({"subcommand":"mintime","field":{"family":"zero"},"h":0.02,"L":2,"seed":1})");
    cfg.validate();
    CHECK(cfg.subcommand == "mintime");
    CHECK(cfg.grid_h == 0.02);
    CHECK(cfg.seed == 1);
}

TEST_CASE("grid invariant violations are named") {
    RunConfig cfg;
    apply_config_json(cfg, R"({"subcommand":"mintime","field":{"family":"zero"},"h":0.3,"L":2})");
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("10 h"), ConfigError);
}

TEST_CASE("unknown keys are rejected by name") {
    RunConfig cfg;
    CHECK_THROWS_WITH_AS(apply_config_json(cfg, R"({"subcommand":"mintime","wibble":3})"),
                         doctest::Contains("wibble"), ConfigError);
}

TEST_CASE("domain-of-dependence precondition is checked up front") {
    RunConfig cfg;
    apply_config_json(
        cfg,
        R"({"subcommand":"gequation","field":{"family":"constant","constant":[0.4,0]},"h":0.02,"L":2,"T":10})");
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("domain of dependence"), ConfigError);
}

TEST_CASE("csv artifacts are bit-identical across reruns") {
    const auto write_once = [](const std::string& path) {
        CsvWriter csv(path, {"a", "b"}, provenance_line(7, "cafe"));
        csv.row({1.0, 2.5});
        csv.row({-3.25, 1e-9});
    };
    write_once("idem_a.csv");
    write_once("idem_b.csv");
    std::ifstream a("idem_a.csv"), b("idem_b.csv");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("geq") != std::string::npos);
    CHECK(sa.str().find("seed=7") != std::string::npos);
    std::remove("idem_a.csv");
    std::remove("idem_b.csv");
}

TEST_CASE("verdict helpers") {
    CHECK(Verdict::le("x", 1.0, 2.0).pass);
    CHECK(!Verdict::le("x", 3.0, 2.0).pass);
    CHECK(Verdict::ge("x", 3.0, 2.0).pass);
    CHECK(Verdict::within("x", 1.01, 1.0, 0.02).pass);
    CHECK(!Verdict::within("x", 1.05, 1.0, 0.02).pass);
    ExperimentReport rep;
    rep.id = "t";
    rep.add(Verdict::boolean("ok", true));
    CHECK(rep.all_pass());
    rep.add(Verdict::boolean("bad", false));
    CHECK(!rep.all_pass());
    const std::string j = rep.to_json(1, "00");
    CHECK(j.find("\"all_pass\": false") != std::string::npos);
}
