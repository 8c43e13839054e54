#include "geq/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "geq/common.hpp"
#include "geq/errors.hpp"
#include "json.hpp"

namespace geq {

Verdict Verdict::le(const std::string& id, double measured, double bound,
                    const std::string& note) {
    Verdict v;
    v.claim_id = id;
    v.comparator = "<=";
    v.measured = measured;
    v.target = bound;
    v.pass = measured <= bound;
    v.note = note;
    return v;
}

Verdict Verdict::ge(const std::string& id, double measured, double bound,
                    const std::string& note) {
    Verdict v;
    v.claim_id = id;
    v.comparator = ">=";
    v.measured = measured;
    v.target = bound;
    v.pass = measured >= bound;
    v.note = note;
    return v;
}

Verdict Verdict::within(const std::string& id, double measured, double target, double tol,
                        const std::string& note) {
    Verdict v;
    v.claim_id = id;
    v.comparator = "in";
    v.measured = measured;
    v.target = target;
    v.tol = tol;
    v.pass = std::fabs(measured - target) <= tol;
    v.note = note;
    return v;
}

Verdict Verdict::boolean(const std::string& id, bool ok, const std::string& note) {
    Verdict v;
    v.claim_id = id;
    v.comparator = "bool";
    v.measured = ok ? 1.0 : 0.0;
    v.target = 1.0;
    v.pass = ok;
    v.note = note;
    return v;
}

bool ExperimentReport::all_pass() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

std::string ExperimentReport::to_json(uint64_t master_seed, const std::string& cfg_hash) const {
    nlohmann::json j;
    j["experiment"] = id;
    j["version"] = kVersion;
    j["master_seed"] = master_seed;
    j["config_hash"] = cfg_hash;
    j["params"] = params;
    j["all_pass"] = all_pass();
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : verdicts) {
        nlohmann::json jv;
        jv["claim"] = v.claim_id;
        jv["comparator"] = v.comparator;
        jv["measured"] = v.measured;
        jv["target"] = v.target;
        jv["tol"] = v.tol;
        jv["pass"] = v.pass;
        if (!v.note.empty()) jv["note"] = v.note;
        vs.push_back(jv);
    }
    j["verdicts"] = vs;
    j["artifacts"] = artifacts;
    return j.dump(2);
}

void ExperimentReport::print(bool verbose) const {
    std::printf("experiment %s: %s (%.1f s)\n", id.c_str(), all_pass() ? "PASS" : "FAIL",
                wall_seconds);
    if (!verbose) return;
    for (const auto& v : verdicts) {
        std::printf("  [%s] %-34s measured=%-12.6g %s %.6g%s %s\n", v.pass ? "pass" : "FAIL",
                    v.claim_id.c_str(), v.measured, v.comparator.c_str(), v.target,
                    v.comparator == "in" ? strf(" +- %.3g", v.tol).c_str() : "",
                    v.note.c_str());
    }
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::string& provenance)
    : path_(path), columns_(columns.size()) {
    buffer_ += "# " + provenance + "\n";
    for (size_t i = 0; i < columns.size(); ++i)
        buffer_ += columns[i] + (i + 1 < columns.size() ? "," : "");
    buffer_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw Error("csv row arity mismatch for " + path_);
    char buf[64];
    for (size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", values[i]);
        buffer_ += buf;
        buffer_ += (i + 1 < values.size()) ? "," : "";
    }
    buffer_ += "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    if (values.size() != columns_) throw Error("csv row arity mismatch for " + path_);
    for (size_t i = 0; i < values.size(); ++i) {
        buffer_ += values[i];
        buffer_ += (i + 1 < values.size()) ? "," : "";
    }
    buffer_ += "\n";
}

void CsvWriter::flush() {
    if (flushed_) return;
    std::ofstream out(path_, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw Error("cannot open " + path_);
    out << buffer_;
    flushed_ = true;
}

CsvWriter::~CsvWriter() {
    try {
        flush();
    } catch (...) {
    }
}

std::string config_hash(const std::string& canonical) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string provenance_line(uint64_t master_seed, const std::string& cfg_hash) {
    return strf("geq %s seed=%llu config=%s", kVersion,
                static_cast<unsigned long long>(master_seed), cfg_hash.c_str());
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("cannot create output directory " + path + ": " + ec.message());
}

}  // namespace geq
