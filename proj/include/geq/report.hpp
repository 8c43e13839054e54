#ifndef GEQ_REPORT_HPP
#define GEQ_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace geq {

inline constexpr const char* kVersion = "0.1.0";

/// One pass/fail check inside an experiment. The comparator is one of
/// "<=", ">=", "in" (measured within [target - tol, target + tol]) or
/// "increasing"/"bool" for structural checks.
struct Verdict {
    std::string claim_id;
    std::string comparator;
    double measured = 0.0;
    double target = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string note;

    static Verdict le(const std::string& id, double measured, double bound,
                      const std::string& note = "");
    static Verdict ge(const std::string& id, double measured, double bound,
                      const std::string& note = "");
    static Verdict within(const std::string& id, double measured, double target, double tol,
                          const std::string& note = "");
    static Verdict boolean(const std::string& id, bool ok, const std::string& note = "");
};

struct ExperimentReport {
    std::string id;
    std::map<std::string, std::string> params;
    std::vector<Verdict> verdicts;
    std::vector<std::string> artifacts;
    double wall_seconds = 0.0;  // console only, never written to artifacts

    bool all_pass() const;
    void add(Verdict v) { verdicts.push_back(std::move(v)); }
    /// JSON without timing so reruns are bit-identical.
    std::string to_json(uint64_t master_seed, const std::string& config_hash) const;
    void print(bool verbose = true) const;
};

/// Simple CSV writer: provenance comment line, then a header row.
/// Dialect: comma, '.' decimal, LF endings.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns,
              const std::string& provenance);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::string buffer_;
    size_t columns_ = 0;
    void flush();
    bool flushed_ = false;

  public:
    ~CsvWriter();
};

/// FNV-1a hash of a canonical config string, hex-encoded.
std::string config_hash(const std::string& canonical);

/// Provenance line embedded in every artifact.
std::string provenance_line(uint64_t master_seed, const std::string& cfg_hash);

void ensure_directory(const std::string& path);

}  // namespace geq

#endif
