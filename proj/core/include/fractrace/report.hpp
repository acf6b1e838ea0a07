#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fractrace {

inline constexpr const char* kVersionString = "fractrace 0.1.0";

// One (lhs, rhs) measurement of an inequality for one sample/parameter point.
struct SamplePoint {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

// Per-ensemble record of an inequality check: max ratio, refinement drift,
// and auxiliary fitted quantities (slopes, envelope constants, ...).
struct InequalityReport {
    std::string id;
    std::vector<SamplePoint> samples;
    double max_ratio = 0.0;
    double drift = -1.0; // |log(max_fine / max_coarse)|; -1 = not measured
    bool pass = true;
    std::string criterion;
    std::vector<std::pair<std::string, double>> stats;

    void add(const std::string& label, double lhs, double rhs);
    void set_stat(const std::string& key, double value);
    double stat(const std::string& key) const;
};

// JSON text (ordered keys, numbers at full precision; no timestamps so equal
// runs produce identical bytes).
std::string report_to_json(const InequalityReport& rep);

// Full run report: version + effective config + results, written to path.
std::string make_run_report(const std::string& command,
                            const std::vector<std::pair<std::string, std::string>>& config_echo,
                            const std::string& results_json);

void write_text_file(const std::string& path, const std::string& text);

// samples as CSV rows "label,lhs,rhs,ratio"
std::string report_to_csv(const InequalityReport& rep);

} // namespace fractrace
