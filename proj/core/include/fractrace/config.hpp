#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fractrace/frac_calculus.hpp"
#include "fractrace/function_spaces.hpp"
#include "fractrace/grid.hpp"

namespace fractrace {

// Flat key-value run configuration shared by all CLI subcommands. Grading
// exponent r = 0 requests the default max(1, 2/alpha).
struct RunConfig {
    uint64_t seed = 12345;
    int d = 1;
    int n = 256;
    double L = 16.0;
    int M = 512;
    double r = 0.0;
    double T = 1.0;
    double alpha = 0.75;
    int k = 0;
    double p = 2.0;
    double q = 2.0;
    double mu = 0.0;
    double nu = 0.0;
    int threads = 0;
    std::map<std::string, std::string> extra; // command-specific options
    std::vector<std::string> warnings;

    SpaceGrid space_grid() const { return SpaceGrid(d, L, n); }
    TimeGrid time_grid() const {
        return TimeGrid(T, M, r > 0.0 ? r : TimeGrid::default_grading(alpha));
    }
    FracOrder order() const { return FracOrder{alpha, k}; }
    WeightSpec weight() const { return WeightSpec{mu, nu}; }

    // throws param_error naming the violated hypothesis
    void validate() const;

    // effective configuration, echoed into every report
    std::vector<std::pair<std::string, std::string>> echo() const;

    double extra_num(const std::string& key, double fallback) const;
    std::string extra_str(const std::string& key, const std::string& fallback) const;
};

// Parse "key = value" lines ('#' comments, blank lines ignored). Duplicate
// keys: last one wins and a warning is recorded. Unknown keys go to extra.
RunConfig parse_config_file(const std::string& path);

// Apply "key=value" overrides (e.g. from CLI flags) on top of a config.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

} // namespace fractrace
