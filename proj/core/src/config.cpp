#include "fractrace/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

namespace fractrace {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void RunConfig::validate() const {
    SpaceGrid sg(d, L, n); // throws with its own messages
    (void)sg;
    if (M < 2) throw param_error("config: M must be >= 2");
    if (T <= 0.0) throw param_error("config: T must be positive");
    if (r != 0.0 && r < 1.0) throw param_error("config: grading r must be >= 1 (or 0 = auto)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("config: requires alpha in (0, 1)");
    if (k != 0 && k != 1) throw param_error("config: k must be 0 or 1");
    if (!(p > 1.0)) throw param_error("config: requires p in (1, inf)");
    if (!(q > 1.0)) throw param_error("config: requires q in (1, inf)");
    if (!(mu > -1.0 && mu < q - 1.0)) throw param_error("config: requires mu in (-1, q-1)");
    if (!(nu > -double(d) && nu < double(d) * (p - 1.0)))
        throw param_error("config: requires nu in (-d, d(p-1)) so that w2 is an A_p weight");
    if (threads < 0) throw param_error("config: threads must be >= 0");
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("seed", std::to_string(seed));
    e.emplace_back("d", std::to_string(d));
    e.emplace_back("n", std::to_string(n));
    e.emplace_back("L", fmt_num(L));
    e.emplace_back("M", std::to_string(M));
    e.emplace_back("r", fmt_num(r > 0.0 ? r : TimeGrid::default_grading(alpha)));
    e.emplace_back("T", fmt_num(T));
    e.emplace_back("alpha", fmt_num(alpha));
    e.emplace_back("k", std::to_string(k));
    e.emplace_back("p", fmt_num(p));
    e.emplace_back("q", fmt_num(q));
    e.emplace_back("mu", fmt_num(mu));
    e.emplace_back("nu", fmt_num(nu));
    e.emplace_back("threads", std::to_string(threads));
    for (const auto& kv : extra) e.emplace_back(kv.first, kv.second);
    return e;
}

double RunConfig::extra_num(const std::string& key, double fallback) const {
    auto it = extra.find(key);
    if (it == extra.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw param_error("config: option " + key + " is not numeric: " + it->second);
    }
}

std::string RunConfig::extra_str(const std::string& key, const std::string& fallback) const {
    auto it = extra.find(key);
    return it == extra.end() ? fallback : it->second;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto num = [&]() {
        try {
            return std::stod(value);
        } catch (...) {
            throw param_error("config: value for " + key + " is not numeric: " + value);
        }
    };
    if (key == "seed") cfg.seed = uint64_t(std::stoull(value));
    else if (key == "d") cfg.d = int(num());
    else if (key == "n") cfg.n = int(num());
    else if (key == "L") cfg.L = num();
    else if (key == "M") cfg.M = int(num());
    else if (key == "r") cfg.r = num();
    else if (key == "T") cfg.T = num();
    else if (key == "alpha") cfg.alpha = num();
    else if (key == "k") cfg.k = int(num());
    else if (key == "p") cfg.p = num();
    else if (key == "q") cfg.q = num();
    else if (key == "mu") cfg.mu = num();
    else if (key == "nu") cfg.nu = num();
    else if (key == "threads") cfg.threads = int(num());
    else cfg.extra[key] = value;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw param_error("config: cannot open " + path);
    RunConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw param_error("config: line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw param_error("config: empty key at line " + std::to_string(lineno));
        if (!seen.insert(key).second)
            cfg.warnings.push_back("duplicate key '" + key + "' (last value wins)");
        apply_override(cfg, key, value);
    }
    return cfg;
}

} // namespace fractrace
