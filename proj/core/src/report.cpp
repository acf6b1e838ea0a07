#include "fractrace/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fractrace/errors.hpp"

namespace fractrace {

namespace {

// 17 significant digits: enough to round-trip any double, stable bytes
std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::ordered_json sample_json(const SamplePoint& s) {
    nlohmann::ordered_json j;
    j["label"] = s.label;
    j["lhs"] = num17(s.lhs);
    j["rhs"] = num17(s.rhs);
    j["ratio"] = num17(s.ratio);
    return j;
}

} // namespace

void InequalityReport::add(const std::string& label, double l, double r) {
    SamplePoint s;
    s.label = label;
    s.lhs = l;
    s.rhs = r;
    s.ratio = (r != 0.0) ? l / r : 0.0;
    if (s.ratio > max_ratio) max_ratio = s.ratio;
    samples.push_back(std::move(s));
}

void InequalityReport::set_stat(const std::string& key, double value) {
    for (auto& kv : stats) {
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    }
    stats.emplace_back(key, value);
}

double InequalityReport::stat(const std::string& key) const {
    for (const auto& kv : stats)
        if (kv.first == key) return kv.second;
    throw param_error("InequalityReport: unknown stat " + key);
}

std::string report_to_json(const InequalityReport& rep) {
    nlohmann::ordered_json j;
    j["id"] = rep.id;
    j["criterion"] = rep.criterion;
    j["pass"] = rep.pass;
    j["max_ratio"] = num17(rep.max_ratio);
    if (rep.drift >= 0.0) j["drift"] = num17(rep.drift);
    nlohmann::ordered_json stats = nlohmann::ordered_json::object();
    for (const auto& kv : rep.stats) stats[kv.first] = num17(kv.second);
    j["stats"] = stats;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : rep.samples) arr.push_back(sample_json(s));
    j["samples"] = arr;
    return j.dump(2);
}

std::string make_run_report(const std::string& command,
                            const std::vector<std::pair<std::string, std::string>>& config_echo,
                            const std::string& results_json) {
    nlohmann::ordered_json j;
    j["version"] = kVersionString;
    j["command"] = command;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& kv : config_echo) cfg[kv.first] = kv.second;
    j["config"] = cfg;
    j["results"] = nlohmann::ordered_json::parse(results_json);
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw param_error("cannot open for writing: " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

std::string report_to_csv(const InequalityReport& rep) {
    std::string out = "label,lhs,rhs,ratio\n";
    char buf[160];
    for (const auto& s : rep.samples) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", s.label.c_str(), s.lhs, s.rhs,
                      s.ratio);
        out += buf;
    }
    return out;
}

} // namespace fractrace
