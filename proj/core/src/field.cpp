#include "fractrace/field.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "fractrace/errors.hpp"
#include "fractrace/math_util.hpp"

namespace fractrace {

void SampledField::check_shape() const {
    tgrid.validate();
    sgrid.validate();
    if (values.size() != num_slices() * slice_size())
        throw param_error("SampledField: value array shape mismatch");
}

void save_field(const SampledField& f, const std::string& path) {
    f.check_shape();
    std::ofstream out(path);
    if (!out) throw param_error("save_field: cannot open " + path);
    nlohmann::ordered_json hdr;
    hdr["format"] = "fractrace-field-v1";
    hdr["d"] = f.sgrid.d;
    hdr["n"] = f.sgrid.n;
    hdr["L"] = f.sgrid.L;
    hdr["M"] = f.tgrid.M;
    hdr["T"] = f.tgrid.T;
    hdr["r"] = f.tgrid.r;
    hdr["real"] = f.realness;
    out << hdr.dump() << "\n";
    char buf[128];
    for (size_t ti = 0; ti < f.num_slices(); ++ti) {
        auto s = f.slice(ti);
        for (size_t idx = 0; idx < s.size(); ++idx) {
            auto ijk = f.sgrid.unflatten(idx);
            out << ti;
            for (int ax = 0; ax < f.sgrid.d; ++ax) out << ',' << ijk[ax];
            std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", s[idx].real(), s[idx].imag());
            out << buf << '\n';
        }
    }
}

SampledField load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw param_error("load_field: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw param_error("load_field: empty file");
    nlohmann::json hdr = nlohmann::json::parse(line);
    if (hdr.value("format", "") != std::string("fractrace-field-v1"))
        throw param_error("load_field: unknown format header");
    TimeGrid tg(hdr["T"].get<double>(), hdr["M"].get<int>(), hdr["r"].get<double>());
    SpaceGrid sg(hdr["d"].get<int>(), hdr["L"].get<double>(), hdr["n"].get<int>());
    SampledField f(tg, sg, hdr.value("real", true));
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        auto next = [&]() {
            if (!std::getline(ss, tok, ',')) throw param_error("load_field: malformed row");
            return tok;
        };
        size_t ti = std::stoul(next());
        size_t idx = 0;
        for (int ax = 0; ax < sg.d; ++ax) idx = idx * sg.n + std::stoul(next());
        double re = std::stod(next());
        double im = std::stod(next());
        if (ti >= f.num_slices() || idx >= f.slice_size())
            throw param_error("load_field: index out of range");
        f.slice(ti)[idx] = cd(re, im);
        ++rows;
    }
    if (rows != f.num_slices() * f.slice_size())
        throw param_error("load_field: row count does not match grid");
    return f;
}

std::vector<cd> preset_gaussian(const SpaceGrid& g, double sigma, double amplitude) {
    g.validate();
    if (sigma <= 0.0) throw param_error("preset_gaussian: sigma must be positive");
    std::vector<cd> out(g.size());
    for (size_t idx = 0; idx < out.size(); ++idx) {
        auto ijk = g.unflatten(idx);
        double r2 = 0.0;
        for (int ax = 0; ax < g.d; ++ax) {
            double x = g.coord(ijk[ax]);
            r2 += x * x;
        }
        out[idx] = amplitude * std::exp(-r2 / (2.0 * sigma * sigma));
    }
    return out;
}

std::vector<cd> preset_single_mode(const SpaceGrid& g, int k, double amplitude) {
    g.validate();
    if (k <= 0 || k >= g.n / 2) throw param_error("preset_single_mode: k out of lattice range");
    std::vector<cd> out(g.size());
    double xi = M_PI / g.L * k;
    for (size_t idx = 0; idx < out.size(); ++idx) {
        auto ijk = g.unflatten(idx);
        out[idx] = amplitude * std::cos(xi * g.coord(ijk[0]));
    }
    return out;
}

std::vector<cd> preset_random_annulus(const SpaceGrid& g, uint64_t seed, double xi_lo, double xi_hi) {
    g.validate();
    if (!(xi_lo >= 0.0 && xi_hi > xi_lo)) throw param_error("preset_random_annulus: bad band");
    int mbox = int(std::floor(xi_hi * g.L / M_PI));
    if (mbox >= g.n / 2) throw param_error("preset_random_annulus: band exceeds the lattice");

    // Enumerate integer mode vectors over a fixed lexicographic half-space so
    // the continuum field depends only on (L, seed, band), not on n.
    GaussianSampler rng(seed);
    struct Mode { double xi[3]; double a, b; };
    std::vector<Mode> modes;
    std::array<int, 3> m{0, 0, 0};
    std::function<void(int)> scan = [&](int ax) {
        if (ax == g.d) {
            // keep one representative of each +-m pair; m = 0 excluded
            int lead = 0;
            for (int i = 0; i < g.d; ++i) {
                if (m[i] != 0) { lead = m[i]; break; }
            }
            if (lead <= 0) return;
            double norm2 = 0.0;
            for (int i = 0; i < g.d; ++i) norm2 += double(m[i]) * m[i];
            double xi_abs = M_PI / g.L * std::sqrt(norm2);
            double a = rng(), b = rng(); // always drawn: keeps the stream grid-free
            if (xi_abs < xi_lo || xi_abs > xi_hi) return;
            Mode md;
            for (int i = 0; i < g.d; ++i) md.xi[i] = M_PI / g.L * m[i];
            md.a = a;
            md.b = b;
            modes.push_back(md);
            return;
        }
        for (int v = -mbox; v <= mbox; ++v) {
            m[ax] = v;
            scan(ax + 1);
        }
    };
    scan(0);

    std::vector<cd> out(g.size(), cd(0.0));
    if (modes.empty()) return out;
    double scale = 1.0 / std::sqrt(double(modes.size()));
    for (size_t idx = 0; idx < out.size(); ++idx) {
        auto ijk = g.unflatten(idx);
        double x[3] = {0, 0, 0};
        for (int ax = 0; ax < g.d; ++ax) x[ax] = g.coord(ijk[ax]);
        double acc = 0.0;
        for (const Mode& md : modes) {
            double phase = 0.0;
            for (int ax = 0; ax < g.d; ++ax) phase += md.xi[ax] * x[ax];
            acc += md.a * std::cos(phase) + md.b * std::sin(phase);
        }
        out[idx] = acc * scale;
    }
    return out;
}

std::vector<cd> preset_random_bandlimited(const SpaceGrid& g, uint64_t seed, int j_lo, int j_hi) {
    double lo = std::pow(2.0, j_lo - 1), hi = std::pow(2.0, j_hi + 1);
    return preset_random_annulus(g, seed, lo, hi);
}

} // namespace fractrace
