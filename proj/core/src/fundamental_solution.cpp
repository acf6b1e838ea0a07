#include "fractrace/fundamental_solution.hpp"

#include <algorithm>
#include <cmath>

#include "fractrace/mittag_leffler.hpp"

namespace fractrace {

namespace {

// spectrum for a radial symbol m(|xi|^2), scaled so that idft gives the
// periodized kernel (1/(2L)^d) sum_k m(|xi_k|^2) e^{i xi_k x}
std::vector<cd> symbol_spectrum(const SpaceGrid& g, const std::function<double(double)>& m) {
    const UniqueFrequencies& uf = unique_frequencies(g);
    std::vector<double> table(uf.values.size());
    for (size_t s = 0; s < table.size(); ++s) table[s] = m(uf.values[s]);
    size_t N = g.size();
    double scale = std::sqrt(double(N)) / std::pow(2.0 * g.L, g.d);
    std::vector<cd> spec(N);
    for (size_t i = 0; i < N; ++i) {
        auto ijk = g.unflatten(i);
        int par = 0;
        for (int ax = 0; ax < g.d; ++ax) par ^= (g.freq_index(ijk[ax]) & 1);
        spec[i] = table[uf.slot[i]] * (par ? -scale : scale);
    }
    return spec;
}

KernelField field_from_symbol(const SpaceGrid& g, const std::function<double(double)>& m) {
    KernelField kf;
    kf.grid = g;
    std::vector<cd> spec = symbol_spectrum(g, m);
    std::vector<cd> vals = dft_inverse(spec, g);
    kf.values = real_part(vals);
    double ximax2 = std::pow(M_PI / g.L * (g.n / 2), 2) * g.d;
    kf.tail = std::abs(m(ximax2));
    kf.resolved = kf.tail <= 1e-12;
    return kf;
}

} // namespace

double kernel_hat(const KernelSpec& spec, double xi2) {
    spec.validate();
    if (xi2 < 0.0) throw param_error("kernel_hat: |xi|^2 must be >= 0");
    MittagLefflerParams p;
    p.beta = spec.beta;
    p.c = 1.0;
    return ml_eval(p, xi2 * std::pow(spec.t, spec.beta));
}

double kernel_tilde_hat(const KernelSpec& spec, double xi2) {
    spec.validate();
    if (!(spec.beta > 1.0)) throw param_error("kernel_tilde_hat: requires beta in (1, 2)");
    if (xi2 < 0.0) throw param_error("kernel_tilde_hat: |xi|^2 must be >= 0");
    MittagLefflerParams p;
    p.beta = spec.beta;
    p.c = 2.0;
    return spec.t * ml_eval(p, xi2 * std::pow(spec.t, spec.beta));
}

KernelField kernel_field(const KernelSpec& spec) {
    spec.validate();
    return field_from_symbol(spec.grid, [&](double xi2) { return kernel_hat(spec, xi2); });
}

KernelField kernel_tilde_field(const KernelSpec& spec) {
    spec.validate();
    if (!(spec.beta > 1.0)) throw param_error("kernel_tilde_field: requires beta in (1, 2)");
    return field_from_symbol(spec.grid, [&](double xi2) { return kernel_tilde_hat(spec, xi2); });
}

double kernel_mass(const KernelField& kf) {
    double s = 0.0;
    for (double v : kf.values) s += v;
    return s * kf.grid.cell_volume();
}

double kernel_second_moment(const KernelField& kf) {
    const SpaceGrid& g = kf.grid;
    double m0 = 0.0, m2 = 0.0;
    for (size_t i = 0; i < kf.values.size(); ++i) {
        auto ijk = g.unflatten(i);
        double r2 = 0.0;
        for (int ax = 0; ax < g.d; ++ax) {
            double x = g.coord(ijk[ax]);
            r2 += x * x;
        }
        m0 += kf.values[i];
        m2 += r2 * kf.values[i];
    }
    if (m0 == 0.0) throw param_error("kernel_second_moment: zero mass");
    return m2 / m0;
}

double check_scaling(double beta, double t, const SpaceGrid& grid) {
    KernelSpec s1{beta, 1.0, grid}, st{beta, t, grid};
    KernelField ref = kernel_field(s1);
    KernelField cur = kernel_field(st);

    double peak_ref = 0.0;
    for (double v : ref.values) peak_ref = std::max(peak_ref, std::abs(v));
    double thresh = 1e-6 * peak_ref;
    double scale = std::pow(t, -beta / 2.0);         // x -> t^{-b/2} x
    double amp = std::pow(t, -beta * grid.d / 2.0);  // value scaling

    // compare at grid points x whose rescaled image stays in the bulk of ref
    std::vector<cd> ref_c(ref.values.begin(), ref.values.end());
    std::vector<std::array<double, 3>> pts;
    std::vector<size_t> idxs;
    for (size_t i = 0; i < cur.values.size(); ++i) {
        auto ijk = grid.unflatten(i);
        std::array<double, 3> y{0, 0, 0};
        bool inside = true;
        for (int ax = 0; ax < grid.d; ++ax) {
            y[ax] = scale * grid.coord(ijk[ax]);
            if (!(y[ax] >= -grid.L && y[ax] < grid.L)) inside = false;
        }
        if (!inside) continue;
        pts.push_back(y);
        idxs.push_back(i);
    }
    if (pts.empty()) throw param_error("check_scaling: rescaled points leave the domain");

    std::vector<cd> vals = interpolate_space(ref_c, grid, pts);
    double peak_cur = 0.0;
    for (double v : cur.values) peak_cur = std::max(peak_cur, std::abs(v));
    double err = 0.0;
    bool any = false;
    for (size_t m = 0; m < pts.size(); ++m) {
        double refv = vals[m].real();
        if (std::abs(refv) < thresh) continue;
        any = true;
        err = std::max(err, std::abs(cur.values[idxs[m]] - amp * refv));
    }
    if (!any) throw param_error("check_scaling: bulk region is empty");
    return err / peak_cur;
}

DecayReport check_decay(double beta, const SpaceGrid& grid) {
    KernelSpec spec{beta, 1.0, grid};
    KernelField kf = kernel_field(spec);
    double peak = 0.0;
    for (double v : kf.values) peak = std::max(peak, std::abs(v));

    double expo = 2.0 / (2.0 - beta);
    std::vector<double> xs, ys;
    DecayReport rep;
    for (size_t i = 0; i < kf.values.size(); ++i) {
        auto ijk = grid.unflatten(i);
        double r2 = 0.0;
        for (int ax = 0; ax < grid.d; ++ax) {
            double x = grid.coord(ijk[ax]);
            r2 += x * x;
        }
        double r = std::sqrt(r2);
        double v = kf.values[i];
        if (r >= 2.0 && r <= 8.0 && v > 1e-13 * peak) {
            xs.push_back(std::pow(r, expo));
            ys.push_back(std::log(v));
        }
        if (r > 0.0 && r < 1.0) {
            double env = (grid.d == 1)   ? 1.0 + r
                         : (grid.d == 2) ? 1.0 + std::abs(std::log(r))
                                         : 1.0 / r;
            rep.n_near = std::max(rep.n_near, v / env);
        }
    }
    if (xs.size() < 4) throw param_error("check_decay: too few tail samples in [2, 8]");
    LineFit fit = fit_line(xs, ys);
    rep.sigma = -fit.slope;
    rep.r_squared = fit.r_squared;
    for (size_t m = 0; m < xs.size(); ++m)
        rep.n_tail = std::max(rep.n_tail, std::exp(ys[m] + rep.sigma * xs[m]));
    return rep;
}

MomentReport moment_slope(double beta, const SpaceGrid& grid, std::span<const double> ts) {
    if (ts.size() < 2) throw param_error("moment_slope: need at least 2 times");
    MomentReport rep;
    std::vector<double> lx, ly;
    for (double t : ts) {
        KernelSpec spec{beta, t, grid};
        double m2 = kernel_second_moment(kernel_field(spec));
        rep.t.push_back(t);
        rep.m2.push_back(m2);
        lx.push_back(std::log(t));
        ly.push_back(std::log(m2));
    }
    rep.fit = fit_line(lx, ly);
    return rep;
}

} // namespace fractrace
