#include "fractrace/function_spaces.hpp"

#include <algorithm>
#include <cmath>

#include "fractrace/math_util.hpp"

namespace fractrace {

namespace {

double unit_ball_volume(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return M_PI;
        default: return 4.0 * M_PI / 3.0;
    }
}

// exact |x|^nu mass of the equal-volume ball divided by the cell volume
double origin_cell_weight(const SpaceGrid& g, double nu) {
    double h = g.spacing();
    double r = h / std::pow(unit_ball_volume(g.d), 1.0 / g.d);
    return (double(g.d) / (nu + g.d)) * std::pow(r, nu);
}

// torus distance to the origin of lattice point idx
double torus_rho(const SpaceGrid& g, size_t idx) {
    auto ijk = g.unflatten(idx);
    double r2 = 0.0;
    for (int ax = 0; ax < g.d; ++ax) {
        double x = g.coord(ijk[ax]);
        r2 += x * x;
    }
    return std::sqrt(r2);
}

// smooth step: 0 for x <= 0, 1 for x >= 1
double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double a = std::exp(-1.0 / x);
    double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

// chi(rho): 1 on [0,1], smooth descent on (1,2), 0 on [2,inf)
double chi_cutoff(double rho) { return 1.0 - smooth_step(rho - 1.0); }

} // namespace

std::vector<double> spatial_weight(const SpaceGrid& g, double nu) {
    g.validate();
    std::vector<double> w(g.size(), 1.0);
    if (nu == 0.0) return w;
    for (size_t i = 0; i < w.size(); ++i) {
        double rho = torus_rho(g, i);
        w[i] = (rho == 0.0) ? origin_cell_weight(g, nu) : std::pow(rho, nu);
    }
    return w;
}

double spatial_lp_norm(std::span<const cd> slice, const SpaceGrid& g, double p, double nu) {
    if (slice.size() != g.size()) throw param_error("spatial_lp_norm: shape mismatch");
    if (!(p > 0.0)) throw param_error("spatial_lp_norm: p must be positive");
    std::vector<double> w = spatial_weight(g, nu);
    double acc = 0.0;
    for (size_t i = 0; i < slice.size(); ++i) acc += std::pow(std::abs(slice[i]), p) * w[i];
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

double mixed_norm(const SampledField& u, double p, double q, const WeightSpec& w,
                  size_t first_panel) {
    u.check_shape();
    w.validate(u.sgrid.d, p, q);
    std::vector<double> t = u.tgrid.nodes();
    std::vector<double> s(t.size());
    for (size_t i = 0; i < t.size(); ++i) s[i] = spatial_lp_norm(u.slice(i), u.sgrid, p, w.nu);
    return weighted_lq_norm(t, s, q, w.mu, first_panel);
}

double ap_constant_estimate(const SpaceGrid& g, double nu, double p) {
    g.validate();
    if (!(p > 1.0)) throw param_error("ap_constant_estimate: p must be in (1, inf)");
    std::vector<double> w = spatial_weight(g, nu);
    double dual_nu = -nu / (p - 1.0);
    std::vector<double> wd = spatial_weight(g, dual_nu);

    // precompute coordinates once
    size_t N = g.size();
    std::vector<std::array<double, 3>> xs(N);
    for (size_t i = 0; i < N; ++i) {
        auto ijk = g.unflatten(i);
        for (int ax = 0; ax < g.d; ++ax) xs[i][ax] = g.coord(ijk[ax]);
    }
    auto torus_dist2 = [&](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        double s = 0.0;
        for (int ax = 0; ax < g.d; ++ax) {
            double d1 = std::abs(a[ax] - b[ax]);
            d1 = std::min(d1, 2.0 * g.L - d1);
            s += d1 * d1;
        }
        return s;
    };

    int stride = std::max(1, g.n / 8);
    double best = 0.0;
    for (size_t c = 0; c < N; ++c) {
        auto ijk = g.unflatten(c);
        bool on_sublattice = true;
        for (int ax = 0; ax < g.d; ++ax)
            if (ijk[ax] % stride != 0) on_sublattice = false;
        if (!on_sublattice) continue;
        for (double r = g.spacing(); r <= g.L * (1 + 1e-12); r *= 2.0) {
            double r2 = r * r * (1 + 1e-12);
            double s1 = 0.0, s2 = 0.0;
            size_t cnt = 0;
            for (size_t i = 0; i < N; ++i) {
                if (torus_dist2(xs[c], xs[i]) <= r2) {
                    s1 += w[i];
                    s2 += wd[i];
                    ++cnt;
                }
            }
            if (cnt == 0) continue;
            double prod = (s1 / cnt) * std::pow(s2 / cnt, p - 1.0);
            best = std::max(best, prod);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Littlewood-Paley
// ---------------------------------------------------------------------------

double LPFamily::shell_symbol(int j, double xi_abs) const {
    if (j < 1 || j > j_max) throw param_error("shell_symbol: shell index out of range");
    double top = std::ldexp(1.0, -(j - 1)); // 2^{-(j-1)}
    if (j == j_max) return 1.0 - chi_cutoff(xi_abs * top);
    return chi_cutoff(xi_abs * 0.5 * top) - chi_cutoff(xi_abs * top);
}

double LPFamily::lowpass_symbol(double xi_abs) const { return chi_cutoff(xi_abs); }

LPFamily build_lp_family(const SpaceGrid& g) {
    g.validate();
    double xi_max = g.xi_max();
    int j_max = int(std::ceil(std::log2(xi_max))) - 1;
    if (j_max < 3)
        throw resolution_error("build_lp_family: grid resolves fewer than 3 dyadic shells");
    LPFamily fam;
    fam.grid = g;
    fam.j_max = j_max;
    const UniqueFrequencies& uf = unique_frequencies(g);
    size_t U = uf.values.size();
    fam.lowpass.resize(U);
    fam.shells.assign(j_max, std::vector<double>(U));
    for (size_t s = 0; s < U; ++s) {
        double xi = std::sqrt(uf.values[s]);
        fam.lowpass[s] = fam.lowpass_symbol(xi);
        for (int j = 1; j <= j_max; ++j) fam.shells[j - 1][s] = fam.shell_symbol(j, xi);
    }
    return fam;
}

std::vector<cd> lp_project(const LPFamily& fam, std::span<const cd> spectrum, int j) {
    const UniqueFrequencies& uf = unique_frequencies(fam.grid);
    if (spectrum.size() != uf.slot.size()) throw param_error("lp_project: shape mismatch");
    if (j < 0 || j > fam.j_max) throw param_error("lp_project: shell index out of range");
    const std::vector<double>& table = (j == 0) ? fam.lowpass : fam.shells[j - 1];
    std::vector<cd> spec(spectrum.size());
    for (size_t i = 0; i < spec.size(); ++i) spec[i] = spectrum[i] * table[uf.slot[i]];
    return dft_inverse(spec, fam.grid);
}

double besov_norm(std::span<const cd> f, const BesovParams& par, const LPFamily& fam) {
    par.validate(fam.grid.d);
    std::vector<cd> spec = dft_forward(f, fam.grid);
    double low = spatial_lp_norm(lp_project(fam, spec, 0), fam.grid, par.p, par.w.nu);
    double acc = 0.0;
    for (int j = 1; j <= fam.j_max; ++j) {
        double nj = spatial_lp_norm(lp_project(fam, spec, j), fam.grid, par.p, par.w.nu);
        acc += std::pow(std::exp2(double(j) * par.s) * nj, par.q);
    }
    return low + std::pow(acc, 1.0 / par.q);
}

std::vector<cd> bessel_potential(std::span<const cd> f, const SpaceGrid& g, double s) {
    std::vector<cd> spec = dft_forward(f, g);
    apply_multiplier(spec, g, [s](double xi2) { return std::pow(1.0 + xi2, 0.5 * s); });
    return dft_inverse(spec, g);
}

double sobolev_norm(std::span<const cd> f, const SpaceGrid& g, double s, double p, double nu) {
    return spatial_lp_norm(bessel_potential(f, g, s), g, p, nu);
}

double besov_norm_differences(std::span<const cd> f, const SpaceGrid& g, double nu, double p,
                              double q) {
    if (!(nu > 0.0 && nu < 2.0))
        throw param_error("besov_norm_differences: requires nu in (0, 2)");
    if (!(p > 1.0 && q > 1.0)) throw param_error("besov_norm_differences: p, q in (1, inf)");
    std::vector<cd> spec = dft_forward(f, g);
    const size_t N = g.size();

    // direction set (half sphere; Delta_h and Delta_{-h} give equal norms)
    std::vector<std::array<double, 3>> dirs;
    std::vector<double> dir_w; // quadrature weight on the full sphere
    if (g.d == 1) {
        dirs.push_back({1, 0, 0});
        dir_w.push_back(2.0);
    } else if (g.d == 2) {
        int K = 16;
        for (int k = 0; k < K; ++k) {
            double th = M_PI * (k + 0.5) / K;
            dirs.push_back({std::cos(th), std::sin(th), 0});
            dir_w.push_back(2.0 * M_PI / K);
        }
    } else {
        int Kphi = 8, Kth = 4;
        for (int a = 0; a < Kth; ++a) {
            double th = M_PI * (a + 0.5) / Kth; // polar
            for (int b = 0; b < Kphi; ++b) {
                double ph = M_PI * (b + 0.5) / Kphi; // half azimuth
                dirs.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                std::cos(th)});
                dir_w.push_back(2.0 * std::sin(th) * (M_PI / Kth) * (M_PI / Kphi));
            }
        }
    }

    // frequency vectors per lattice point
    std::vector<std::array<double, 3>> xi(N);
    for (size_t i = 0; i < N; ++i) {
        auto ijk = g.unflatten(i);
        for (int ax = 0; ax < g.d; ++ax) xi[i][ax] = g.freq(ijk[ax]);
    }

    // log-radial grid
    int R = 48;
    double rho_min = 0.5 * g.spacing(), rho_max = 2.0 * g.L;
    double lmin = std::log(rho_min), lmax = std::log(rho_max);
    std::vector<double> lr(R), integrand(R, 0.0);
    for (int m = 0; m < R; ++m) lr[m] = lmin + (lmax - lmin) * m / (R - 1);

    std::vector<cd> shifted(N);
    for (int m = 0; m < R; ++m) {
        double rho = std::exp(lr[m]);
        double a_rho = 0.0;
        for (size_t di = 0; di < dirs.size(); ++di) {
            // Delta_h^2 multiplier: (e^{i xi.h} - 1)^2
            for (size_t i = 0; i < N; ++i) {
                double phase = 0.0;
                for (int ax = 0; ax < g.d; ++ax) phase += xi[i][ax] * dirs[di][ax] * rho;
                cd e = cd(std::cos(phase), std::sin(phase)) - 1.0;
                shifted[i] = spec[i] * e * e;
            }
            std::vector<cd> d2 = dft_inverse(shifted, g);
            double np = spatial_lp_norm(d2, g, p, 0.0);
            a_rho += dir_w[di] * std::pow(np, q);
        }
        integrand[m] = std::pow(rho, -nu * q) * a_rho; // measure drho/rho
    }
    // trapezoid in log rho
    double acc = 0.0;
    for (int m = 0; m + 1 < R; ++m)
        acc += 0.5 * (integrand[m] + integrand[m + 1]) * (lr[m + 1] - lr[m]);
    return spatial_lp_norm(f, g, p, 0.0) + std::pow(acc, 1.0 / q);
}

namespace {

// smooth spectral cutoff at scale lambda (chi(|xi|/lambda))
std::vector<cd> lowpass_at(std::span<const cd> spec_in, const SpaceGrid& g, double lambda) {
    std::vector<cd> spec(spec_in.begin(), spec_in.end());
    apply_multiplier(spec, g, [lambda](double xi2) {
        return chi_cutoff(std::sqrt(xi2) / lambda);
    });
    return dft_inverse(spec, g);
}

} // namespace

double k_functional(std::span<const cd> f, const SpaceGrid& g, double eps, double p, double nu) {
    if (!(eps > 0.0)) throw param_error("k_functional: eps must be positive");
    std::vector<cd> spec = dft_forward(f, g);
    double l2max = g.xi_max();
    double best = spatial_lp_norm(f, g, p, nu); // Lambda = 0: U1 = 0
    {
        // Lambda = inf: U1 = f
        best = std::min(best, eps * sobolev_norm(f, g, 2.0, p, nu));
    }
    for (double lambda = 0.5; lambda <= 2.0 * l2max; lambda *= 2.0) {
        std::vector<cd> u1 = lowpass_at(spec, g, lambda);
        std::vector<cd> u0(f.size());
        for (size_t i = 0; i < f.size(); ++i) u0[i] = f[i] - u1[i];
        double val = spatial_lp_norm(u0, g, p, nu) + eps * sobolev_norm(u1, g, 2.0, p, nu);
        best = std::min(best, val);
    }
    return best;
}

double k_functional_interpolation_norm(std::span<const cd> f, const SpaceGrid& g, double theta,
                                       double p, double q, double nu) {
    if (!(theta > 0.0 && theta < 1.0))
        throw param_error("k_functional_interpolation_norm: theta in (0,1)");
    double h2 = sobolev_norm(f, g, 2.0, p, nu);
    double l0 = spatial_lp_norm(f, g, p, nu);
    if (l0 == 0.0 && h2 == 0.0) return 0.0;
    double eps_min = 1e-6 * std::max(1e-300, l0 / std::max(h2, 1e-300));
    double eps_max = 1e6 * std::max(1e-300, l0 / std::max(h2, 1e-300));
    int K = 64;
    double acc = 0.0;
    double le0 = std::log(eps_min), le1 = std::log(eps_max);
    double prev = 0.0;
    for (int m = 0; m < K; ++m) {
        double le = le0 + (le1 - le0) * m / (K - 1);
        double eps = std::exp(le);
        double kv = k_functional(f, g, eps, p, nu);
        double val = std::pow(std::exp(-theta * le) * kv, q);
        if (m > 0) acc += 0.5 * (prev + val) * (le1 - le0) / (K - 1);
        prev = val;
    }
    // tails: K ~ eps*h2 below eps_min, K ~ l0 above eps_max
    acc += std::pow(h2, q) * std::pow(eps_min, (1.0 - theta) * q) / ((1.0 - theta) * q);
    acc += std::pow(l0, q) * std::pow(eps_max, -theta * q) / (theta * q);
    return std::pow(acc, 1.0 / q);
}

std::vector<double> gradient_magnitude(std::span<const cd> f, const SpaceGrid& g) {
    std::vector<cd> spec = dft_forward(f, g);
    size_t N = g.size();
    std::vector<double> out(N, 0.0);
    std::vector<cd> work(N);
    for (int ax = 0; ax < g.d; ++ax) {
        for (size_t i = 0; i < N; ++i) {
            auto ijk = g.unflatten(i);
            work[i] = spec[i] * cd(0.0, g.freq(ijk[ax]));
        }
        std::vector<cd> dax = dft_inverse(work, g);
        for (size_t i = 0; i < N; ++i) out[i] += std::norm(dax[i]);
    }
    for (double& v : out) v = std::sqrt(v);
    return out;
}

std::vector<double> hessian_magnitude(std::span<const cd> f, const SpaceGrid& g) {
    std::vector<cd> spec = dft_forward(f, g);
    size_t N = g.size();
    std::vector<double> out(N, 0.0);
    std::vector<cd> work(N);
    for (int a = 0; a < g.d; ++a) {
        for (int b = 0; b < g.d; ++b) {
            for (size_t i = 0; i < N; ++i) {
                auto ijk = g.unflatten(i);
                work[i] = -spec[i] * g.freq(ijk[a]) * g.freq(ijk[b]);
            }
            std::vector<cd> dab = dft_inverse(work, g);
            for (size_t i = 0; i < N; ++i) out[i] += std::norm(dab[i]);
        }
    }
    for (double& v : out) v = std::sqrt(v);
    return out;
}

} // namespace fractrace
