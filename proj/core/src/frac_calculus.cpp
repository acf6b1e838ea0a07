#include "fractrace/frac_calculus.hpp"

#include <cmath>

#include "fractrace/math_util.hpp"

namespace fractrace {

namespace {

void check_series(const std::vector<double>& t, size_t n) {
    if (t.size() < 3) throw param_error("time series: need at least 3 nodes");
    if (t.size() != n) throw param_error("time series: node/value length mismatch");
    if (t.front() != 0.0) throw param_error("time series: t_0 must be 0");
}

// int_{t_j}^{t_{j+1}} (t_i - s)^(a-1) * {1, (s-t_j)} ds with ta = t_i - t_j,
// tb = t_i - t_{j+1}
inline void kernel_moments_left(double ta, double tb, double alpha, double& m0, double& m1) {
    m0 = pow_diff(ta, tb, alpha) / alpha;
    m1 = ta * m0 - pow_diff(ta, tb, alpha + 1.0) / (alpha + 1.0);
}

} // namespace

std::vector<double> rl_integral(const std::vector<double>& t, std::span<const double> f,
                                double alpha) {
    check_series(t, f.size());
    if (!(alpha > 0.0 && alpha <= 1.0)) throw param_error("rl_integral: alpha must be in (0,1]");
    size_t M = t.size() - 1;
    std::vector<double> out(M + 1, 0.0);
    double rg = rgamma(alpha);
    for (size_t i = 1; i <= M; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < i; ++j) {
            double ta = t[i] - t[j], tb = t[i] - t[j + 1];
            double m0, m1;
            kernel_moments_left(ta, tb, alpha, m0, m1);
            double slope = (f[j + 1] - f[j]) / (t[j + 1] - t[j]);
            acc += f[j] * m0 + slope * m1;
        }
        out[i] = rg * acc;
    }
    return out;
}

double rl_integral_at(const std::vector<double>& t, std::span<const double> f, double alpha,
                      double tt) {
    check_series(t, f.size());
    if (!(alpha > 0.0 && alpha <= 1.0)) throw param_error("rl_integral_at: alpha must be in (0,1]");
    if (tt < 0.0 || tt > t.back() * (1.0 + 1e-12))
        throw param_error("rl_integral_at: evaluation point outside [0, T]");
    if (tt == 0.0) return 0.0;
    double acc = 0.0;
    for (size_t j = 0; j + 1 < t.size() && t[j] < tt; ++j) {
        double hi = std::min(tt, t[j + 1]);
        double ta = tt - t[j], tb = tt - hi;
        double m0, m1;
        kernel_moments_left(ta, tb, alpha, m0, m1);
        double slope = (f[j + 1] - f[j]) / (t[j + 1] - t[j]);
        acc += f[j] * m0 + slope * m1;
    }
    return rgamma(alpha) * acc;
}

std::vector<double> adjoint_integral(const std::vector<double>& t, std::span<const double> phi,
                                     double alpha) {
    check_series(t, phi.size());
    if (!(alpha > 0.0 && alpha <= 1.0)) throw param_error("adjoint_integral: alpha must be in (0,1]");
    size_t M = t.size() - 1;
    std::vector<double> out(M + 1, 0.0);
    double rg = rgamma(alpha);
    for (size_t i = 0; i <= M; ++i) {
        double acc = 0.0;
        for (size_t j = i; j < M; ++j) {
            double ta = t[j + 1] - t[i], tb = t[j] - t[i];
            double m0 = pow_diff(ta, tb, alpha) / alpha;
            double m1 = pow_diff(ta, tb, alpha + 1.0) / (alpha + 1.0) - tb * m0;
            double slope = (phi[j + 1] - phi[j]) / (t[j + 1] - t[j]);
            acc += phi[j] * m0 + slope * m1;
        }
        out[i] = rg * acc;
    }
    return out;
}

std::vector<double> caputo_derivative(const std::vector<double>& t, std::span<const double> u,
                                      double u0, double alpha) {
    check_series(t, u.size());
    if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("caputo_derivative: alpha must be in (0,1)");
    size_t M = t.size() - 1;
    std::vector<double> out(M + 1, 0.0);
    double rg2 = rgamma(2.0 - alpha);
    double rg1 = rgamma(1.0 - alpha);
    double jump = u[0] - u0; // nonzero initial gap contributes the t^-alpha mode
    for (size_t i = 1; i <= M; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < i; ++j) {
            double w = pow_diff(t[i] - t[j], t[i] - t[j + 1], 1.0 - alpha) / (t[j + 1] - t[j]);
            acc += w * (u[j + 1] - u[j]);
        }
        out[i] = rg2 * acc;
        if (jump != 0.0) out[i] += jump * std::pow(t[i], -alpha) * rg1;
    }
    out[0] = out[1];
    return out;
}

std::vector<double> time_derivative(const std::vector<double>& t, std::span<const double> u) {
    check_series(t, u.size());
    size_t M = t.size() - 1;
    std::vector<double> out(M + 1, 0.0);
    auto stencil = [&](size_t a, size_t b, size_t c, size_t at) {
        double h1 = t[b] - t[a], h2 = t[c] - t[b];
        if (at == a)
            return (-(2.0 * h1 + h2) / (h1 * (h1 + h2))) * u[a] + ((h1 + h2) / (h1 * h2)) * u[b] -
                   (h1 / (h2 * (h1 + h2))) * u[c];
        if (at == b)
            return (-h2 / (h1 * (h1 + h2))) * u[a] + ((h2 - h1) / (h1 * h2)) * u[b] +
                   (h1 / (h2 * (h1 + h2))) * u[c];
        return (h2 / (h1 * (h1 + h2))) * u[a] - ((h1 + h2) / (h1 * h2)) * u[b] +
               ((h1 + 2.0 * h2) / (h2 * (h1 + h2))) * u[c];
    };
    out[0] = stencil(0, 1, 2, 0);
    for (size_t i = 1; i < M; ++i) out[i] = stencil(i - 1, i, i + 1, i);
    out[M] = stencil(M - 2, M - 1, M, M);
    return out;
}

std::vector<double> caputo_higher(const std::vector<double>& t, std::span<const double> u,
                                  double u0, double u1, const FracOrder& order) {
    order.validate();
    if (order.k == 0) return caputo_derivative(t, u, u0, order.alpha);
    std::vector<double> du = time_derivative(t, u);
    du[0] = u1;
    return caputo_derivative(t, du, u1, order.alpha);
}

std::vector<double> caputo_higher_alt(const std::vector<double>& t, std::span<const double> u,
                                      double u0, double u1, double alpha) {
    check_series(t, u.size());
    size_t M = t.size() - 1;
    std::vector<double> g(M + 1);
    for (size_t i = 0; i <= M; ++i) g[i] = u[i] - u0 - t[i] * u1;
    std::vector<double> w = rl_integral(t, g, 1.0 - alpha);
    std::vector<double> out(M + 1, 0.0);
    for (size_t i = 1; i < M; ++i) {
        double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
        out[i] = 2.0 * (h2 * w[i - 1] - (h1 + h2) * w[i] + h1 * w[i + 1]) / (h1 * h2 * (h1 + h2));
    }
    out[M] = out[M - 1];
    out[0] = out[1];
    return out;
}

std::vector<double> marchaud_derivative(const std::vector<double>& t, std::span<const double> u,
                                        double u0, double alpha) {
    check_series(t, u.size());
    if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("marchaud_derivative: alpha must be in (0,1)");
    size_t M = t.size() - 1;
    std::vector<double> out(M + 1, 0.0);
    double rg1 = rgamma(1.0 - alpha);
    for (size_t i = 1; i <= M; ++i) {
        double s = (u[i] - u0) * std::pow(t[i], -alpha);
        double integral = 0.0;
        for (size_t j = 0; j + 1 < i; ++j) {
            double ta = t[i] - t[j], tb = t[i] - t[j + 1]; // ta > tb > 0
            // int (t_i - s)^(-1-a) ds and int (s - t_j)(t_i - s)^(-1-a) ds
            double n0 = pow_diff(1.0 / tb, 1.0 / ta, alpha) / alpha;
            double n1 = ta * n0 - pow_diff(ta, tb, 1.0 - alpha) / (1.0 - alpha);
            double slope = (u[j + 1] - u[j]) / (t[j + 1] - t[j]);
            integral += (u[i] - u[j]) * n0 - slope * n1;
        }
        // final panel: u_i - u(s) = slope * (t_i - s) cancels the singularity
        double dt = t[i] - t[i - 1];
        double slope = (u[i] - u[i - 1]) / dt;
        integral += slope * std::pow(dt, 1.0 - alpha) / (1.0 - alpha);
        out[i] = rg1 * (s + alpha * integral);
    }
    out[0] = out[1];
    return out;
}

double hardy_ratio(const std::vector<double>& t, std::span<const double> f, double alpha,
                   double q, double mu) {
    check_series(t, f.size());
    if (!(alpha > 0.0 && alpha <= 1.0)) throw param_error("hardy_ratio: alpha must be in (0,1]");
    if (!(q > 1.0)) throw param_error("hardy_ratio: q must be in (1, inf)");
    if (!(mu < q - 1.0)) throw param_error("hardy_ratio: requires mu < q - 1");
    if (!(mu > -1.0)) throw param_error("hardy_ratio: requires mu > -1");
    std::vector<double> I = rl_integral(t, f, alpha);
    std::vector<double> g(t.size());
    g[0] = f[0] * rgamma(1.0 + alpha); // limit of t^-a I^a f at 0
    for (size_t i = 1; i < t.size(); ++i) g[i] = std::pow(t[i], -alpha) * I[i];
    std::vector<double> fa(f.begin(), f.end());
    double num = weighted_lq_integral(t, g, q, mu);
    double den = weighted_lq_integral(t, fa, q, mu);
    if (den == 0.0) throw param_error("hardy_ratio: zero denominator (f vanishes)");
    return num / den;
}

// ---------------------------------------------------------------------------
// field-level operators
// ---------------------------------------------------------------------------

SampledField caputo_field(const SampledField& u, std::span<const cd> u0, double alpha,
                          int threads) {
    u.check_shape();
    if (u0.size() != u.slice_size()) throw param_error("caputo_field: u0 slice shape mismatch");
    if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("caputo_field: alpha must be in (0,1)");
    std::vector<double> t = u.tgrid.nodes();
    size_t M = u.tgrid.M, N = u.slice_size();
    SampledField out(u.tgrid, u.sgrid, u.realness);
    double rg2 = rgamma(2.0 - alpha);
    double rg1 = rgamma(1.0 - alpha);

    parallel_for(M, [&](size_t row) {
        size_t i = row + 1;
        auto oi = out.slice(i);
        for (size_t j = 0; j < i; ++j) {
            double w = rg2 * pow_diff(t[i] - t[j], t[i] - t[j + 1], 1.0 - alpha) /
                       (t[j + 1] - t[j]);
            auto uj = u.slice(j);
            auto uj1 = u.slice(j + 1);
            for (size_t x = 0; x < N; ++x) oi[x] += w * (uj1[x] - uj[x]);
        }
        double jw = std::pow(t[i], -alpha) * rg1;
        auto first = u.slice(0);
        for (size_t x = 0; x < N; ++x) oi[x] += jw * (first[x] - u0[x]);
    }, threads);

    auto o0 = out.slice(0);
    auto o1 = out.slice(1);
    std::copy(o1.begin(), o1.end(), o0.begin());
    return out;
}

SampledField time_derivative_field(const SampledField& u) {
    u.check_shape();
    std::vector<double> t = u.tgrid.nodes();
    size_t M = u.tgrid.M, N = u.slice_size();
    SampledField out(u.tgrid, u.sgrid, u.realness);
    auto row = [&](size_t a, size_t b, size_t c, size_t at, std::span<cd> dst) {
        double h1 = t[b] - t[a], h2 = t[c] - t[b];
        double wa, wb, wc;
        if (at == a) {
            wa = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
            wb = (h1 + h2) / (h1 * h2);
            wc = -h1 / (h2 * (h1 + h2));
        } else if (at == b) {
            wa = -h2 / (h1 * (h1 + h2));
            wb = (h2 - h1) / (h1 * h2);
            wc = h1 / (h2 * (h1 + h2));
        } else {
            wa = h2 / (h1 * (h1 + h2));
            wb = -(h1 + h2) / (h1 * h2);
            wc = (h1 + 2.0 * h2) / (h2 * (h1 + h2));
        }
        auto ua = u.slice(a), ub = u.slice(b), uc = u.slice(c);
        for (size_t x = 0; x < N; ++x) dst[x] = wa * ua[x] + wb * ub[x] + wc * uc[x];
    };
    row(0, 1, 2, 0, out.slice(0));
    for (size_t i = 1; i < M; ++i) row(i - 1, i, i + 1, i, out.slice(i));
    row(M - 2, M - 1, M, M, out.slice(M));
    return out;
}

SampledField caputo_higher_field(const SampledField& u, std::span<const cd> u0,
                                 std::span<const cd> u1, const FracOrder& order, int threads) {
    order.validate();
    if (order.k == 0) return caputo_field(u, u0, order.alpha, threads);
    if (u1.size() != u.slice_size()) throw param_error("caputo_higher_field: u1 required for k = 1");
    SampledField du = time_derivative_field(u);
    std::copy(u1.begin(), u1.end(), du.slice(0).begin());
    return caputo_field(du, u1, order.alpha, threads);
}

} // namespace fractrace
