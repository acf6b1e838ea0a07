#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "fractrace/errors.hpp"

namespace fractrace {

// 1/Gamma(x) for any real x; zero at the poles of Gamma.
inline double rgamma(double x) {
    if (x > 0.5) {
        if (x > 171.0) return 0.0; // Gamma overflows double range
        return std::exp(-std::lgamma(x));
    }
    if (x <= 0.0 && x == std::floor(x)) return 0.0; // poles
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x)/pi
    double s = std::sin(M_PI * x);
    return std::exp(std::lgamma(1.0 - x)) * s / M_PI;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre quadrature
// ---------------------------------------------------------------------------

struct GaussRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

// Nodes/weights by Newton iteration on the Legendre recurrence.
inline GaussRule gauss_legendre(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

inline const GaussRule& gauss20() {
    static const GaussRule r = gauss_legendre(20);
    return r;
}

template <class F>
double gauss_panel(const F& f, double a, double b, const GaussRule& rule = gauss20()) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

// Adaptive bisection on [a,b]: accept a panel when two halves agree with the
// whole to tol (relative to the running scale).
template <class F>
double adaptive_quad(const F& f, double a, double b, double rel_tol = 1e-12,
                     int max_depth = 28, double abs_floor = 1e-300) {
    struct Seg { double a, b, whole; int depth; };
    const GaussRule& rule = gauss20();
    std::vector<Seg> stack{{a, b, gauss_panel(f, a, b, rule), 0}};
    double total = 0.0;
    double scale = std::abs(stack[0].whole) + abs_floor;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double m = 0.5 * (s.a + s.b);
        double left = gauss_panel(f, s.a, m, rule);
        double right = gauss_panel(f, m, s.b, rule);
        double err = std::abs(left + right - s.whole);
        if (err < rel_tol * scale || s.depth >= max_depth) {
            if (s.depth >= max_depth && err > 1e3 * rel_tol * scale)
                throw accuracy_error("adaptive quadrature failed to reach tolerance");
            total += left + right;
        } else {
            stack.push_back({s.a, m, left, s.depth + 1});
            stack.push_back({m, s.b, right, s.depth + 1});
            scale = std::max(scale, std::abs(total) + std::abs(left) + std::abs(right));
        }
    }
    return total;
}

// Integral over [a, infinity): dyadic panels until the running tail is
// negligible against the accumulated total.
template <class F>
double quad_to_infinity(const F& f, double a, double rel_tol = 1e-12, int max_panels = 80) {
    double left = a, width = std::max(a, 1.0);
    double total = 0.0;
    int quiet = 0;
    for (int p = 0; p < max_panels; ++p) {
        double piece = adaptive_quad(f, left, left + width, rel_tol);
        total += piece;
        left += width;
        width *= 2.0;
        if (std::abs(piece) < rel_tol * (std::abs(total) + 1e-300)) {
            if (++quiet >= 2) return total;
        } else {
            quiet = 0;
        }
    }
    throw accuracy_error("semi-infinite quadrature did not converge");
}

// Integral over [0, infinity) of an integrand whose features start at scale
// s0 (decay scale, peak location, ...). A dyadic octave ladder from s0 keeps
// narrow spikes visible to the adaptive panels regardless of how small s0 is.
template <class F>
double quad_ladder(const F& f, double s0, double rel_tol = 1e-12, int max_panels = 260) {
    if (!(s0 > 0.0)) throw param_error("quad_ladder: scale must be positive");
    double total = adaptive_quad(f, 0.0, s0, rel_tol);
    double left = s0, width = s0;
    int quiet = 0;
    for (int p = 0; p < max_panels; ++p) {
        double piece = adaptive_quad(f, left, left + width, rel_tol);
        total += piece;
        left += width;
        width *= 2.0;
        if (std::abs(piece) < rel_tol * (std::abs(total) + 1e-300)) {
            if (++quiet >= 3) return total;
        } else {
            quiet = 0;
        }
    }
    throw accuracy_error("ladder quadrature did not converge");
}

// ---------------------------------------------------------------------------
// Weighted panel moments: integrate t^mu against a piecewise-linear density.
// ---------------------------------------------------------------------------

// int_a^b t^mu dt, mu > -1, 0 <= a < b. Handles a == 0.
inline double power_panel_moment(double a, double b, double mu) {
    if (mu == 0.0) return b - a;
    double m1 = mu + 1.0;
    double bp = std::pow(b, m1);
    double ap = (a == 0.0) ? 0.0 : std::pow(a, m1);
    return (bp - ap) / m1;
}

// int_a^b t^mu * linear(t) dt where linear interpolates (a,fa) -> (b,fb).
inline double weighted_linear_panel(double a, double b, double fa, double fb, double mu) {
    if (b <= a) return 0.0;
    double m0 = power_panel_moment(a, b, mu);
    double m1 = power_panel_moment(a, b, mu + 1.0);
    double slope = (fb - fa) / (b - a);
    return fa * m0 + slope * (m1 - a * m0);
}

// int_0^T |g|^q t^mu dt with g given at grid nodes, integrating the
// piecewise-linear interpolant of |g|^q. Panels may start at t=0 (mu > -1).
inline double weighted_lq_integral(const std::vector<double>& t, const std::vector<double>& g,
                                   double q, double mu, size_t first_panel = 0) {
    if (t.size() != g.size()) throw param_error("weighted_lq_integral: length mismatch");
    double acc = 0.0;
    for (size_t i = first_panel; i + 1 < t.size(); ++i) {
        double fa = std::pow(std::abs(g[i]), q);
        double fb = std::pow(std::abs(g[i + 1]), q);
        acc += weighted_linear_panel(t[i], t[i + 1], fa, fb, mu);
    }
    return acc;
}

inline double weighted_lq_norm(const std::vector<double>& t, const std::vector<double>& g,
                               double q, double mu, size_t first_panel = 0) {
    return std::pow(weighted_lq_integral(t, g, q, mu, first_panel), 1.0 / q);
}

// stable a^p - b^p for 0 <= b <= a
inline double pow_diff(double a, double b, double p) {
    if (b == 0.0) return std::pow(a, p);
    if (a == b) return 0.0;
    return -std::pow(a, p) * std::expm1(p * std::log1p((b - a) / a));
}

// ---------------------------------------------------------------------------
// Least squares line fit
// ---------------------------------------------------------------------------

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw param_error("fit_line: need >= 2 points");
    double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i]; syy += y[i] * y[i];
    }
    double den = n * sxx - sx * sx;
    LineFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
    }
    f.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// ---------------------------------------------------------------------------
// Deterministic RNG helpers
// ---------------------------------------------------------------------------

// Gaussian deviates via Box-Muller over mt19937_64 uniforms; avoids the
// implementation-defined std::normal_distribution so seeded runs are
// reproducible across standard libraries.
class GaussianSampler {
public:
    explicit GaussianSampler(uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * M_PI * u2);
        have_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    double uniform() {
        // in (0,1]
        return (double(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }

private:
    std::mt19937_64 eng_;
    bool have_ = false;
    double cached_ = 0.0;
};

// ---------------------------------------------------------------------------
// Index-sharded parallel loop with deterministic output placement.
// ---------------------------------------------------------------------------

inline void parallel_for(size_t n, const std::function<void(size_t)>& body, int threads = 0) {
    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    size_t nt = std::min<size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr err;
    std::mutex err_mu;
    for (size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (size_t i = t; i < n; i += nt) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace fractrace
