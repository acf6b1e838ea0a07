// Test-only oracles, independent of the library implementation paths they
// check: direct DFT sums, dense Simpson quadrature, an erfc evaluator, an
// extended-precision Mittag-Leffler series, and asymptotic expansions.
#pragma once

#include <mpfr.h>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

using cd = std::complex<double>;

// direct O(N^2) unitary forward DFT in d dimensions (n per axis)
inline std::vector<cd> direct_dft(const std::vector<cd>& f, int d, int n) {
    size_t N = f.size();
    std::vector<cd> out(N, cd(0.0));
    auto unflatten = [&](size_t idx, int* ijk) {
        for (int ax = d - 1; ax >= 0; --ax) {
            ijk[ax] = int(idx % n);
            idx /= n;
        }
    };
    int kk[3] = {0, 0, 0}, jj[3] = {0, 0, 0};
    for (size_t kidx = 0; kidx < N; ++kidx) {
        unflatten(kidx, kk);
        cd acc = 0.0;
        for (size_t jidx = 0; jidx < N; ++jidx) {
            unflatten(jidx, jj);
            double phase = 0.0;
            for (int ax = 0; ax < d; ++ax) phase += -2.0 * M_PI * kk[ax] * jj[ax] / double(n);
            acc += f[jidx] * cd(std::cos(phase), std::sin(phase));
        }
        out[kidx] = acc / std::sqrt(double(N));
    }
    return out;
}

// dense composite Simpson on [a, b]
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    double h = (b - a) / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        double x0 = a + i * h, x2 = x0 + h, x1 = 0.5 * (x0 + x2);
        acc += (h / 6.0) * (f(x0) + 4.0 * f(x1) + f(x2));
    }
    return acc;
}

// erfc by Taylor series (small x) / Lentz continued fraction (large x)
inline double erfc_oracle(double x) {
    if (x < 1.5) {
        // erf(x) = 2/sqrt(pi) sum (-1)^k x^{2k+1} / (k! (2k+1))
        double term = x, sum = x;
        for (int k = 1; k < 200; ++k) {
            term *= -x * x / k;
            sum += term / (2 * k + 1);
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return 1.0 - 2.0 / std::sqrt(M_PI) * sum;
    }
    // Laplace continued fraction, evaluated by backward recurrence:
    // sqrt(pi) e^{x^2} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    double tail = x;
    for (int n = 160; n >= 1; --n) tail = x + (n / 2.0) / tail;
    return std::exp(-x * x) / std::sqrt(M_PI) / tail;
}

// E_{beta,c}(-v) by MPFR series with all parameter arithmetic in MPFR
inline double ml_series_mpfr(double beta, double c, double v, int max_log10 = 80) {
    mpfr_prec_t prec = mpfr_prec_t(128 + 3.33 * max_log10);
    mpfr_t mb, mc, mv, arg, g, term, vpow, sum;
    mpfr_inits2(prec, mb, mc, mv, arg, g, term, vpow, sum, (mpfr_ptr) nullptr);
    mpfr_set_d(mb, beta, MPFR_RNDN);
    mpfr_set_d(mc, c, MPFR_RNDN);
    mpfr_set_d(mv, v, MPFR_RNDN);
    mpfr_set_ui(sum, 0, MPFR_RNDN);
    mpfr_set_ui(vpow, 1, MPFR_RNDN);
    double prev = HUGE_VAL;
    for (int k = 0; k < 200000; ++k) {
        mpfr_mul_ui(arg, mb, (unsigned long)k, MPFR_RNDN);
        mpfr_add(arg, arg, mc, MPFR_RNDN);
        mpfr_gamma(g, arg, MPFR_RNDN);
        mpfr_div(term, vpow, g, MPFR_RNDN);
        if (k & 1) mpfr_neg(term, term, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        double at = std::abs(mpfr_get_d(term, MPFR_RNDN));
        if (k > 4 && at < prev && at < 1e-30) break;
        prev = at;
        mpfr_mul(vpow, vpow, mv, MPFR_RNDN);
    }
    double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(mb, mc, mv, arg, g, term, vpow, sum, (mpfr_ptr) nullptr);
    return out;
}

// d/dv E_{beta,c}(-v) by the differentiated series (extended precision)
inline double ml_series_derivative_mpfr(double beta, double c, double v) {
    // sum_{k>=1} (-1)^k k v^{k-1} / Gamma(beta k + c)
    mpfr_prec_t prec = 384;
    mpfr_t mb, mc, mv, arg, g, term, vpow, sum;
    mpfr_inits2(prec, mb, mc, mv, arg, g, term, vpow, sum, (mpfr_ptr) nullptr);
    mpfr_set_d(mb, beta, MPFR_RNDN);
    mpfr_set_d(mc, c, MPFR_RNDN);
    mpfr_set_d(mv, v, MPFR_RNDN);
    mpfr_set_ui(sum, 0, MPFR_RNDN);
    mpfr_set_ui(vpow, 1, MPFR_RNDN); // v^{k-1} starting at k = 1
    double prev = HUGE_VAL;
    for (int k = 1; k < 200000; ++k) {
        mpfr_mul_ui(arg, mb, (unsigned long)k, MPFR_RNDN);
        mpfr_add(arg, arg, mc, MPFR_RNDN);
        mpfr_gamma(g, arg, MPFR_RNDN);
        mpfr_div(term, vpow, g, MPFR_RNDN);
        mpfr_mul_ui(term, term, (unsigned long)k, MPFR_RNDN);
        if (k & 1) mpfr_neg(term, term, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        double at = std::abs(mpfr_get_d(term, MPFR_RNDN));
        if (k > 4 && at < prev && at < 1e-30) break;
        prev = at;
        mpfr_mul(vpow, vpow, mv, MPFR_RNDN);
    }
    double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(mb, mc, mv, arg, g, term, vpow, sum, (mpfr_ptr) nullptr);
    return out;
}

// large-v asymptotics E_beta(-v) = sum_{m=1..M} (-1)^{m-1} v^{-m} / Gamma(1 - beta m)
inline double ml_asymptotic(double beta, double v, int terms = 3) {
    double acc = 0.0;
    for (int m = 1; m <= terms; ++m) {
        double g = std::tgamma(1.0 - beta * m);
        acc += ((m % 2 == 1) ? 1.0 : -1.0) / (std::pow(v, m) * g);
    }
    return acc;
}

// I^alpha t^gamma = Gamma(gamma+1)/Gamma(gamma+1+alpha) t^{gamma+alpha}
inline double power_rule_integral(double gamma, double alpha, double t) {
    return std::tgamma(gamma + 1.0) / std::tgamma(gamma + 1.0 + alpha) *
           std::pow(t, gamma + alpha);
}

// Caputo dt^alpha t^gamma = Gamma(gamma+1)/Gamma(gamma+1-alpha) t^{gamma-alpha}
inline double power_rule_caputo(double gamma, double alpha, double t) {
    return std::tgamma(gamma + 1.0) / std::tgamma(gamma + 1.0 - alpha) *
           std::pow(t, gamma - alpha);
}

} // namespace oracles
