#include "fractrace/mittag_leffler.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "fractrace/math_util.hpp"

namespace fractrace {

namespace {

constexpr int kMaxTerms = 10000;

// Plain double-precision alternating sum. Returns false when the requested
// tolerance is unreachable because of cancellation (caller escalates).
bool series_double(double beta, double c, double v, double tol, double& out) {
    double sum = 0.0, max_abs = 0.0, prev = HUGE_VAL;
    double lv = (v > 0.0) ? std::log(v) : -HUGE_VAL;
    for (int k = 0; k < kMaxTerms; ++k) {
        double arg = beta * k + c;
        double term;
        if (arg > 0.0) {
            double lt = (k == 0) ? -std::lgamma(arg) : k * lv - std::lgamma(arg);
            term = ((k & 1) ? -1.0 : 1.0) * std::exp(lt);
        } else {
            term = ((k & 1) ? -1.0 : 1.0) * std::exp(k * lv) * rgamma(arg);
        }
        sum += term;
        max_abs = std::max(max_abs, std::abs(term));
        if (k > 2 && std::abs(term) < prev && std::abs(term) <= tol * (std::abs(sum) + 1e-300)) {
            double cancel_err = max_abs * 1e-16;
            if (cancel_err > std::max(tol * std::abs(sum), 1e-15)) return false;
            out = sum;
            return true;
        }
        prev = std::abs(term);
        if (v == 0.0 && k == 0) { out = sum; return true; }
    }
    throw accuracy_error("ml_series: no convergence within 10^4 terms");
}

// Extended-precision sum via MPFR. beta and c are converted to mpfr once and
// all term arithmetic stays in mpfr; mixing double parameter arithmetic into
// a cancelling sum of this size destroys the result.
double series_mpfr(double beta, double c, double v, double max_log10_term) {
    mpfr_prec_t prec = mpfr_prec_t(96 + 3.33 * std::max(0.0, max_log10_term));
    mpfr_t mb, mc, mv, arg, g, term, vpow, sum, thresh;
    mpfr_inits2(prec, mb, mc, mv, arg, g, term, vpow, sum, thresh, (mpfr_ptr) nullptr);
    mpfr_set_d(mb, beta, MPFR_RNDN);
    mpfr_set_d(mc, c, MPFR_RNDN);
    mpfr_set_d(mv, v, MPFR_RNDN);
    mpfr_set_ui(sum, 0, MPFR_RNDN);
    mpfr_set_ui(vpow, 1, MPFR_RNDN);
    // E stays O(1): stop on a small absolute term once past the hump
    mpfr_set_d(thresh, 1e-24, MPFR_RNDN);

    bool done = false;
    int k = 0;
    double prev = HUGE_VAL;
    for (; k < kMaxTerms; ++k) {
        mpfr_mul_ui(arg, mb, (unsigned long)k, MPFR_RNDN);
        mpfr_add(arg, arg, mc, MPFR_RNDN);
        mpfr_gamma(g, arg, MPFR_RNDN);
        mpfr_div(term, vpow, g, MPFR_RNDN);
        if (k & 1) mpfr_neg(term, term, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        double at = std::abs(mpfr_get_d(term, MPFR_RNDN));
        if (k > 2 && at < prev && (at == 0.0 || mpfr_cmpabs(term, thresh) < 0)) {
            done = true;
            break;
        }
        prev = at;
        mpfr_mul(vpow, vpow, mv, MPFR_RNDN);
    }
    double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(mb, mc, mv, arg, g, term, vpow, sum, thresh, (mpfr_ptr) nullptr);
    if (!done) throw accuracy_error("ml_series: no convergence within 10^4 terms (extended precision)");
    return out;
}

} // namespace

double ml_series_condition(double beta, double c, double v) {
    if (v <= 1.0) return 0.0;
    double lv = std::log(v);
    // peak index from beta * psi(beta k + c) = log v, psi(y) ~ log y
    double y = std::exp(lv / beta);
    double k_star = std::max(0.0, (y - c) / beta);
    double best = 0.0;
    for (double f : {0.5, 0.8, 1.0, 1.25, 2.0}) {
        double k = k_star * f;
        double arg = beta * k + c;
        if (arg <= 0.0) continue;
        best = std::max(best, k * lv - std::lgamma(arg));
    }
    return best / std::log(10.0);
}

double ml_series(const MittagLefflerParams& p, double v, double tol) {
    p.validate();
    if (v < 0.0) throw param_error("ml_series: v must be >= 0");
    if (tol <= 0.0) throw param_error("ml_series: tol must be positive");
    if (v == 0.0) return rgamma(p.c);
    double out;
    if (p.c > 0.0 && series_double(p.beta, p.c, v, tol, out)) return out;
    return series_mpfr(p.beta, p.c, v, ml_series_condition(p.beta, p.c, v) + 2.0);
}

double ml_integral_one_param(double alpha, double v) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("ml_integral_one_param: alpha must be in (0,1)");
    if (!(v > 0.0)) throw param_error("ml_integral_one_param: v must be > 0");
    // substitution s = r^alpha turns the r^(alpha-1) endpoint factor into a
    // constant and the denominator into a polynomial in s:
    // E_alpha(-v) = (sin(a pi)/(a pi)) int_0^inf e^{-s^{1/a} w} / (s^2 + 2 s cos(a pi) + 1) ds
    double w = std::pow(v, 1.0 / alpha);
    double ca = std::cos(alpha * M_PI);
    auto f = [&](double s) {
        double num = std::exp(-std::pow(s, 1.0 / alpha) * w);
        return num / (s * s + 2.0 * s * ca + 1.0);
    };
    // features: exponential decay at s ~ w^-alpha, denominator shape at s ~ 1
    double s0 = std::min(std::pow(w, -alpha), 1.0) / 4.0;
    return std::sin(alpha * M_PI) / (alpha * M_PI) * quad_ladder(f, s0);
}

double ml_integral_two_param(const MittagLefflerParams& p, double v) {
    p.validate();
    if (!(v > 0.0)) throw param_error("ml_integral_two_param: v must be > 0");
    if (!(p.c < 1.0 + p.beta))
        throw param_error("ml_integral_two_param: requires c < 1 + beta");
    double beta = p.beta, c = p.c;
    double delta = p.effective_delta();
    double cd_ = std::cos(delta), cdb = std::cos(delta / beta), sdb = std::sin(delta / beta);
    double psi0 = delta * (1.0 + (1.0 - c) / beta);
    double expo = (1.0 - c) / beta; // r^expo endpoint factor
    auto integrand = [&](double r) {
        double r1b = std::pow(r, 1.0 / beta);
        double psi = r1b * sdb + psi0;
        double num = std::pow(r, expo) * std::exp(r1b * cdb) *
                     (r * std::sin(psi - delta) + v * std::sin(psi));
        double den = r * r + 2.0 * r * v * cd_ + v * v;
        return num / den;
    };
    // power-law substitution r = s^m tames the endpoint when expo < 0
    int m = 1;
    if (expo < 0.0) m = int(std::ceil(1.0 / (1.0 + expo) + 1e-9));
    auto g = [&](double s) {
        if (s <= 0.0) return 0.0;
        double r = std::pow(s, double(m));
        return double(m) * std::pow(s, double(m - 1)) * integrand(r);
    };
    // features (in r): integrand decay at r ~ |cos(delta/beta)|^-beta, the
    // denominator dip near r = v, and the endpoint behavior below r = 1
    double r_decay = std::pow(-cdb, -beta);
    double r0 = std::min({r_decay, v, 1.0}) / 8.0;
    return quad_ladder(g, std::pow(r0, 1.0 / m)) / (M_PI * beta);
}

double ml_integral_auto(const MittagLefflerParams& p, double v) {
    p.validate();
    if (!(v > 0.0)) throw param_error("ml_integral_auto: v must be > 0");
    double beta = p.beta;
    int steps = 0;
    double c = p.c;
    while (c >= 1.0 + beta - 0.02) {
        c -= beta;
        if (++steps > 16) throw param_error("ml_integral_auto: cannot reduce c into validity range");
    }
    MittagLefflerParams q = p;
    q.c = c;
    double val = (std::abs(c - 1.0) < 1e-12 && beta < 1.0) ? ml_integral_one_param(beta, v)
                                                           : ml_integral_two_param(q, v);
    for (int s = 0; s < steps; ++s) {
        val = (val - rgamma(c)) / (-v);
        c += beta;
    }
    return val;
}

double ml_eval(const MittagLefflerParams& p, double v) {
    p.validate();
    if (v < 0.0) throw param_error("ml_eval: v must be >= 0");
    if (v == 0.0) return rgamma(p.c);
    if (v <= p.v_switch && ml_series_condition(p.beta, p.c, v) <= 4.0)
        return ml_series(p, v);
    if (std::abs(p.c - 1.0) < 1e-12 && p.beta < 1.0) return ml_integral_one_param(p.beta, v);
    return ml_integral_auto(p, v);
}

} // namespace fractrace
