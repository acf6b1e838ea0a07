#pragma once

#include <cmath>

#include "fractrace/errors.hpp"

namespace fractrace {

// Parameters for E_{beta,c}(-v) evaluation. delta is the contour angle of the
// two-parameter integral representation; it must satisfy
// pi*beta/2 < delta <= min(pi, pi*beta). delta = 0 requests the default:
// pi*beta for beta < 1 (strongest integrand decay), the midpoint of the
// admissible interval for beta >= 1 (the endpoint pi puts a pole of the
// integrand on the contour).
struct MittagLefflerParams {
    double beta = 0.5;   // order, (0, 2]
    double c = 1.0;      // second parameter, c < 1 + beta for the integral route
    double delta = 0.0;  // 0 = default
    double v_switch = 5.0;

    void validate() const {
        if (!(beta > 0.0 && beta <= 2.0)) throw param_error("ml: beta must be in (0, 2]");
        if (v_switch < 0.0) throw param_error("ml: v_switch must be >= 0");
        if (delta != 0.0) {
            double lo = M_PI * beta / 2.0, hi = std::min(M_PI, M_PI * beta);
            if (!(delta > lo && delta <= hi))
                throw param_error("ml: delta must satisfy pi*beta/2 < delta <= min(pi, pi*beta)");
        }
    }

    double effective_delta() const {
        if (delta != 0.0) return delta;
        if (beta < 1.0) return M_PI * beta;
        return 0.5 * (M_PI * beta / 2.0 + M_PI);
    }
};

// Power series sum of E_{beta,c}(-v). Internally escalates to extended
// precision when the alternating sum cancels too hard for doubles.
double ml_series(const MittagLefflerParams& p, double v, double tol = 1e-14);

// One-parameter integral representation, valid for alpha in (0,1), v > 0.
double ml_integral_one_param(double alpha, double v);

// Two-parameter integral representation, valid for v > 0 and c < 1 + beta.
double ml_integral_two_param(const MittagLefflerParams& p, double v);

// Integral-route evaluation for any c: applies the recurrence
// E_{beta,c}(z) = (E_{beta,c-beta}(z) - 1/Gamma(c-beta))/z until the second
// parameter enters the validity range of the integral representation.
double ml_integral_auto(const MittagLefflerParams& p, double v);

// Dispatch: series for v <= v_switch while the double-precision series is
// well conditioned, integral representation otherwise. Continuous across the
// switch to ~1e-10.
double ml_eval(const MittagLefflerParams& p, double v);

// Shorthand E_{beta,c}(-v) with default evaluation settings.
inline double mittag_leffler(double beta, double c, double v) {
    MittagLefflerParams p;
    p.beta = beta;
    p.c = c;
    return ml_eval(p, v);
}

// log10 of the largest series term; >~4 means the double series loses more
// than ~1e-12 to cancellation and either escalation or the integral is used.
double ml_series_condition(double beta, double c, double v);

} // namespace fractrace
