#pragma once

#include <span>
#include <vector>

#include "fractrace/field.hpp"
#include "fractrace/frac_calculus.hpp"
#include "fractrace/function_spaces.hpp"
#include "fractrace/math_util.hpp"

namespace fractrace {

// Initial value problem for the homogeneous time-fractional heat equation.
// u1 is present exactly when the order is k + alpha with k = 1.
struct IVPProblem {
    FracOrder order;
    TimeGrid tgrid;
    SpaceGrid sgrid;
    std::vector<cd> u0;
    std::vector<cd> u1; // empty unless k = 1

    void validate() const {
        order.validate();
        tgrid.validate();
        sgrid.validate();
        if (u0.size() != sgrid.size()) throw param_error("IVPProblem: u0 shape mismatch");
        if (order.k == 1) {
            if (u1.size() != sgrid.size())
                throw param_error("IVPProblem: u1 required (and shaped) when k = 1");
        } else if (!u1.empty()) {
            throw param_error("IVPProblem: u1 must be absent when k = 0");
        }
    }
};

// U_hat(t, xi) = E_alpha(-|xi|^2 t^alpha) u0_hat(xi); U(0,.) = u0 exactly.
SampledField solve_subdiffusion(const IVPProblem& prob, int threads = 0);

// U_hat(t, xi) = E_beta(-|xi|^2 t^beta) u0_hat + t E_{beta,2}(-|xi|^2 t^beta) u1_hat.
SampledField solve_superdiffusion(const IVPProblem& prob, int threads = 0);

inline SampledField solve_ivp(const IVPProblem& prob, int threads = 0) {
    return prob.order.k == 0 ? solve_subdiffusion(prob, threads)
                             : solve_superdiffusion(prob, threads);
}

// Laplacian through the -|xi|^2 multiplier.
std::vector<cd> spectral_laplacian(std::span<const cd> slice, const SpaceGrid& g);

// || dt^{k+alpha} U - Lap U ||_{L_{p,q,w}} / || Lap u0 ||_{L_{p,w2}} with the
// Caputo derivative taken by the discrete L1 route; the first time node is
// excluded from the time integral (one-sided differentiation is lowest-order
// there).
double residual(const SampledField& U, const IVPProblem& prob, double p, double q,
                const WeightSpec& w, int threads = 0);

struct ContinuityFit {
    LineFit fit;      // slope of log ||U(t)-u0|| vs log t on [t_1, T/4]
    int points = 0;
    bool trivial = false; // U identically u0 on the window
};

// Initial-continuity exponent; requires alpha > (1+mu)/q and alpha > 1/q.
ContinuityFit initial_continuity(const SampledField& U, std::span<const cd> u0, double p,
                                 double alpha, double q, double mu, double nu = 0.0);

} // namespace fractrace
