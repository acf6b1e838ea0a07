#pragma once

#include <span>
#include <vector>

#include "fractrace/field.hpp"
#include "fractrace/grid.hpp"

namespace fractrace {

// Fractional order k + alpha with k in {0, 1}, alpha in (0, 1).
struct FracOrder {
    double alpha = 0.5;
    int k = 0;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("FracOrder: alpha must be in (0,1)");
        if (k != 0 && k != 1) throw param_error("FracOrder: k must be 0 or 1");
    }
    double total() const { return k + alpha; }
};

// ---------------------------------------------------------------------------
// Scalar time-series operators on a node vector t_0 = 0 < ... < t_M.
// Densities are treated as piecewise linear; kernel moments are closed-form
// (product-trapezoidal), which keeps the graded-grid weights exact.
// ---------------------------------------------------------------------------

// (I^alpha f)(t_i) for all nodes; alpha in (0, 1]. (I^alpha f)(0) = 0.
std::vector<double> rl_integral(const std::vector<double>& t, std::span<const double> f,
                                double alpha);

// (I^alpha f)(tt) at an arbitrary point tt in [0, t_M].
double rl_integral_at(const std::vector<double>& t, std::span<const double> f, double alpha,
                      double tt);

// (J^alpha phi)(t_i) = (1/Gamma(a)) int_{t_i}^T (r - t_i)^{a-1} phi(r) dr.
std::vector<double> adjoint_integral(const std::vector<double>& t, std::span<const double> phi,
                                     double alpha);

// Caputo derivative via L1 weights (equivalently: exact differentiation of
// the product-trapezoidal I^{1-alpha}(u - u0)). Defined at t_1..t_M; the
// returned vector has size M+1 with entry 0 duplicating entry 1.
std::vector<double> caputo_derivative(const std::vector<double>& t, std::span<const double> u,
                                      double u0, double alpha);

// d/dt by nonuniform 3-point stencils (second order in the interior and at
// the right end, one-sided at both ends).
std::vector<double> time_derivative(const std::vector<double>& t, std::span<const double> u);

// Caputo of order k + alpha: k = 0 plain; k = 1 computes dt^alpha(dt u) with
// the initial trace u1 (dt u(0) = u1 is substituted at the left node).
std::vector<double> caputo_higher(const std::vector<double>& t, std::span<const double> u,
                                  double u0, double u1, const FracOrder& order);

// Cross-check route for k = 1: d^2/dt^2 of I^{1-alpha}(u - u0 - t u1).
std::vector<double> caputo_higher_alt(const std::vector<double>& t, std::span<const double> u,
                                      double u0, double u1, double alpha);

// Marchaud form: Gamma(1-a) D^a u(t) = (u(t)-u0)/t^a + a int_0^t (u(t)-u(s))/(t-s)^{1+a} ds,
// with the singular final panel integrated in closed form against the
// piecewise-linear interpolant. Defined at t_1..t_M (entry 0 duplicates 1).
std::vector<double> marchaud_derivative(const std::vector<double>& t, std::span<const double> u,
                                        double u0, double alpha);

// (int_0^T |t^-a I^a f|^q t^mu dt) / (int_0^T |f|^q t^mu dt).
double hardy_ratio(const std::vector<double>& t, std::span<const double> f, double alpha,
                   double q, double mu);

// ---------------------------------------------------------------------------
// Field-level versions: apply the scalar operator across all spatial points.
// Row weights are computed once per time node and shared by all columns.
// ---------------------------------------------------------------------------

// Caputo of order alpha per spatial point; u0 is the initial slice.
SampledField caputo_field(const SampledField& u, std::span<const cd> u0, double alpha,
                          int threads = 0);

// time derivative per spatial point (3-point nonuniform stencils)
SampledField time_derivative_field(const SampledField& u);

// Caputo of order k + alpha; for k = 1 the time derivative is taken first
// with dt u(0, .) = u1.
SampledField caputo_higher_field(const SampledField& u, std::span<const cd> u0,
                                 std::span<const cd> u1, const FracOrder& order,
                                 int threads = 0);

} // namespace fractrace
