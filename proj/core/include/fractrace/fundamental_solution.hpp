#pragma once

#include <span>
#include <vector>

#include "fractrace/field.hpp"
#include "fractrace/math_util.hpp"

namespace fractrace {

// Identifies a fundamental-solution slice P_beta(t, .) on a grid.
struct KernelSpec {
    double beta = 0.5;
    double t = 1.0;
    SpaceGrid grid;

    void validate() const {
        if (!(beta > 0.0 && beta < 2.0)) throw param_error("KernelSpec: beta must be in (0, 2)");
        if (!(t > 0.0)) throw param_error("KernelSpec: t must be positive");
        grid.validate();
    }
};

// Fourier symbol E_beta(-|xi|^2 t^beta); equals 1 at xi = 0.
double kernel_hat(const KernelSpec& spec, double xi2);

// t * E_{beta,2}(-|xi|^2 t^beta); requires beta in (1, 2).
double kernel_tilde_hat(const KernelSpec& spec, double xi2);

struct KernelField {
    SpaceGrid grid;
    std::vector<double> values;
    bool resolved = true; // symbol tail below 1e-12 at |xi|_max
    double tail = 0.0;    // |symbol| at |xi|_max
};

// Inverse transform of the symbol: the periodized kernel sampled on the
// lattice. Real and even; discrete mass h^d * sum = symbol(0) exactly.
KernelField kernel_field(const KernelSpec& spec);
KernelField kernel_tilde_field(const KernelSpec& spec);

double kernel_mass(const KernelField& kf);
double kernel_second_moment(const KernelField& kf); // int |x|^2 P / int P

// Self-similarity check P_beta(t,x) = t^{-bd/2} P_beta(1, t^{-b/2} x):
// max |P_t - rescaled P_1| over the bulk of P_1 (values >= 1e-6 of its peak),
// normalized by the peak of P_t.
double check_scaling(double beta, double t, const SpaceGrid& grid);

struct DecayReport {
    double sigma = 0.0;      // fitted tail exponent: log P ~ -sigma |x|^(2/(2-beta))
    double r_squared = 0.0;  // fit quality on |x| in [2, 8]
    double n_tail = 0.0;     // envelope constant for the |x| >= 1 branch
    double n_near = 0.0;     // envelope constant for the |x| < 1 branch
};

// Fits the stretched-exponential tail envelope of P_beta(1, .) and the
// d-dependent near-origin bound.
DecayReport check_decay(double beta, const SpaceGrid& grid);

struct MomentReport {
    std::vector<double> t;
    std::vector<double> m2;
    LineFit fit; // slope of log m2 vs log t; beta for anomalous diffusion
};

MomentReport moment_slope(double beta, const SpaceGrid& grid, std::span<const double> ts);

} // namespace fractrace
