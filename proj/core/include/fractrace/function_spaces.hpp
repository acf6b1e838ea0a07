#pragma once

#include <span>
#include <vector>

#include "fractrace/field.hpp"

namespace fractrace {

// Weight w(t,x) = t^mu * w2(x), w2 = |x|^nu (torus distance to the origin),
// nu = 0 meaning the unit weight.
struct WeightSpec {
    double mu = 0.0;
    double nu = 0.0;

    bool unit_spatial() const { return nu == 0.0; }
    // mu in (-1, q-1); nu inside the A_p range (-d, d(p-1)).
    void validate(int d, double p, double q) const {
        if (!(mu > -1.0 && mu < q - 1.0))
            throw param_error("WeightSpec: requires mu in (-1, q-1)");
        if (!(nu > -double(d) && nu < double(d) * (p - 1.0)))
            throw param_error("WeightSpec: requires nu in (-d, d(p-1)) for w2 in A_p");
    }
};

// w2 sampled on the lattice. The cell containing the origin gets the exact
// integral of |x|^nu over an equal-volume ball instead of the (possibly
// infinite) point value.
std::vector<double> spatial_weight(const SpaceGrid& g, double nu);

// || f ||_{L_{p,w2}} with cell-volume quadrature.
double spatial_lp_norm(std::span<const cd> slice, const SpaceGrid& g, double p, double nu);

// Mixed norm || u ||_{L_{p,q,w}}: L_p(w2 dx) inside, then the t^mu-weighted
// L_q in time via panel-exact moments of the piecewise-linear interpolant.
// first_panel skips the initial time panels (used when an integrand is only
// defined from t_1 or t_2 on).
double mixed_norm(const SampledField& u, double p, double q, const WeightSpec& w,
                  size_t first_panel = 0);

// Lower bound for [w2]_{A_p}: max over ball centers (coarse sublattice) and
// dyadic radii of avg(w2) * avg(w2^{-1/(p-1)})^{p-1}.
double ap_constant_estimate(const SpaceGrid& g, double nu, double p);

// ---------------------------------------------------------------------------
// Littlewood-Paley family. Radial symbols are tabulated per unique |xi|^2.
// ---------------------------------------------------------------------------

struct LPFamily {
    SpaceGrid grid;
    int j_max = 0;
    std::vector<double> lowpass;             // per unique-|xi|^2 slot
    std::vector<std::vector<double>> shells; // shells[j-1], j = 1..j_max

    // symbol value at |xi| for shell j (1-based); used by tests
    double shell_symbol(int j, double xi_abs) const;
    double lowpass_symbol(double xi_abs) const;
};

// Smooth dyadic partition of unity on the lattice: lowpass + sum of shells
// equals 1 at every lattice point; supp(shell j) in {2^(j-1) <= |xi| <= 2^(j+1)}.
// The top shell closes the partition up to |xi|_max. Throws resolution_error
// if fewer than 3 shells fit.
LPFamily build_lp_family(const SpaceGrid& g);

// shell projection: inverse DFT of (shell_j symbol * spectrum). j = 0 gives
// the lowpass piece.
std::vector<cd> lp_project(const LPFamily& fam, std::span<const cd> spectrum, int j);

struct BesovParams {
    double s = 0.0;
    double p = 2.0;
    double q = 2.0;
    WeightSpec w; // only the spatial part participates

    void validate(int d) const {
        if (!(p > 1.0 && p < 1e6) || !(q > 1.0 && q < 1e6))
            throw param_error("BesovParams: p, q must be in (1, inf)");
        if (!(w.nu > -double(d) && w.nu < double(d) * (p - 1.0)))
            throw param_error("BesovParams: spatial weight outside A_p range");
    }
};

// || Psi * f ||_{L_{p,w2}} + ( sum_j 2^{jsq} || psi_j * f ||_{L_{p,w2}}^q )^{1/q}
double besov_norm(std::span<const cd> f, const BesovParams& par, const LPFamily& fam);

// (1 - Laplace)^{s/2} f via the (1 + |xi|^2)^{s/2} multiplier.
std::vector<cd> bessel_potential(std::span<const cd> f, const SpaceGrid& g, double s);

// || (1-Lap)^{s/2} f ||_{L_{p,w2}}; s = -1 realizes the H^{-1} proxy norm.
double sobolev_norm(std::span<const cd> f, const SpaceGrid& g, double s, double p, double nu);

// Second-difference Besov norm (unweighted):
// ||f||_p + ( int |h|^{-nu q} ||Delta_h^2 f||_p^q dh/|h|^d )^{1/q},
// radial log grid on [h_grid/2, 2L], shifts realized spectrally.
double besov_norm_differences(std::span<const cd> f, const SpaceGrid& g, double nu, double p,
                              double q);

// K(eps, f) upper bound over spectral-cutoff splittings f = U0 + U1:
// min over dyadic Lambda of ||f - S_Lambda f||_{L_{p,w2}} + eps ||S_Lambda f||_{H^2_{p,w2}}.
double k_functional(std::span<const cd> f, const SpaceGrid& g, double eps, double p, double nu);

// ( int_0^inf (eps^{-theta} K(eps, f))^q deps/eps )^{1/q} over a log grid
// with closed-form small/large-eps tails.
double k_functional_interpolation_norm(std::span<const cd> f, const SpaceGrid& g, double theta,
                                       double p, double q, double nu);

// ---------------------------------------------------------------------------
// Spectral differentiation helpers shared by norms and solvers.
// ---------------------------------------------------------------------------

// |grad u| pointwise (Euclidean over axes).
std::vector<double> gradient_magnitude(std::span<const cd> f, const SpaceGrid& g);

// Frobenius norm of the Hessian pointwise.
std::vector<double> hessian_magnitude(std::span<const cd> f, const SpaceGrid& g);

} // namespace fractrace
