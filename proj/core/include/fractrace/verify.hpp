#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fractrace/ivp_solver.hpp"
#include "fractrace/report.hpp"

namespace fractrace {

// Trace-theorem parameter bundle. theta_n = (k + alpha - n - (1+mu)/q)/(k+alpha).
struct TraceParams {
    int k = 0;
    int n = 0;
    double alpha = 0.75;
    double p = 2.0;
    double q = 2.0;
    double mu = 0.0;
    double nu = 0.0;

    double theta(int nn) const { return (k + alpha - nn - (1.0 + mu) / q) / (k + alpha); }

    void validate() const {
        if (k != 0 && k != 1) throw param_error("TraceParams: k must be 0 or 1");
        if (n < 0 || n > k) throw param_error("TraceParams: need 0 <= n <= k");
        if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("TraceParams: alpha in (0,1)");
        if (!(p > 1.0 && q > 1.0)) throw param_error("TraceParams: p, q in (1, inf)");
        if (!(mu > -1.0 && mu < q - 1.0)) throw param_error("TraceParams: mu in (-1, q-1)");
        if (!(alpha > (1.0 + mu) / q))
            throw param_error(
                "TraceParams: requires alpha > (1+mu)/q (theta_n in (0,1)); the subcritical "
                "regime is covered by the counterexample op");
    }
};

// Smooth bump eta supported in (-1, -1/2) with unit integral, and
// zeta(t) = -t eta(t). Scaling exponent beta = k + alpha.
class MollifierSpec {
public:
    explicit MollifierSpec(double beta);

    double beta() const { return beta_; }
    double eta(double t) const;
    double eta_prime(double t) const;
    double zeta_prime(double t) const;
    double mass() const { return 1.0; } // by normalization

private:
    double beta_;
    double norm_; // numeric normalization of the raw bump (tolerance 1e-10)
};

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

enum class EnsembleKind { SeparableMonomial, RandomBandlimited, SolverOutput, Mixed };

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::Mixed;
    int count = 10;
    uint64_t seed = 12345;
    TimeGrid tgrid;
    SpaceGrid sgrid;
    FracOrder order;
    double band_lo = 1.0; // |xi| annulus for random spatial data
    double band_hi = 4.0;
};

// A field together with its initial traces (u1 empty when k = 0).
struct EnsembleMember {
    SampledField u;
    std::vector<cd> u0;
    std::vector<cd> u1;
    std::string label;
};

// Deterministic in (seed, grids); the underlying continuum members do not
// depend on the grid resolution, so refined grids resample the same ensemble.
std::vector<EnsembleMember> ensemble_generate(const EnsembleSpec& spec, int threads = 0);

// ---------------------------------------------------------------------------
// Solution-space norms and inequality measurements
// ---------------------------------------------------------------------------

enum class SolutionForm { NonDivergence, Divergence };

// (1 - Lap)^{-1/2} applied to every slice and the traces: the reduction that
// realizes divergence-form norms through the non-divergence machinery.
EnsembleMember lift_member(const EnsembleMember& m);

// NonDivergence: || |u| + |Du| + |D^2 u| + sum_{m<=k} |dt^m u| ||_{L_{p,q,w}}
//                + || dt^{k+alpha} u ||_{L_{p,q,w}}.
// Divergence: the same norm of the lifted member.
double solution_space_norm(const EnsembleMember& m, const FracOrder& order, double p, double q,
                           const WeightSpec& w, SolutionForm form, int threads = 0);

// || dt^n u(0,.) ||_{B^{2 theta_n}} <= N || u ||_{H^{k+alpha,2}}
InequalityReport trace_constant(const TraceParams& par, const std::vector<EnsembleMember>& ens,
                                int threads = 0);

// Divergence-form trace check; computed as trace_constant of the lifted
// ensemble (the Besov index 2 theta_n - 1 is realized through the lift).
InequalityReport trace_constant_div(const TraceParams& par,
                                    const std::vector<EnsembleMember>& ens, int threads = 0);

// Solve from Besov data and bound the solution norm by the data norm.
// k = 0 uses theta = 1 - (1+mu)/(q alpha); k = 1 uses theta_0/theta_1 and
// the two-Besov-norm right-hand side. Divergence form lifts the data.
InequalityReport extension_constant(const FracOrder& order, double p, double q,
                                    const WeightSpec& w,
                                    const std::vector<std::vector<cd>>& u0s,
                                    const std::vector<std::vector<cd>>& u1s,
                                    const TimeGrid& tg, const SpaceGrid& sg, SolutionForm form,
                                    int threads = 0);

// |log(max_ratio_fine / max_ratio_coarse)|
double refinement_drift(const InequalityReport& coarse, const InequalityReport& fine);

// ---------------------------------------------------------------------------
// Mollifier trace decomposition dt^n u(0,.) = U_{n,0} + U_{n,1}
// ---------------------------------------------------------------------------

// Closed-form time-slice evaluator for solver-generated fields (constant
// continuation past T).
class SolutionEvaluator {
public:
    explicit SolutionEvaluator(const IVPProblem& prob);

    int k() const { return prob_.order.k; }
    double alpha() const { return prob_.order.alpha; }
    double horizon() const { return prob_.tgrid.T; }
    const SpaceGrid& grid() const { return prob_.sgrid; }

    std::vector<cd> u_slice(double s) const;
    // I^alpha I^{k-n} f (s, .) where f = dt^{k+alpha} u = Lap u
    std::vector<cd> ia_iknf_slice(double s, int n) const;
    std::vector<cd> trace(int n) const; // dt^n u(0, .)

private:
    IVPProblem prob_;
    std::vector<cd> u0hat_, u1hat_;
    std::vector<cd> symbol_slice(double s, bool derivative) const;
};

// Returns {U_{n,0}, U_{n,1}} for one eps < T^beta.
std::pair<std::vector<cd>, std::vector<cd>> trace_decomposition(const SolutionEvaluator& ev,
                                                                double eps,
                                                                const MollifierSpec& mol, int n);

// ---------------------------------------------------------------------------
// Kernel decay envelopes and the mixed-norm kernel bound
// ---------------------------------------------------------------------------

enum class DecayKernel { Subdiffusion, Superdiffusion, SuperdiffusionTilde };

// Measures ||(P * psi_j) * f(t,.)||_{L_{p,w2}} over the (j, t) lattice and
// fits the single envelope constant N; per-shell large-t slopes go to stats.
InequalityReport kernel_decay_envelope(DecayKernel kind, double order, double kappa, int j_lo,
                                       int j_hi, std::span<const double> ts,
                                       std::span<const cd> f, const SpaceGrid& g, double p,
                                       double nu);

// || P_alpha * f ||_{L_{p,q,w}} <= N || f ||_{B^{-2(1+mu)/(q alpha)}}
InequalityReport mixed_kernel_constant(double alpha, double p, double q, const WeightSpec& w,
                                       const std::vector<std::vector<cd>>& fs, const TimeGrid& tg,
                                       const SpaceGrid& sg, int threads = 0);

// ---------------------------------------------------------------------------
// Sub-critical regime demonstrations
// ---------------------------------------------------------------------------

// u_n = phi, v_n = t^{1/n} phi: the Caputo distance of the family collapses
// while the traces stay ||phi||_p apart; the trace/solution ratio diverges.
InequalityReport subcritical_counterexample(double alpha, double p, double q, double mu,
                                            std::span<const int> ns, const TimeGrid& tg,
                                            const SpaceGrid& sg, std::span<const cd> bump);

// Single-shell ratio ||u0||_{L_p} / ||u0||_{B^{2 theta}} = 2^{-2 theta j};
// grows without bound when theta < 0.
InequalityReport besov_necessity(double alpha, double p, double q, double mu, int j_lo, int j_hi,
                                 const SpaceGrid& g);

} // namespace fractrace
