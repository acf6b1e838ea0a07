#include "fractrace/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fractrace/mittag_leffler.hpp"

namespace fractrace {

namespace {

double sqr(double x) { return x * x; }

// raw bump exp(-1/(1-y^2)) mapped onto (-1,-1/2) via y = 4t + 3
double raw_bump(double t) {
    double y = 4.0 * t + 3.0;
    if (std::abs(y) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - y * y));
}

double raw_bump_prime(double t) {
    double y = 4.0 * t + 3.0;
    if (std::abs(y) >= 1.0) return 0.0;
    double b = std::exp(-1.0 / (1.0 - y * y));
    return b * (-2.0 * y) / sqr(1.0 - y * y) * 4.0;
}

} // namespace

MollifierSpec::MollifierSpec(double beta) : beta_(beta) {
    if (!(beta > 0.0 && beta < 2.0)) throw param_error("MollifierSpec: beta in (0, 2)");
    double m = adaptive_quad([](double t) { return raw_bump(t); }, -1.0, -0.5, 1e-12);
    if (!(m > 0.0)) throw accuracy_error("MollifierSpec: bump normalization failed");
    norm_ = 1.0 / m;
    // normalization tolerance check (1e-10)
    double check = adaptive_quad([&](double t) { return eta(t); }, -1.0, -0.5, 1e-12);
    if (std::abs(check - 1.0) > 1e-10)
        throw accuracy_error("MollifierSpec: eta mass deviates from 1");
}

double MollifierSpec::eta(double t) const { return norm_ * raw_bump(t); }
double MollifierSpec::eta_prime(double t) const { return norm_ * raw_bump_prime(t); }
// zeta(t) = -t eta(t) so zeta'(t) = -eta(t) - t eta'(t)
double MollifierSpec::zeta_prime(double t) const { return -eta(t) - t * eta_prime(t); }

// ---------------------------------------------------------------------------
// ensembles
// ---------------------------------------------------------------------------

namespace {

EnsembleMember make_separable(const EnsembleSpec& spec, uint64_t seed, int idx) {
    GaussianSampler rng(seed);
    // exponents chosen so all norms (including the dt^{k+alpha} term) stay finite
    static const double gammas_k0[] = {0.0, 0.5, 1.0, 1.5, 2.0};
    static const double gammas_k1[] = {0.0, 1.0, 1.5, 2.0, 3.0};
    double gamma = (spec.order.k == 0) ? gammas_k0[idx % 5] : gammas_k1[idx % 5];
    double sigma = 0.5 + 1.5 * rng.uniform();
    double amp = 0.5 + rng.uniform();

    EnsembleMember m;
    m.label = "separable-g" + std::to_string(gamma);
    std::vector<cd> bump = preset_gaussian(spec.sgrid, sigma, amp);
    m.u = SampledField(spec.tgrid, spec.sgrid);
    for (size_t i = 0; i < m.u.num_slices(); ++i) {
        double t = spec.tgrid.node(int(i));
        double gt = (gamma == 0.0) ? 1.0 : std::pow(t, gamma);
        auto s = m.u.slice(i);
        for (size_t x = 0; x < s.size(); ++x) s[x] = gt * bump[x];
    }
    // traces: t^gamma has dt u(0) = 0 for gamma > 1, = bump for gamma = 1
    m.u0 = (gamma == 0.0) ? bump : std::vector<cd>(spec.sgrid.size(), cd(0.0));
    if (spec.order.k == 1) {
        if (gamma == 1.0) m.u1 = bump;
        else m.u1.assign(spec.sgrid.size(), cd(0.0));
        // make the member genuinely two-trace: add the constant-in-t bump
        if (gamma != 0.0) {
            for (size_t i = 0; i < m.u.num_slices(); ++i) {
                auto s = m.u.slice(i);
                for (size_t x = 0; x < s.size(); ++x) s[x] += bump[x];
            }
            m.u0 = bump;
        }
    }
    return m;
}

EnsembleMember make_random_poly(const EnsembleSpec& spec, uint64_t seed) {
    // u = phi0 + t phi1 + t^2 phi2 with independent band-limited components
    EnsembleMember m;
    m.label = "random-bandlimited";
    std::vector<cd> phi0 = preset_random_annulus(spec.sgrid, seed * 3 + 0, spec.band_lo, spec.band_hi);
    std::vector<cd> phi1 = preset_random_annulus(spec.sgrid, seed * 3 + 1, spec.band_lo, spec.band_hi);
    std::vector<cd> phi2 = preset_random_annulus(spec.sgrid, seed * 3 + 2, spec.band_lo, spec.band_hi);
    m.u = SampledField(spec.tgrid, spec.sgrid);
    for (size_t i = 0; i < m.u.num_slices(); ++i) {
        double t = spec.tgrid.node(int(i));
        auto s = m.u.slice(i);
        for (size_t x = 0; x < s.size(); ++x)
            s[x] = phi0[x] + t * (0.5 * phi1[x]) + t * t * (0.25 * phi2[x]);
    }
    m.u0 = phi0;
    if (spec.order.k == 1) {
        m.u1.resize(spec.sgrid.size());
        for (size_t x = 0; x < m.u1.size(); ++x) m.u1[x] = 0.5 * phi1[x];
    }
    return m;
}

EnsembleMember make_solver_output(const EnsembleSpec& spec, uint64_t seed, int threads) {
    EnsembleMember m;
    m.label = "solver-output";
    IVPProblem prob;
    prob.order = spec.order;
    prob.tgrid = spec.tgrid;
    prob.sgrid = spec.sgrid;
    prob.u0 = preset_random_annulus(spec.sgrid, seed * 5 + 1, spec.band_lo, spec.band_hi);
    if (spec.order.k == 1)
        prob.u1 = preset_random_annulus(spec.sgrid, seed * 5 + 2, spec.band_lo, spec.band_hi);
    m.u = solve_ivp(prob, threads);
    m.u0 = prob.u0;
    m.u1 = prob.u1;
    return m;
}

} // namespace

std::vector<EnsembleMember> ensemble_generate(const EnsembleSpec& spec, int threads) {
    spec.tgrid.validate();
    spec.sgrid.validate();
    spec.order.validate();
    if (spec.count < 1) throw param_error("ensemble_generate: count must be >= 1");
    std::vector<EnsembleMember> out(spec.count);
    parallel_for(size_t(spec.count), [&](size_t i) {
        uint64_t s = spec.seed + 1000 * (i + 1);
        EnsembleKind kind = spec.kind;
        if (kind == EnsembleKind::Mixed) {
            switch (i % 3) {
                case 0: kind = EnsembleKind::SeparableMonomial; break;
                case 1: kind = EnsembleKind::RandomBandlimited; break;
                default: kind = EnsembleKind::SolverOutput; break;
            }
        }
        switch (kind) {
            case EnsembleKind::SeparableMonomial: out[i] = make_separable(spec, s, int(i)); break;
            case EnsembleKind::RandomBandlimited: out[i] = make_random_poly(spec, s); break;
            default: out[i] = make_solver_output(spec, s, 1); break;
        }
        out[i].label += "#" + std::to_string(i);
    }, threads);
    return out;
}

// ---------------------------------------------------------------------------
// solution-space norm
// ---------------------------------------------------------------------------

EnsembleMember lift_member(const EnsembleMember& m) {
    EnsembleMember out;
    out.label = m.label + "-lifted";
    out.u = SampledField(m.u.tgrid, m.u.sgrid, m.u.realness);
    for (size_t i = 0; i < m.u.num_slices(); ++i) {
        std::vector<cd> lifted = bessel_potential(m.u.slice(i), m.u.sgrid, -1.0);
        std::copy(lifted.begin(), lifted.end(), out.u.slice(i).begin());
    }
    out.u0 = bessel_potential(m.u0, m.u.sgrid, -1.0);
    if (!m.u1.empty()) out.u1 = bessel_potential(m.u1, m.u.sgrid, -1.0);
    return out;
}

double solution_space_norm(const EnsembleMember& m, const FracOrder& order, double p, double q,
                           const WeightSpec& w, SolutionForm form, int threads) {
    order.validate();
    m.u.check_shape();
    if (form == SolutionForm::Divergence)
        return solution_space_norm(lift_member(m), order, p, q, w, SolutionForm::NonDivergence,
                                   threads);

    const SpaceGrid& g = m.u.sgrid;
    size_t N = g.size();
    if (m.u0.size() != N) throw param_error("solution_space_norm: missing u0 trace");
    if (order.k == 1 && m.u1.size() != N)
        throw param_error("solution_space_norm: missing u1 trace (k = 1)");

    // pointwise |u| + |Du| + |D^2u| (+ |dt u| for k = 1)
    SampledField mag(m.u.tgrid, g);
    SampledField dtu = order.k == 1 ? time_derivative_field(m.u) : SampledField();
    parallel_for(m.u.num_slices(), [&](size_t i) {
        auto s = m.u.slice(i);
        std::vector<double> gm = gradient_magnitude(s, g);
        std::vector<double> hm = hessian_magnitude(s, g);
        auto dst = mag.slice(i);
        if (order.k == 1) {
            auto dt = dtu.slice(i);
            for (size_t x = 0; x < N; ++x)
                dst[x] = std::abs(s[x]) + gm[x] + hm[x] + std::abs(dt[x]);
        } else {
            for (size_t x = 0; x < N; ++x) dst[x] = std::abs(s[x]) + gm[x] + hm[x];
        }
    }, threads);

    std::span<const cd> u1 = order.k == 1 ? std::span<const cd>(m.u1) : std::span<const cd>();
    SampledField cap = caputo_higher_field(m.u, m.u0, u1, order, threads);

    // the Caputo rows exist from t_1 on; integrate its norm from there
    return mixed_norm(mag, p, q, w, 0) + mixed_norm(cap, p, q, w, 1);
}

// ---------------------------------------------------------------------------
// trace / extension constants
// ---------------------------------------------------------------------------

InequalityReport trace_constant(const TraceParams& par, const std::vector<EnsembleMember>& ens,
                                int threads) {
    par.validate();
    InequalityReport rep;
    rep.id = "trace";
    rep.criterion = "besov norm of dt^n u(0) bounded by the solution-space norm";
    double th = par.theta(par.n);
    rep.set_stat("theta_n", th);

    LPFamily fam = build_lp_family(ens.at(0).u.sgrid);
    BesovParams bp;
    bp.s = 2.0 * th;
    bp.p = par.p;
    bp.q = par.q;
    bp.w = WeightSpec{par.mu, par.nu};
    FracOrder order{par.alpha, par.k};
    WeightSpec w{par.mu, par.nu};

    std::vector<SamplePoint> pts(ens.size());
    parallel_for(ens.size(), [&](size_t i) {
        const EnsembleMember& m = ens[i];
        std::span<const cd> tr = (par.n == 0) ? std::span<const cd>(m.u0)
                                              : std::span<const cd>(m.u1);
        double lhs = besov_norm(tr, bp, fam);
        double rhs = solution_space_norm(m, order, par.p, par.q, w, SolutionForm::NonDivergence, 1);
        pts[i] = SamplePoint{m.label, lhs, rhs, rhs != 0.0 ? lhs / rhs : 0.0};
    }, threads);
    for (auto& s : pts) {
        if (s.rhs == 0.0) continue; // zero members carry no information
        rep.add(s.label, s.lhs, s.rhs);
    }
    return rep;
}

InequalityReport trace_constant_div(const TraceParams& par,
                                    const std::vector<EnsembleMember>& ens, int threads) {
    std::vector<EnsembleMember> lifted(ens.size());
    parallel_for(ens.size(), [&](size_t i) { lifted[i] = lift_member(ens[i]); }, threads);
    InequalityReport rep = trace_constant(par, lifted, threads);
    rep.id = "trace-div";
    rep.criterion =
        "divergence-form trace bound via the (1-Lap)^{-1/2} reduction (Besov index 2theta-1)";
    return rep;
}

double refinement_drift(const InequalityReport& coarse, const InequalityReport& fine) {
    if (coarse.max_ratio <= 0.0 || fine.max_ratio <= 0.0)
        throw param_error("refinement_drift: nonpositive max ratios");
    return std::abs(std::log(fine.max_ratio / coarse.max_ratio));
}

InequalityReport extension_constant(const FracOrder& order, double p, double q,
                                    const WeightSpec& w,
                                    const std::vector<std::vector<cd>>& u0s,
                                    const std::vector<std::vector<cd>>& u1s,
                                    const TimeGrid& tg, const SpaceGrid& sg, SolutionForm form,
                                    int threads) {
    order.validate();
    if (!(order.alpha > (1.0 + w.mu) / q))
        throw param_error("extension_constant: requires alpha > (1+mu)/q");
    if (order.k == 1 && u1s.size() != u0s.size())
        throw param_error("extension_constant: u1 ensemble required for k = 1");

    double beta = order.total();
    double th0 = 1.0 - (1.0 + w.mu) / (q * beta);
    double th1 = th0 - 1.0 / beta; // only used for k = 1
    InequalityReport rep;
    rep.id = form == SolutionForm::Divergence ? "extension-div" : "extension";
    rep.criterion = "solution-space norm of the solver output bounded by the data Besov norm";
    rep.set_stat("theta0", th0);
    if (order.k == 1) rep.set_stat("theta1", th1);

    LPFamily fam = build_lp_family(sg);
    BesovParams b0;
    b0.s = 2.0 * th0;
    b0.p = p;
    b0.q = q;
    b0.w = w;
    BesovParams b1 = b0;
    b1.s = 2.0 * th1;

    std::vector<SamplePoint> pts(u0s.size());
    parallel_for(u0s.size(), [&](size_t i) {
        std::vector<cd> u0 = u0s[i];
        std::vector<cd> u1 = order.k == 1 ? u1s[i] : std::vector<cd>();
        if (form == SolutionForm::Divergence) {
            u0 = bessel_potential(u0, sg, -1.0);
            if (order.k == 1) u1 = bessel_potential(u1, sg, -1.0);
        }
        IVPProblem prob;
        prob.order = order;
        prob.tgrid = tg;
        prob.sgrid = sg;
        prob.u0 = u0;
        prob.u1 = u1;
        SampledField U = solve_ivp(prob, 1);
        EnsembleMember m;
        m.u = std::move(U);
        m.u0 = u0;
        m.u1 = u1;
        double lhs = solution_space_norm(m, order, p, q, w, SolutionForm::NonDivergence, 1);
        double rhs = besov_norm(u0, b0, fam);
        if (order.k == 1) rhs += besov_norm(u1, b1, fam);
        pts[i] = SamplePoint{"data#" + std::to_string(i), lhs, rhs,
                             rhs != 0.0 ? lhs / rhs : 0.0};
    }, threads);
    for (auto& s : pts) {
        if (s.rhs == 0.0) continue;
        rep.add(s.label, s.lhs, s.rhs);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// mollifier decomposition
// ---------------------------------------------------------------------------

SolutionEvaluator::SolutionEvaluator(const IVPProblem& prob) : prob_(prob) {
    prob_.validate();
    u0hat_ = dft_forward(prob_.u0, prob_.sgrid);
    if (prob_.order.k == 1) u1hat_ = dft_forward(prob_.u1, prob_.sgrid);
}

std::vector<cd> SolutionEvaluator::symbol_slice(double s, bool derivative) const {
    const SpaceGrid& g = prob_.sgrid;
    const UniqueFrequencies& uf = unique_frequencies(g);
    double beta = prob_.order.total();
    double sc = std::min(s, prob_.tgrid.T); // constant continuation past T
    double tpow = std::pow(sc, beta);
    MittagLefflerParams p1{beta, 1.0};
    std::vector<cd> spec(u0hat_.size());
    if (prob_.order.k == 0) {
        if (!derivative) {
            std::vector<double> tab(uf.values.size());
            for (size_t m = 0; m < tab.size(); ++m) tab[m] = ml_eval(p1, uf.values[m] * tpow);
            for (size_t x = 0; x < spec.size(); ++x) spec[x] = u0hat_[x] * tab[uf.slot[x]];
        } else {
            throw param_error("SolutionEvaluator: time derivative only defined for k = 1");
        }
    } else {
        MittagLefflerParams p2{beta, 2.0};
        MittagLefflerParams pb{beta, beta};
        std::vector<double> tab0(uf.values.size()), tabx(uf.values.size());
        for (size_t m = 0; m < tab0.size(); ++m) {
            double v = uf.values[m] * tpow;
            if (!derivative) {
                tab0[m] = ml_eval(p1, v);
                tabx[m] = sc * ml_eval(p2, v);
            } else {
                // d/ds E_b(-l s^b) = -l s^{b-1} E_{b,b}(-l s^b);
                // d/ds [s E_{b,2}(-l s^b)] = E_b(-l s^b)
                tab0[m] = -uf.values[m] * std::pow(sc, beta - 1.0) * ml_eval(pb, v);
                tabx[m] = ml_eval(p1, v);
            }
        }
        for (size_t x = 0; x < spec.size(); ++x)
            spec[x] = u0hat_[x] * tab0[uf.slot[x]] + u1hat_[x] * tabx[uf.slot[x]];
    }
    return dft_inverse(spec, g);
}

std::vector<cd> SolutionEvaluator::u_slice(double s) const { return symbol_slice(s, false); }

std::vector<cd> SolutionEvaluator::ia_iknf_slice(double s, int n) const {
    const SpaceGrid& g = prob_.sgrid;
    double sc = std::min(s, prob_.tgrid.T);
    size_t N = g.size();
    std::vector<cd> out(N);
    if (prob_.order.k == 0) {
        // I^a f = u(s) - u0
        std::vector<cd> us = u_slice(sc);
        for (size_t x = 0; x < N; ++x) out[x] = us[x] - prob_.u0[x];
    } else if (n == 1) {
        // I^a f = dt u(s) - u1
        std::vector<cd> dus = symbol_slice(sc, true);
        for (size_t x = 0; x < N; ++x) out[x] = dus[x] - prob_.u1[x];
    } else {
        // I^a I^1 f = u(s) - u0 - s u1
        std::vector<cd> us = u_slice(sc);
        for (size_t x = 0; x < N; ++x) out[x] = us[x] - prob_.u0[x] - sc * prob_.u1[x];
    }
    return out;
}

std::vector<cd> SolutionEvaluator::trace(int n) const {
    if (n == 0) return prob_.u0;
    if (n == 1 && prob_.order.k == 1) return prob_.u1;
    throw param_error("SolutionEvaluator: trace index out of range");
}

std::pair<std::vector<cd>, std::vector<cd>> trace_decomposition(const SolutionEvaluator& ev,
                                                                double eps,
                                                                const MollifierSpec& mol, int n) {
    int k = ev.k();
    if (n < 0 || n > k) throw param_error("trace_decomposition: need 0 <= n <= k");
    double beta = mol.beta();
    if (std::abs(beta - (k + ev.alpha())) > 1e-12)
        throw param_error("trace_decomposition: mollifier scaling must be beta = k + alpha");
    double Tb = std::pow(ev.horizon(), beta);
    if (!(eps > 0.0 && eps < Tb)) throw param_error("trace_decomposition: requires eps < T^beta");

    const SpaceGrid& g = ev.grid();
    size_t N = g.size();
    double E = std::pow(eps, 1.0 / beta);
    // the sigma integrands carry the mollifier bump: a 64-point rule keeps
    // that factor at ~1e-12; the rho panels are smooth and a short rule does
    static const GaussRule rule = gauss_legendre(64);
    static const GaussRule rho_rule = gauss_legendre(10);

    // U_{n,1} = E^{-n} int_{1/2}^1 u(E s) eta^{(n)}(-s) ds
    std::vector<cd> U1(N, cd(0.0));
    for (size_t m = 0; m < rule.nodes.size(); ++m) {
        double s = 0.75 + 0.25 * rule.nodes[m];
        double wgt = 0.25 * rule.weights[m];
        double win = (n == 0) ? mol.eta(-s) : mol.eta_prime(-s); // eta^{(n)} at -s
        if (win == 0.0) continue;
        std::vector<cd> us = ev.u_slice(E * s);
        double c = wgt * win / std::pow(E, double(n));
        for (size_t x = 0; x < N; ++x) U1[x] += c * us[x];
    }

    // inner integral int_{1/2}^1 G(rho s) zeta'(-s) ds at one rho
    std::vector<cd> u1t;
    if (k == 1 && n == 0) u1t = ev.trace(1);
    auto inner = [&](double rho, std::vector<cd>& acc) {
        std::fill(acc.begin(), acc.end(), cd(0.0));
        for (size_t m = 0; m < rule.nodes.size(); ++m) {
            double s = 0.75 + 0.25 * rule.nodes[m];
            double wgt = 0.25 * rule.weights[m] * mol.zeta_prime(-s);
            std::vector<cd> G = ev.ia_iknf_slice(rho * s, n);
            if (k == 1 && n == 0) {
                // R_0(s,.) = s * dt u(0, .)
                double rs = rho * s;
                for (size_t x = 0; x < N; ++x) G[x] += rs * u1t[x];
            }
            for (size_t x = 0; x < N; ++x) acc[x] += wgt * G[x];
        }
    };

    // U_{n,0} = -int_0^E rho^{-1} inner(rho) drho over dyadic panels toward 0
    std::vector<cd> U0(N, cd(0.0));
    std::vector<cd> accum(N), panel(N);
    double hi = E;
    double max_accum = 0.0;
    for (int panel_i = 0; panel_i < 60; ++panel_i) {
        double lo = 0.5 * hi;
        std::fill(panel.begin(), panel.end(), cd(0.0));
        for (size_t m = 0; m < rho_rule.nodes.size(); ++m) {
            double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rho_rule.nodes[m];
            double wgt = 0.5 * (hi - lo) * rho_rule.weights[m] / rho;
            inner(rho, accum);
            for (size_t x = 0; x < N; ++x) panel[x] += wgt * accum[x];
        }
        double pm = 0.0;
        for (size_t x = 0; x < N; ++x) pm = std::max(pm, std::abs(panel[x]));
        for (size_t x = 0; x < N; ++x) U0[x] -= panel[x];
        max_accum = std::max(max_accum, pm);
        hi = lo;
        if (panel_i >= 8 && pm < 1e-7 * std::max(max_accum, 1e-300)) break;
    }
    return {U0, U1};
}

// ---------------------------------------------------------------------------
// kernel decay envelopes
// ---------------------------------------------------------------------------

InequalityReport kernel_decay_envelope(DecayKernel kind, double order, double kappa, int j_lo,
                                       int j_hi, std::span<const double> ts,
                                       std::span<const cd> f, const SpaceGrid& g, double p,
                                       double nu) {
    double beta = order, alpha = order;
    if (kind != DecayKernel::Subdiffusion) {
        if (!(order > 1.0 && order < 2.0))
            throw param_error("kernel_decay_envelope: superdiffusion requires beta in (1,2)");
        alpha = order - 1.0;
    } else if (!(order > 0.0 && order < 1.0)) {
        throw param_error("kernel_decay_envelope: subdiffusion requires alpha in (0,1)");
    }
    double kap_hi = (kind == DecayKernel::Subdiffusion)  ? alpha
                    : (kind == DecayKernel::Superdiffusion) ? beta
                                                            : alpha;
    if (!(kappa > 0.0 && kappa < kap_hi))
        throw param_error("kernel_decay_envelope: kappa outside the admissible range");

    LPFamily fam = build_lp_family(g);
    if (j_lo < 1 || j_hi > fam.j_max || j_lo > j_hi)
        throw param_error("kernel_decay_envelope: shell range outside the family");

    std::vector<cd> fhat = dft_forward(f, g);
    double fnorm = spatial_lp_norm(f, g, p, nu);
    if (fnorm == 0.0) throw param_error("kernel_decay_envelope: zero test field");

    const UniqueFrequencies& uf = unique_frequencies(g);
    MittagLefflerParams p1{beta, 1.0};
    MittagLefflerParams p2{beta, 2.0};

    InequalityReport rep;
    rep.id = "kernel-decay";
    rep.criterion = "shell measurements bounded by the fitted dyadic envelope";
    rep.set_stat("kappa", kappa);

    for (int j = j_lo; j <= j_hi; ++j) {
        std::vector<double> lx, ly;
        for (double t : ts) {
            double tpow = std::pow(t, beta);
            std::vector<double> sym(uf.values.size());
            for (size_t m = 0; m < sym.size(); ++m) {
                double v = uf.values[m] * tpow;
                sym[m] = (kind == DecayKernel::SuperdiffusionTilde) ? t * ml_eval(p2, v)
                                                                    : ml_eval(p1, v);
            }
            std::vector<cd> spec(fhat.size());
            const std::vector<double>& shell = fam.shells[j - 1];
            for (size_t x = 0; x < spec.size(); ++x)
                spec[x] = fhat[x] * shell[uf.slot[x]] * sym[uf.slot[x]];
            double meas = spatial_lp_norm(dft_inverse(spec, g), g, p, nu);

            double envelope;
            double decay = std::exp2(-2.0 * kappa * j / beta) * std::pow(t, -kappa);
            if (kind == DecayKernel::SuperdiffusionTilde)
                envelope = std::min(std::exp2(-2.0 * j / beta) * decay, t);
            else
                envelope = std::min(decay, 1.0);
            char label[64];
            std::snprintf(label, sizeof(label), "j=%d,t=%.6g", j, t);
            rep.add(label, meas, envelope * fnorm);

            // collect the decaying branch for the slope fit
            if (t >= 4.0 * std::exp2(-2.0 * j / beta) && meas > 0.0) {
                lx.push_back(std::log(t));
                ly.push_back(std::log(meas));
            }
        }
        if (lx.size() >= 4) {
            LineFit fit = fit_line(lx, ly);
            rep.set_stat("slope_j" + std::to_string(j), fit.slope);
        }
    }

    // low-pass branch: flat bound (or linear-in-t for the tilde kernel)
    double low_max = 0.0;
    for (double t : ts) {
        double tpow = std::pow(t, beta);
        std::vector<double> sym(uf.values.size());
        for (size_t m = 0; m < sym.size(); ++m) {
            double v = uf.values[m] * tpow;
            sym[m] = (kind == DecayKernel::SuperdiffusionTilde) ? t * ml_eval(p2, v)
                                                                : ml_eval(p1, v);
        }
        std::vector<cd> spec(fhat.size());
        for (size_t x = 0; x < spec.size(); ++x)
            spec[x] = fhat[x] * fam.lowpass[uf.slot[x]] * sym[uf.slot[x]];
        double meas = spatial_lp_norm(dft_inverse(spec, g), g, p, nu);
        double env = (kind == DecayKernel::SuperdiffusionTilde) ? t * fnorm : fnorm;
        low_max = std::max(low_max, meas / env);
    }
    rep.set_stat("lowpass_max_ratio", low_max);
    return rep;
}

InequalityReport mixed_kernel_constant(double alpha, double p, double q, const WeightSpec& w,
                                       const std::vector<std::vector<cd>>& fs, const TimeGrid& tg,
                                       const SpaceGrid& sg, int threads) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("mixed_kernel_constant: alpha in (0,1)");
    if (!(alpha > (1.0 + w.mu) / q))
        throw param_error("mixed_kernel_constant: requires alpha > (1+mu)/q");
    double s = -2.0 * (1.0 + w.mu) / (q * alpha);

    LPFamily fam = build_lp_family(sg);
    BesovParams bp;
    bp.s = s;
    bp.p = p;
    bp.q = q;
    bp.w = w;

    InequalityReport rep;
    rep.id = "prop-mixed-kernel";
    rep.criterion = "||P_a * f||_{L_{p,q,w}} bounded by the negative-order Besov norm of f";
    rep.set_stat("besov_index", s);

    std::vector<SamplePoint> pts(fs.size());
    parallel_for(fs.size(), [&](size_t i) {
        IVPProblem prob;
        prob.order = FracOrder{alpha, 0};
        prob.tgrid = tg;
        prob.sgrid = sg;
        prob.u0 = fs[i];
        SampledField U = solve_subdiffusion(prob, 1);
        double lhs = mixed_norm(U, p, q, w);
        double rhs = besov_norm(fs[i], bp, fam);
        pts[i] = SamplePoint{"f#" + std::to_string(i), lhs, rhs, rhs != 0.0 ? lhs / rhs : 0.0};
    }, threads);
    for (auto& sp : pts)
        if (sp.rhs != 0.0) rep.add(sp.label, sp.lhs, sp.rhs);
    return rep;
}

// ---------------------------------------------------------------------------
// sub-critical demonstrations
// ---------------------------------------------------------------------------

InequalityReport subcritical_counterexample(double alpha, double p, double q, double mu,
                                            std::span<const int> ns, const TimeGrid& tg,
                                            const SpaceGrid& sg, std::span<const cd> bump) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw param_error("subcritical_counterexample: alpha in (0,1)");
    if (!(alpha < (1.0 + mu) / q))
        throw param_error(
            "subcritical_counterexample: regime error, requires alpha < (1+mu)/q (the trace "
            "inequality holds otherwise)");
    if (ns.empty()) throw param_error("subcritical_counterexample: empty index set");

    double phi_norm = spatial_lp_norm(bump, sg, p, 0.0);
    if (phi_norm == 0.0) throw param_error("subcritical_counterexample: zero bump");

    std::vector<double> t = tg.nodes();
    InequalityReport rep;
    rep.id = "subcritical-counterexample";
    rep.criterion =
        "caputo distance of u_n = phi, v_n = t^{1/n} phi collapses while traces stay apart";

    double first_ratio = 0.0, last_ratio = 0.0;
    double prev_dnorm = -1.0;
    bool monotone = true;
    for (size_t idx = 0; idx < ns.size(); ++idx) {
        int n = ns[idx];
        if (n < 1) throw param_error("subcritical_counterexample: n must be >= 1");
        // time part of u_n - v_n
        std::vector<double> wn(t.size());
        for (size_t i = 0; i < t.size(); ++i) wn[i] = 1.0 - std::pow(t[i], 1.0 / n);
        // subcritical Caputo: no trace subtraction (u0 = 0 in the discrete op)
        std::vector<double> dn = caputo_derivative(t, wn, 0.0, alpha);
        double dnorm = weighted_lq_norm(t, dn, q, mu, 1) * phi_norm;
        double wnorm = weighted_lq_norm(t, wn, q, mu, 0) * phi_norm;
        double solution_norm = dnorm + wnorm;
        double ratio = phi_norm / solution_norm;
        rep.add("n=" + std::to_string(n), phi_norm, solution_norm);
        if (idx == 0) first_ratio = ratio;
        last_ratio = ratio;
        if (prev_dnorm >= 0.0 && dnorm > prev_dnorm * (1.0 + 1e-9)) monotone = false;
        prev_dnorm = dnorm;
    }
    rep.set_stat("ratio_growth", last_ratio / first_ratio);
    rep.set_stat("caputo_norm_monotone", monotone ? 1.0 : 0.0);
    return rep;
}

InequalityReport besov_necessity(double alpha, double p, double q, double mu, int j_lo, int j_hi,
                                 const SpaceGrid& g) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("besov_necessity: alpha in (0,1)");
    if (std::abs(g.L - M_PI) > 1e-12)
        throw param_error("besov_necessity: needs the L = pi lattice so |xi| = 2^j is exact");
    double theta = 1.0 - (1.0 + mu) / (q * alpha);

    LPFamily fam = build_lp_family(g);
    if (j_lo < 1 || j_hi > fam.j_max || j_lo > j_hi)
        throw param_error("besov_necessity: shell range outside the family");

    BesovParams bp;
    bp.s = 2.0 * theta;
    bp.p = p;
    bp.q = q;
    bp.w = WeightSpec{mu, 0.0};

    InequalityReport rep;
    rep.id = "besov-necessity";
    rep.criterion = "single-shell ratio ||u0||_p / ||u0||_{B^{2theta}} grows like 2^{-2theta j}";
    rep.set_stat("theta", theta);

    double prev = 0.0;
    double growth_min = HUGE_VAL, growth_max = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
        std::vector<cd> u0 = preset_single_mode(g, 1 << j);
        double lp = spatial_lp_norm(u0, g, p, 0.0);
        double bn = besov_norm(u0, bp, fam);
        rep.add("j=" + std::to_string(j), lp, bn);
        double ratio = lp / bn;
        if (j > j_lo) {
            double growth = ratio / prev;
            growth_min = std::min(growth_min, growth);
            growth_max = std::max(growth_max, growth);
        }
        prev = ratio;
    }
    rep.set_stat("per_level_growth_min", growth_min);
    rep.set_stat("per_level_growth_max", growth_max);
    rep.set_stat("expected_growth", std::exp2(-2.0 * theta));
    return rep;
}

} // namespace fractrace
