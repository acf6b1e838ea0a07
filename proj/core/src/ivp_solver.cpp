#include "fractrace/ivp_solver.hpp"

#include <algorithm>
#include <cmath>

#include "fractrace/mittag_leffler.hpp"

namespace fractrace {

namespace {

// multiplier table over unique |xi|^2 for one time node
std::vector<double> ml_table(const SpaceGrid& g, double beta, double c, double tpow) {
    const UniqueFrequencies& uf = unique_frequencies(g);
    MittagLefflerParams p;
    p.beta = beta;
    p.c = c;
    std::vector<double> table(uf.values.size());
    for (size_t s = 0; s < table.size(); ++s) table[s] = ml_eval(p, uf.values[s] * tpow);
    return table;
}

} // namespace

SampledField solve_subdiffusion(const IVPProblem& prob, int threads) {
    prob.validate();
    if (prob.order.k != 0) throw param_error("solve_subdiffusion: requires k = 0");
    const SpaceGrid& g = prob.sgrid;
    const UniqueFrequencies& uf = unique_frequencies(g);
    std::vector<cd> u0hat = dft_forward(prob.u0, g);
    SampledField out(prob.tgrid, g);

    std::copy(prob.u0.begin(), prob.u0.end(), out.slice(0).begin());
    double alpha = prob.order.alpha;
    parallel_for(prob.tgrid.M, [&](size_t row) {
        size_t i = row + 1;
        double t = prob.tgrid.node(int(i));
        std::vector<double> table = ml_table(g, alpha, 1.0, std::pow(t, alpha));
        std::vector<cd> spec(u0hat.size());
        for (size_t x = 0; x < spec.size(); ++x) spec[x] = u0hat[x] * table[uf.slot[x]];
        std::vector<cd> slice = dft_inverse(spec, g);
        std::copy(slice.begin(), slice.end(), out.slice(i).begin());
    }, threads);
    return out;
}

SampledField solve_superdiffusion(const IVPProblem& prob, int threads) {
    prob.validate();
    if (prob.order.k != 1) throw param_error("solve_superdiffusion: requires k = 1 (u1 supplied)");
    const SpaceGrid& g = prob.sgrid;
    const UniqueFrequencies& uf = unique_frequencies(g);
    std::vector<cd> u0hat = dft_forward(prob.u0, g);
    std::vector<cd> u1hat = dft_forward(prob.u1, g);
    SampledField out(prob.tgrid, g);

    std::copy(prob.u0.begin(), prob.u0.end(), out.slice(0).begin());
    double beta = prob.order.total();
    parallel_for(prob.tgrid.M, [&](size_t row) {
        size_t i = row + 1;
        double t = prob.tgrid.node(int(i));
        double tpow = std::pow(t, beta);
        std::vector<double> tab0 = ml_table(g, beta, 1.0, tpow);
        std::vector<double> tab1 = ml_table(g, beta, 2.0, tpow);
        std::vector<cd> spec(u0hat.size());
        for (size_t x = 0; x < spec.size(); ++x)
            spec[x] = u0hat[x] * tab0[uf.slot[x]] + u1hat[x] * (t * tab1[uf.slot[x]]);
        std::vector<cd> slice = dft_inverse(spec, g);
        std::copy(slice.begin(), slice.end(), out.slice(i).begin());
    }, threads);
    return out;
}

std::vector<cd> spectral_laplacian(std::span<const cd> slice, const SpaceGrid& g) {
    std::vector<cd> spec = dft_forward(slice, g);
    apply_multiplier(spec, g, [](double xi2) { return -xi2; });
    return dft_inverse(spec, g);
}

double residual(const SampledField& U, const IVPProblem& prob, double p, double q,
                const WeightSpec& w, int threads) {
    U.check_shape();
    prob.validate();
    if (!(U.sgrid == prob.sgrid)) throw param_error("residual: field/problem grid mismatch");

    std::vector<cd> lap0 = spectral_laplacian(prob.u0, prob.sgrid);
    double den_space = spatial_lp_norm(lap0, prob.sgrid, p, w.nu);
    if (den_space == 0.0) throw param_error("residual: Lap u0 vanishes");

    std::span<const cd> u1 = prob.order.k == 1 ? std::span<const cd>(prob.u1)
                                               : std::span<const cd>();
    SampledField dtu = caputo_higher_field(U, prob.u0, u1, prob.order, threads);

    SampledField res(U.tgrid, U.sgrid);
    parallel_for(U.num_slices(), [&](size_t i) {
        std::vector<cd> lap = spectral_laplacian(U.slice(i), U.sgrid);
        auto r = res.slice(i);
        auto d = dtu.slice(i);
        for (size_t x = 0; x < lap.size(); ++x) r[x] = d[x] - lap[x];
    }, threads);

    // exclude [0, t_2): the Caputo rows start at t_1 and t_1 is lowest order
    double num = mixed_norm(res, p, q, w, 2);
    // same time window on the denominator, so a time-constant residual field
    // of size ||Lap u0|| normalizes to exactly 1
    std::vector<double> t = U.tgrid.nodes();
    std::vector<double> ones(t.size(), 1.0);
    double den = den_space * weighted_lq_norm(t, ones, q, w.mu, 2);
    return num / den;
}

ContinuityFit initial_continuity(const SampledField& U, std::span<const cd> u0, double p,
                                 double alpha, double q, double mu, double nu) {
    U.check_shape();
    if (u0.size() != U.slice_size()) throw param_error("initial_continuity: u0 shape mismatch");
    if (!(alpha > (1.0 + mu) / q))
        throw param_error("initial_continuity: requires alpha > (1+mu)/q");
    if (!(alpha > 1.0 / q))
        throw param_error("initial_continuity: requires alpha > 1/q");

    double ref = spatial_lp_norm(u0, U.sgrid, p, nu);
    std::vector<double> lx, ly;
    for (size_t i = 1; i < U.num_slices(); ++i) {
        double t = U.tgrid.node(int(i));
        if (t > U.tgrid.T / 4.0) break;
        auto s = U.slice(i);
        std::vector<cd> diff(s.size());
        for (size_t x = 0; x < s.size(); ++x) diff[x] = s[x] - u0[x];
        double e = spatial_lp_norm(diff, U.sgrid, p, nu);
        if (e > 1e-13 * std::max(ref, 1e-300)) {
            lx.push_back(std::log(t));
            ly.push_back(std::log(e));
        }
    }
    ContinuityFit out;
    if (lx.size() < 3) {
        out.trivial = true;
        return out;
    }
    out.points = int(lx.size());
    out.fit = fit_line(lx, ly);
    return out;
}

} // namespace fractrace
