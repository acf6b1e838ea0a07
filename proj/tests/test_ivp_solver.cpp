#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "fractrace/ivp_solver.hpp"
#include "fractrace/mittag_leffler.hpp"
#include "oracles.hpp"

using namespace fractrace;

namespace {

IVPProblem make_problem(double alpha, int k, int M, int n, double L = 16.0, double T = 1.0) {
    IVPProblem prob;
    prob.order = FracOrder{alpha, k};
    prob.tgrid = TimeGrid(T, M, TimeGrid::default_grading(alpha));
    prob.sgrid = SpaceGrid(1, L, n);
    prob.u0 = preset_gaussian(prob.sgrid, 1.0);
    if (k == 1) prob.u1 = preset_gaussian(prob.sgrid, 1.4, 0.5);
    return prob;
}

} // namespace

TEST_CASE("subdiffusion diagonalizes: single mode follows ml_eval pointwise") {
    SpaceGrid sg(1, M_PI, 64);
    IVPProblem prob;
    prob.order = FracOrder{0.6, 0};
    prob.tgrid = TimeGrid(1.0, 32, 2.0);
    prob.sgrid = sg;
    prob.u0 = preset_single_mode(sg, 1); // |xi|^2 = 1
    SampledField U = solve_subdiffusion(prob);
    MittagLefflerParams p;
    p.beta = 0.6;
    for (size_t i = 0; i <= 32; ++i) {
        double t = prob.tgrid.node(int(i));
        double factor = (i == 0) ? 1.0 : ml_eval(p, std::pow(t, 0.6));
        auto s = U.slice(i);
        for (size_t x = 0; x < s.size(); ++x)
            CHECK(std::abs(s[x] - factor * prob.u0[x]) < 1e-12);
    }
    // U(0, .) = u0 exactly (bitwise)
    CHECK(std::memcmp(U.slice(0).data(), prob.u0.data(), prob.u0.size() * sizeof(cd)) == 0);
}

TEST_CASE("superdiffusion structure") {
    SpaceGrid sg(1, M_PI, 64);

    SUBCASE("u1 = 0 reduces to the E_beta factor") {
        IVPProblem prob;
        prob.order = FracOrder{0.5, 1};
        prob.tgrid = TimeGrid(1.0, 16, 1.0);
        prob.sgrid = sg;
        prob.u0 = preset_single_mode(sg, 2);
        prob.u1.assign(sg.size(), cd(0.0));
        SampledField U = solve_superdiffusion(prob);
        MittagLefflerParams p;
        p.beta = 1.5;
        for (size_t i = 1; i <= 16; ++i) {
            double t = prob.tgrid.node(int(i));
            double factor = ml_eval(p, 4.0 * std::pow(t, 1.5));
            auto s = U.slice(i);
            for (size_t x = 0; x < s.size(); ++x)
                CHECK(std::abs(s[x] - factor * prob.u0[x]) < 1e-11);
        }
    }
    SUBCASE("u0 = 0, constant u1 = a: pure drift U = a t") {
        IVPProblem prob;
        prob.order = FracOrder{0.5, 1};
        prob.tgrid = TimeGrid(1.0, 16, 1.0);
        prob.sgrid = sg;
        prob.u0.assign(sg.size(), cd(0.0));
        prob.u1.assign(sg.size(), cd(0.7)); // xi = 0 mode
        SampledField U = solve_superdiffusion(prob);
        for (size_t i = 0; i <= 16; ++i) {
            double t = prob.tgrid.node(int(i));
            auto s = U.slice(i);
            for (size_t x = 0; x < s.size(); ++x) CHECK(std::abs(s[x] - 0.7 * t) < 1e-12);
        }
    }
    SUBCASE("missing u1 is a parameter error") {
        IVPProblem prob;
        prob.order = FracOrder{0.5, 1};
        prob.tgrid = TimeGrid(1.0, 8, 1.0);
        prob.sgrid = sg;
        prob.u0 = preset_single_mode(sg, 1);
        CHECK_THROWS_AS(prob.validate(), param_error);
    }
    SUBCASE("discrete dt U(0,.) recovers u1 at grid order") {
        IVPProblem prob = make_problem(0.5, 1, 256, 128);
        SampledField U = solve_superdiffusion(prob);
        SampledField dt = time_derivative_field(U);
        double err = 0.0, scale = 0.0;
        auto d0 = dt.slice(0);
        for (size_t x = 0; x < d0.size(); ++x) {
            err = std::max(err, std::abs(d0[x] - prob.u1[x]));
            scale = std::max(scale, std::abs(prob.u1[x]));
        }
        CHECK(err < 0.05 * scale);
    }
}

TEST_CASE("spectral laplacian") {
    SpaceGrid g(1, M_PI, 64);

    SUBCASE("constants map to zero") {
        std::vector<cd> f(g.size(), cd(3.0));
        std::vector<cd> lap = spectral_laplacian(f, g);
        for (const cd& v : lap) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("single mode |xi|^2 = 4 scales by -4") {
        std::vector<cd> f = preset_single_mode(g, 2);
        std::vector<cd> lap = spectral_laplacian(f, g);
        for (size_t i = 0; i < f.size(); ++i) CHECK(std::abs(lap[i] + 4.0 * f[i]) < 1e-12);
    }
    SUBCASE("gaussian matches the 5-point stencil to O(h^2)") {
        SpaceGrid gg(1, 16.0, 256);
        std::vector<cd> f = preset_gaussian(gg, 1.0);
        std::vector<cd> lap = spectral_laplacian(f, gg);
        double h = gg.spacing();
        double err = 0.0;
        for (int i = 2; i < gg.n - 2; ++i) {
            double stencil = (-f[i - 2].real() + 16.0 * f[i - 1].real() - 30.0 * f[i].real() +
                              16.0 * f[i + 1].real() - f[i + 2].real()) /
                             (12.0 * h * h);
            err = std::max(err, std::abs(lap[i].real() - stencil));
        }
        CHECK(err < 1e-4); // the 5-point stencil itself is O(h^4) ~ 6e-5 here
    }
}

TEST_CASE("residual of the exact representation decreases under time refinement") {
    WeightSpec w{0.0, 0.0};
    for (double alpha : {0.4, 0.75}) {
        std::vector<double> res;
        for (int M : {64, 128, 256}) {
            IVPProblem prob = make_problem(alpha, 0, M, 64);
            SampledField U = solve_subdiffusion(prob);
            res.push_back(residual(U, prob, 2.0, 2.0, w));
        }
        CAPTURE(alpha);
        CHECK(std::log2(res[0] / res[1]) >= 0.8);
        CHECK(std::log2(res[1] / res[2]) >= 0.8);
    }
    for (double beta : {1.3, 1.6}) {
        std::vector<double> res;
        for (int M : {64, 128, 256}) {
            IVPProblem prob = make_problem(beta - 1.0, 1, M, 64);
            SampledField U = solve_superdiffusion(prob);
            res.push_back(residual(U, prob, 2.0, 2.0, w));
        }
        CAPTURE(beta);
        CHECK(std::log2(res[0] / res[1]) >= 0.8);
        CHECK(std::log2(res[1] / res[2]) >= 0.8);
    }
}

TEST_CASE("time-constant field with nonzero laplacian has unit residual") {
    IVPProblem prob = make_problem(0.5, 0, 32, 64);
    SampledField U(prob.tgrid, prob.sgrid);
    for (size_t i = 0; i < U.num_slices(); ++i)
        std::copy(prob.u0.begin(), prob.u0.end(), U.slice(i).begin());
    // Caputo of a constant vanishes: residual = ||Lap u0|| / ||Lap u0|| = 1
    CHECK(residual(U, prob, 2.0, 2.0, WeightSpec{0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("initial continuity") {
    SUBCASE("single mode: slope approaches alpha (series expansion oracle)") {
        // ||U(t) - u0|| = |1 - E_a(-l t^a)| ||u0||_p ~ (l/Gamma(1+a)) t^a
        SpaceGrid sg(1, M_PI, 64);
        IVPProblem prob;
        prob.order = FracOrder{0.6, 0};
        prob.tgrid = TimeGrid(1.0, 512, TimeGrid::default_grading(0.6));
        prob.sgrid = sg;
        prob.u0 = preset_single_mode(sg, 1);
        SampledField U = solve_subdiffusion(prob);
        ContinuityFit fit = initial_continuity(U, prob.u0, 2.0, 0.6, 2.0, 0.0);
        CHECK(!fit.trivial);
        CHECK(fit.fit.slope == doctest::Approx(0.6).epsilon(0.1));
    }
    SUBCASE("smooth data: slope within alpha +- 0.1, above the lemma floor") {
        double alpha = 0.75, q = 2.0, mu = 0.0;
        IVPProblem prob = make_problem(alpha, 0, 512, 128);
        SampledField U = solve_subdiffusion(prob);
        ContinuityFit fit = initial_continuity(U, prob.u0, 2.0, alpha, q, mu);
        CHECK(!fit.trivial);
        CHECK(std::abs(fit.fit.slope - alpha) <= 0.1);
        CHECK(fit.fit.slope >= alpha - (1.0 + mu) / q - 0.1);
    }
    SUBCASE("hypothesis guards name the violated inequality") {
        IVPProblem prob = make_problem(0.3, 0, 16, 64);
        SampledField U = solve_subdiffusion(prob);
        CHECK_THROWS_WITH_AS(initial_continuity(U, prob.u0, 2.0, 0.3, 2.0, 0.0),
                             doctest::Contains("alpha > (1+mu)/q"), param_error);
        CHECK_THROWS_WITH_AS(initial_continuity(U, prob.u0, 2.0, 0.45, 2.0, -0.5),
                             doctest::Contains("alpha > 1/q"), param_error);
    }
    SUBCASE("U identically u0 is flagged trivial") {
        IVPProblem prob = make_problem(0.75, 0, 64, 64);
        SampledField U(prob.tgrid, prob.sgrid);
        for (size_t i = 0; i < U.num_slices(); ++i)
            std::copy(prob.u0.begin(), prob.u0.end(), U.slice(i).begin());
        ContinuityFit fit = initial_continuity(U, prob.u0, 2.0, 0.75, 2.0, 0.0);
        CHECK(fit.trivial);
    }
}

TEST_CASE("mean preservation through the zero mode") {
    IVPProblem prob = make_problem(0.5, 1, 32, 64);
    SampledField U = solve_superdiffusion(prob);
    auto mean = [&](std::span<const cd> s) {
        cd acc = 0.0;
        for (const cd& v : s) acc += v;
        return acc / double(s.size());
    };
    cd m0 = mean(prob.u0), m1 = mean(prob.u1);
    for (size_t i = 0; i <= 32; ++i) {
        double t = prob.tgrid.node(int(i));
        CHECK(std::abs(mean(U.slice(i)) - (m0 + t * m1)) < 1e-12);
    }
}

TEST_CASE("deterministic pipeline: equal inputs give bit-identical fields") {
    IVPProblem prob = make_problem(0.45, 0, 48, 64);
    SampledField a = solve_subdiffusion(prob, 4);
    SampledField b = solve_subdiffusion(prob, 2); // thread count must not matter
    REQUIRE(a.values.size() == b.values.size());
    CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(cd)) == 0);
}
