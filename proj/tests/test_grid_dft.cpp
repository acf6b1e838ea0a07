#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fractrace/dft.hpp"
#include "fractrace/field.hpp"
#include "oracles.hpp"

using namespace fractrace;

namespace {

std::vector<cd> random_real_slice(const SpaceGrid& g, uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cd> f(g.size());
    for (auto& v : f) v = dist(eng);
    return f;
}

} // namespace

TEST_CASE("constant field concentrates at the zero frequency") {
    SpaceGrid g(1, M_PI, 16);
    std::vector<cd> f(g.size(), cd(1.0));
    std::vector<cd> spec = dft_forward(f, g);
    CHECK(std::abs(spec[0] - std::sqrt(16.0)) < 1e-12);
    for (size_t k = 1; k < spec.size(); ++k) CHECK(std::abs(spec[k]) < 1e-12);
}

TEST_CASE("pure tone cos(pi x / L) lands on k = +-1") {
    SpaceGrid g(1, M_PI, 16);
    std::vector<cd> f(g.size());
    for (int i = 0; i < g.n; ++i) f[i] = std::cos(M_PI * g.coord(i) / g.L);
    std::vector<cd> spec = dft_forward(f, g);
    int nonzero = 0;
    for (size_t k = 0; k < spec.size(); ++k) {
        if (std::abs(spec[k]) > 1e-12) {
            ++nonzero;
            CHECK((k == 1 || k == spec.size() - 1));
        }
    }
    CHECK(nonzero == 2);
}

TEST_CASE("round trip and direct-DFT oracle on small grids") {
    for (int d : {1, 2}) {
        int n = d == 1 ? 64 : 16;
        SpaceGrid g(d, 2.0, n);
        std::vector<cd> f = random_real_slice(g, 7 + d);

        std::vector<cd> spec = dft_forward(f, g);
        std::vector<cd> oracle = oracles::direct_dft(f, d, n);
        double derr = 0.0;
        for (size_t i = 0; i < spec.size(); ++i) derr = std::max(derr, std::abs(spec[i] - oracle[i]));
        CHECK(derr < 1e-11);

        std::vector<cd> back = dft_inverse(spec, g);
        double rerr = 0.0;
        for (size_t i = 0; i < f.size(); ++i) rerr = std::max(rerr, std::abs(back[i] - f[i]));
        CHECK(rerr < 1e-12);
    }
}

TEST_CASE("Parseval identity") {
    SpaceGrid g(2, 4.0, 32);
    std::vector<cd> f = random_real_slice(g, 11);
    std::vector<cd> spec = dft_forward(f, g);
    double a = 0.0, b = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        a += std::norm(f[i]);
        b += std::norm(spec[i]);
    }
    CHECK(std::abs(a - b) < 1e-10 * a);
}

TEST_CASE("frequency lattice values and symmetry") {
    SpaceGrid g(1, M_PI, 8);
    std::vector<double> lat = frequency_lattice(g);
    std::vector<double> expect = {0, 1, 4, 9, 16, 9, 4, 1};
    REQUIRE(lat.size() == expect.size());
    for (size_t i = 0; i < lat.size(); ++i) CHECK(lat[i] == doctest::Approx(expect[i]).epsilon(1e-14));

    SpaceGrid g2(2, 1.5, 16);
    std::vector<double> lat2 = frequency_lattice(g2);
    // tensor additivity: |xi|^2(k1,k2) = |xi1|^2 + |xi2|^2
    std::vector<double> lat1d = frequency_lattice(SpaceGrid(1, 1.5, 16));
    for (int k1 = 0; k1 < 16; ++k1)
        for (int k2 = 0; k2 < 16; ++k2)
            CHECK(lat2[size_t(k1) * 16 + k2] ==
                  doctest::Approx(lat1d[k1] + lat1d[k2]).epsilon(1e-13));

    // min = 0 attained exactly once; symmetric under k -> -k
    int zeros = 0;
    for (double v : lat) zeros += (v == 0.0);
    CHECK(zeros == 1);
    for (int k = 1; k < 8; ++k) CHECK(lat[k] == doctest::Approx(lat[(8 - k) % 8]));
}

TEST_CASE("trigonometric interpolation") {
    SpaceGrid g(1, M_PI, 32);

    SUBCASE("reproduces samples at the nodes") {
        std::vector<cd> f = preset_random_bandlimited(g, 5, 1, 2);
        std::vector<std::array<double, 3>> pts;
        for (int i = 0; i < g.n; ++i) pts.push_back({g.coord(i), 0, 0});
        std::vector<cd> vals = interpolate_space(f, g, pts);
        for (int i = 0; i < g.n; ++i) CHECK(std::abs(vals[i] - f[i]) < 1e-12);
    }

    SUBCASE("closed form: cos(pi x / L) at x = L/3") {
        std::vector<cd> f(g.size());
        for (int i = 0; i < g.n; ++i) f[i] = std::cos(M_PI * g.coord(i) / g.L);
        std::vector<std::array<double, 3>> pts{{g.L / 3.0, 0, 0}};
        std::vector<cd> vals = interpolate_space(f, g, pts);
        CHECK(std::abs(vals[0].real() - 0.5) < 1e-12);
        CHECK(std::abs(vals[0].imag()) < 1e-12);
    }

    SUBCASE("matches the direct Fourier sum at off-grid points") {
        std::vector<cd> f = preset_random_bandlimited(g, 9, 1, 2);
        std::vector<cd> spec = dft_forward(f, g);
        std::mt19937_64 eng(3);
        std::uniform_real_distribution<double> dist(-g.L, g.L * 0.999);
        for (int rep = 0; rep < 12; ++rep) {
            double x = dist(eng);
            std::vector<std::array<double, 3>> pts{{x, 0, 0}};
            cd got = interpolate_space(f, g, pts)[0];
            // direct sum with physical-convention coefficients
            cd acc = 0.0;
            for (int k = 0; k < g.n; ++k) {
                int ki = g.freq_index(k);
                cd coeff = spec[k] * ((ki & 1) ? -1.0 : 1.0) / std::sqrt(double(g.n));
                double phase = g.freq(k) * x;
                acc += coeff * cd(std::cos(phase), std::sin(phase));
            }
            CHECK(std::abs(got - acc) < 1e-10);
        }
    }

    SUBCASE("out-of-domain point raises a domain error") {
        std::vector<cd> f(g.size(), cd(1.0));
        std::vector<std::array<double, 3>> pts{{g.L, 0, 0}};
        CHECK_THROWS_AS(interpolate_space(f, g, pts), param_error);
    }
}

TEST_CASE("field serialization round trip") {
    TimeGrid tg(1.0, 4, 1.0);
    SpaceGrid sg(1, 2.0, 8);
    SampledField f(tg, sg);
    std::mt19937_64 eng(21);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& v : f.values) v = cd(dist(eng), dist(eng));
    f.realness = false;
    std::string path = "/tmp/fractrace_test_field.csv";
    save_field(f, path);
    SampledField g2 = load_field(path);
    REQUIRE(g2.values.size() == f.values.size());
    for (size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(g2.values[i] - f.values[i]) == 0.0);
    CHECK(g2.tgrid.M == f.tgrid.M);
    CHECK(g2.sgrid.n == f.sgrid.n);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(SpaceGrid(4, 1.0, 16), param_error);
    CHECK_THROWS_AS(SpaceGrid(1, 1.0, 12), param_error);
    CHECK_THROWS_AS(SpaceGrid(1, -1.0, 16), param_error);
    CHECK_THROWS_AS(TimeGrid(1.0, 4, 0.5), param_error);
    std::vector<cd> bad(7, cd(0.0));
    SpaceGrid g(1, 1.0, 8);
    CHECK_THROWS_AS(dft_forward(bad, g), param_error);
}
