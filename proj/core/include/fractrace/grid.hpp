#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fractrace/errors.hpp"

namespace fractrace {

// Periodic spatial torus [-L, L)^d sampled on n points per axis. n is a
// power of two so the spectral transforms stay radix-2.
struct SpaceGrid {
    int d = 1;      // dimension, 1..3
    double L = 16.0; // half-period
    int n = 256;    // points per axis

    SpaceGrid() = default;
    SpaceGrid(int d_, double L_, int n_) : d(d_), L(L_), n(n_) { validate(); }

    void validate() const {
        if (d < 1 || d > 3) throw param_error("SpaceGrid: d must be 1, 2 or 3");
        if (L <= 0.0) throw param_error("SpaceGrid: L must be positive");
        if (n < 8 || (n & (n - 1)) != 0) throw param_error("SpaceGrid: n must be a power of two >= 8");
    }

    double spacing() const { return 2.0 * L / n; }
    double cell_volume() const { return std::pow(spacing(), d); }
    size_t size() const {
        size_t s = 1;
        for (int i = 0; i < d; ++i) s *= size_t(n);
        return s;
    }
    // coordinate of index i along one axis
    double coord(int i) const { return -L + spacing() * i; }
    // signed frequency index of FFT bin k along one axis
    int freq_index(int k) const { return (k < n / 2) ? k : k - n; }
    // frequency xi = (pi/L) * freq_index
    double freq(int k) const { return M_PI / L * freq_index(k); }
    double xi_max() const { return M_PI / L * (n / 2) * std::sqrt(double(d)); }

    // decompose flat index into per-axis indices
    std::array<int, 3> unflatten(size_t idx) const {
        std::array<int, 3> out{0, 0, 0};
        for (int ax = d - 1; ax >= 0; --ax) {
            out[ax] = int(idx % n);
            idx /= n;
        }
        return out;
    }

    bool operator==(const SpaceGrid& o) const { return d == o.d && L == o.L && n == o.n; }
};

// Graded time grid on [0, T]: t_i = T (i/M)^r. r = 1 is uniform; the default
// grading r = max(1, 2/alpha) is chosen where fractional operators are built.
struct TimeGrid {
    double T = 1.0;
    int M = 512;
    double r = 1.0;

    TimeGrid() = default;
    TimeGrid(double T_, int M_, double r_) : T(T_), M(M_), r(r_) { validate(); }

    void validate() const {
        if (T <= 0.0) throw param_error("TimeGrid: T must be positive");
        if (M < 2) throw param_error("TimeGrid: M must be >= 2");
        if (r < 1.0) throw param_error("TimeGrid: grading exponent r must be >= 1");
    }

    double node(int i) const { return T * std::pow(double(i) / M, r); }

    std::vector<double> nodes() const {
        std::vector<double> t(M + 1);
        for (int i = 0; i <= M; ++i) t[i] = node(i);
        t[M] = T;
        return t;
    }

    // 2/alpha resolves the t^alpha layer; the cap keeps t_1 = T M^{-r} away
    // from the rounding floor where divided differences turn into noise
    static double default_grading(double alpha) {
        return std::min(4.0, std::max(1.0, 2.0 / alpha));
    }

    bool operator==(const TimeGrid& o) const { return T == o.T && M == o.M && r == o.r; }
};

} // namespace fractrace
