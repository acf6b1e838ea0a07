#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "fractrace/grid.hpp"

namespace fractrace {

using cd = std::complex<double>;

// Unitary forward DFT of a spatial slice (1/sqrt(N) normalization, FFT bin
// ordering per axis: 0..n/2-1, -n/2..-1).
std::vector<cd> dft_forward(std::span<const cd> slice, const SpaceGrid& grid);

// Unitary inverse DFT; dft_inverse(dft_forward(f)) == f to ~1e-15.
std::vector<cd> dft_inverse(std::span<const cd> spectrum, const SpaceGrid& grid);

// |xi|^2 for every lattice point, in the same flat FFT ordering as spectra.
std::vector<double> frequency_lattice(const SpaceGrid& grid);

// Sorted unique values of |xi|^2 together with the map lattice -> unique slot.
// Multiplier tables are built per unique value (large savings in d = 1).
struct UniqueFrequencies {
    std::vector<double> values;     // ascending |xi|^2
    std::vector<uint32_t> slot;     // size grid.size()
};
const UniqueFrequencies& unique_frequencies(const SpaceGrid& grid);

// Pointwise spectral multiplier m(|xi|^2) applied in place.
void apply_multiplier(std::vector<cd>& spectrum, const SpaceGrid& grid,
                      const std::function<double(double)>& m_of_xi2);

// Trigonometric interpolation of a sampled slice at arbitrary points inside
// [-L, L)^d. Exact on band-limited data. Throws param_error for points
// outside the fundamental domain.
std::vector<cd> interpolate_space(std::span<const cd> slice, const SpaceGrid& grid,
                                  std::span<const std::array<double, 3>> points);

// Max |imag| over a slice (realness diagnostics after spectral round trips).
double max_imag(std::span<const cd> slice);

// Convenience: real parts (no tolerance check).
std::vector<double> real_part(std::span<const cd> slice);

} // namespace fractrace
