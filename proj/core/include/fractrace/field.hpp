#pragma once

#include <span>
#include <string>
#include <vector>

#include "fractrace/dft.hpp"
#include "fractrace/grid.hpp"

namespace fractrace {

// Complex values on a tensor-product time x space grid; the discrete
// stand-in for u(t, x). Row i is the spatial slice at time node t_i.
struct SampledField {
    TimeGrid tgrid;
    SpaceGrid sgrid;
    std::vector<cd> values; // (M+1) * n^d, time-major
    bool realness = true;

    SampledField() = default;
    SampledField(const TimeGrid& tg, const SpaceGrid& sg, bool real_flag = true)
        : tgrid(tg), sgrid(sg), values(size_t(tg.M + 1) * sg.size(), cd(0.0)), realness(real_flag) {}

    size_t slice_size() const { return sgrid.size(); }
    size_t num_slices() const { return size_t(tgrid.M + 1); }

    std::span<cd> slice(size_t i) {
        return {values.data() + i * slice_size(), slice_size()};
    }
    std::span<const cd> slice(size_t i) const {
        return {values.data() + i * slice_size(), slice_size()};
    }

    void check_shape() const;

    // Largest |imag| over all slices; realness invariant asks <= 1e-12.
    double imag_residue() const { return max_imag(values); }
};

// One file: first line is a JSON header with the grid metadata, the rest is
// CSV "t_index,i0[,i1[,i2]],re,im" rows.
void save_field(const SampledField& f, const std::string& path);
SampledField load_field(const std::string& path);

// Spatial-only presets used by the CLI and the harness.
std::vector<cd> preset_gaussian(const SpaceGrid& g, double sigma = 1.0, double amplitude = 1.0);
std::vector<cd> preset_single_mode(const SpaceGrid& g, int k, double amplitude = 1.0);
// Random real field with spectrum in the annulus xi_lo <= |xi| <= xi_hi.
// The underlying continuum field depends only on (L, seed, band), so the same
// member can be sampled on refined grids.
std::vector<cd> preset_random_annulus(const SpaceGrid& g, uint64_t seed, double xi_lo, double xi_hi);
// Band given as Littlewood-Paley shell indices [j_lo, j_hi].
std::vector<cd> preset_random_bandlimited(const SpaceGrid& g, uint64_t seed, int j_lo, int j_hi);

} // namespace fractrace
