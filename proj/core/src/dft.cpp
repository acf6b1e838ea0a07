#include "fractrace/dft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "fractrace/errors.hpp"

namespace fractrace {

namespace {

// FFTW plans are cached per (d, n, sign). Plan creation is not thread-safe,
// so it is guarded; fftw_execute_dft on distinct arrays is safe.
class PlanCache {
public:
    fftw_plan get(const SpaceGrid& g, int sign) {
        std::lock_guard<std::mutex> lk(mu_);
        auto key = std::make_tuple(g.d, g.n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<int> dims(g.d, g.n);
        fftw_complex* buf = fftw_alloc_complex(g.size());
        fftw_plan p = fftw_plan_dft(g.d, dims.data(), buf, buf, sign, FFTW_ESTIMATE);
        fftw_free(buf);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache c;
    return c;
}

struct FftwBuffer {
    fftw_complex* p;
    explicit FftwBuffer(size_t n) : p(fftw_alloc_complex(n)) {}
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

std::vector<cd> transform(std::span<const cd> in, const SpaceGrid& grid, int sign) {
    grid.validate();
    size_t N = grid.size();
    if (in.size() != N) throw param_error("dft: slice shape does not match grid");
    fftw_plan plan = plan_cache().get(grid, sign);
    FftwBuffer buf(N);
    for (size_t i = 0; i < N; ++i) {
        buf.p[i][0] = in[i].real();
        buf.p[i][1] = in[i].imag();
    }
    fftw_execute_dft(plan, buf.p, buf.p);
    double scale = 1.0 / std::sqrt(double(N));
    std::vector<cd> out(N);
    for (size_t i = 0; i < N; ++i) out[i] = cd(buf.p[i][0] * scale, buf.p[i][1] * scale);
    return out;
}

} // namespace

std::vector<cd> dft_forward(std::span<const cd> slice, const SpaceGrid& grid) {
    return transform(slice, grid, FFTW_FORWARD);
}

std::vector<cd> dft_inverse(std::span<const cd> spectrum, const SpaceGrid& grid) {
    return transform(spectrum, grid, FFTW_BACKWARD);
}

std::vector<double> frequency_lattice(const SpaceGrid& grid) {
    grid.validate();
    std::vector<double> axis(grid.n);
    for (int k = 0; k < grid.n; ++k) {
        double xi = grid.freq(k);
        axis[k] = xi * xi;
    }
    size_t N = grid.size();
    std::vector<double> out(N);
    for (size_t idx = 0; idx < N; ++idx) {
        auto ijk = grid.unflatten(idx);
        double s = 0.0;
        for (int ax = 0; ax < grid.d; ++ax) s += axis[ijk[ax]];
        out[idx] = s;
    }
    return out;
}

const UniqueFrequencies& unique_frequencies(const SpaceGrid& grid) {
    static std::mutex mu;
    static std::map<std::tuple<int, double, int>, UniqueFrequencies> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_tuple(grid.d, grid.L, grid.n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<double> lat = frequency_lattice(grid);
    std::vector<double> sorted = lat;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    UniqueFrequencies uf;
    uf.values = sorted;
    uf.slot.resize(lat.size());
    for (size_t i = 0; i < lat.size(); ++i) {
        auto pos = std::lower_bound(sorted.begin(), sorted.end(), lat[i]);
        uf.slot[i] = uint32_t(pos - sorted.begin());
    }
    return cache.emplace(key, std::move(uf)).first->second;
}

void apply_multiplier(std::vector<cd>& spectrum, const SpaceGrid& grid,
                      const std::function<double(double)>& m_of_xi2) {
    const UniqueFrequencies& uf = unique_frequencies(grid);
    if (spectrum.size() != uf.slot.size()) throw param_error("apply_multiplier: shape mismatch");
    std::vector<double> table(uf.values.size());
    for (size_t i = 0; i < table.size(); ++i) table[i] = m_of_xi2(uf.values[i]);
    for (size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= table[uf.slot[i]];
}

std::vector<cd> interpolate_space(std::span<const cd> slice, const SpaceGrid& grid,
                                  std::span<const std::array<double, 3>> points) {
    std::vector<cd> spec = dft_forward(slice, grid);
    size_t N = grid.size();
    double inv_sqrtN = 1.0 / std::sqrt(double(N));

    // physical-convention coefficients c_k = S[k] * (-1)^(sum of freq indices)
    std::vector<cd> coeff(N);
    std::vector<double> freq_axis(grid.n);
    std::vector<int> parity_axis(grid.n);
    for (int k = 0; k < grid.n; ++k) {
        freq_axis[k] = grid.freq(k);
        parity_axis[k] = grid.freq_index(k) & 1;
    }
    for (size_t idx = 0; idx < N; ++idx) {
        auto ijk = grid.unflatten(idx);
        int par = 0;
        for (int ax = 0; ax < grid.d; ++ax) par ^= parity_axis[ijk[ax]];
        coeff[idx] = spec[idx] * (par ? -1.0 : 1.0) * inv_sqrtN;
    }

    std::vector<cd> out(points.size());
    for (size_t p = 0; p < points.size(); ++p) {
        for (int ax = 0; ax < grid.d; ++ax) {
            double x = points[p][ax];
            if (!(x >= -grid.L && x < grid.L))
                throw param_error("interpolate_space: point outside [-L, L)^d");
        }
        cd acc = 0.0;
        for (size_t idx = 0; idx < N; ++idx) {
            auto ijk = grid.unflatten(idx);
            double phase = 0.0;
            for (int ax = 0; ax < grid.d; ++ax) phase += freq_axis[ijk[ax]] * points[p][ax];
            acc += coeff[idx] * cd(std::cos(phase), std::sin(phase));
        }
        out[p] = acc;
    }
    return out;
}

double max_imag(std::span<const cd> slice) {
    double m = 0.0;
    for (const cd& v : slice) m = std::max(m, std::abs(v.imag()));
    return m;
}

std::vector<double> real_part(std::span<const cd> slice) {
    std::vector<double> out(slice.size());
    for (size_t i = 0; i < slice.size(); ++i) out[i] = slice[i].real();
    return out;
}

} // namespace fractrace
