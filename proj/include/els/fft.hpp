#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "els/field.hpp"
#include "els/grid.hpp"

namespace els {

/// Half-spectrum coefficients of an NC-component real field. Per component the
/// layout follows the real-to-complex convention: n rows (y frequency), each
/// with n/2+1 columns (non-negative x frequency), idx = iy*(n/2+1) + ikx.
/// Coefficients are normalized so that inverse(forward(f)) == f.
template <int NC>
struct Spectral {
    Grid grid;
    std::vector<std::complex<double>> data;

    Spectral() = default;
    explicit Spectral(Grid g)
        : grid(g), data(static_cast<std::size_t>(NC) * g.n * (g.n / 2 + 1)) {}

    static constexpr int components = NC;
    std::size_t modes() const { return grid.n * (grid.n / 2 + 1); }
    std::complex<double>* comp(int c) { return data.data() + static_cast<std::size_t>(c) * modes(); }
    const std::complex<double>* comp(int c) const {
        return data.data() + static_cast<std::size_t>(c) * modes();
    }
};

namespace fft {

/// Plans and aligned buffers for one grid size. All execution goes through the
/// plan-owned buffers, so caller arrays need no special alignment and repeated
/// runs replay the identical code path (required for bitwise reproducibility).
class Workspace {
  public:
    explicit Workspace(std::size_t n) : n_(n), nxh_(n / 2 + 1) {
        real_ = fftw_alloc_real(n_ * n_);
        spec_ = fftw_alloc_complex(n_ * nxh_);
        fwd_ = fftw_plan_dft_r2c_2d(static_cast<int>(n_), static_cast<int>(n_), real_, spec_,
                                    FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_2d(static_cast<int>(n_), static_cast<int>(n_), spec_, real_,
                                    FFTW_ESTIMATE);
    }
    ~Workspace() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(spec_);
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    void forward(const double* in, std::complex<double>* out) {
        const std::size_t np = n_ * n_, nm = n_ * nxh_;
        const double scale = 1.0 / static_cast<double>(np);
        for (std::size_t i = 0; i < np; ++i) real_[i] = in[i];
        fftw_execute(fwd_);
        for (std::size_t i = 0; i < nm; ++i)
            out[i] = std::complex<double>(spec_[i][0] * scale, spec_[i][1] * scale);
    }

    void inverse(const std::complex<double>* in, double* out) {
        const std::size_t np = n_ * n_, nm = n_ * nxh_;
        for (std::size_t i = 0; i < nm; ++i) {
            spec_[i][0] = in[i].real();
            spec_[i][1] = in[i].imag();
        }
        fftw_execute(bwd_);
        for (std::size_t i = 0; i < np; ++i) out[i] = real_[i];
    }

  private:
    std::size_t n_, nxh_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, bwd_;
};

inline std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

inline Workspace& workspace_for(std::size_t n) {
    static std::map<std::size_t, std::unique_ptr<Workspace>> registry;
    auto it = registry.find(n);
    if (it == registry.end()) it = registry.emplace(n, std::make_unique<Workspace>(n)).first;
    return *it->second;
}

} // namespace fft

template <int NC>
Spectral<NC> to_spectral(const Field<NC>& f) {
    std::lock_guard<std::mutex> lock(fft::registry_mutex());
    auto& ws = fft::workspace_for(f.grid.n);
    Spectral<NC> s(f.grid);
    for (int c = 0; c < NC; ++c) ws.forward(f.comp(c), s.comp(c));
    return s;
}

template <int NC>
Field<NC> from_spectral(const Spectral<NC>& s) {
    std::lock_guard<std::mutex> lock(fft::registry_mutex());
    auto& ws = fft::workspace_for(s.grid.n);
    Field<NC> f(s.grid);
    for (int c = 0; c < NC; ++c) ws.inverse(s.comp(c), f.comp(c));
    return f;
}

/// Visit every stored mode of one component: fn(index, kx, ky) with integer
/// wavenumbers kx in [0, n/2] and ky in (-n/2, n/2].
template <typename Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    const std::size_t n = g.n, nxh = n / 2 + 1;
    for (std::size_t iy = 0; iy < n; ++iy) {
        const long ky = (iy <= n / 2) ? static_cast<long>(iy)
                                      : static_cast<long>(iy) - static_cast<long>(n);
        for (std::size_t ix = 0; ix < nxh; ++ix)
            fn(iy * nxh + ix, static_cast<long>(ix), ky);
    }
}

} // namespace els
