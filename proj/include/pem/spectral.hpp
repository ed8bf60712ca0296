#pragma once

#include "pem/field.hpp"
#include "pem/spectral_detail.hpp"

// Fourier machinery on the periodic box. Every function is pure and may be
// called concurrently; FFT plans are cached per grid behind a mutex.
namespace pem::spectral {

// Throws CorruptionError on non-finite input.
SpectralField forward(const RealField& f);
// Throws AsymmetryError if the relative Hermitian defect exceeds 1e-10.
RealField backward(const SpectralField& F);

// Scalar in, dim components out: i·k_j·c_k. Nyquist bins are zeroed.
SpectralField gradient(const SpectralField& f);
// −|k|²·c_k, per component.
SpectralField laplacian(const SpectralField& f);
// Σ_j i·k_j·c_k^{(j)}; requires dim components.
SpectralField divergence(const SpectralField& v);
// Zero-mean f with −|k|² f_k = rhs_k. Throws GaugeError if |rhs_0| ≥ 1e-10.
SpectralField poisson_solve(const SpectralField& rhs);
// 2/3 rule: zero every mode with some |k_j| > n/3.
SpectralField dealias(const SpectralField& F);

// Projection of a spectral vector field onto its solenoidal part, mode-wise.
SpectralField project_solenoidal(const SpectralField& v);

// (2π)^dim · Σ_k w(|k|²) |c_k|² summed over components.
template <typename Weight>
double weighted_energy(const SpectralField& F, Weight&& w) {
    const auto& g = F.grid();
    const auto& k2 = detail::modes(g).k2;
    double sum = 0.0;
    for (int c = 0; c < F.components(); ++c) {
        const auto block = F.component(c);
        for (std::size_t m = 0; m < g.points(); ++m) sum += w(k2[m]) * std::norm(block[m]);
    }
    return sum * g.box_volume();
}

// Pointwise-in-physical-space convective term Σ_j a_j ∂_j b for each
// component of b, returned dealiased in spectral space. a is a velocity
// (dim components), b any component count.
SpectralField advect(const RealField& a, const SpectralField& b_hat);

// Whether every |k_j| ≤ n/3 for this wavevector.
bool in_dealiased_band(const GridSpec& grid, const std::array<int, 3>& k) noexcept;

} // namespace pem::spectral
