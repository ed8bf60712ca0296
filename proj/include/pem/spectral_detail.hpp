#pragma once

#include <array>
#include <vector>

#include "pem/field.hpp"

namespace pem::spectral::detail {

// Inverse transform without the Hermitian check, for fields the library
// produced itself from real data.
RealField backward_unchecked(const SpectralField& F);

// Per-grid wavevector tables, built once and shared.
struct ModeTable {
    std::vector<std::array<int, 3>> k;
    std::vector<double> k2;            // |k|²
    std::vector<std::array<double, 3>> d;  // first-derivative multipliers, 0 on Nyquist bins
    std::vector<double> d2;            // Σ_j d_j²
    std::vector<std::size_t> partner;  // flat index of −k
    std::vector<bool> in_band;         // survives the 2/3 rule
};

const ModeTable& modes(const GridSpec& grid);

} // namespace pem::spectral::detail
