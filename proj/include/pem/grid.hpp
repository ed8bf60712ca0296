#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace pem {

// Periodic box [0, 2π)^dim sampled with n points per axis.
class GridSpec {
public:
    static constexpr double length = 2.0 * std::numbers::pi;

    // Throws ConfigError unless dim ∈ {2,3} and n is a power of two ≥ 8.
    GridSpec(int dim, int n);

    int dim() const noexcept { return dim_; }
    int n() const noexcept { return n_; }
    double spacing() const noexcept { return length / n_; }
    // n^dim
    std::size_t points() const noexcept { return points_; }
    // Volume element h^dim for the periodic quadrature.
    double cell_volume() const noexcept;
    // (2π)^dim
    double box_volume() const noexcept;

    // Row-major multi-index (axis 0 slowest) of a flat point index. Unused
    // trailing axes are zero in 2D.
    std::array<int, 3> index(std::size_t flat) const noexcept;
    std::array<double, 3> coordinate(std::size_t flat) const noexcept;

    // Signed wavenumber of FFT bin j on one axis; bin n/2 maps to −n/2.
    int wavenumber(int bin) const noexcept { return bin < n_ / 2 ? bin : bin - n_; }
    std::array<int, 3> wavevector(std::size_t flat) const noexcept;
    // Flat index of a signed wavevector (components reduced mod n).
    std::size_t mode_index(const std::array<int, 3>& k) const noexcept;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int dim_;
    int n_;
    std::size_t points_;
};

} // namespace pem
