#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pem/grid.hpp"

namespace pem {

using Complex = std::complex<double>;

// Real samples of a scalar (components == 1) or vector field. Storage is
// component-major; each component is a row-major block of grid.points().
class RealField {
public:
    RealField(GridSpec grid, int components);
    RealField(GridSpec grid, int components, std::vector<double> data);

    const GridSpec& grid() const noexcept { return grid_; }
    int components() const noexcept { return components_; }

    std::span<double> component(int c);
    std::span<const double> component(int c) const;
    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    double& operator()(int c, std::size_t point) { return data_[c * grid_.points() + point]; }
    double operator()(int c, std::size_t point) const { return data_[c * grid_.points() + point]; }

    bool all_finite() const noexcept;
    double max_abs() const noexcept;

    RealField& operator+=(const RealField& other);
    RealField& operator-=(const RealField& other);
    RealField& operator*=(double s) noexcept;

    friend bool operator==(const RealField&, const RealField&) = default;

private:
    GridSpec grid_;
    int components_;
    std::vector<double> data_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);

// Scalar field sampled from f(x, y, z).
template <typename F>
RealField sample(const GridSpec& grid, F&& f) {
    RealField out(grid, 1);
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const auto x = grid.coordinate(p);
        out(0, p) = f(x[0], x[1], x[2]);
    }
    return out;
}

// Stack scalar fields into one vector field.
RealField stack(std::span<const RealField> scalars);
// Copy one component out as a scalar field.
RealField extract(const RealField& f, int c);

// Periodic quadrature: h^dim · Σ f over one component.
double integrate(const RealField& f, int c = 0);

// Fourier coefficients c_k of f(x) = Σ_k c_k e^{i k·x}. Full (not half)
// spectrum, stored like RealField: component-major, FFT bin order per axis.
class SpectralField {
public:
    SpectralField(GridSpec grid, int components);
    SpectralField(GridSpec grid, int components, std::vector<Complex> coeffs);

    const GridSpec& grid() const noexcept { return grid_; }
    int components() const noexcept { return components_; }

    std::span<Complex> component(int c);
    std::span<const Complex> component(int c) const;
    std::span<Complex> coeffs() noexcept { return coeffs_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }

    Complex& operator()(int c, std::size_t mode) { return coeffs_[c * grid_.points() + mode]; }
    Complex operator()(int c, std::size_t mode) const { return coeffs_[c * grid_.points() + mode]; }

    // max_k |c_k − conj(c_{−k})| over all components.
    double hermitian_defect() const noexcept;
    double max_abs() const noexcept;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s) noexcept;

private:
    GridSpec grid_;
    int components_;
    std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Throws ArityError when the grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

} // namespace pem
