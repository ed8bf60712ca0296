#include "pem/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pem/errors.hpp"
#include "pem/spectral_detail.hpp"

namespace pem {

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) throw ArityError(std::string(what) + ": fields live on different grids");
}

namespace {

void require_components(int components) {
    if (components < 1) throw ArityError("field needs at least one component");
}

template <typename A, typename B>
void require_compatible(const A& a, const B& b, const char* what) {
    require_same_grid(a.grid(), b.grid(), what);
    if (a.components() != b.components()) {
        throw ArityError(std::string(what) + ": component counts differ");
    }
}

} // namespace

// ---------------------------------------------------------------------------
// RealField
// ---------------------------------------------------------------------------

RealField::RealField(GridSpec grid, int components)
    : grid_(grid), components_(components) {
    require_components(components);
    data_.assign(static_cast<std::size_t>(components) * grid_.points(), 0.0);
}

RealField::RealField(GridSpec grid, int components, std::vector<double> data)
    : grid_(grid), components_(components), data_(std::move(data)) {
    require_components(components);
    if (data_.size() != static_cast<std::size_t>(components) * grid_.points()) {
        throw ArityError("data length does not match components × n^dim");
    }
}

std::span<double> RealField::component(int c) {
    return std::span<double>(data_).subspan(c * grid_.points(), grid_.points());
}

std::span<const double> RealField::component(int c) const {
    return std::span<const double>(data_).subspan(c * grid_.points(), grid_.points());
}

bool RealField::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double RealField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

RealField& RealField::operator+=(const RealField& other) {
    require_compatible(*this, other, "RealField +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

RealField& RealField::operator-=(const RealField& other) {
    require_compatible(*this, other, "RealField -=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

RealField& RealField::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }

RealField stack(std::span<const RealField> scalars) {
    if (scalars.empty()) throw ArityError("stack: no fields");
    const auto grid = scalars.front().grid();
    RealField out(grid, static_cast<int>(scalars.size()));
    for (std::size_t c = 0; c < scalars.size(); ++c) {
        require_same_grid(grid, scalars[c].grid(), "stack");
        if (scalars[c].components() != 1) throw ArityError("stack: inputs must be scalar");
        std::ranges::copy(scalars[c].component(0), out.component(static_cast<int>(c)).begin());
    }
    return out;
}

RealField extract(const RealField& f, int c) {
    if (c < 0 || c >= f.components()) throw ArityError("extract: component out of range");
    RealField out(f.grid(), 1);
    std::ranges::copy(f.component(c), out.component(0).begin());
    return out;
}

double integrate(const RealField& f, int c) {
    double sum = 0.0;
    for (double v : f.component(c)) sum += v;
    return sum * f.grid().cell_volume();
}

// ---------------------------------------------------------------------------
// SpectralField
// ---------------------------------------------------------------------------

SpectralField::SpectralField(GridSpec grid, int components)
    : grid_(grid), components_(components) {
    require_components(components);
    coeffs_.assign(static_cast<std::size_t>(components) * grid_.points(), Complex{});
}

SpectralField::SpectralField(GridSpec grid, int components, std::vector<Complex> coeffs)
    : grid_(grid), components_(components), coeffs_(std::move(coeffs)) {
    require_components(components);
    if (coeffs_.size() != static_cast<std::size_t>(components) * grid_.points()) {
        throw ArityError("coefficient length does not match components × n^dim");
    }
}

std::span<Complex> SpectralField::component(int c) {
    return std::span<Complex>(coeffs_).subspan(c * grid_.points(), grid_.points());
}

std::span<const Complex> SpectralField::component(int c) const {
    return std::span<const Complex>(coeffs_).subspan(c * grid_.points(), grid_.points());
}

double SpectralField::hermitian_defect() const noexcept {
    double worst = 0.0;
    const auto& partner = spectral::detail::modes(grid_).partner;
    for (int c = 0; c < components_; ++c) {
        const auto block = component(c);
        for (std::size_t m = 0; m < grid_.points(); ++m) {
            worst = std::max(worst, std::abs(block[m] - std::conj(block[partner[m]])));
        }
    }
    return worst;
}

double SpectralField::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : coeffs_) m = std::max(m, std::abs(v));
    return m;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_compatible(*this, other, "SpectralField +=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_compatible(*this, other, "SpectralField -=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) noexcept {
    for (auto& v : coeffs_) v *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

} // namespace pem
