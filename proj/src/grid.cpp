#include "pem/grid.hpp"

#include <bit>
#include <string>

#include "pem/errors.hpp"

namespace pem {

GridSpec::GridSpec(int dim, int n) : dim_(dim), n_(n), points_(0) {
    std::vector<std::string> problems;
    if (dim != 2 && dim != 3) {
        problems.push_back("dim must be 2 or 3 (got " + std::to_string(dim) + ")");
    }
    if (n < 8) {
        problems.push_back("n must be at least 8 (got " + std::to_string(n) + ")");
    }
    if (n <= 0 || !std::has_single_bit(static_cast<unsigned>(n))) {
        problems.push_back("n must be a power of two (got " + std::to_string(n) + ")");
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    points_ = 1;
    for (int d = 0; d < dim_; ++d) points_ *= static_cast<std::size_t>(n_);
}

double GridSpec::cell_volume() const noexcept {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= spacing();
    return v;
}

double GridSpec::box_volume() const noexcept {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= length;
    return v;
}

std::array<int, 3> GridSpec::index(std::size_t flat) const noexcept {
    std::array<int, 3> idx{0, 0, 0};
    const auto n = static_cast<std::size_t>(n_);
    for (int d = dim_ - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % n);
        flat /= n;
    }
    return idx;
}

std::array<double, 3> GridSpec::coordinate(std::size_t flat) const noexcept {
    const auto idx = index(flat);
    const double h = spacing();
    return {idx[0] * h, idx[1] * h, idx[2] * h};
}

std::array<int, 3> GridSpec::wavevector(std::size_t flat) const noexcept {
    auto k = index(flat);
    for (int d = 0; d < dim_; ++d) k[d] = wavenumber(k[d]);
    return k;
}

std::size_t GridSpec::mode_index(const std::array<int, 3>& k) const noexcept {
    std::size_t flat = 0;
    for (int d = 0; d < dim_; ++d) {
        const int bin = ((k[d] % n_) + n_) % n_;
        flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(bin);
    }
    return flat;
}

} // namespace pem
