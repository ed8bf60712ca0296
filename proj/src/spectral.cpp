#include "pem/spectral.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <span>
#include <tuple>

#include "pem/errors.hpp"
#include "pem/spectral_detail.hpp"

namespace pem::spectral {

namespace {

// ---------------------------------------------------------------------------
// FFTW plan cache. Planning is not thread-safe, execution on new arrays is.
// Plans are made with FFTW_ESTIMATE (deterministic choice) and only ever run
// on fftw_malloc'd scratch buffers, so results are bit-reproducible.
// ---------------------------------------------------------------------------

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(const GridSpec& grid, int sign) {
        const auto key = std::make_tuple(grid.dim(), grid.n(), sign);
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        int dims[3] = {grid.n(), grid.n(), grid.n()};
        auto* in = fftw_alloc_complex(grid.points());
        auto* out = fftw_alloc_complex(grid.points());
        auto plan = fftw_plan_dft(grid.dim(), dims, in, out, sign, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plans() {
    static PlanCache cache;
    return cache;
}

class ModeCache {
public:
    const detail::ModeTable& get(const GridSpec& grid) {
        const auto key = std::make_pair(grid.dim(), grid.n());
        std::lock_guard lock(mutex_);
        if (auto it = tables_.find(key); it != tables_.end()) return it->second;
        detail::ModeTable t;
        const auto N = grid.points();
        t.k.resize(N);
        t.k2.resize(N);
        t.partner.resize(N);
        t.in_band.resize(N);
        t.d.resize(N);
        t.d2.resize(N);
        for (std::size_t m = 0; m < N; ++m) {
            const auto k = grid.wavevector(m);
            t.k[m] = k;
            t.k2[m] = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
            for (int j = 0; j < grid.dim(); ++j) {
                t.d[m][j] = k[j] == -grid.n() / 2 ? 0.0 : double(k[j]);
                t.d2[m] += t.d[m][j] * t.d[m][j];
            }
            t.partner[m] = grid.mode_index({-k[0], -k[1], -k[2]});
            t.in_band[m] = in_dealiased_band(grid, k);
        }
        return tables_.emplace(key, std::move(t)).first->second;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, detail::ModeTable> tables_;
};

// SIMD-aligned in/out pair for one transform.
class Scratch {
public:
    explicit Scratch(std::size_t n) : in_(fftw_alloc_complex(n)), out_(fftw_alloc_complex(n)) {}
    ~Scratch() {
        fftw_free(in_);
        fftw_free(out_);
    }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;

    Complex* in() { return reinterpret_cast<Complex*>(in_); }
    const Complex* out() const { return reinterpret_cast<const Complex*>(out_); }
    void execute(fftw_plan plan) { fftw_execute_dft(plan, in_, out_); }

private:
    fftw_complex* in_;
    fftw_complex* out_;
};

// i·k·z
Complex times_ik(double k, Complex z) { return {-k * z.imag(), k * z.real()}; }

} // namespace

const detail::ModeTable& detail::modes(const GridSpec& grid) {
    static ModeCache cache;
    return cache.get(grid);
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

SpectralField forward(const RealField& f) {
    if (!f.all_finite()) throw CorruptionError("forward: field contains NaN or Inf");
    const auto& g = f.grid();
    SpectralField out(g, f.components());
    const auto plan = plans().get(g, FFTW_FORWARD);
    Scratch work(g.points());
    const double scale = 1.0 / static_cast<double>(g.points());
    for (int c = 0; c < f.components(); ++c) {
        const auto src = f.component(c);
        auto* in = work.in();
        for (std::size_t p = 0; p < g.points(); ++p) in[p] = src[p];
        work.execute(plan);
        auto dst = out.component(c);
        const auto* res = work.out();
        for (std::size_t p = 0; p < g.points(); ++p) dst[p] = res[p] * scale;
    }
    return out;
}

RealField detail::backward_unchecked(const SpectralField& F) {
    const auto& g = F.grid();
    RealField out(g, F.components());
    const auto plan = plans().get(g, FFTW_BACKWARD);
    Scratch work(g.points());
    for (int c = 0; c < F.components(); ++c) {
        const auto src = F.component(c);
        std::copy(src.begin(), src.end(), work.in());
        work.execute(plan);
        auto dst = out.component(c);
        const auto* res = work.out();
        for (std::size_t p = 0; p < g.points(); ++p) dst[p] = res[p].real();
    }
    return out;
}

RealField backward(const SpectralField& F) {
    const double scale = F.max_abs();
    if (scale > 0.0 && F.hermitian_defect() > 1e-10 * scale) {
        throw AsymmetryError("backward: coefficients violate Hermitian symmetry");
    }
    return detail::backward_unchecked(F);
}

// ---------------------------------------------------------------------------
// Differential operators
// ---------------------------------------------------------------------------

SpectralField gradient(const SpectralField& f) {
    if (f.components() != 1) throw ArityError("gradient: input must be scalar");
    const auto& g = f.grid();
    SpectralField out(g, g.dim());
    const auto src = f.component(0);
    const auto& d = detail::modes(g).d;
    for (int j = 0; j < g.dim(); ++j) {
        auto dst = out.component(j);
        for (std::size_t m = 0; m < g.points(); ++m) dst[m] = times_ik(d[m][j], src[m]);
    }
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    const auto& g = f.grid();
    SpectralField out = f;
    const auto& k2 = detail::modes(g).k2;
    for (int c = 0; c < f.components(); ++c) {
        auto block = out.component(c);
        for (std::size_t m = 0; m < g.points(); ++m) block[m] *= -k2[m];
    }
    return out;
}

SpectralField divergence(const SpectralField& v) {
    const auto& g = v.grid();
    if (v.components() != g.dim()) {
        throw ArityError("divergence: expected " + std::to_string(g.dim()) + " components, got " +
                         std::to_string(v.components()));
    }
    SpectralField out(g, 1);
    auto dst = out.component(0);
    const auto& d = detail::modes(g).d;
    for (int j = 0; j < g.dim(); ++j) {
        const auto src = v.component(j);
        for (std::size_t m = 0; m < g.points(); ++m) dst[m] += times_ik(d[m][j], src[m]);
    }
    return out;
}

SpectralField poisson_solve(const SpectralField& rhs) {
    if (rhs.components() != 1) throw ArityError("poisson_solve: input must be scalar");
    const auto& g = rhs.grid();
    const auto src = rhs.component(0);
    if (std::abs(src[0]) >= 1e-10) {
        throw GaugeError("poisson_solve: right-hand side has nonzero mean");
    }
    SpectralField out(g, 1);
    auto dst = out.component(0);
    const auto& k2 = detail::modes(g).k2;
    for (std::size_t m = 1; m < g.points(); ++m) dst[m] = -src[m] / k2[m];
    return out;
}

bool in_dealiased_band(const GridSpec& grid, const std::array<int, 3>& k) noexcept {
    // |k_j| > n/3 is removed; integer comparison 3|k_j| > n avoids rounding.
    for (int j = 0; j < grid.dim(); ++j) {
        if (3 * std::abs(k[j]) > grid.n()) return false;
    }
    return true;
}

SpectralField dealias(const SpectralField& F) {
    const auto& g = F.grid();
    SpectralField out = F;
    const auto& band = detail::modes(g).in_band;
    for (std::size_t m = 0; m < g.points(); ++m) {
        if (band[m]) continue;
        for (int c = 0; c < F.components(); ++c) out(c, m) = Complex{};
    }
    return out;
}

SpectralField project_solenoidal(const SpectralField& v) {
    const auto& g = v.grid();
    if (v.components() != g.dim()) throw ArityError("project_solenoidal: expected dim components");
    SpectralField out = v;
    const auto& table = detail::modes(g);
    const int dim = g.dim();
    std::array<std::span<const Complex>, 3> in;
    std::array<std::span<Complex>, 3> res;
    for (int j = 0; j < dim; ++j) {
        in[j] = v.component(j);
        res[j] = out.component(j);
    }
    for (std::size_t m = 1; m < g.points(); ++m) {
        // |k|² is built from the same Nyquist-free multipliers as divergence,
        // so the result is divergence-free to round-off on every mode.
        const double k2 = table.d2[m];
        if (k2 == 0.0) continue;
        const auto& d = table.d[m];
        // v − k (k·v)/|k|²
        Complex kv{};
        for (int j = 0; j < dim; ++j) kv += d[j] * in[j][m];
        kv /= k2;
        for (int j = 0; j < dim; ++j) res[j][m] -= d[j] * kv;
    }
    return out;
}

SpectralField advect(const RealField& a, const SpectralField& b_hat) {
    const auto& g = b_hat.grid();
    require_same_grid(a.grid(), g, "advect");
    if (a.components() != g.dim()) throw ArityError("advect: velocity needs dim components");
    RealField product(g, b_hat.components());
    SpectralField scalar(g, 1);
    for (int c = 0; c < b_hat.components(); ++c) {
        const auto src = b_hat.component(c);
        std::copy(src.begin(), src.end(), scalar.component(0).begin());
        const auto grad = detail::backward_unchecked(gradient(scalar));
        auto dst = product.component(c);
        for (int j = 0; j < g.dim(); ++j) {
            const auto aj = a.component(j);
            const auto dj = grad.component(j);
            for (std::size_t p = 0; p < g.points(); ++p) dst[p] += aj[p] * dj[p];
        }
    }
    return dealias(forward(product));
}

} // namespace pem::spectral
