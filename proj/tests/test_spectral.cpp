#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "pem/errors.hpp"
#include "pem/spectral.hpp"
#include "test_support.hpp"

using namespace pem;
using namespace pem::test;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::size_t mode(const GridSpec& g, int kx, int ky, int kz = 0) { return g.mode_index({kx, ky, kz}); }

SpectralField random_hermitian(const GridSpec& g, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    SpectralField F(g, 1);
    for (std::size_t m = 0; m < g.points(); ++m) F(0, m) = {normal(rng), normal(rng)};
    // Symmetrize: c_k ← (c_k + conj(c_{−k}))/2.
    SpectralField out = F;
    for (std::size_t m = 0; m < g.points(); ++m) {
        auto k = g.wavevector(m);
        const auto partner = g.mode_index({-k[0], -k[1], -k[2]});
        out(0, m) = 0.5 * (F(0, m) + std::conj(F(0, partner)));
    }
    return out;
}

} // namespace

TEST_CASE("GridSpec rejects invalid discretizations", "[grid]") {
    CHECK_THROWS_AS(GridSpec(2, 17), ConfigError);
    CHECK_THROWS_AS(GridSpec(2, 4), ConfigError);
    CHECK_THROWS_AS(GridSpec(1, 16), ConfigError);
    CHECK_THROWS_AS(GridSpec(4, 16), ConfigError);
    const GridSpec g(3, 16);
    CHECK(g.points() == 4096);
    CHECK_THAT(g.spacing(), WithinRel(2.0 * pi / 16, 1e-15));
    CHECK(g.wavenumber(8) == -8);
    CHECK(g.wavenumber(7) == 7);
    CHECK(g.mode_index({-1, 0, 2}) == (15 * 16 + 0) * 16 + 2);
}

TEST_CASE("forward of simple fields", "[spectral][forward]") {
    const GridSpec g(2, 16);

    SECTION("constant is the DC mode") {
        auto f = sample(g, [](double, double, double) { return 1.0; });
        const auto F = spectral::forward(f);
        CHECK_THAT(F(0, 0).real(), WithinAbs(1.0, 1e-15));
        double rest = 0.0;
        for (std::size_t m = 1; m < g.points(); ++m) rest = std::max(rest, std::abs(F(0, m)));
        CHECK(rest < 1e-15);
    }

    SECTION("cos x has two half-amplitude modes") {
        auto f = sample(g, [](double x, double, double) { return std::cos(x); });
        const auto F = spectral::forward(f);
        CHECK_THAT(std::abs(F(0, mode(g, 1, 0)) - 0.5), WithinAbs(0.0, 1e-15));
        CHECK_THAT(std::abs(F(0, mode(g, -1, 0)) - 0.5), WithinAbs(0.0, 1e-15));
        double rest = 0.0;
        for (std::size_t m = 0; m < g.points(); ++m) {
            if (m != mode(g, 1, 0) && m != mode(g, -1, 0)) rest = std::max(rest, std::abs(F(0, m)));
        }
        CHECK(rest < 1e-15);
    }

    SECTION("non-finite input is rejected") {
        RealField f(g, 1);
        f(0, 3) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(spectral::forward(f), CorruptionError);
        f(0, 3) = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(spectral::forward(f), CorruptionError);
    }
}

TEST_CASE("forward and backward match the naive DFT oracle", "[spectral][oracle]") {
    std::mt19937_64 rng(7);
    for (const GridSpec g : {GridSpec(2, 16), GridSpec(3, 8)}) {
        const auto f = random_field(g, 1, rng);
        const auto F = spectral::forward(f);
        const auto expected = naive_dft(f);
        double worst = 0.0;
        for (std::size_t m = 0; m < g.points(); ++m) worst = std::max(worst, std::abs(F(0, m) - expected[m]));
        CHECK(worst < 1e-12);

        const auto H = random_hermitian(g, rng);
        const auto back = spectral::backward(H);
        const auto samples = naive_idft(g, std::vector<Complex>(H.coeffs().begin(), H.coeffs().end()));
        double worst_back = 0.0, worst_imag = 0.0;
        for (std::size_t p = 0; p < g.points(); ++p) {
            worst_back = std::max(worst_back, std::abs(back(0, p) - samples[p].real()));
            worst_imag = std::max(worst_imag, std::abs(samples[p].imag()));
        }
        CHECK(worst_back < 1e-12);
        CHECK(worst_imag < 1e-12);
    }
}

TEST_CASE("backward of simple spectra", "[spectral][backward]") {
    const GridSpec g(2, 16);
    SpectralField F(g, 1);
    CHECK(spectral::backward(F).max_abs() == 0.0);

    F(0, mode(g, 1, 0)) = 0.5;
    F(0, mode(g, -1, 0)) = 0.5;
    const auto f = spectral::backward(F);
    const auto expected = sample(g, [](double x, double, double) { return std::cos(x); });
    CHECK(max_diff(f, expected) < 1e-13);

    SECTION("asymmetric coefficients are rejected") {
        F(0, mode(g, 2, 1)) = {0.0, 1.0};
        CHECK_THROWS_AS(spectral::backward(F), AsymmetryError);
    }
}

TEST_CASE("round trip and Parseval on every grid size", "[spectral][property]") {
    std::mt19937_64 rng(11);
    for (int dim : {2, 3}) {
        for (int n : {8, 16, 32}) {
            const GridSpec g(dim, n);
            for (int trial = 0; trial < 3; ++trial) {
                const auto f = random_field(g, 2, rng);
                const auto F = spectral::forward(f);
                const auto back = spectral::backward(F);
                CHECK(max_diff(back, f) <= 1e-12 * f.max_abs());

                for (int c = 0; c < 2; ++c) {
                    double physical = 0.0;
                    for (double v : f.component(c)) physical += v * v;
                    physical *= g.cell_volume();
                    double spectral_sum = 0.0;
                    for (const auto& v : F.component(c)) spectral_sum += std::norm(v);
                    spectral_sum *= g.box_volume();
                    CHECK_THAT(physical, WithinRel(spectral_sum, 1e-10));
                }
            }
        }
    }
}

TEST_CASE("gradient", "[spectral][gradient]") {
    const GridSpec g(2, 32);

    SECTION("sin x differentiates to cos x, 0") {
        const auto f = sample(g, [](double x, double, double) { return std::sin(x); });
        const auto grad = spectral::backward(spectral::gradient(spectral::forward(f)));
        const auto cosx = sample(g, [](double x, double, double) { return std::cos(x); });
        CHECK(max_diff(grad.component(0), cosx.component(0)) < 1e-13);
        CHECK(RealField(extract(grad, 1)).max_abs() < 1e-13);
    }

    SECTION("constant has zero gradient") {
        const auto f = sample(g, [](double, double, double) { return 3.5; });
        CHECK(spectral::backward(spectral::gradient(spectral::forward(f))).max_abs() < 1e-13);
    }

    SECTION("vector input is rejected") {
        SpectralField v(g, 2);
        CHECK_THROWS_AS(spectral::gradient(v), ArityError);
    }
}

TEST_CASE("derivatives agree with finite-difference stencils within 10 h^2", "[spectral][oracle]") {
    std::mt19937_64 rng(3);
    for (int n : {16, 32, 64}) {
        for (int dim : {2, 3}) {
            if (dim == 3 && n == 64) continue;  // covered by the acceptance suite
            const GridSpec g(dim, n);
            const double tol = 10.0 * g.spacing() * g.spacing();
            const auto f = random_smooth_field(g, rng);
            const auto F = spectral::forward(f);
            const auto grad = spectral::backward(spectral::gradient(F));
            for (int a = 0; a < dim; ++a) CHECK(max_diff(grad.component(a), fd_derivative(f, a).component(0)) < tol);
            const auto lap = spectral::backward(spectral::laplacian(F));
            CHECK(max_diff(lap, fd_laplacian(f)) < tol);
        }
    }
}

TEST_CASE("laplacian", "[spectral][laplacian]") {
    const GridSpec g(3, 16);
    const auto f = sample(g, [](double x, double, double) { return std::cos(x); });
    const auto lap = spectral::backward(spectral::laplacian(spectral::forward(f)));
    CHECK(max_diff(lap, -1.0 * f) < 1e-13);

    const auto c = sample(g, [](double, double, double) { return -2.0; });
    CHECK(spectral::backward(spectral::laplacian(spectral::forward(c))).max_abs() < 1e-13);

    SECTION("acts per component") {
        std::vector<RealField> parts{f, 2.0 * f};
        const auto v = stack(parts);
        const auto lv = spectral::backward(spectral::laplacian(spectral::forward(v)));
        CHECK(max_diff(lv.component(1), (-2.0 * f).component(0)) < 1e-13);
    }
}

TEST_CASE("divergence", "[spectral][divergence]") {
    const GridSpec g(2, 32);
    auto field = [&](auto fx, auto fy) {
        std::vector<RealField> parts{sample(g, fx), sample(g, fy)};
        return stack(parts);
    };

    const auto tg = field([](double x, double y, double) { return std::sin(x) * std::cos(y); },
                          [](double x, double y, double) { return -std::cos(x) * std::sin(y); });
    CHECK(spectral::backward(spectral::divergence(spectral::forward(tg))).max_abs() < 1e-13);

    const auto uniform = field([](double, double, double) { return 1.5; }, [](double, double, double) { return -0.5; });
    CHECK(spectral::backward(spectral::divergence(spectral::forward(uniform))).max_abs() < 1e-13);

    const auto v = field([](double x, double, double) { return std::sin(x); },
                         [](double, double y, double) { return std::sin(y); });
    const auto div = spectral::backward(spectral::divergence(spectral::forward(v)));
    const auto expected = sample(g, [](double x, double y, double) { return std::cos(x) + std::cos(y); });
    CHECK(max_diff(div, expected) < 1e-13);

    SpectralField scalar(g, 1);
    CHECK_THROWS_AS(spectral::divergence(scalar), ArityError);
}

TEST_CASE("poisson_solve", "[spectral][poisson]") {
    const GridSpec g(2, 32);
    const auto cosx = sample(g, [](double x, double, double) { return std::cos(x); });
    const auto sol = spectral::backward(spectral::poisson_solve(spectral::forward(-1.0 * cosx)));
    CHECK(max_diff(sol, cosx) < 1e-13);

    CHECK(spectral::backward(spectral::poisson_solve(SpectralField(g, 1))).max_abs() == 0.0);

    SECTION("inverts the laplacian of a zero-mean field") {
        std::mt19937_64 rng(5);
        auto f = random_field(g, 1, rng);
        auto F = spectral::forward(f);
        F(0, 0) = 0.0;
        const auto back = spectral::poisson_solve(spectral::laplacian(F));
        double worst = 0.0;
        for (std::size_t m = 0; m < g.points(); ++m) worst = std::max(worst, std::abs(back(0, m) - F(0, m)));
        CHECK(worst < 1e-12);
    }

    SECTION("nonzero mean is a gauge error") {
        const auto one = sample(g, [](double, double, double) { return 1.0; });
        CHECK_THROWS_AS(spectral::poisson_solve(spectral::forward(one)), GaugeError);
    }
}

TEST_CASE("dealias", "[spectral][dealias]") {
    const GridSpec g(2, 32);  // cutoff: |k_j| ≤ 10
    std::mt19937_64 rng(9);

    SpectralField low(g, 1);
    low(0, mode(g, 10, -10)) = 1.0;
    low(0, mode(g, 3, 2)) = {0.5, 0.25};
    const auto kept = spectral::dealias(low);
    for (std::size_t m = 0; m < g.points(); ++m) CHECK(kept(0, m) == low(0, m));

    SpectralField high(g, 1);
    high(0, mode(g, 11, 0)) = 1.0;
    high(0, mode(g, 0, -11)) = 1.0;
    high(0, mode(g, 16, 16)) = 1.0;
    CHECK(spectral::dealias(high).max_abs() == 0.0);

    const auto F = spectral::forward(random_field(g, 2, rng));
    const auto once = spectral::dealias(F);
    const auto twice = spectral::dealias(once);
    for (std::size_t i = 0; i < once.coeffs().size(); ++i) CHECK(once.coeffs()[i] == twice.coeffs()[i]);
}

TEST_CASE("operator identities and linearity", "[spectral][property]") {
    std::mt19937_64 rng(21);
    for (const GridSpec g : {GridSpec(2, 32), GridSpec(3, 16)}) {
        const auto F = spectral::forward(random_smooth_field(g, rng, 3));
        const auto G = spectral::forward(random_field(g, 1, rng));

        // div(grad f) = lap f except on Nyquist bins, where the gradient is zeroed.
        const auto divgrad = spectral::divergence(spectral::gradient(F));
        const auto lap = spectral::laplacian(F);
        double worst = 0.0;
        for (std::size_t m = 0; m < g.points(); ++m) worst = std::max(worst, std::abs(divgrad(0, m) - lap(0, m)));
        CHECK(worst < 1e-12);

        const double a = 0.7, b = -1.3;
        const auto combo = a * F + b * G;
        const auto lhs = spectral::laplacian(combo);
        const auto rhs = a * spectral::laplacian(F) + b * spectral::laplacian(G);
        const auto glhs = spectral::gradient(combo);
        const auto grhs = a * spectral::gradient(F) + b * spectral::gradient(G);
        double lin = 0.0;
        for (std::size_t i = 0; i < lhs.coeffs().size(); ++i) lin = std::max(lin, std::abs(lhs.coeffs()[i] - rhs.coeffs()[i]));
        for (std::size_t i = 0; i < glhs.coeffs().size(); ++i)
            lin = std::max(lin, std::abs(glhs.coeffs()[i] - grhs.coeffs()[i]));
        CHECK(lin < 1e-10);
    }
}
