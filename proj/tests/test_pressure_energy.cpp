#include <catch2/catch_amalgamated.hpp>

#include "pem/errors.hpp"
#include "pem/ns_solver.hpp"
#include "pem/pressure_energy.hpp"
#include "test_support.hpp"

using namespace pem;
using namespace pem::test;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RealField scalar(const GridSpec& g, auto f) { return sample(g, f); }

RealField cos_x(const GridSpec& g) {
    return scalar(g, [](double x, double, double) { return std::cos(x); });
}

RealField cos_y(const GridSpec& g) {
    return scalar(g, [](double, double y, double) { return std::cos(y); });
}

NormSample row(double t, double grad, double norm) {
    NormSample s;
    s.t = t;
    s.grad_energy = grad;
    s.norm_E_sq = norm;
    if (norm > degenerate_norm) s.ratio = grad / norm;
    return s;
}

} // namespace

TEST_CASE("material_derivative", "[pressure_energy][derivative]") {
    const GridSpec g(2, 16);
    ThermoParams params;
    std::mt19937_64 rng(2);
    const auto u = random_smooth_vector(g, rng);

    SECTION("constant pressure has zero material derivative") {
        const auto P = scalar(g, [](double, double, double) { return 12.5; });
        const auto D = material_derivative(&P, P, u, 0.1, DerivativeMode::finite_difference, params);
        CHECK(D.max_abs() < 1e-12);
    }

    SECTION("pure time derivative without flow") {
        const auto gfield = random_smooth_field(g, rng);
        const auto P0 = random_smooth_field(g, rng);
        const double dt = 0.01;
        const auto P1 = P0 + dt * gfield;
        const auto D = material_derivative(&P0, P1, RealField(g, 2), dt, DerivativeMode::finite_difference, params);
        CHECK(max_diff(D, gfield) < 1e-12);
    }

    SECTION("advection of a static profile") {
        // u = (1, 0), P = sin x: u·∇P = cos x.
        RealField uniform(g, 2);
        for (double& v : uniform.component(0)) v = 1.0;
        const auto P = scalar(g, [](double x, double, double) { return std::sin(x); });
        const auto D = material_derivative(&P, P, uniform, 0.5, DerivativeMode::finite_difference, params);
        CHECK(max_diff(D, cos_x(g)) < 1e-13);
    }

    SECTION("model_rhs on Taylor-Green") {
        params.mu = 1.0;
        const auto tg = make_initial({InitialKind::taylor_green_2d}, GridSpec(2, 32), params);
        const auto D = material_derivative(nullptr, tg.P, tg.u, 0.0, DerivativeMode::model_rhs, params);
        CHECK_THAT(integrate(D), WithinRel(0.4 * 8.0 * pi * pi, 1e-10));
        CHECK_THAT(integrate(D), WithinAbs(31.583, 1e-3));
        const auto phi = dissipation_phi(tg.u, params);
        double phi_sq = 0.0;
        for (double v : phi.data()) phi_sq += v * v;
        phi_sq *= tg.u.grid().cell_volume();
        CHECK_THAT(norm_E_squared(tg.P, D).dtP_term, WithinRel(0.16 * phi_sq, 1e-12));
    }

    SECTION("model_rhs vanishes exactly when the flow has no gradients") {
        RealField uniform(g, 2);
        for (double& v : uniform.data()) v = 2.0;
        const auto D = material_derivative(nullptr, RealField(g, 1), uniform, 0.0, DerivativeMode::model_rhs, params);
        CHECK(norm_E_squared(RealField(g, 1), D).dtP_term < 1e-24);
    }

    SECTION("errors") {
        const auto P = cos_x(g);
        CHECK_THROWS_AS(material_derivative(nullptr, P, u, 0.1, DerivativeMode::finite_difference, params), DataError);
        CHECK_THROWS_AS(material_derivative(&P, P, u, 0.0, DerivativeMode::finite_difference, params), ConfigError);
    }
}

TEST_CASE("norm_E_squared", "[pressure_energy][norm]") {
    const GridSpec g(2, 32);
    const RealField zero(g, 1);

    const auto c = norm_E_squared(scalar(g, [](double, double, double) { return 4.0; }), zero);
    CHECK(c.total == 0.0);
    CHECK(c.lap_term < 1e-20);

    const auto n = norm_E_squared(cos_x(g), zero);
    CHECK_THAT(n.lap_term, WithinRel(2.0 * pi * pi, 1e-13));
    CHECK_THAT(n.total, WithinRel(19.739208802178716, 1e-13));
    CHECK(n.dtP_term == 0.0);

    SECTION("matches the coefficient sum on random fields") {
        std::mt19937_64 rng(13);
        for (const GridSpec gg : {GridSpec(2, 16), GridSpec(3, 8)}) {
            const auto P = random_field(gg, 1, rng);
            const auto D = random_field(gg, 1, rng);
            const auto Pc = naive_dft(P), Dc = naive_dft(D);
            double lap = 0.0, dt = 0.0;
            for (std::size_t m = 0; m < gg.points(); ++m) {
                const auto k = gg.wavevector(m);
                const double k2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
                lap += k2 * k2 * std::norm(Pc[m]);
                dt += std::norm(Dc[m]);
            }
            lap *= gg.box_volume();
            dt *= gg.box_volume();
            const auto parts = norm_E_squared(P, D);
            CHECK_THAT(parts.lap_term, WithinRel(lap, 1e-10));
            CHECK_THAT(parts.dtP_term, WithinRel(dt, 1e-10));
            CHECK(parts.total == parts.dtP_term + parts.lap_term);
        }
    }

    CHECK_THROWS_AS(norm_E_squared(cos_x(g), RealField(GridSpec(2, 16), 1)), ArityError);
}

TEST_CASE("inner_product_E", "[pressure_energy][inner]") {
    const GridSpec g(2, 32);
    const RealField zero(g, 1);
    CHECK_THAT(inner_product_E(cos_x(g), zero, cos_x(g), zero), WithinRel(2.0 * pi * pi, 1e-13));
    CHECK_THAT(inner_product_E(cos_x(g), zero, cos_y(g), zero), WithinAbs(0.0, 1e-12));

    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 5; ++trial) {
        const auto P1 = random_field(g, 1, rng), D1 = random_field(g, 1, rng);
        const auto P2 = random_field(g, 1, rng), D2 = random_field(g, 1, rng);
        const auto P3 = random_field(g, 1, rng), D3 = random_field(g, 1, rng);
        const double a = 1.7, b = -0.4;

        const double lhs = inner_product_E(a * P1 + b * P2, a * D1 + b * D2, P3, D3);
        const double rhs = a * inner_product_E(P1, D1, P3, D3) + b * inner_product_E(P2, D2, P3, D3);
        CHECK_THAT(lhs, WithinRel(rhs, 1e-10));

        CHECK(inner_product_E(P1, D1, P2, D2) == inner_product_E(P2, D2, P1, D1));
        const double self = inner_product_E(P1, D1, P1, D1);
        CHECK(self >= 0.0);
        CHECK_THAT(self, WithinRel(norm_E_squared(P1, D1).total, 1e-12));

        const double n1 = std::sqrt(self), n2 = std::sqrt(norm_E_squared(P2, D2).total);
        CHECK(std::abs(inner_product_E(P1, D1, P2, D2)) <= n1 * n2 * (1 + 1e-10));
    }

    CHECK_THROWS_AS(inner_product_E(cos_x(g), zero, cos_x(g), RealField(g, 2)), ArityError);
}

TEST_CASE("sobolev_norm", "[pressure_energy][sobolev]") {
    const GridSpec g(2, 32);
    const auto f = cos_x(g);
    const double base = std::sqrt(2.0 * pi * pi);
    CHECK_THAT(sobolev_norm(f, 0), WithinRel(base, 1e-13));
    CHECK_THAT(sobolev_norm(f, 1), WithinRel(std::sqrt(2.0) * base, 1e-13));
    CHECK_THAT(sobolev_norm(f, 2), WithinRel(2.0 * base, 1e-13));
    CHECK_THAT(sobolev_norm(f, -1), WithinRel(std::sqrt(pi * pi), 1e-13));

    CHECK_THROWS_AS(sobolev_norm(f, 3), ConfigError);
    CHECK_THROWS_AS(sobolev_norm(f, 0.5), ConfigError);
    CHECK_THROWS_AS(sobolev_norm(RealField(g, 2), 0), ArityError);

    SECTION("orders are monotone on zero-mean fields") {
        std::mt19937_64 rng(29);
        for (int trial = 0; trial < 5; ++trial) {
            auto r = random_field(g, 1, rng);
            const double mean = integrate(r) / g.box_volume();
            for (double& v : r.data()) v -= mean;
            const double m1 = sobolev_norm(r, -1), z = sobolev_norm(r, 0), p1 = sobolev_norm(r, 1), p2 = sobolev_norm(r, 2);
            CHECK(m1 <= z);
            CHECK(z <= p1);
            CHECK(p1 <= p2);
        }
    }
}

TEST_CASE("norm_B", "[pressure_energy][normB]") {
    const GridSpec g(2, 16);
    const RealField zero(g, 1);

    std::vector<PressureSnapshot> quiet(3, PressureSnapshot{zero, zero});
    CHECK(norm_B(quiet, 0.5) == 0.0);

    std::vector<PressureSnapshot> fixed(11, PressureSnapshot{cos_x(g), zero});
    CHECK_THAT(norm_B(fixed, 0.1), WithinRel(sobolev_norm(cos_x(g), 2), 1e-13));

    std::vector<PressureSnapshot> doubled(11, PressureSnapshot{2.0 * cos_x(g), zero});
    CHECK_THAT(norm_B(doubled, 0.1), WithinRel(2.0 * norm_B(fixed, 0.1), 1e-13));

    SECTION("the H^-1 part adds on") {
        // P = t cos x over [0, 1]: ∂_t P = cos x, ‖P‖_{L²H²}² = ∫ t²·8π² dt.
        std::vector<PressureSnapshot> ramp;
        std::vector<double> t, h2, hm1;
        const int steps = 1000;
        for (int i = 0; i <= steps; ++i) {
            const double ti = double(i) / steps;
            ramp.push_back({ti * cos_x(g), cos_x(g)});
            t.push_back(ti);
            h2.push_back(sobolev_norm(ramp.back().P, 2));
            hm1.push_back(sobolev_norm(ramp.back().dtP, -1));
        }
        const double expected = std::sqrt(8.0 * pi * pi / 3.0) + std::sqrt(pi * pi);
        CHECK_THAT(norm_B(ramp, 1.0 / steps), WithinRel(expected, 1e-6));
        CHECK_THAT(norm_B(t, h2, hm1), WithinRel(norm_B(ramp, 1.0 / steps), 1e-12));
    }

    std::vector<PressureSnapshot> one(1, PressureSnapshot{zero, zero});
    CHECK_THROWS_AS(norm_B(one, 0.1), DataError);
    CHECK_THROWS_AS(norm_B(std::span<const PressureSnapshot>{}, 0.1), DataError);
}

TEST_CASE("bound_check", "[pressure_energy][bound]") {
    SECTION("exact proportionality") {
        std::vector<NormSample> s;
        for (int i = 1; i <= 5; ++i) s.push_back(row(i, 2.0 * i, i));
        const auto fit = bound_check(s);
        CHECK(fit.samples_used == 5);
        CHECK_THAT(*fit.c_fit, WithinRel(2.0, 1e-15));
        CHECK_THAT(*fit.c_max, WithinRel(2.0, 1e-15));
    }

    SECTION("all degenerate") {
        std::vector<NormSample> s(4, row(0.0, 0.0, 0.0));
        const auto fit = bound_check(s);
        CHECK(fit.samples_used == 0);
        CHECK_FALSE(fit.c_fit);
        CHECK_FALSE(fit.c_max);
    }

    SECTION("degenerate samples are skipped and c_max dominates c_fit") {
        std::vector<NormSample> s{row(0, 5.0, 1e-15), row(1, 1.0, 1.0), row(2, 3.0, 2.0), row(3, 2.0, 4.0)};
        const auto fit = bound_check(s);
        CHECK(fit.samples_used == 3);
        CHECK_THAT(*fit.c_max, WithinRel(1.5, 1e-15));
        // Σxy/Σx² = (1 + 6 + 8)/(1 + 4 + 16)
        CHECK_THAT(*fit.c_fit, WithinRel(15.0 / 21.0, 1e-15));
        CHECK(*fit.c_max >= *fit.c_fit);
    }

    CHECK_THROWS_AS(bound_check({}), DataError);
}

TEST_CASE("blowup_update", "[pressure_energy][blowup]") {
    BlowupState s{0.0, 10.0, false};
    s = blowup_update(s, row(0, 0, 0), 1.0);
    CHECK(s.accumulator == 0.0);
    CHECK_FALSE(s.tripped);

    const auto three = row(1, 1.0, 3.0);
    for (int i = 1; i <= 3; ++i) {
        s = blowup_update(s, three, 1.0);
        CHECK_FALSE(s.tripped);
    }
    CHECK(s.accumulator == 9.0);
    s = blowup_update(s, three, 1.0);
    CHECK(s.accumulator == 12.0);
    CHECK(s.tripped);

    // The latch holds even if the threshold is raised afterwards.
    s.threshold = 100.0;
    s = blowup_update(s, row(2, 0, 0), 1.0);
    CHECK(s.tripped);
    CHECK(s.accumulator == 12.0);

    CHECK_THROWS_AS(blowup_update(s, three, 0.0), ConfigError);
}

TEST_CASE("variational_residual", "[pressure_energy][variational]") {
    const GridSpec g(2, 32);
    const RealField zero(g, 1), still(g, 2);
    const std::vector<std::array<int, 3>> modes{{1, 0, 0}, {0, 1, 0}, {2, -3, 0}};

    for (double r : variational_residual(zero, zero, still, modes)) CHECK(r == 0.0);

    const auto r = variational_residual(cos_x(g), zero, still, modes);
    CHECK_THAT(r[0], WithinRel(2.0 * pi * pi, 1e-13));
    CHECK_THAT(r[1], WithinAbs(0.0, 1e-12));
    CHECK_THAT(r[2], WithinAbs(0.0, 1e-12));

    SECTION("the convective part pairs DtP with u·∇φ") {
        // u = (1, 0), φ = cos x: D_tφ = −sin x. DtP = sin x gives −∫ sin²x = −2π².
        RealField u(g, 2);
        for (double& v : u.component(0)) v = 1.0;
        const auto DtP = scalar(g, [](double x, double, double) { return std::sin(x); });
        const std::vector<std::array<int, 3>> one{{1, 0, 0}};
        CHECK_THAT(variational_residual(zero, DtP, u, one)[0], WithinRel(-2.0 * pi * pi, 1e-13));
    }

    const std::vector<std::array<int, 3>> outside{{11, 0, 0}};
    CHECK_THROWS_AS(variational_residual(zero, zero, still, outside), ConfigError);
}
