#include <doctest.h>

#include <cmath>
#include <random>

#include "raytrans/families.hpp"
#include "raytrans/geometry.hpp"

using namespace raytrans;

namespace {

std::mt19937_64 rng(20260810ull);
double unif(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}
DiscPoint rand_disc(double rmax) {
    return DiscPoint(std::polar(rmax * std::sqrt(unif(0.0, 1.0)), unif(0.0, 2 * M_PI)));
}

}  // namespace

TEST_CASE("disc point invariants") {
    CHECK_NOTHROW(DiscPoint(0.3, 0.4));
    CHECK_THROWS_AS(DiscPoint(0.8, 0.8), DomainError);
    CHECK_NOTHROW(DiscPoint(1.0, 0.0, true));
    CHECK_THROWS_AS(DiscPoint(0.9, 0.0, true), DomainError);
}

TEST_CASE("lines eval_coeffs contract examples") {
    auto fam = lines_family();
    const DiscPoint z(0.3, 0.4);
    auto c = eval_coeffs(*fam, z, cplx(1.0, 0.0));
    CHECK(std::abs(c.xi - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(c.rho - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(c.s_lambda - cplx(-0.4, 0.0)) < 1e-14);

    c = eval_coeffs(*fam, z, cplx(0.0, 1.0));
    CHECK(std::abs(c.xi - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(c.rho - cplx(0.0, -1.0)) < 1e-15);

    CHECK_THROWS_AS(eval_coeffs(*fam, z, cplx(0.0, 0.0)), SingularLambda);
}

TEST_CASE("mu_ratio: lines is lambda^2, unimodular on the circle") {
    auto fam = lines_family();
    const DiscPoint z(0.21, -0.37);
    const cplx lam(0.3, 0.45);
    CHECK(std::abs(mu_ratio(*fam, z, lam) - lam * lam) < 1e-15);
    for (int k = 0; k < 32; ++k) {
        const cplx l = std::polar(1.0, unif(0.0, 2 * M_PI));
        CHECK(std::abs(std::abs(mu_ratio(*fam, z, l)) - 1.0) < 1e-14);
    }
}

TEST_CASE("hyperbolic: curve/params round trip and s constant along curves") {
    auto fam = hyperbolic_family();
    for (int k = 0; k < 400; ++k) {
        const DiscPoint z = rand_disc(0.9);
        const auto [t, s] = fam->curve_params(z.z());
        CHECK(std::abs(fam->curve(t, s) - z.z()) < 1e-10);
    }
    for (double s0 : {-0.8, -0.2, 0.33, 0.71}) {
        for (double t : {-2.0, -0.4, 0.9, 2.2}) {
            const cplx zc = fam->curve(t, s0);
            const auto [tt, ss] = fam->curve_params(zc);
            CHECK(std::abs(ss - s0) < 1e-10);
            CHECK(std::abs(tt - t) < 1e-9);
        }
    }
}

TEST_CASE("hyperbolic: A(z, conj z) equals the curve velocity") {
    auto fam = hyperbolic_family();
    for (int k = 0; k < 50; ++k) {
        const DiscPoint z = rand_disc(0.85);
        const auto [t, s] = fam->curve_params(z.z());
        const double h = 1e-6;
        const cplx dgdt = (fam->curve(t + h, s) - fam->curve(t - h, s)) / (2.0 * h);
        const cplx mu = fam->A(z.z(), std::conj(z.z()));
        CHECK(std::abs(mu - dgdt) < 1e-8);
    }
}

TEST_CASE("transport annihilation at complex lambda (both builtins)") {
    for (auto fam : {lines_family(), hyperbolic_family()}) {
        double worst = 0.0;
        for (int k = 0; k < 2000; ++k) {
            const DiscPoint z = rand_disc(0.9);
            const cplx lam = std::polar(unif(0.05, 0.99), unif(0.0, 2 * M_PI));
            const auto c = eval_coeffs(*fam, z, lam);
            const double num = std::abs(c.xi * c.ds_dz + c.rho * c.ds_dzbar);
            const double den = std::abs(c.xi * c.ds_dz) + std::abs(c.rho * c.ds_dzbar);
            if (den > 0) worst = std::max(worst, num / den);
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("boundary modulus and interior contraction") {
    for (auto fam : {lines_family(), hyperbolic_family()}) {
        const DiscPoint z = rand_disc(0.9);
        double worst = 0.0;
        for (int k = 0; k < 512; ++k)
            worst = std::max(
                worst, std::abs(std::abs(mu_ratio(*fam, z, std::polar(1.0, 2 * M_PI * k / 512))) - 1.0));
        CHECK(worst < 1e-10);
    }
    for (auto fam : {lines_family(), hyperbolic_family()}) {
        for (int k = 0; k < 10000; ++k) {
            const DiscPoint z = rand_disc(0.95);
            const cplx lam = std::polar(unif(0.02, 0.999), unif(0.0, 2 * M_PI));
            CHECK(std::abs(mu_ratio(*fam, z, lam)) < 1.0);
        }
    }
}

TEST_CASE("jacobian_ds values and sign flip") {
    auto lines = lines_family();
    const DiscPoint z(0.11, 0.07);
    CHECK(jacobian_ds(*lines, z, cplx(0.5, 0.0)) == doctest::Approx(0.9375).epsilon(1e-12));
    CHECK(std::abs(jacobian_ds(*lines, z, std::polar(1.0, 0.9))) < 1e-12);

    auto hyp = hyperbolic_family();
    CHECK(jacobian_ds(*hyp, DiscPoint(0.1, 0.0), std::polar(0.7, M_PI / 3)) > 0.0);
    for (auto fam : {lines, hyp}) {
        for (int k = 0; k < 1000; ++k) {
            const DiscPoint zz = rand_disc(0.9);
            CHECK(jacobian_ds(*fam, zz, std::polar(0.5, unif(0.0, 2 * M_PI))) > 0.0);
            CHECK(jacobian_ds(*fam, zz, std::polar(2.0, unif(0.0, 2 * M_PI))) < 0.0);
        }
    }
}

TEST_CASE("hyperbolic transverse positivity: Xperp_theta s > 0") {
    auto fam = hyperbolic_family();
    for (int k = 0; k < 500; ++k) {
        const DiscPoint z = rand_disc(0.93);
        CHECK(xperp_s(*fam, z.z(), unif(0.0, 2 * M_PI)) > 0.0);
    }
}

TEST_CASE("apply_X and apply_X_perp on sampled fields") {
    auto fam = lines_family();
    const DiscPoint z(0.2, -0.1);
    auto make_field = [&](auto&& fn) {
        GridField g;
        g.h = 1e-3;
        g.nx = g.ny = 9;
        g.x0 = z.re - 4 * g.h;
        g.y0 = z.im - 4 * g.h;
        g.values.resize(81);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j) g.at(i, j) = fn(cplx(g.x0 + i * g.h, g.y0 + j * g.h));
        return g;
    };
    auto cf = make_field([](cplx) { return 3.25; });
    CHECK(std::abs(apply_X(*fam, cf, z, 1.1)) < 1e-12);
    CHECK(std::abs(apply_X_perp(*fam, cf, z, 1.1)) < 1e-12);
    auto sf = make_field([](cplx w) { return -w.imag(); });
    const cplx xp = apply_X_perp(*fam, sf, z, 0.0);
    CHECK(xp.real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(xp.imag()) < 1e-8);
    const cplx xt = apply_X(*fam, make_field([](cplx w) { return w.real(); }), z, 0.0);
    CHECK(xt.real() == doctest::Approx(1.0).epsilon(1e-10));
    GridField small;
    small.h = 1e-3;
    small.nx = small.ny = 9;
    small.x0 = z.re;
    small.y0 = z.im;
    small.values.assign(81, 0.0);
    CHECK_THROWS_AS(apply_X(*fam, small, z, 0.0), GridBoundary);
}

TEST_CASE("Cauchy-circle derivative fallback matches analytic partials") {
    auto hyp = hyperbolic_family();
    PolarizedFamily nofall;
    nofall.name = "hyp-nopartials";
    nofall.A = hyp->A;
    nofall.B = hyp->B;
    nofall.s_pol = hyp->s_pol;
    nofall.t_pol = hyp->t_pol;
    const DiscPoint z(0.31, -0.22);
    const cplx lam(0.4, 0.55);
    const auto a = eval_coeffs(*hyp, z, lam);
    const auto b = eval_coeffs(nofall, z, lam);
    CHECK(std::abs(a.ds_dz - b.ds_dz) < 1e-11);
    CHECK(std::abs(a.ds_dzbar - b.ds_dzbar) < 1e-11);
    CHECK(std::abs(xperp_t(*hyp, z.z(), 0.8) - xperp_t(nofall, z.z(), 0.8)) < 1e-9);
}

TEST_CASE("xperp_t: zero for lines, matches flow differences for hyperbolic") {
    CHECK(std::abs(xperp_t(*lines_family(), cplx(0.2, 0.3), 1.3)) < 1e-12);
    auto hyp = hyperbolic_family();
    const cplx z(0.23, 0.11);
    for (double theta : {0.0, 1.1, 2.7}) {
        const auto c = eval_coeffs(*hyp, DiscPoint(z), std::polar(1.0, theta));
        const double ax = (cplx(0, 1) * (-c.xi * 0.5 + c.rho * 0.5)).real();
        const double ay = (cplx(0, 1) * (-c.xi * cplx(0, -0.5) + c.rho * cplx(0, 0.5))).real();
        const double h = 1e-6;
        const cplx rot = std::polar(1.0, -theta);  // t at lambda = e^{i theta} is t(z e^{-i theta})
        auto t_of = [&](cplx w) { return hyp->curve_params(w * rot)[0]; };
        const double fd = (t_of(z + h * cplx(ax, ay)) - t_of(z - h * cplx(ax, ay))) / (2 * h);
        CHECK(xperp_t(*hyp, z, theta) == doctest::Approx(fd).epsilon(1e-6));
    }
}
