// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hvl/rng.hpp"
#include "hvl/sh.hpp"
#include "oracles.hpp"

using namespace hvl;
using namespace hvl::sh;

namespace {

Vec3 randomDir(Rng& rng) {
    double z = 2.0 * rng.nextDouble() - 1.0;
    double phi = kTwoPi * rng.nextDouble();
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

}  // namespace

TEST_CASE("legendre basics and domain") {
    CHECK(legendre(0, 0.3) == doctest::Approx(1.0));
    CHECK(legendre(1, -0.7) == doctest::Approx(-0.7));
    CHECK(legendre(2, 0.5) == doctest::Approx(-0.125));
    CHECK_THROWS_AS(legendre(2, 1.1), std::domain_error);
    CHECK_THROWS_AS(legendre(-1, 0.0), std::domain_error);
}

TEST_CASE("assocLegendre convention and degeneracies") {
    // No Condon-Shortley sign: P_1^1(0) = +1.
    CHECK(assocLegendre(1, 1, 0.0) == doctest::Approx(1.0));
    for (int m = 1; m <= 4; ++m) {
        CHECK(assocLegendre(m, m, 1.0) == doctest::Approx(0.0));
        CHECK(assocLegendre(m, m, -1.0) == doctest::Approx(0.0));
    }
    CHECK(assocLegendre(2, 0, 0.5) == doctest::Approx(legendre(2, 0.5)));
    CHECK_THROWS_AS(assocLegendre(2, 3, 0.0), std::domain_error);
}

TEST_CASE("shBasis fixed values") {
    CHECK(shBasis(0, 0, Vec3(0, 1, 0)) == doctest::Approx(0.2820948).epsilon(1e-6));
    CHECK(shBasis(1, 0, Vec3(0, 0, 1)) == doctest::Approx(0.4886025).epsilon(1e-6));
    // Y_1^1 = 0.488603 x in this convention.
    CHECK(shBasis(1, 1, Vec3(1, 0, 0)) == doctest::Approx(0.4886025).epsilon(1e-6));
}

TEST_CASE("shBasisAll matches shBasis") {
    Rng rng(7);
    double all[kMaxBands * kMaxBands];
    for (int trial = 0; trial < 20; ++trial) {
        Vec3 d = randomDir(rng);
        shBasisAll(10, d, all);
        for (int l = 0; l < 10; ++l)
            for (int m = -l; m <= l; ++m)
                CHECK(all[ShVector::index(l, m)] ==
                      doctest::Approx(shBasis(l, m, d)).epsilon(1e-12));
    }
}

TEST_CASE("orthonormality to 1e-6 for l <= 9") {
    for (int l = 0; l <= 9; ++l) {
        for (int m = -l; m <= l; ++m) {
            ShVector p = projectQuadrature([&](const Vec3& d) { return shBasis(l, m, d); }, 10);
            for (int i = 0; i < 100; ++i) {
                double want = i == ShVector::index(l, m) ? 1.0 : 0.0;
                CHECK(std::abs(p[i] - want) < 1e-6);
            }
        }
    }
}

TEST_CASE("reconstruct basics") {
    ShVector v(2);
    v[0] = 1.0;
    CHECK(reconstruct(v, Vec3(0, 0, 1)) == doctest::Approx(1.0 / (2.0 * std::sqrt(kPi))));

    ShVector ones = projectQuadrature([](const Vec3&) { return 1.0; }, 3);
    Rng rng(3);
    for (int i = 0; i < 8; ++i)
        CHECK(reconstruct(ones, randomDir(rng)) == doctest::Approx(1.0).epsilon(1e-9));

    ShVector y21 = projectQuadrature([](const Vec3& d) { return shBasis(2, 1, d); }, 3);
    for (int i = 0; i < 8; ++i) {
        Vec3 d = randomDir(rng);
        CHECK(std::abs(reconstruct(y21, d) - shBasis(2, 1, d)) < 1e-6);
    }
}

TEST_CASE("projectQuadrature fixed projections") {
    ShVector c = projectQuadrature([](const Vec3&) { return 1.0; }, 3);
    CHECK(c[0] == doctest::Approx(2.0 * std::sqrt(kPi)));
    for (int i = 1; i < 9; ++i) CHECK(std::abs(c[i]) < 1e-12);

    ShVector y = projectQuadrature([](const Vec3& d) { return shBasis(1, -1, d); }, 3);
    for (int i = 0; i < 9; ++i) {
        double want = i == ShVector::index(1, -1) ? 1.0 : 0.0;
        CHECK(std::abs(y[i] - want) < 1e-6);
    }

    // Hemisphere indicator vs the closed-form cap coefficients.
    ShVector hemi =
        projectQuadrature([](const Vec3& d) { return d.z > 0.0 ? 1.0 : 0.0; }, 4);
    ShVector capSh = zhRotateToSh(zhCap(kHalfPi, 4), Vec3(0, 0, 1));
    for (int i = 0; i < 16; ++i) CHECK(std::abs(hemi[i] - capSh[i]) < 1e-6);
}

TEST_CASE("capIntegral closed form vs adaptive quadrature") {
    CHECK(capIntegral(0, 0.0) == doctest::Approx(1.0));
    CHECK(capIntegral(1, 0.0) == doctest::Approx(0.5));
    for (int l = 1; l <= 6; ++l) CHECK(capIntegral(l, 1.0) == doctest::Approx(0.0));

    for (int l = 0; l <= 20; ++l) {
        for (int ia = 1; ia <= 30; ++ia) {
            double a = kPi * ia / 30.0;
            double ref = oracles::adaptiveSimpson(
                [l](double th) { return legendre(l, std::cos(th)) * std::sin(th); }, 0.0, a);
            CHECK(std::abs(capIntegral(l, std::cos(a)) - ref) < 1e-9);
        }
    }
}

TEST_CASE("zhCap fixed values and limits") {
    ZhVector full = zhCap(kPi, 4);
    CHECK(full[0] == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-9));
    for (int l = 1; l < 4; ++l) CHECK(std::abs(full[l]) < 1e-12);

    ZhVector hemi = zhCap(kHalfPi, 2);
    CHECK(hemi[0] == doctest::Approx(1.77245).epsilon(1e-5));
    CHECK(hemi[1] == doctest::Approx(1.53499).epsilon(1e-5));

    ZhVector zero = zhCap(0.0, 5);
    for (int l = 0; l < 5; ++l) CHECK(std::abs(zero[l]) < 1e-12);

    double prev = 0.0;
    for (double a = 0.1; a <= kPi + 1e-9; a += 0.1) {
        double l0 = zhCap(a, 1)[0];
        CHECK(l0 > prev);
        prev = l0;
    }
}

TEST_CASE("zhRotateToSh axis cases and quadrature cross-check") {
    ZhVector zh = zhCap(0.7, 5);
    ShVector alignedZ = zhRotateToSh(zh, Vec3(0, 0, 1));
    for (int l = 0; l < 5; ++l) {
        CHECK(alignedZ[ShVector::index(l, 0)] == doctest::Approx(zh[l]).epsilon(1e-12));
        for (int m = -l; m <= l; ++m)
            if (m != 0) CHECK(std::abs(alignedZ[ShVector::index(l, m)]) < 1e-12);
    }

    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        Vec3 axis = randomDir(rng);
        double a = 0.2 + 0.6 * rng.nextDouble();
        ShVector rotated = zhRotateToSh(zhCap(a, 10), axis);
        ShVector projected = oracles::projectCapQuadrature(axis, a, 10);
        for (int i = 0; i < 100; ++i) CHECK(std::abs(rotated[i] - projected[i]) < 1e-6);
    }

    // Reconstruction peaks at the cap axis for a < pi/2.
    Vec3 axis = normalize(Vec3(0.3, -0.5, 0.8));
    ShVector rot = zhRotateToSh(zhCap(0.5, 10), axis);
    double atAxis = reconstruct(rot, axis);
    for (int i = 0; i < 64; ++i) {
        Vec3 d = randomDir(rng);
        CHECK(reconstruct(rot, d) <= atAxis + 1e-9);
    }
}

TEST_CASE("shDot basics and Parseval") {
    ShVector a(2), b(2);
    a[ShVector::index(1, 0)] = 1.0;
    b[ShVector::index(1, 0)] = 1.0;
    CHECK(shDot(a, b) == doctest::Approx(1.0));
    CHECK(shDot(ShVector(3), b) == doctest::Approx(0.0));

    auto f = [](const Vec3& d) { return 0.3 + d.x * d.z + 0.5 * d.y; };
    auto g = [](const Vec3& d) { return 1.0 - 0.7 * d.z * d.z; };
    ShVector fp = projectQuadrature(f, 4);
    ShVector gp = projectQuadrature(g, 4);
    // Integral of the product of the two band-limited reconstructions.
    double ref = 0.0;
    {
        std::vector<double> u, wu;
        gaussLegendre(16, -1.0, 1.0, u, wu);
        int np = 32;
        for (size_t iu = 0; iu < u.size(); ++iu) {
            double s = std::sqrt(std::max(0.0, 1.0 - u[iu] * u[iu]));
            for (int ip = 0; ip < np; ++ip) {
                double phi = (ip + 0.5) * kTwoPi / np;
                Vec3 d(s * std::cos(phi), s * std::sin(phi), u[iu]);
                ref += reconstruct(fp, d) * reconstruct(gp, d) * wu[iu] * kTwoPi / np;
            }
        }
    }
    CHECK(shDot(fp, gp) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("zhConvolve identity, constant, quadrature cross-check") {
    Rng rng(5);
    int bands = 6;
    ZhVector f(bands);
    for (int l = 0; l < bands; ++l) f[l] = 2.0 * rng.nextDouble() - 1.0;

    // Band-limited delta: g_l = Y_l^0(+z); identity kernel of the convolution.
    ZhVector delta(bands);
    for (int l = 0; l < bands; ++l) delta[l] = shNormalization(l, 0);
    CHECK(std::abs(std::sqrt(4.0 * kPi) * delta[0] - 1.0) < 1e-12);
    ZhVector conv = zhConvolve(f, delta);
    for (int l = 0; l < bands; ++l) CHECK(conv[l] == doctest::Approx(f[l]).epsilon(1e-12));

    // Single-band flavor of the same identity.
    ZhVector f0(1), g0(1);
    f0[0] = 0.37;
    g0[0] = 1.0 / (2.0 * std::sqrt(kPi));
    CHECK(zhConvolve(f0, g0)[0] == doctest::Approx(0.37).epsilon(1e-12));

    // Constant f kills every band above 0.
    ZhVector constant = zhCap(kPi, bands);
    ZhVector g(bands);
    for (int l = 0; l < bands; ++l) g[l] = rng.nextDouble();
    ZhVector kc = zhConvolve(constant, g);
    for (int l = 1; l < bands; ++l) CHECK(std::abs(kc[l]) < 1e-12);

    // Cross-check against the brute-force spherical convolution.
    ZhVector fc = zhCap(0.3, 8), gc = zhCap(0.6, 8);
    ZhVector fast = zhConvolve(fc, gc);
    ZhVector slow = oracles::sphericalConvolveQuadrature(fc, gc);
    for (int l = 0; l < 8; ++l) CHECK(std::abs(fast[l] - slow[l]) < 1e-6);

    CHECK_THROWS_AS(zhConvolve(ZhVector(3), ZhVector(4)), std::invalid_argument);
}

TEST_CASE("windowCoeffs attenuation and ringing") {
    ShVector v(5);
    v[0] = 2.0;
    ShVector w0 = windowCoeffs(v);
    CHECK(w0[0] == doctest::Approx(2.0));

    Rng rng(9);
    ShVector rnd(6);
    for (size_t i = 0; i < rnd.c.size(); ++i) rnd.c[i] = 2.0 * rng.nextDouble() - 1.0;
    ShVector win = windowCoeffs(rnd);
    for (size_t i = 0; i < rnd.c.size(); ++i) CHECK(std::abs(win.c[i]) <= std::abs(rnd.c[i]) + 1e-15);

    // Hemisphere-clamped cosine: the window may not deepen the ringing floor.
    ShVector cc = projectQuadrature([](const Vec3& d) { return std::max(0.0, d.z); }, 6);
    ShVector ccw = windowCoeffs(cc);
    double minPlain = 1e30, minWin = 1e30;
    for (int i = 0; i <= 180; ++i) {
        double th = kPi * i / 180.0;
        Vec3 d(std::sin(th), 0.0, std::cos(th));
        minPlain = std::min(minPlain, reconstruct(cc, d));
        minWin = std::min(minWin, reconstruct(ccw, d));
    }
    CHECK(minWin >= minPlain - 1e-12);

    // Windowed cap projection still peaks at the cap axis (1 degree sweep).
    Vec3 axis = normalize(Vec3(0.2, 0.1, 0.97));
    ShVector cap = windowCoeffs(zhRotateToSh(zhCap(0.4, 8), axis));
    Frame f = Frame::fromZ(axis);
    double best = reconstruct(cap, axis);
    for (int i = 1; i <= 180; ++i) {
        double th = kPi * i / 180.0;
        Vec3 d = f.toWorld(Vec3(std::sin(th), 0.0, std::cos(th)));
        CHECK(reconstruct(cap, d) <= best + 1e-9);
    }
}

TEST_CASE("illuminance quadratic form") {
    ZhVector uniform(3);
    uniform[0] = 2.0 * std::sqrt(kPi);
    CHECK(std::abs(illuminance(0.42, uniform) - kPi) < 1e-4);
    CHECK(std::abs(illuminance(-1.0, uniform) - kPi) < 1e-4);

    CHECK(illuminance(0.5, ZhVector(3)) == doctest::Approx(0.0));

    ZhVector cap = zhCap(0.2, 3);
    double ref = oracles::capCosineIntegral(0.2, 0.0);
    CHECK(std::abs(illuminance(1.0, cap) - ref) < 2e-2);
}
