// SPDX-License-Identifier: Apache-2.0
//
// Real spherical/zonal harmonics: basis evaluation, spherical-cap projection,
// zonal rotation, dot products, fast zonal convolution, windowing, and the
// quadrature projector used by tests and BRDF tabulation.
//
// Conventions (documented because every SH library picks its own):
//  - Real basis, no Condon-Shortley phase in P_l^m:
//      Y_l^m = sqrt2 K_l^m P_l^m(cos t) cos(m p)   m > 0
//      Y_l^0 =       K_l^0 P_l^0(cos t)
//      Y_l^m = sqrt2 K_l^|m| P_l^|m|(cos t) sin(|m| p)   m < 0
//    with K_l^m = sqrt((2l+1)/(4pi) (l-m)!/(l+m)!).  Y_1^1 = +0.488603 x.
//  - Flat coefficient index i = l(l+1)+m, bands N => N^2 coefficients.
//  - Windowing: Hann taper of width 2N, w_0 = 1, w_l = (1+cos(pi l/(2N)))/2.
#pragma once

#include <functional>
#include <vector>

#include "hvl/vec.hpp"

namespace hvl::sh {

constexpr int kMaxBands = 32;

// Legendre polynomial P_l(x) by the Bonnet three-term recurrence.
double legendre(int l, double x);

// Associated Legendre P_l^m(x), m >= 0, no Condon-Shortley sign.
double assocLegendre(int l, int m, double x);

// Normalization constant K_l^m.
double shNormalization(int l, int m);

// Single real SH basis value.
double shBasis(int l, int m, const Vec3& dir);

// All bands^2 basis values at once (used by projection and gather loops).
void shBasisAll(int bands, const Vec3& dir, double* out);

struct ZhVector {
    std::vector<double> c;

    ZhVector() = default;
    explicit ZhVector(int bands) : c(static_cast<size_t>(bands), 0.0) {}
    int bands() const { return static_cast<int>(c.size()); }
    double operator[](int l) const { return c[static_cast<size_t>(l)]; }
    double& operator[](int l) { return c[static_cast<size_t>(l)]; }
};

struct ShVector {
    std::vector<double> c;

    ShVector() = default;
    explicit ShVector(int bands) : c(static_cast<size_t>(bands) * bands, 0.0) {}
    int bands() const {
        int n = 0;
        while (n * n < static_cast<int>(c.size())) ++n;
        return n;
    }
    static int index(int l, int m) { return l * (l + 1) + m; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
};

// Band-limited reconstruction sum coeffs x basis.
double reconstruct(const ShVector& v, const Vec3& dir);

// Zonal reconstruction of a circular-symmetric function at polar angle
// arccos(z) from its axis.
double reconstructZonal(const ZhVector& zh, double z);

// Integral of P_l(cos t) sin t over t in [0, a], alpha = cos a.
// Closed form (P_{l-1}(alpha) - P_{l+1}(alpha)) / (2l+1) with P_{-1} == 1.
double capIntegral(int l, double alpha);

// Zonal coefficients of the unit-luminance spherical cap of half-angle a
// about +z: sqrt(pi/(2l+1)) (P_{l-1}(alpha) - P_{l+1}(alpha)), l=0 gives
// sqrt(pi)(1-alpha).
ZhVector zhCap(double a, int bands);

// Re-orient a circular-symmetric function about an arbitrary axis:
// result_l^m = sqrt(4pi/(2l+1)) Y_l^m(axis) zh_l.
ShVector zhRotateToSh(const ZhVector& zh, const Vec3& axis);

// Elementwise dot over the shared band prefix; equals the integral of the
// product of the two band-limited reconstructions.
double shDot(const ShVector& a, const ShVector& b);

// Spherical convolution of two circular-symmetric functions:
// result_l = sqrt(4pi/(2l+1)) f_l g_l.
ZhVector zhConvolve(const ZhVector& f, const ZhVector& g);

// Per-band window weight (Hann taper, width 2N).
double windowWeight(int l, int bands);

// Apply the window to every m of each band; band 0 unchanged.
ShVector windowCoeffs(const ShVector& v);

// Irradiance behind a clamped cosine from zonal luminance bands 0..2,
// z = cos of the angle between the luminance axis and the surface normal.
// Quadratic form with the Ramamoorthi-Hanrahan constants.
double illuminance(double z, const ZhVector& zh3);

// Gauss-Legendre nodes/weights on [a, b].
void gaussLegendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

// Numerical projection on the SH basis: product rule, Gauss-Legendre in
// cos(theta) split per hemisphere x uniform phi. The split keeps
// hemisphere-supported integrands (clamped cosine, BRDF slices) exact.
// thetaNodes/phiNodes of 0 pick 2N+2 per hemisphere and 4N+4.
ShVector projectQuadrature(const std::function<double(const Vec3&)>& f, int bands,
                           int thetaNodes = 0, int phiNodes = 0);

}  // namespace hvl::sh
