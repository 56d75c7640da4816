// SPDX-License-Identifier: Apache-2.0
//
// Independent numeric oracles used by the tests: adaptive 1-D quadrature,
// exact cap-domain SH projection, and a brute-force spherical convolution.
// These deliberately avoid the closed forms they are used to check.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "hvl/sh.hpp"
#include "hvl/vec.hpp"

namespace oracles {

inline double adaptiveSimpsonRec(const std::function<double(double)>& f, double a, double b,
                                 double fa, double fm, double fb, double whole, double tol,
                                 int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptiveSimpsonRec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptiveSimpsonRec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

inline double adaptiveSimpson(const std::function<double(double)>& f, double a, double b,
                              double tol = 1e-12) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptiveSimpsonRec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Projection of the indicator of a spherical cap (half-angle a about an
// arbitrary axis) onto the SH basis. Integrates over the cap domain, where
// the integrand is a polynomial, so Gauss-Legendre is exact; no closed-form
// cap coefficients are involved.
inline hvl::sh::ShVector projectCapQuadrature(const hvl::Vec3& axis, double a, int bands) {
    using namespace hvl;
    sh::ShVector out(bands);
    int nt = 2 * bands + 2, np = 4 * bands + 4;
    std::vector<double> t, wt;
    sh::gaussLegendre(nt, std::cos(a), 1.0, t, wt);
    Frame frame = Frame::fromZ(axis);
    std::vector<double> basis(static_cast<size_t>(bands) * bands);
    double dphi = kTwoPi / np;
    for (int it = 0; it < nt; ++it) {
        double z = t[static_cast<size_t>(it)];
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int ip = 0; ip < np; ++ip) {
            double phi = (ip + 0.5) * dphi;
            Vec3 dir = frame.toWorld(Vec3(s * std::cos(phi), s * std::sin(phi), z));
            sh::shBasisAll(bands, dir, basis.data());
            double w = wt[static_cast<size_t>(it)] * dphi;
            for (size_t i = 0; i < out.c.size(); ++i) out[static_cast<int>(i)] += w * basis[i];
        }
    }
    return out;
}

// Spherical convolution of two circular-symmetric band-limited functions,
// computed entirely by quadrature: h(w) = integral f(w') g(w . w') dw',
// then projected back onto the zonal basis.
inline hvl::sh::ZhVector sphericalConvolveQuadrature(const hvl::sh::ZhVector& f,
                                                     const hvl::sh::ZhVector& g) {
    using namespace hvl;
    int bands = f.bands();
    int nt = 2 * bands + 2, np = 4 * bands + 4;
    std::vector<double> u, wu;
    sh::gaussLegendre(nt, -1.0, 1.0, u, wu);
    double dphi = kTwoPi / np;

    auto h = [&](double zOut) {
        // Evaluation direction in the xz plane, at polar angle acos(zOut).
        double sOut = std::sqrt(std::max(0.0, 1.0 - zOut * zOut));
        Vec3 w(sOut, 0.0, zOut);
        double sum = 0.0;
        for (int iu = 0; iu < nt; ++iu) {
            double z = u[static_cast<size_t>(iu)];
            double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            double fv = sh::reconstructZonal(f, z);
            for (int ip = 0; ip < np; ++ip) {
                double phi = (ip + 0.5) * dphi;
                Vec3 wp(s * std::cos(phi), s * std::sin(phi), z);
                sum += fv * sh::reconstructZonal(g, dot(w, wp)) * wu[static_cast<size_t>(iu)] * dphi;
            }
        }
        return sum;
    };

    sh::ZhVector out(bands);
    for (int l = 0; l < bands; ++l) {
        double acc = 0.0;
        for (int iu = 0; iu < nt; ++iu) {
            double z = u[static_cast<size_t>(iu)];
            acc += h(z) * sh::shNormalization(l, 0) * sh::legendre(l, z) * wu[static_cast<size_t>(iu)];
        }
        out[l] = kTwoPi * acc;
    }
    return out;
}

// Integral over a spherical cap (about an axis at angle beta from +z) of
// max(0, cos theta), by cap-domain quadrature.
inline double capCosineIntegral(double a, double beta, int nodes = 64) {
    using namespace hvl;
    std::vector<double> t, wt;
    sh::gaussLegendre(nodes, std::cos(a), 1.0, t, wt);
    Frame frame = Frame::fromZ(Vec3(std::sin(beta), 0.0, std::cos(beta)));
    int np = 2 * nodes;
    double dphi = kTwoPi / np, sum = 0.0;
    for (int it = 0; it < nodes; ++it) {
        double z = t[static_cast<size_t>(it)];
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int ip = 0; ip < np; ++ip) {
            double phi = (ip + 0.5) * dphi;
            Vec3 dir = frame.toWorld(Vec3(s * std::cos(phi), s * std::sin(phi), z));
            sum += std::max(0.0, dir.z) * wt[static_cast<size_t>(it)] * dphi;
        }
    }
    return sum;
}

}  // namespace oracles
