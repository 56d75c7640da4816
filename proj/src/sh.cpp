// SPDX-License-Identifier: Apache-2.0
#include "hvl/sh.hpp"

#include <cmath>
#include <stdexcept>

namespace hvl::sh {

double legendre(int l, double x) {
    if (l < 0) throw std::domain_error("legendre: l must be >= 0");
    if (std::abs(x) > 1.0 + 1e-12) throw std::domain_error("legendre: |x| > 1");
    if (l == 0) return 1.0;
    if (l == 1) return x;
    double pm2 = 1.0, pm1 = x, p = x;
    for (int k = 2; k <= l; ++k) {
        p = ((2 * k - 1) * x * pm1 - (k - 1) * pm2) / k;
        pm2 = pm1;
        pm1 = p;
    }
    return p;
}

double assocLegendre(int l, int m, double x) {
    if (m < 0 || m > l) throw std::domain_error("assocLegendre: need 0 <= m <= l");
    if (std::abs(x) > 1.0 + 1e-12) throw std::domain_error("assocLegendre: |x| > 1");
    // Diagonal P_m^m = (2m-1)!! (1-x^2)^(m/2), then raise l.
    double somx2 = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    double pmm = 1.0;
    for (int k = 1; k <= m; ++k) pmm *= (2 * k - 1) * somx2;
    if (l == m) return pmm;
    double pmmp1 = x * (2 * m + 1) * pmm;
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = ((2 * ll - 1) * x * pmmp1 - (ll + m - 1) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

double shNormalization(int l, int m) {
    // sqrt((2l+1)/(4pi) (l-m)!/(l+m)!), the factorial ratio as a running
    // product so intermediate values stay small.
    double ratio = 1.0;
    for (int k = l - m + 1; k <= l + m; ++k) ratio /= k;
    return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * ratio);
}

namespace {

struct KTable {
    double k[kMaxBands * (kMaxBands + 1) / 2 + kMaxBands];  // index l(l+1)/2+m
    KTable() {
        for (int l = 0; l < kMaxBands; ++l)
            for (int m = 0; m <= l; ++m) k[l * (l + 1) / 2 + m] = shNormalization(l, m);
    }
};

const KTable& kTable() {
    static const KTable t;
    return t;
}

constexpr double kSqrt2 = 1.41421356237309504880;

}  // namespace

double shBasis(int l, int m, const Vec3& dir) {
    if (std::abs(m) > l) throw std::domain_error("shBasis: |m| > l");
    int am = std::abs(m);
    double p = assocLegendre(l, am, clampd(dir.z, -1.0, 1.0));
    double kn = shNormalization(l, am);
    if (m == 0) return kn * p;
    double r = std::sqrt(dir.x * dir.x + dir.y * dir.y);
    double cphi = r > 1e-300 ? dir.x / r : 1.0;
    double sphi = r > 1e-300 ? dir.y / r : 0.0;
    // cos(m p), sin(m p) by the angle-addition recurrence.
    double cm = cphi, sm = sphi;
    for (int k = 2; k <= am; ++k) {
        double cn = cm * cphi - sm * sphi;
        sm = sm * cphi + cm * sphi;
        cm = cn;
    }
    return m > 0 ? kSqrt2 * kn * p * cm : kSqrt2 * kn * p * sm;
}

void shBasisAll(int bands, const Vec3& dir, double* out) {
    if (bands > kMaxBands) throw std::domain_error("shBasisAll: bands too large");
    const KTable& kt = kTable();
    double z = clampd(dir.z, -1.0, 1.0);
    double somx2 = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
    double r = std::sqrt(dir.x * dir.x + dir.y * dir.y);
    double cphi = r > 1e-300 ? dir.x / r : 1.0;
    double sphi = r > 1e-300 ? dir.y / r : 0.0;

    // P_l^m for all l,m via the diagonal-then-raise recurrences.
    double plm[kMaxBands][kMaxBands];
    double pmm = 1.0;
    for (int m = 0; m < bands; ++m) {
        if (m > 0) pmm *= (2 * m - 1) * somx2;
        plm[m][m] = pmm;
        if (m + 1 < bands) plm[m + 1][m] = z * (2 * m + 1) * pmm;
        double pa = pmm, pb = plm[std::min(m + 1, bands - 1)][m];
        for (int l = m + 2; l < bands; ++l) {
            double pc = ((2 * l - 1) * z * pb - (l + m - 1) * pa) / (l - m);
            plm[l][m] = pc;
            pa = pb;
            pb = pc;
        }
    }

    double cm[kMaxBands], sm[kMaxBands];
    cm[0] = 1.0;
    sm[0] = 0.0;
    for (int m = 1; m < bands; ++m) {
        cm[m] = cm[m - 1] * cphi - sm[m - 1] * sphi;
        sm[m] = sm[m - 1] * cphi + cm[m - 1] * sphi;
    }

    for (int l = 0; l < bands; ++l) {
        const double* kl = &kt.k[l * (l + 1) / 2];
        out[l * (l + 1)] = kl[0] * plm[l][0];
        for (int m = 1; m <= l; ++m) {
            double base = kSqrt2 * kl[m] * plm[l][m];
            out[l * (l + 1) + m] = base * cm[m];
            out[l * (l + 1) - m] = base * sm[m];
        }
    }
}

double reconstruct(const ShVector& v, const Vec3& dir) {
    int bands = v.bands();
    double basis[kMaxBands * kMaxBands];
    shBasisAll(bands, dir, basis);
    double sum = 0.0;
    for (size_t i = 0; i < v.c.size(); ++i) sum += v.c[i] * basis[i];
    return sum;
}

double reconstructZonal(const ZhVector& zh, double z) {
    double sum = 0.0;
    for (int l = 0; l < zh.bands(); ++l)
        sum += zh[l] * shNormalization(l, 0) * legendre(l, clampd(z, -1.0, 1.0));
    return sum;
}

double capIntegral(int l, double alpha) {
    if (l < 0) throw std::domain_error("capIntegral: l must be >= 0");
    double pm1 = l == 0 ? 1.0 : legendre(l - 1, alpha);  // P_{-1} == 1
    return (pm1 - legendre(l + 1, alpha)) / (2.0 * l + 1.0);
}

ZhVector zhCap(double a, int bands) {
    ZhVector zh(bands);
    double alpha = std::cos(a);
    if (bands > 0) zh[0] = std::sqrt(kPi) * (1.0 - alpha);
    for (int l = 1; l < bands; ++l)
        zh[l] = std::sqrt(kPi / (2.0 * l + 1.0)) * (legendre(l - 1, alpha) - legendre(l + 1, alpha));
    return zh;
}

ShVector zhRotateToSh(const ZhVector& zh, const Vec3& axis) {
    int bands = zh.bands();
    ShVector out(bands);
    double basis[kMaxBands * kMaxBands];
    shBasisAll(bands, axis, basis);
    for (int l = 0; l < bands; ++l) {
        double scale = std::sqrt(4.0 * kPi / (2.0 * l + 1.0)) * zh[l];
        for (int m = -l; m <= l; ++m) {
            int i = ShVector::index(l, m);
            out[i] = scale * basis[i];
        }
    }
    return out;
}

double shDot(const ShVector& a, const ShVector& b) {
    size_t n = std::min(a.c.size(), b.c.size());
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) sum += a.c[i] * b.c[i];
    return sum;
}

ZhVector zhConvolve(const ZhVector& f, const ZhVector& g) {
    if (f.bands() != g.bands()) throw std::invalid_argument("zhConvolve: band counts differ");
    ZhVector out(f.bands());
    for (int l = 0; l < f.bands(); ++l)
        out[l] = std::sqrt(4.0 * kPi / (2.0 * l + 1.0)) * f[l] * g[l];
    return out;
}

double windowWeight(int l, int bands) {
    if (l == 0) return 1.0;
    return 0.5 * (1.0 + std::cos(kPi * l / (2.0 * bands)));
}

ShVector windowCoeffs(const ShVector& v) {
    int bands = v.bands();
    ShVector out = v;
    for (int l = 1; l < bands; ++l) {
        double w = windowWeight(l, bands);
        for (int m = -l; m <= l; ++m) out[ShVector::index(l, m)] *= w;
    }
    return out;
}

double illuminance(double z, const ZhVector& zh3) {
    if (zh3.bands() < 3) throw std::invalid_argument("illuminance: need bands 0..2");
    constexpr double c2 = 0.511664;
    constexpr double c3 = 0.743125;
    constexpr double c4 = 0.886227;
    constexpr double c5 = 0.247708;
    return c3 * zh3[2] * z * z + 2.0 * c2 * zh3[1] * z + c4 * zh3[0] - c5 * zh3[2];
}

void gaussLegendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<size_t>(n), 0.0);
    w.assign(static_cast<size_t>(n), 0.0);
    int m = (n + 1) / 2;
    double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        // Newton on the i-th root of P_n.
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[static_cast<size_t>(i)] = xm - xl * z;
        x[static_cast<size_t>(n - 1 - i)] = xm + xl * z;
        double wi = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        w[static_cast<size_t>(i)] = wi;
        w[static_cast<size_t>(n - 1 - i)] = wi;
    }
}

ShVector projectQuadrature(const std::function<double(const Vec3&)>& f, int bands,
                           int thetaNodes, int phiNodes) {
    if (thetaNodes <= 0) thetaNodes = 2 * bands + 2;
    if (phiNodes <= 0) phiNodes = 4 * bands + 4;

    std::vector<double> u, wu;
    std::vector<double> ulo, wlo;
    gaussLegendre(thetaNodes, 0.0, 1.0, u, wu);
    gaussLegendre(thetaNodes, -1.0, 0.0, ulo, wlo);
    u.insert(u.end(), ulo.begin(), ulo.end());
    wu.insert(wu.end(), wlo.begin(), wlo.end());

    ShVector out(bands);
    std::vector<double> basis(static_cast<size_t>(bands) * bands);
    double dphi = kTwoPi / phiNodes;
    for (size_t iu = 0; iu < u.size(); ++iu) {
        double z = u[iu];
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int ip = 0; ip < phiNodes; ++ip) {
            double phi = (ip + 0.5) * dphi;
            Vec3 dir(s * std::cos(phi), s * std::sin(phi), z);
            double fw = f(dir) * wu[iu] * dphi;
            if (fw == 0.0) continue;
            shBasisAll(bands, dir, basis.data());
            for (size_t i = 0; i < out.c.size(); ++i) out[static_cast<int>(i)] += fw * basis[i];
        }
    }
    return out;
}

}  // namespace hvl::sh
