// SPDX-License-Identifier: Apache-2.0
#include "hvl/brdf.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace hvl::brdf {

double fresnelDielectric(double cosThetaI, double eta) {
    double ci = clampd(cosThetaI, 0.0, 1.0);
    double sin2t = (1.0 - ci * ci) / (eta * eta);
    if (sin2t >= 1.0) return 1.0;
    double ct = std::sqrt(1.0 - sin2t);
    double rp = (eta * ci - ct) / (eta * ci + ct);
    double rs = (ci - eta * ct) / (ci + eta * ct);
    return 0.5 * (rp * rp + rs * rs);
}

namespace {

// GGX normal distribution; even in h.z, so it extends smoothly below the
// horizon for tabulation.
double ggxD(double hz, double alpha) {
    double a2 = alpha * alpha;
    double d = hz * hz * (a2 - 1.0) + 1.0;
    return a2 / (kPi * d * d);
}

double smithLambda(double absCos, double alpha) {
    double c2 = std::max(absCos * absCos, 1e-14);
    double tan2 = (1.0 - c2) / c2;
    return 0.5 * (-1.0 + std::sqrt(1.0 + alpha * alpha * tan2));
}

}  // namespace

Rgb evalKernelLocal(const BrdfModel& m, const Vec3& wi, const Vec3& wo) {
    if (m.kind == Kind::Lambertian) return m.albedo / kPi;

    Vec3 h = wi + wo;
    double hl = length(h);
    if (hl < 1e-12) return Rgb(0.0);
    h = h / hl;

    double absCi = std::abs(wi.z), absCo = std::abs(wo.z);
    double d = ggxD(h.z, m.roughness);
    double g = 1.0 / (1.0 + smithLambda(absCi, m.roughness) + smithLambda(absCo, m.roughness));
    double f = fresnelDielectric(std::abs(dot(h, wi)), m.eta);
    double denom = 4.0 * std::max(absCi, 1e-7) * std::max(absCo, 1e-7);
    return m.albedo * (d * g * f / denom);
}

Rgb evalBrdf(const BrdfModel& m, const Vec3& wi, const Vec3& wo, const Vec3& n) {
    if (dot(wi, n) <= 0.0 || dot(wo, n) <= 0.0) return Rgb(0.0);
    if (m.kind == Kind::Lambertian) return m.albedo / kPi;
    Frame f = Frame::fromZ(n);
    return evalKernelLocal(m, f.toLocal(wi), f.toLocal(wo));
}

Rgb reconstructRgb(const ShRgb& v, const Vec3& dir, int bands) {
    double basis[sh::kMaxBands * sh::kMaxBands];
    sh::shBasisAll(bands, dir, basis);
    int n = std::min(bands * bands, v.coeffCount());
    Rgb sum(0.0);
    for (int i = 0; i < n; ++i) sum += v.c[static_cast<size_t>(i)] * basis[i];
    return sum;
}

BrdfTable tabulate(const BrdfModel& m, int bands, int thetaSteps) {
    if (bands < 1 || thetaSteps < 1) throw std::invalid_argument("tabulate: bad arguments");
    BrdfTable t;
    t.bands = bands;
    t.thetaSteps = thetaSteps;
    t.entriesF.assign(static_cast<size_t>(thetaSteps), ShRgb(bands));
    t.entriesFprime.assign(static_cast<size_t>(thetaSteps), ShRgb(bands));

    int nt = std::max(2 * bands + 2, 32);
    int np = std::max(4 * bands + 4, 64);
    std::vector<double> u, wu, ulo, wlo;
    sh::gaussLegendre(nt, 0.0, 1.0, u, wu);
    sh::gaussLegendre(nt, -1.0, 0.0, ulo, wlo);
    u.insert(u.end(), ulo.begin(), ulo.end());
    wu.insert(wu.end(), wlo.begin(), wlo.end());

    std::vector<double> basis(static_cast<size_t>(bands) * bands);
    double dphi = kTwoPi / np;
    for (int bin = 0; bin < thetaSteps; ++bin) {
        double thetaO = (bin + 0.5) * kHalfPi / thetaSteps;
        Vec3 wo(std::sin(thetaO), 0.0, std::cos(thetaO));
        ShRgb& f = t.entriesF[static_cast<size_t>(bin)];
        ShRgb& fp = t.entriesFprime[static_cast<size_t>(bin)];
        for (size_t iu = 0; iu < u.size(); ++iu) {
            double z = u[iu];
            double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            for (int ip = 0; ip < np; ++ip) {
                double phi = (ip + 0.5) * dphi;
                Vec3 wi(s * std::cos(phi), s * std::sin(phi), z);
                Rgb kernel = evalKernelLocal(m, wi, wo);
                double w = wu[iu] * dphi;
                sh::shBasisAll(bands, wi, basis.data());
                Rgb kw = kernel * w;
                Rgb kcw = kernel * (std::max(0.0, z) * w);
                for (int i = 0; i < bands * bands; ++i) {
                    fp.c[static_cast<size_t>(i)] += kw * basis[static_cast<size_t>(i)];
                    f.c[static_cast<size_t>(i)] += kcw * basis[static_cast<size_t>(i)];
                }
            }
        }
        for (int l = 0; l < bands; ++l) {
            double w = sh::windowWeight(l, bands);
            for (int mm = -l; mm <= l; ++mm) {
                int i = sh::ShVector::index(l, mm);
                f.c[static_cast<size_t>(i)] *= w;
                fp.c[static_cast<size_t>(i)] *= w;
            }
        }
    }
    return t;
}

const ShRgb& lookup(const BrdfTable& t, double thetaO, bool primed) {
    int idx = static_cast<int>(std::floor(thetaO / kHalfPi * t.thetaSteps));
    idx = std::min(std::max(idx, 0), t.thetaSteps - 1);
    return primed ? t.entriesFprime[static_cast<size_t>(idx)] : t.entriesF[static_cast<size_t>(idx)];
}

namespace {

constexpr uint32_t kCacheVersion = 1;

void writeU32(std::FILE* f, uint32_t v) {
    if (std::fwrite(&v, sizeof v, 1, f) != 1) throw std::runtime_error("table write failed");
}

uint32_t readU32(std::FILE* f) {
    uint32_t v = 0;
    if (std::fread(&v, sizeof v, 1, f) != 1) throw std::runtime_error("table read failed");
    return v;
}

void writeEntries(std::FILE* f, const std::vector<ShRgb>& entries) {
    for (const ShRgb& e : entries)
        for (const Rgb& c : e.c) {
            float rgb[3] = {static_cast<float>(c.x), static_cast<float>(c.y),
                            static_cast<float>(c.z)};
            if (std::fwrite(rgb, sizeof(float), 3, f) != 3)
                throw std::runtime_error("table write failed");
        }
}

void readEntries(std::FILE* f, std::vector<ShRgb>& entries, int count, int bands) {
    entries.assign(static_cast<size_t>(count), ShRgb(bands));
    for (ShRgb& e : entries)
        for (Rgb& c : e.c) {
            float rgb[3];
            if (std::fread(rgb, sizeof(float), 3, f) != 3)
                throw std::runtime_error("table read failed");
            c = Rgb(rgb[0], rgb[1], rgb[2]);
        }
}

}  // namespace

void saveTable(const BrdfTable& t, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    try {
        if (std::fwrite("HVLB", 1, 4, f) != 4) throw std::runtime_error("table write failed");
        writeU32(f, kCacheVersion);
        writeU32(f, static_cast<uint32_t>(t.bands));
        writeU32(f, static_cast<uint32_t>(t.thetaSteps));
        writeU32(f, 3);
        writeEntries(f, t.entriesF);
        writeEntries(f, t.entriesFprime);
    } catch (...) {
        std::fclose(f);
        throw;
    }
    std::fclose(f);
}

BrdfTable loadTable(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    BrdfTable t;
    try {
        char magic[4];
        if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, "HVLB", 4) != 0)
            throw std::runtime_error(path + ": not a BRDF table cache");
        if (readU32(f) != kCacheVersion) throw std::runtime_error(path + ": unsupported version");
        t.bands = static_cast<int>(readU32(f));
        t.thetaSteps = static_cast<int>(readU32(f));
        if (readU32(f) != 3) throw std::runtime_error(path + ": unsupported channel count");
        if (t.bands < 1 || t.bands > sh::kMaxBands || t.thetaSteps < 1 || t.thetaSteps > 4096)
            throw std::runtime_error(path + ": implausible table header");
        readEntries(f, t.entriesF, t.thetaSteps, t.bands);
        readEntries(f, t.entriesFprime, t.thetaSteps, t.bands);
    } catch (...) {
        std::fclose(f);
        throw;
    }
    std::fclose(f);
    return t;
}

}  // namespace hvl::brdf
