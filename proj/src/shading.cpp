// SPDX-License-Identifier: Apache-2.0
#include "hvl/shading.hpp"

#include <cmath>
#include <stdexcept>

namespace hvl::shade {

namespace {

Rgb maxZero(const Rgb& v) {
    return Rgb(std::max(0.0, v.x), std::max(0.0, v.y), std::max(0.0, v.z));
}

bool isBlack(const Rgb& v) { return v.x <= 0.0 && v.y <= 0.0 && v.z <= 0.0; }

}  // namespace

double capHalfAngle(double r, double d) { return std::asin(std::min(r / d, 1.0)); }

double hemisphereCoverage(const Vec3& n, const Vec3& wj, double a) {
    double theta = std::acos(clampd(dot(n, wj), -1.0, 1.0));
    double hi = a + kHalfPi, lo = a - kHalfPi;
    double t = clampd((hi - clampd(theta, lo, hi)) / (2.0 * a), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

Rgb hvlEmission(const vl::Hvl& h, const Vec3& x, const Vec3& nx,
                const brdf::BrdfTable& table, int bandsEmission) {
    Vec3 toHvl = h.position - x;
    double d = length(toHvl);
    if (d < 1e-12) return Rgb(0.0);
    Vec3 wj = toHvl / d;
    double cosJ = dot(h.normal, -wj);
    if (cosJ <= 0.0) return Rgb(0.0);
    double a = capHalfAngle(h.radius, d);
    double cover = hemisphereCoverage(nx, wj, a);
    if (cover <= 0.0) return Rgb(0.0);
    double geom = cosJ * cover / (kPi * h.radius * h.radius);

    Frame frame = Frame::fromZWithX(h.normal, h.toLight);
    double thetaO = std::acos(clampd(dot(h.normal, h.toLight), -1.0, 1.0));
    const brdf::ShRgb& fp = brdf::lookup(table, thetaO, true);
    Rgb recon = maxZero(brdf::reconstructRgb(fp, frame.toLocal(-wj), bandsEmission));
    return h.flux * recon * geom;
}

Rgb parametricEmission(const vl::Hvl& h, const Vec3& x, const Vec3& nx,
                       const brdf::BrdfModel& m) {
    Vec3 toHvl = h.position - x;
    double d = length(toHvl);
    if (d < 1e-12) return Rgb(0.0);
    Vec3 wj = toHvl / d;
    double cosJ = dot(h.normal, -wj);
    if (cosJ <= 0.0) return Rgb(0.0);
    double a = capHalfAngle(h.radius, d);
    double cover = hemisphereCoverage(nx, wj, a);
    if (cover <= 0.0) return Rgb(0.0);
    double geom = cosJ * cover / (kPi * h.radius * h.radius);
    Rgb f = brdf::evalBrdf(m, h.toLight, -wj, h.normal);
    return h.flux * f * geom;
}

Rgb hvlContribution(const ShadePoint& sp, const vl::Hvl& h,
                    const std::vector<brdf::BrdfTable>& tables, const GatherConfig& cfg) {
    Rgb e = hvlEmission(h, sp.x, sp.n, tables[static_cast<size_t>(h.material)],
                        cfg.bandsEmission);
    if (isBlack(e)) return Rgb(0.0);

    Vec3 toHvl = h.position - sp.x;
    double d = length(toHvl);
    Vec3 wj = toHvl / d;
    double a = capHalfAngle(h.radius, d);
    Frame frame = Frame::fromZWithX(sp.n, sp.wo);
    double thetaO = std::acos(clampd(dot(sp.n, sp.wo), -1.0, 1.0));
    const brdf::ShRgb& f = brdf::lookup(tables[static_cast<size_t>(sp.material)], thetaO, false);

    // Dot of the table entry with the cap re-oriented toward the light.
    // Re-orienting multiplies band l by sqrt(4pi/(2l+1)) Y_l^m(axis), and the
    // cap's zonal coefficient is sqrt(pi (2l+1)) x its band integral, so the
    // combined per-band factor collapses to 2pi x that integral. Runs on a
    // stack basis buffer; equivalent to composing the library calls.
    double basis[sh::kMaxBands * sh::kMaxBands];
    int bands = std::min(cfg.bandsGather, sh::kMaxBands);
    sh::shBasisAll(bands, frame.toLocal(wj), basis);
    double alpha = std::cos(a);
    int n = std::min(bands * bands, f.coeffCount());
    Rgb dotv(0.0);
    int i = 0;
    for (int l = 0; l < bands && i < n; ++l) {
        Rgb band(0.0);
        int hi = std::min(n, (l + 1) * (l + 1));
        for (; i < hi; ++i) band += f.c[static_cast<size_t>(i)] * basis[i];
        dotv += band * (kTwoPi * sh::capIntegral(l, alpha));
    }
    return e * maxZero(dotv);
}

Rgb gatherIndirect(const ShadePoint& sp, const std::vector<vl::Hvl>& hvls,
                   const std::vector<brdf::BrdfTable>& tables, const GatherConfig& cfg) {
    Rgb sum(0.0);
    for (const vl::Hvl& h : hvls) sum += hvlContribution(sp, h, tables, cfg);
    return sum;
}

ZhMaterial zhDecompose(const brdf::BrdfModel& m, int bands) {
    ZhMaterial zm;
    if (m.kind == brdf::Kind::Lambertian) {
        zm.kd = m.albedo;
        return zm;
    }
    if (m.roughness < 0.08)
        throw std::invalid_argument(
            "material is not representable with low-order zonal harmonics "
            "(GGX roughness < 0.08)");
    zm.hasSpecular = true;
    zm.eta = m.eta;
    zm.specTint = m.albedo;
    // Symmetric stand-in lobe about the mirror direction: a normalized
    // power-of-cosine kernel whose exponent matches the GGX width.
    double alpha = m.roughness;
    double exponent = std::max(0.0, 2.0 / (alpha * alpha) - 2.0);
    double norm = (exponent + 2.0) / kTwoPi;
    zm.lobe = sh::ZhVector(bands);
    std::vector<double> xs, ws;
    sh::gaussLegendre(4 * bands + 8, 0.0, 1.0, xs, ws);
    for (int l = 0; l < bands; ++l) {
        double k = sh::shNormalization(l, 0);
        double acc = 0.0;
        for (size_t i = 0; i < xs.size(); ++i)
            acc += norm * std::pow(xs[i], exponent) * sh::legendre(l, xs[i]) * ws[i];
        zm.lobe[l] = kTwoPi * k * acc;
    }
    return zm;
}

Rgb gatherIndirectZhFast(const ShadePoint& sp, const std::vector<vl::Hvl>& hvls,
                         const ZhMaterial& zm, const std::vector<brdf::BrdfModel>& mats,
                         const GatherConfig& cfg) {
    Vec3 mirror = sp.n * (2.0 * dot(sp.n, sp.wo)) - sp.wo;
    bool diffuse = !isBlack(zm.kd);
    double fres = zm.hasSpecular
                      ? brdf::fresnelDielectric(clampd(dot(sp.n, sp.wo), 0.0, 1.0), zm.eta)
                      : 0.0;
    sh::ZhVector lobe = zm.lobe;
    lobe.c.resize(static_cast<size_t>(cfg.bandsGather), 0.0);
    Rgb total(0.0);
    for (const vl::Hvl& h : hvls) {
        Rgb e = parametricEmission(h, sp.x, sp.n, mats[static_cast<size_t>(h.material)]);
        if (isBlack(e)) continue;
        Vec3 toHvl = h.position - sp.x;
        double d = length(toHvl);
        Vec3 wj = toHvl / d;
        double a = capHalfAngle(h.radius, d);
        if (diffuse) {
            double irr = sh::illuminance(clampd(dot(wj, sp.n), -1.0, 1.0), sh::zhCap(a, 3));
            if (irr > 0.0) total += zm.kd / kPi * e * irr;
        }
        if (zm.hasSpecular) {
            double cosI = dot(wj, sp.n);
            if (cosI <= 0.0) continue;
            sh::ZhVector conv = sh::zhConvolve(sh::zhCap(a, cfg.bandsGather), lobe);
            double v = sh::reconstructZonal(conv, clampd(dot(mirror, wj), -1.0, 1.0));
            if (v > 0.0) total += e * zm.specTint * (v * cosI * fres);
        }
    }
    return total;
}

Rgb spotIntensity(const scene::SpotLight& l, const Vec3& dirFromLight) {
    Frame frame = Frame::fromZ(l.direction);
    Vec3 loc = frame.toLocal(dirFromLight);
    if (loc.z <= 0.0) return Rgb(0.0);
    // Half-angles at or near pi/2 act as wide projectors with a capped plane.
    double extent = std::tan(std::min(l.halfAngle, 1.55));
    double s = loc.x / loc.z, t = loc.y / loc.z;
    if (std::abs(s) > extent || std::abs(t) > extent) return Rgb(0.0);
    double r2 = 1.0 + s * s + t * t;
    return l.power * (r2 * std::sqrt(r2) / (4.0 * extent * extent));
}

Rgb directLighting(const ShadePoint& sp, const scene::SpotLight& light,
                   const brdf::BrdfTable& table, int bands, const scene::Scene* sc) {
    Vec3 toL = light.position - sp.x;
    double d = length(toL);
    if (d < 1e-12) return Rgb(0.0);
    Vec3 wl = toL / d;
    Rgb intensity = spotIntensity(light, -wl);
    if (isBlack(intensity)) return Rgb(0.0);
    if (sc && scene::occluded(*sc, sp.x, light.position)) return Rgb(0.0);
    Frame frame = Frame::fromZWithX(sp.n, sp.wo);
    double thetaO = std::acos(clampd(dot(sp.n, sp.wo), -1.0, 1.0));
    const brdf::ShRgb& f = brdf::lookup(table, thetaO, false);
    Rgb recon = maxZero(brdf::reconstructRgb(f, frame.toLocal(wl), bands));
    return intensity * recon / (d * d);
}

Rgb directLightingParametric(const Vec3& x, const Vec3& n, const Vec3& wo,
                             const brdf::BrdfModel& m, const scene::SpotLight& light,
                             const scene::Scene* sc) {
    Vec3 toL = light.position - x;
    double d = length(toL);
    if (d < 1e-12) return Rgb(0.0);
    Vec3 wl = toL / d;
    double cosI = dot(n, wl);
    if (cosI <= 0.0) return Rgb(0.0);
    Rgb intensity = spotIntensity(light, -wl);
    if (isBlack(intensity)) return Rgb(0.0);
    if (sc && scene::occluded(*sc, x, light.position)) return Rgb(0.0);
    Rgb f = brdf::evalBrdf(m, wl, wo, n);
    return intensity * f * (cosI / (d * d));
}

Rgb vplContribution(const ShadePoint& sp, const vl::Hvl& h,
                    const std::vector<brdf::BrdfModel>& mats, const GatherConfig& cfg) {
    Vec3 toHvl = h.position - sp.x;
    double d2 = lengthSquared(toHvl);
    if (d2 < 1e-24) return Rgb(0.0);
    double d = std::sqrt(d2);
    Vec3 wj = toHvl / d;
    double cosY = dot(h.normal, -wj);
    double cosX = dot(sp.n, wj);
    if (cosY <= 0.0 || cosX <= 0.0) return Rgb(0.0);
    Rgb fy = brdf::evalBrdf(mats[static_cast<size_t>(h.material)], h.toLight, -wj, h.normal);
    Rgb fx = brdf::evalBrdf(mats[static_cast<size_t>(sp.material)], wj, sp.wo, sp.n);
    Rgb c = h.flux * fy * fx * (cosY * cosX / d2);
    if (cfg.vplClamp > 0.0)
        c = Rgb(std::min(c.x, cfg.vplClamp), std::min(c.y, cfg.vplClamp),
                std::min(c.z, cfg.vplClamp));
    return c;
}

Rgb vslContribution(const ShadePoint& sp, const vl::Hvl& h,
                    const std::vector<brdf::BrdfModel>& mats, const GatherConfig& cfg,
                    Rng& rng) {
    Rgb e = parametricEmission(h, sp.x, sp.n, mats[static_cast<size_t>(h.material)]);
    if (isBlack(e)) return Rgb(0.0);
    Vec3 toHvl = h.position - sp.x;
    double d = length(toHvl);
    Vec3 wj = toHvl / d;
    double a = capHalfAngle(h.radius, d);
    // Cap entirely below the horizon: the integrand is identically zero.
    if (dot(sp.n, wj) <= -std::sin(a)) return Rgb(0.0);

    const brdf::BrdfModel& mx = mats[static_cast<size_t>(sp.material)];
    if (mx.kind == brdf::Kind::Lambertian) {
        const Vec3 n = sp.n;
        Rgb scale = mx.albedo / kPi;
        Rgb est = vslEstimate(wj, a, cfg.vslSamples, rng, [&](const Vec3& w) {
            return Rgb(std::max(0.0, dot(n, w)));
        });
        return e * scale * est.x;
    }
    Rgb est = vslEstimate(wj, a, cfg.vslSamples, rng, [&](const Vec3& w) {
        return brdf::evalBrdf(mx, w, sp.wo, sp.n) * std::max(0.0, dot(sp.n, w));
    });
    return e * est;
}

Rgb pathTraceIndirect(const ShadePoint& sp, const scene::Scene& sc, const GatherConfig& cfg,
                      Rng& rng) {
    Frame frame = Frame::fromZ(sp.n);
    double eps = 1e-6 * std::max(sc.diagonal, 1.0);
    Rgb sum(0.0);
    for (int i = 0; i < cfg.pathSamples; ++i) {
        double u1 = rng.nextDouble();
        double u2 = rng.nextDouble();
        double z = std::sqrt(std::max(0.0, 1.0 - u1));
        double r = std::sqrt(u1);
        double phi = kTwoPi * u2;
        Vec3 wi = frame.toWorld(Vec3(r * std::cos(phi), r * std::sin(phi), z));
        Rgb fx = brdf::evalBrdf(sc.materials[static_cast<size_t>(sp.material)], wi, sp.wo, sp.n);
        if (isBlack(fx)) continue;
        double tStart = eps;
        for (int layer = 0; layer < 32; ++layer) {
            auto hit = scene::intersect(sc, scene::Ray{sp.x, wi, tStart, kInf});
            if (!hit) break;
            Rgb ly(0.0);
            for (const scene::SpotLight& l : sc.lights)
                ly += directLightingParametric(hit->point, hit->normal, -wi,
                                               sc.materials[static_cast<size_t>(hit->material)],
                                               l, &sc);
            sum += fx * ly;
            if (cfg.pathFullVisibility) break;
            tStart = hit->t + eps;
        }
    }
    // Cosine-weighted pdf z/pi cancels the weakening factor, leaving pi/N.
    return sum * (kPi / cfg.pathSamples);
}

}  // namespace hvl::shade
