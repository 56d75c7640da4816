// SPDX-License-Identifier: Apache-2.0
//
// Lighting estimators.
//
// The primary estimator treats each virtual light as a spherical source:
// its outgoing radiance is reconstructed from the tabulated unclamped BRDF
// projection (the primed table), scaled by a geometric factor
// G = 1/(pi r^2) * max(0, <n_j | -w_j>) * H, and the fragment integrates
// that radiance over the spherical cap the source subtends, as a dot product
// between the rotated cap projection and the tabulated cosine-weighted BRDF.
// H is a smoothstep approximation of the cap fraction above the fragment's
// horizon.
//
// Frames: the fragment shading frame has z = n_x with w_o in the xz
// half-plane; a virtual light's frame has z = n_j with its light direction
// w_l in the xz half-plane. Both match the tabulation convention (outgoing
// direction at +x side), so table entries can be consumed directly.
//
// Baselines: point-light collapse (vpl), Monte-Carlo cone integration over
// the same spherical source (vsl), and a one-bounce path oracle. The path
// oracle's no-visibility mode accumulates every front-facing lit surface a
// gather ray crosses, because the virtual-light estimators ignore occlusion
// between the fragment and secondary sources; light-to-surface shadow rays
// stay on in both modes, since placement itself is light-visibility-limited.
//
// The spot light is a projector: flux spread uniformly per unit image-plane
// area over its square frustum, I(w) = Phi/(4 tan^2 lambda) * (1+s^2+t^2)^(3/2).
// This makes per-light flux Phi/M exactly consistent across estimators.
#pragma once

#include <vector>

#include "hvl/brdf.hpp"
#include "hvl/rng.hpp"
#include "hvl/scene.hpp"
#include "hvl/sh.hpp"
#include "hvl/vec.hpp"
#include "hvl/virtual_lights.hpp"

namespace hvl::shade {

struct ShadePoint {
    Vec3 x;
    Vec3 n;   // unit shading normal
    Vec3 wo;  // unit, toward the camera, n.wo > 0
    int material = 0;
};

enum class Mode { Hvl, HvlZhFast, Vpl, Vsl, Path, Direct };

struct GatherConfig {
    int bandsEmission = 3;
    int bandsGather = 5;
    Mode mode = Mode::Hvl;
    int vslSamples = 25;
    int pathSamples = 256;
    double vplClamp = 0.0;           // <= 0 disables clamping
    bool pathFullVisibility = true;  // false: accumulate layered hits
};

// Half-angle of the cap a sphere of radius r subtends at distance d;
// pi/2 once the point is inside or on the sphere.
double capHalfAngle(double r, double d);

// Smoothstep fraction of a cap of half-angle a around wj that lies above the
// horizon of n. In [0,1]; 1 when fully above, 0 when fully below.
double hemisphereCoverage(const Vec3& n, const Vec3& wj, double a);

// Outgoing radiance of a virtual light toward the fragment at x, from the
// primed (unclamped) table; negative reconstructions are clamped to zero.
Rgb hvlEmission(const vl::Hvl& h, const Vec3& x, const Vec3& nx,
                const brdf::BrdfTable& table, int bandsEmission);

// Same quantity evaluated with the parametric BRDF instead of its projection
// (used by the vsl baseline and the ZH fast path).
Rgb parametricEmission(const vl::Hvl& h, const Vec3& x, const Vec3& nx,
                       const brdf::BrdfModel& m);

Rgb hvlContribution(const ShadePoint& sp, const vl::Hvl& h,
                    const std::vector<brdf::BrdfTable>& tables, const GatherConfig& cfg);

Rgb gatherIndirect(const ShadePoint& sp, const std::vector<vl::Hvl>& hvls,
                   const std::vector<brdf::BrdfTable>& tables, const GatherConfig& cfg);

// ZH-only fast path. The fragment BRDF is split into a diffuse part (closed
// form irradiance from the cap's zonal coefficients) and a circular-symmetric
// lobe about the mirror direction (one O(bands) convolution per light).
struct ZhMaterial {
    Rgb kd{0.0, 0.0, 0.0};
    bool hasSpecular = false;
    Rgb specTint{1.0, 1.0, 1.0};  // albedo tint on the lobe
    double eta = 1.5;
    sh::ZhVector lobe;  // normalized-kernel projection of the lobe
};

// Throws std::invalid_argument for materials without a usable symmetric
// lobe (GGX roughness below 0.08 is too narrow for low-order ZH).
ZhMaterial zhDecompose(const brdf::BrdfModel& m, int bands);

Rgb gatherIndirectZhFast(const ShadePoint& sp, const std::vector<vl::Hvl>& hvls,
                         const ZhMaterial& zm, const std::vector<brdf::BrdfModel>& mats,
                         const GatherConfig& cfg);

// Radiant intensity of the projector spot toward dirFromLight (unit vector);
// zero outside the square frustum.
Rgb spotIntensity(const scene::SpotLight& l, const Vec3& dirFromLight);

// Dirac primary through the tabulated BRDF: I/d^2 x reconstruction of the
// cosine-weighted table at the light direction. Shadow ray when sc != null.
Rgb directLighting(const ShadePoint& sp, const scene::SpotLight& light,
                   const brdf::BrdfTable& table, int bands, const scene::Scene* sc = nullptr);

// Exact parametric direct lighting (oracle-grade, no SH).
Rgb directLightingParametric(const Vec3& x, const Vec3& n, const Vec3& wo,
                             const brdf::BrdfModel& m, const scene::SpotLight& light,
                             const scene::Scene* sc = nullptr);

Rgb vplContribution(const ShadePoint& sp, const vl::Hvl& h,
                    const std::vector<brdf::BrdfModel>& mats, const GatherConfig& cfg);

// Monte-Carlo mean of f over the cap of half-angle a about wj, scaled by the
// cap solid angle 2 pi (1 - cos a). f receives a unit world direction.
template <typename F>
Rgb vslEstimate(const Vec3& wj, double a, int n, Rng& rng, F&& f) {
    Frame frame = Frame::fromZ(wj);
    double cosA = std::cos(a);
    Rgb sum(0.0);
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - rng.nextDouble() * (1.0 - cosA);
        // Trig-free uniform azimuth: a rejection-sampled disk point gives
        // (cos 2t, sin 2t) for uniform t via the half-angle identities.
        double ux, uy, r2;
        do {
            ux = 2.0 * rng.nextDouble() - 1.0;
            uy = 2.0 * rng.nextDouble() - 1.0;
            r2 = ux * ux + uy * uy;
        } while (r2 > 1.0 || r2 < 1e-12);
        double c = (ux * ux - uy * uy) / r2, s = 2.0 * ux * uy / r2;
        double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
        sum += f(frame.toWorld(Vec3(rr * c, rr * s, z)));
    }
    double capArea = kTwoPi * (1.0 - cosA);
    return sum * (capArea / n);
}

Rgb vslContribution(const ShadePoint& sp, const vl::Hvl& h,
                    const std::vector<brdf::BrdfModel>& mats, const GatherConfig& cfg, Rng& rng);

// One-bounce indirect oracle: cosine-weighted gather rays from sp, each hit
// lit directly from the scene's lights with shadow rays.
Rgb pathTraceIndirect(const ShadePoint& sp, const scene::Scene& sc, const GatherConfig& cfg,
                      Rng& rng);

}  // namespace hvl::shade
