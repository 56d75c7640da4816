// SPDX-License-Identifier: Apache-2.0
//
// Parametric BRDFs (lambertian, GGX microfacet with exact dielectric
// Fresnel and height-correlated Smith masking) and their tabulated SH
// projections over incoming directions, one entry per outgoing polar angle.
//
// Two projections are stored per angle bin:
//   entriesF       cosine-weighted slice  max(0, cos ti) f_s(wi, wo)
//   entriesFprime  the bare kernel        f_s(wi, wo)
// The bare kernel is the smooth formula without the hemisphere cutoff
// (lambertian is a constant, GGX uses |cos| in the masking/denominator);
// emission lookups re-apply the cutoff through their geometric factor, and
// keeping the projected function smooth avoids Gibbs ringing at the horizon.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hvl/sh.hpp"
#include "hvl/vec.hpp"

namespace hvl::brdf {

enum class Kind { Lambertian, Ggx };

struct BrdfModel {
    Kind kind = Kind::Lambertian;
    Rgb albedo = Rgb(0.5);
    double roughness = 0.5;  // ggx alpha, used directly
    double eta = 1.5;        // ggx dielectric index of refraction
};

// Full evaluation: zero when wi or wo falls below the n-hemisphere.
Rgb evalBrdf(const BrdfModel& m, const Vec3& wi, const Vec3& wo, const Vec3& n);

// Smooth kernel used for tabulation (no hemisphere cutoff); local frame,
// n = +z implied.
Rgb evalKernelLocal(const BrdfModel& m, const Vec3& wi, const Vec3& wo);

// Exact unpolarized dielectric Fresnel reflectance.
double fresnelDielectric(double cosThetaI, double eta);

// RGB spherical-harmonics coefficient vector.
struct ShRgb {
    std::vector<Rgb> c;

    ShRgb() = default;
    explicit ShRgb(int bands) : c(static_cast<size_t>(bands) * bands) {}
    int coeffCount() const { return static_cast<int>(c.size()); }
};

Rgb reconstructRgb(const ShRgb& v, const Vec3& dir, int bands);

struct BrdfTable {
    int bands = 0;
    int thetaSteps = 0;
    std::vector<ShRgb> entriesF;       // with the cosine weakening factor
    std::vector<ShRgb> entriesFprime;  // without
};

// Project the model for every outgoing bin center theta_o = (i+0.5)/steps
// * pi/2, outgoing direction in the xz half-plane of a z-up local frame.
// Entries are windowed at build time.
BrdfTable tabulate(const BrdfModel& m, int bands, int thetaSteps = 90);

// Nearest-bin lookup; out-of-range thetaO clamps to the last bin.
const ShRgb& lookup(const BrdfTable& t, double thetaO, bool primed);

// Flat binary cache, magic "HVLB", little-endian f32 coefficients.
void saveTable(const BrdfTable& t, const std::string& path);
BrdfTable loadTable(const std::string& path);

}  // namespace hvl::brdf
