// SPDX-License-Identifier: Apache-2.0
//
// Secondary-light placement: a reflective shadow map rendered by raycasting
// from each spot light, uniform placement of virtual lights on a grid of RSM
// pixel groups, and two radius heuristics.
//
// Placement walks a G x G grid (G = floor(sqrt(M))) of pixel groups and puts
// one virtual light at each group's center pixel, searching outward in
// Chebyshev rings inside the group when the center pixel saw no geometry.
// Groups with no valid pixel at all are dropped and the per-light flux is
// lightPhi / actualCount, so total flux is conserved for every distribution.
//
// radiusR1 is a depth-weighted mean distance to the 8-connected neighbors in
// the HVL grid (not raw RSM pixels): w_n = 1 / (|d - d_n| + eps) with
// eps = 1e-3 x scene diagonal, so neighbors across a large depth gap stop
// inflating the radius. With no surviving neighbor it falls back to
// radiusR2. radiusR2 = d * (g + g^3/3) * k with g = sqrt(2) * lambda /
// sqrt(M), the series form of d * tan(g) * k, valid within 0.01 absolute for
// g <= 0.58; larger g triggers a one-time stderr warning.
#pragma once

#include <string>
#include <vector>

#include "hvl/scene.hpp"
#include "hvl/vec.hpp"

namespace hvl::vl {

struct RsmPixel {
    Vec3 worldPos;
    Vec3 normal;             // unit when valid
    double lightDepth = 0.0; // distance from the light, scene units
    int material = -1;
    bool valid = false;
};

struct RsmBuffer {
    int resolution = 0;
    std::vector<RsmPixel> px;
    Vec3 lightPos;           // provenance: the generating light
    double halfAngle = 0.0;  // provenance: frustum half-angle (radians)

    RsmPixel& at(int x, int y) { return px[static_cast<size_t>(y) * resolution + x]; }
    const RsmPixel& at(int x, int y) const {
        return px[static_cast<size_t>(y) * resolution + x];
    }
    int validCount() const;
};

struct Hvl {
    Vec3 position;
    Vec3 normal;
    Rgb flux;
    double radius = 0.0;
    int material = -1;
    Vec3 toLight;            // unit, from the HVL toward the light
    double lightDepth = 0.0;
};

struct Placement {
    std::vector<Hvl> hvls;
    std::vector<int> pixel;      // flat RSM pixel index chosen per HVL
    std::vector<int> cellOfHvl;  // gy * gridSize + gx per HVL
    std::vector<int> hvlOfCell;  // gridSize^2 entries, -1 for empty groups
    int gridSize = 0;
    int targetCount = 0;
};

// One primary ray per pixel through a square frustum of half-angle
// light.halfAngle about light.direction; misses are marked invalid.
RsmBuffer renderRsm(const scene::Scene& sc, const scene::SpotLight& light);

// Throws std::invalid_argument when count < 1, exceeds the valid pixel
// count, or the grid cannot fit; std::runtime_error when no group holds a
// valid pixel.
Placement distribute(const RsmBuffer& rsm, int count, const Rgb& lightPhi);

double radiusR1(const RsmBuffer& rsm, const Placement& p, int hvlIndex, double k,
                double sceneDiagonal, double lambda);

double radiusR2(double lambda, int M, double d, double k);

enum class RadiusMode { R1, R2, Fixed };

// Fills hvls[i].radius. lambda is the generating spot's half-angle; Fixed
// mode requires fixedRadius > 0.
void assignRadii(const RsmBuffer& rsm, Placement& p, RadiusMode mode, double k,
                 double sceneDiagonal, double lambda, double fixedRadius = 0.0);

// CSV dump: index, position xyz, normal xyz, radius, flux rgb.
void dumpCsv(const Placement& p, const std::string& path);

}  // namespace hvl::vl
