// SPDX-License-Identifier: Apache-2.0
//
// Scene ingestion and ray queries.
//
// Scenes are described by a small line-oriented text format: named sections
// ("material { ... }", "mesh { ... }", "light { ... }", "camera { ... }")
// holding whitespace-separated key/value lines. Meshes reference OBJ files
// (v / vn / f records, triangles only) relative to the scene file. Parse and
// validation failures throw with file/line context.
//
// Ray queries run through a BVH whose results are defined to match a
// brute-force scan over all triangles exactly, ties broken by the lowest
// triangle index. intersectBrute is exposed as that oracle.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hvl/brdf.hpp"
#include "hvl/vec.hpp"

namespace hvl::scene {

struct Camera {
    Vec3 position{0.0, 0.0, 0.0};
    Vec3 lookAt{0.0, 0.0, -1.0};
    Vec3 up{0.0, 1.0, 0.0};
    double vfovDeg = 45.0;
    int width = 0;
    int height = 0;
};

struct SpotLight {
    Vec3 position;
    Vec3 direction{0.0, -1.0, 0.0};  // unit
    double halfAngle = kHalfPi;      // radians, (0, pi/2]
    Rgb power{1.0, 1.0, 1.0};
    int rsmResolution = 256;
};

struct Triangle {
    Vec3 p0, p1, p2;
    Vec3 n0, n1, n2;  // unit shading normals
    int material = 0;
};

struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit
    double tMin = 0.0;
    double tMax = kInf;
};

struct Hit {
    double t = 0.0;
    Vec3 point;
    Vec3 normal;  // unit, barycentrically interpolated
    int material = 0;
    int triangle = -1;
};

struct BvhNode {
    Vec3 bmin, bmax;
    int left = -1;   // internal: child node index; leaf: first index into order
    int right = -1;  // internal: child node index; leaf: -1
    int count = 0;   // leaf: triangle count; internal: 0
};

struct Scene {
    std::vector<Triangle> triangles;
    std::vector<int> meshStart;  // per input mesh, first triangle index
    std::vector<brdf::BrdfModel> materials;
    std::vector<SpotLight> lights;
    Camera camera;

    std::vector<BvhNode> nodes;
    std::vector<int> order;  // leaf triangle indices

    double diagonal = 0.0;  // length of the bounding box diagonal
};

// Parses, loads referenced OBJ files, validates, and builds the BVH.
Scene loadScene(const std::string& path);

// For programmatically assembled scenes; fills nodes/order/diagonal.
void finalizeScene(Scene& s);

std::optional<Hit> intersect(const Scene& s, const Ray& ray);
std::optional<Hit> intersectBrute(const Scene& s, const Ray& ray);

// True iff any geometry lies strictly between a and b, with both endpoints
// pulled in by 1e-4 x scene diagonal to dodge self-intersection.
bool occluded(const Scene& s, const Vec3& a, const Vec3& b);

// Ray through image coordinates (px, py) measured in pixels; pass the pixel
// center (x + 0.5, y + 0.5) for pixel (x, y). Row 0 is the top of the image.
Ray cameraRay(const Camera& c, double px, double py);

}  // namespace hvl::scene
