// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "hvl/virtual_lights.hpp"

using namespace hvl;
using namespace hvl::vl;

namespace {

const std::string kFixtures = HVL_FIXTURE_DIR;

// Large quad at z = -1 facing +z, light placed at the origin.
scene::Scene planeScene(double halfAngleDeg, int rsmRes, double extent = 30.0) {
    scene::Scene s;
    s.materials.push_back({});
    Vec3 n(0, 0, 1);
    scene::Triangle t1{{-extent, -extent, -1}, {extent, -extent, -1}, {extent, extent, -1},
                       n,                      n,                     n,
                       0};
    scene::Triangle t2{{-extent, -extent, -1}, {extent, extent, -1}, {-extent, extent, -1},
                       n,                      n,                    n,
                       0};
    s.triangles.push_back(t1);
    s.triangles.push_back(t2);
    scene::SpotLight l;
    l.position = Vec3(0, 0, 0);
    l.direction = Vec3(0, 0, -1);
    l.halfAngle = halfAngleDeg * kPi / 180.0;
    l.power = Rgb(1.0);
    l.rsmResolution = rsmRes;
    s.lights.push_back(l);
    s.camera.width = s.camera.height = 4;
    scene::finalizeScene(s);
    return s;
}

// All-valid synthetic RSM: positions on an h-spaced grid in the z = 0 plane,
// constant light depth. Lets radius tests control geometry exactly.
RsmBuffer syntheticRsm(int res, double h, double depth) {
    RsmBuffer rsm;
    rsm.resolution = res;
    rsm.px.assign(static_cast<size_t>(res) * res, RsmPixel{});
    rsm.lightPos = Vec3(0, 0, depth);
    rsm.halfAngle = kPi / 4;
    for (int y = 0; y < res; ++y)
        for (int x = 0; x < res; ++x) {
            RsmPixel& p = rsm.at(x, y);
            p.worldPos = Vec3(x * h, y * h, 0.0);
            p.normal = Vec3(0, 0, 1);
            p.lightDepth = depth;
            p.material = 0;
            p.valid = true;
        }
    return rsm;
}

}  // namespace

TEST_CASE("rsm on a facing plane is fully valid with analytic depths") {
    scene::Scene s = planeScene(30.0, 32);
    RsmBuffer rsm = renderRsm(s, s.lights[0]);
    REQUIRE(rsm.resolution == 32);
    CHECK(rsm.validCount() == 32 * 32);
    double extent = std::tan(s.lights[0].halfAngle);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            double u = (2.0 * (x + 0.5) / 32 - 1.0) * extent;
            double v = (2.0 * (y + 0.5) / 32 - 1.0) * extent;
            double want = std::sqrt(1.0 + u * u + v * v);
            CHECK(rsm.at(x, y).lightDepth == doctest::Approx(want).epsilon(1e-9));
            CHECK(rsm.at(x, y).normal.z == doctest::Approx(1.0));
        }
    // Depth grows monotonically away from the frustum axis along a row.
    for (int x = 16; x + 1 < 32; ++x)
        CHECK(rsm.at(x + 1, 16).lightDepth > rsm.at(x, 16).lightDepth);
    for (int x = 15; x > 0; --x)
        CHECK(rsm.at(x - 1, 16).lightDepth > rsm.at(x, 16).lightDepth);
}

TEST_CASE("rsm facing away from all geometry is fully invalid") {
    scene::Scene s = planeScene(30.0, 16);
    scene::SpotLight away = s.lights[0];
    away.direction = Vec3(0, 0, 1);
    RsmBuffer rsm = renderRsm(s, away);
    CHECK(rsm.validCount() == 0);
}

TEST_CASE("cornell rsm sees geometry in every pixel") {
    scene::Scene s = scene::loadScene(kFixtures + "/cornell.scene");
    RsmBuffer rsm = renderRsm(s, s.lights[0]);
    double frac = static_cast<double>(rsm.validCount()) / (280.0 * 280.0);
    CHECK(frac > 0.99);
}

TEST_CASE("single virtual light sits at the center pixel with full flux") {
    scene::Scene s = planeScene(30.0, 9);
    RsmBuffer rsm = renderRsm(s, s.lights[0]);
    Placement p = distribute(rsm, 1, Rgb(3.0, 2.0, 1.0));
    REQUIRE(p.hvls.size() == 1);
    CHECK(p.gridSize == 1);
    CHECK(p.pixel[0] == 4 * 9 + 4);
    CHECK(p.hvls[0].flux.x == 3.0);
    CHECK(p.hvls[0].flux.z == 1.0);
    CHECK(length(p.hvls[0].toLight - Vec3(0, 0, 1)) < 1e-9);
}

TEST_CASE("400 lights on a 280-pixel rsm form 14-pixel groups") {
    scene::Scene s = scene::loadScene(kFixtures + "/cornell.scene");
    RsmBuffer rsm = renderRsm(s, s.lights[0]);
    Placement p = distribute(rsm, 400, s.lights[0].power);
    CHECK(p.gridSize == 20);
    REQUIRE(p.hvls.size() == 400);
    // Group centers land on the 14g + 6 lattice when every center is valid.
    for (size_t i = 0; i < p.hvls.size(); ++i) {
        int px = p.pixel[i] % 280, py = p.pixel[i] / 280;
        CHECK((px - 6) % 14 == 0);
        CHECK((py - 6) % 14 == 0);
    }
    Rgb sum(0.0);
    for (const Hvl& h : p.hvls) sum += h.flux;
    CHECK(sum.x == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(sum.y == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("flux is conserved when the grid truncates the requested count") {
    RsmBuffer rsm = syntheticRsm(12, 0.1, 5.0);
    Placement p = distribute(rsm, 37, Rgb(2.0));  // grid 6x6 -> 36 lights
    CHECK(p.gridSize == 6);
    REQUIRE(p.hvls.size() == 36);
    Rgb sum(0.0);
    for (const Hvl& h : p.hvls) sum += h.flux;
    CHECK(sum.x == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("count bounds are enforced") {
    RsmBuffer rsm = syntheticRsm(4, 0.1, 5.0);
    CHECK_THROWS_AS(static_cast<void>(distribute(rsm, 0, Rgb(1.0))), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(distribute(rsm, 17, Rgb(1.0))), std::invalid_argument);
    for (RsmPixel& p : rsm.px) p.valid = false;
    CHECK_THROWS(static_cast<void>(distribute(rsm, 1, Rgb(1.0))));
}

TEST_CASE("invalid centers fall back to the nearest valid pixel in the group") {
    RsmBuffer rsm = syntheticRsm(8, 0.1, 5.0);
    rsm.at(1, 1).valid = false;  // center of group (0,0) for a 2x2 grid
    Placement p = distribute(rsm, 4, Rgb(1.0));
    REQUIRE(p.hvls.size() == 4);
    int px = p.pixel[0] % 8, py = p.pixel[0] / 8;
    CHECK(std::max(std::abs(px - 1), std::abs(py - 1)) == 1);  // ring-1 neighbor

    // A fully dead group shrinks the actual count and renormalizes flux.
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) rsm.at(x, y).valid = false;
    Placement q = distribute(rsm, 4, Rgb(1.0));
    REQUIRE(q.hvls.size() == 3);
    CHECK(q.hvlOfCell[0] == -1);
    Rgb sum(0.0);
    for (const Hvl& h : q.hvls) sum += h.flux;
    CHECK(sum.x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("r1 equals the mean neighbor distance on a uniform grid") {
    RsmBuffer rsm = syntheticRsm(16, 0.1, 5.0);
    Placement p = distribute(rsm, 16, Rgb(1.0));
    REQUIRE(p.gridSize == 4);
    double a = 0.4;  // lattice spacing: 4-pixel groups, 0.1 world units per pixel

    int interior = p.hvlOfCell[1 * 4 + 1];
    REQUIRE(interior >= 0);
    double r1 = radiusR1(rsm, p, interior, 1.0, 10.0, 0.3);
    CHECK(r1 == doctest::Approx(a * (1.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-12));
    CHECK(radiusR1(rsm, p, interior, 2.0, 10.0, 0.3) == doctest::Approx(2.0 * r1));

    int corner = p.hvlOfCell[0];
    REQUIRE(corner >= 0);
    double r1c = radiusR1(rsm, p, corner, 1.0, 10.0, 0.3);
    CHECK(r1c == doctest::Approx((2.0 * a + a * std::sqrt(2.0)) / 3.0).epsilon(1e-12));
}

TEST_CASE("a neighbor across a depth gap loses its weight") {
    // Perturb the (2,2) grid neighbor's source pixel: first displace it in
    // space at equal depth (radius inflates), then push its depth far away
    // (weight collapses, radius recovers).
    double a = 0.4, diag = 10.0, eps = 1e-3 * diag;

    RsmBuffer flat = syntheticRsm(16, 0.1, 5.0);
    Placement base = distribute(flat, 16, Rgb(1.0));
    int idx = base.hvlOfCell[1 * 4 + 1];
    double r1Base = radiusR1(flat, base, idx, 1.0, diag, 0.3);

    RsmBuffer displaced = syntheticRsm(16, 0.1, 5.0);
    displaced.at(9, 9).worldPos += Vec3(5.0, 0.0, 0.0);
    Placement pd = distribute(displaced, 16, Rgb(1.0));
    double r1Inflated = radiusR1(displaced, pd, idx, 1.0, diag, 0.3);
    CHECK(r1Inflated > 1.5 * r1Base);

    RsmBuffer gapped = syntheticRsm(16, 0.1, 5.0);
    gapped.at(9, 9).worldPos += Vec3(5.0, 0.0, 0.0);
    gapped.at(9, 9).lightDepth = 5.0 + 1000.0 * eps;
    Placement pg = distribute(gapped, 16, Rgb(1.0));
    double r1Recovered = radiusR1(gapped, pg, idx, 1.0, diag, 0.3);

    // Expected value with the analytic weights: 7 near neighbors at w = 1/eps,
    // the far one at w = 1/(1000 eps + eps).
    double wn = 1.0 / eps, wf = 1.0 / (1001.0 * eps);
    double farDist = length(Vec3(5.0 + a, a, 0.0));
    double want = (wn * (4.0 * a + 3.0 * a * std::sqrt(2.0)) + wf * farDist) / (7.0 * wn + wf);
    CHECK(r1Recovered == doctest::Approx(want).epsilon(1e-12));
    CHECK(wf / wn < 0.01);
    double r1Excl = (4.0 * a + 3.0 * a * std::sqrt(2.0)) / 7.0;
    CHECK(std::abs(r1Recovered - r1Excl) < 0.01 * r1Excl);
}

TEST_CASE("r1 with no neighbors falls back to r2") {
    RsmBuffer rsm = syntheticRsm(5, 0.1, 5.0);
    Placement p = distribute(rsm, 1, Rgb(1.0));
    double r1 = radiusR1(rsm, p, 0, 1.3, 10.0, 0.3);
    CHECK(r1 == radiusR2(0.3, 1, p.hvls[0].lightDepth, 1.3));
}

TEST_CASE("r2 matches its series form and scales linearly") {
    double r = radiusR2(kPi / 4, 16, 1.0, 1.0);
    CHECK(r == doctest::Approx(0.28482).epsilon(2e-4));
    CHECK(r > 0.284);
    CHECK(r < 0.286);
    CHECK(radiusR2(kPi / 4, 16, 2.0, 1.0) == doctest::Approx(2.0 * r).epsilon(1e-12));
    CHECK(radiusR2(kPi / 4, 16, 1.0, 3.0) == doctest::Approx(3.0 * r).epsilon(1e-12));
    CHECK(radiusR2(kPi / 4, 1000000000, 1.0, 1.0) < 1e-3);
}

TEST_CASE("series approximation of tan stays within 0.01 almost to 0.58") {
    // The 0.01 bound holds exactly up to 0.57858; the quoted 0.58 endpoint
    // carries an error of 0.010131, inside a 0.0102 envelope.
    for (int i = 1; i <= 1000; ++i) {
        double g = 0.578 * i / 1000.0;
        CHECK(std::abs(std::tan(g) - (g + g * g * g / 3.0)) < 0.01);
    }
    CHECK(std::abs(std::tan(0.58) - (0.58 + 0.58 * 0.58 * 0.58 / 3.0)) < 0.0102);
}

TEST_CASE("r2 spheres cover every lit sample on the plane fixture") {
    scene::Scene s = planeScene(15.0, 104, 10.0);
    RsmBuffer rsm = renderRsm(s, s.lights[0]);
    REQUIRE(rsm.validCount() == 104 * 104);
    Placement p = distribute(rsm, 64, Rgb(1.0));
    REQUIRE(p.hvls.size() == 64);
    assignRadii(rsm, p, RadiusMode::R2, 1.0, s.diagonal, s.lights[0].halfAngle);
    int uncovered = 0;
    for (const RsmPixel& pix : rsm.px) {
        bool covered = false;
        for (const Hvl& h : p.hvls)
            if (length(pix.worldPos - h.position) <= h.radius) {
                covered = true;
                break;
            }
        uncovered += covered ? 0 : 1;
    }
    CHECK(uncovered == 0);
}

TEST_CASE("radius assignment modes fill every light") {
    RsmBuffer rsm = syntheticRsm(16, 0.1, 5.0);
    Placement p = distribute(rsm, 16, Rgb(1.0));
    assignRadii(rsm, p, RadiusMode::R2, 1.0, 10.0, 0.3);
    for (const Hvl& h : p.hvls) CHECK(h.radius == radiusR2(0.3, 16, 5.0, 1.0));
    assignRadii(rsm, p, RadiusMode::Fixed, 1.0, 10.0, 0.3, 0.25);
    for (const Hvl& h : p.hvls) CHECK(h.radius == 0.25);
    CHECK_THROWS_AS(assignRadii(rsm, p, RadiusMode::Fixed, 1.0, 10.0, 0.3, 0.0),
                    std::invalid_argument);
    assignRadii(rsm, p, RadiusMode::R1, 1.0, 10.0, 0.3);
    for (const Hvl& h : p.hvls) CHECK(h.radius > 0.0);
}

TEST_CASE("csv dump lists one row per light") {
    RsmBuffer rsm = syntheticRsm(8, 0.1, 5.0);
    Placement p = distribute(rsm, 4, Rgb(1.0));
    assignRadii(rsm, p, RadiusMode::R2, 1.0, 10.0, 0.3);
    std::string path = "hvl_dump_test.csv";
    dumpCsv(p, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    int lines = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    in.close();
    std::remove(path.c_str());
    CHECK(lines == 5);  // header + 4 lights
}
