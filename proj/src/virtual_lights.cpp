// SPDX-License-Identifier: Apache-2.0
#include "hvl/virtual_lights.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hvl::vl {

int RsmBuffer::validCount() const {
    int n = 0;
    for (const RsmPixel& p : px) n += p.valid ? 1 : 0;
    return n;
}

RsmBuffer renderRsm(const scene::Scene& sc, const scene::SpotLight& light) {
    RsmBuffer rsm;
    rsm.resolution = light.rsmResolution;
    rsm.px.assign(static_cast<size_t>(rsm.resolution) * rsm.resolution, RsmPixel{});
    rsm.lightPos = light.position;
    rsm.halfAngle = light.halfAngle;

    Frame frame = Frame::fromZ(light.direction);
    double extent = std::tan(light.halfAngle);
    double tMin = 1e-7 * std::max(sc.diagonal, 1.0);
    for (int y = 0; y < rsm.resolution; ++y)
        for (int x = 0; x < rsm.resolution; ++x) {
            double s = (2.0 * (x + 0.5) / rsm.resolution - 1.0) * extent;
            double t = (2.0 * (y + 0.5) / rsm.resolution - 1.0) * extent;
            scene::Ray ray{light.position, normalize(frame.toWorld(Vec3(s, t, 1.0))), tMin,
                           kInf};
            auto hit = scene::intersect(sc, ray);
            if (!hit) continue;
            RsmPixel& p = rsm.at(x, y);
            p.worldPos = hit->point;
            p.normal = hit->normal;
            p.lightDepth = hit->t;
            p.material = hit->material;
            p.valid = true;
        }
    return rsm;
}

Placement distribute(const RsmBuffer& rsm, int count, const Rgb& lightPhi) {
    if (count < 1) throw std::invalid_argument("virtual light count must be >= 1");
    int valid = rsm.validCount();
    if (count > valid)
        throw std::invalid_argument("virtual light count " + std::to_string(count) +
                                    " exceeds valid RSM pixel count " + std::to_string(valid));
    int grid = static_cast<int>(std::floor(std::sqrt(static_cast<double>(count))));
    if (grid > rsm.resolution)
        throw std::invalid_argument("grid " + std::to_string(grid) + " exceeds RSM resolution " +
                                    std::to_string(rsm.resolution));

    Placement p;
    p.gridSize = grid;
    p.targetCount = count;
    p.hvlOfCell.assign(static_cast<size_t>(grid) * grid, -1);

    struct Pick {
        int px = -1, py = -1;
    };
    std::vector<Pick> picks(static_cast<size_t>(grid) * grid);
    for (int gy = 0; gy < grid; ++gy)
        for (int gx = 0; gx < grid; ++gx) {
            int x0 = gx * rsm.resolution / grid, x1 = (gx + 1) * rsm.resolution / grid;
            int y0 = gy * rsm.resolution / grid, y1 = (gy + 1) * rsm.resolution / grid;
            int cx = (x0 + x1 - 1) / 2, cy = (y0 + y1 - 1) / 2;
            Pick& pick = picks[static_cast<size_t>(gy) * grid + gx];
            int maxRing = std::max(std::max(cx - x0, x1 - 1 - cx), std::max(cy - y0, y1 - 1 - cy));
            for (int ring = 0; ring <= maxRing && pick.px < 0; ++ring) {
                for (int dy = -ring; dy <= ring && pick.px < 0; ++dy)
                    for (int dx = -ring; dx <= ring; ++dx) {
                        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                        int x = cx + dx, y = cy + dy;
                        if (x < x0 || x >= x1 || y < y0 || y >= y1) continue;
                        if (!rsm.at(x, y).valid) continue;
                        pick.px = x;
                        pick.py = y;
                        break;
                    }
            }
        }

    int actual = 0;
    for (const Pick& pick : picks) actual += pick.px >= 0 ? 1 : 0;
    if (actual == 0) throw std::runtime_error("no RSM pixel group holds a valid pixel");

    Rgb flux = lightPhi / static_cast<double>(actual);
    for (int cell = 0; cell < grid * grid; ++cell) {
        const Pick& pick = picks[static_cast<size_t>(cell)];
        if (pick.px < 0) continue;
        const RsmPixel& src = rsm.at(pick.px, pick.py);
        Hvl h;
        h.position = src.worldPos;
        h.normal = src.normal;
        h.flux = flux;
        h.material = src.material;
        h.toLight = normalize(rsm.lightPos - src.worldPos);
        h.lightDepth = src.lightDepth;
        p.hvlOfCell[static_cast<size_t>(cell)] = static_cast<int>(p.hvls.size());
        p.cellOfHvl.push_back(cell);
        p.pixel.push_back(pick.py * rsm.resolution + pick.px);
        p.hvls.push_back(h);
    }
    return p;
}

double radiusR2(double lambda, int M, double d, double k) {
    double gamma = std::sqrt(2.0) * lambda / std::sqrt(static_cast<double>(M));
    if (gamma > 0.58) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            std::fprintf(stderr,
                         "warning: radius heuristic r2 used outside its validity bound "
                         "(gamma = %.3f > 0.58); consider more virtual lights\n",
                         gamma);
    }
    return d * (gamma + gamma * gamma * gamma / 3.0) * k;
}

double radiusR1(const RsmBuffer& rsm, const Placement& p, int hvlIndex, double k,
                double sceneDiagonal, double lambda) {
    (void)rsm;  // neighbor data lives in the placement; kept for API symmetry
    const Hvl& h = p.hvls[static_cast<size_t>(hvlIndex)];
    int cell = p.cellOfHvl[static_cast<size_t>(hvlIndex)];
    int gx = cell % p.gridSize, gy = cell / p.gridSize;
    double eps = 1e-3 * sceneDiagonal;
    double wsum = 0.0, dsum = 0.0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            int nx = gx + dx, ny = gy + dy;
            if (nx < 0 || nx >= p.gridSize || ny < 0 || ny >= p.gridSize) continue;
            int nIdx = p.hvlOfCell[static_cast<size_t>(ny) * p.gridSize + nx];
            if (nIdx < 0) continue;
            const Hvl& nb = p.hvls[static_cast<size_t>(nIdx)];
            double w = 1.0 / (std::abs(h.lightDepth - nb.lightDepth) + eps);
            wsum += w;
            dsum += w * length(h.position - nb.position);
        }
    if (wsum <= 0.0)
        return radiusR2(lambda, static_cast<int>(p.hvls.size()), h.lightDepth, k);
    return k * dsum / wsum;
}

void assignRadii(const RsmBuffer& rsm, Placement& p, RadiusMode mode, double k,
                 double sceneDiagonal, double lambda, double fixedRadius) {
    if (mode == RadiusMode::Fixed && !(fixedRadius > 0.0))
        throw std::invalid_argument("fixed radius must be > 0");
    int m = static_cast<int>(p.hvls.size());
    for (int i = 0; i < m; ++i) {
        Hvl& h = p.hvls[static_cast<size_t>(i)];
        switch (mode) {
            case RadiusMode::R1:
                h.radius = radiusR1(rsm, p, i, k, sceneDiagonal, lambda);
                break;
            case RadiusMode::R2:
                h.radius = radiusR2(lambda, m, h.lightDepth, k);
                break;
            case RadiusMode::Fixed:
                h.radius = fixedRadius;
                break;
        }
    }
}

void dumpCsv(const Placement& p, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(f, "index,px,py,pz,nx,ny,nz,radius,flux_r,flux_g,flux_b\n");
    for (size_t i = 0; i < p.hvls.size(); ++i) {
        const Hvl& h = p.hvls[i];
        std::fprintf(f, "%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", i,
                     h.position.x, h.position.y, h.position.z, h.normal.x, h.normal.y, h.normal.z,
                     h.radius, h.flux.x, h.flux.y, h.flux.z);
    }
    if (std::fclose(f) != 0) throw std::runtime_error("write failed: " + path);
}

}  // namespace hvl::vl
