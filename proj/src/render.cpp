// SPDX-License-Identifier: Apache-2.0
#include "hvl/render.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>
#include <vector>

#include "hvl/brdf.hpp"
#include "hvl/rng.hpp"

namespace hvl::render {

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

int resolveThreads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HVL_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

bool usesShTables(shade::Mode m) {
    return m == shade::Mode::Hvl || m == shade::Mode::HvlZhFast || m == shade::Mode::Direct;
}

}  // namespace

RenderResult renderFrame(const scene::Scene& sc, const RenderOptions& opt) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();

    shade::GatherConfig cfg;
    cfg.bandsEmission = opt.bandsEmission;
    cfg.bandsGather = opt.bandsGather;
    cfg.mode = opt.mode;
    cfg.vslSamples = opt.vslSamples;
    cfg.pathSamples = opt.pathSamples;
    cfg.vplClamp = opt.vplClamp;
    cfg.pathFullVisibility = opt.pathFullVisibility;

    // Per-material projections. One table serves both gather and emission
    // lookups; each consumer truncates to its own band count.
    std::vector<brdf::BrdfTable> tables;
    std::vector<shade::ZhMaterial> zhMats;
    if (usesShTables(opt.mode)) {
        int bands = std::max(opt.bandsGather, opt.bandsEmission);
        tables.reserve(sc.materials.size());
        for (const brdf::BrdfModel& m : sc.materials) tables.push_back(brdf::tabulate(m, bands));
    }
    if (opt.mode == shade::Mode::HvlZhFast) {
        zhMats.reserve(sc.materials.size());
        for (const brdf::BrdfModel& m : sc.materials)
            zhMats.push_back(shade::zhDecompose(m, opt.bandsGather));
    }
    auto t1 = clock::now();

    // Virtual light placement, per light.
    std::vector<vl::Hvl> hvls;
    bool needHvls = opt.mode != shade::Mode::Path && opt.mode != shade::Mode::Direct;
    if (needHvls) {
        for (const scene::SpotLight& light : sc.lights) {
            vl::RsmBuffer rsm = vl::renderRsm(sc, light);
            vl::Placement p = vl::distribute(rsm, opt.hvlCount, light.power);
            vl::assignRadii(rsm, p, opt.radiusMode, opt.radiusScale, sc.diagonal,
                            light.halfAngle, opt.fixedRadius);
            hvls.insert(hvls.end(), p.hvls.begin(), p.hvls.end());
        }
        if (!opt.dumpHvlsPath.empty()) {
            vl::Placement dump;
            dump.hvls = hvls;
            vl::dumpCsv(dump, opt.dumpHvlsPath);
        }
    }
    auto t2 = clock::now();

    const scene::Camera& cam = sc.camera;
    img::Image image(cam.width, cam.height);
    bool parametricDirect = !usesShTables(opt.mode);
    bool hasIndirect = opt.mode != shade::Mode::Direct;
    std::atomic<int64_t> indirectNanos{0};

    auto shadeRow = [&](int py) {
        int64_t rowNanos = 0;
        for (int px = 0; px < cam.width; ++px) {
            scene::Ray ray = scene::cameraRay(cam, px + 0.5, py + 0.5);
            auto hit = scene::intersect(sc, ray);
            if (!hit) continue;

            shade::ShadePoint sp;
            sp.x = hit->point;
            sp.wo = normalize(-ray.dir);
            sp.n = dot(hit->normal, sp.wo) < 0.0 ? -hit->normal : hit->normal;
            sp.material = hit->material;

            Rgb color(0.0);
            if (!opt.indirectOnly) {
                for (const scene::SpotLight& l : sc.lights) {
                    if (parametricDirect)
                        color += shade::directLightingParametric(
                            sp.x, sp.n, sp.wo, sc.materials[static_cast<size_t>(sp.material)],
                            l, &sc);
                    else
                        color += shade::directLighting(
                            sp, l, tables[static_cast<size_t>(sp.material)], opt.bandsGather,
                            &sc);
                }
            }

            if (hasIndirect) {
                auto g0 = clock::now();
                switch (opt.mode) {
                    case shade::Mode::Hvl:
                        color += shade::gatherIndirect(sp, hvls, tables, cfg);
                        break;
                    case shade::Mode::HvlZhFast:
                        color += shade::gatherIndirectZhFast(
                            sp, hvls, zhMats[static_cast<size_t>(sp.material)], sc.materials,
                            cfg);
                        break;
                    case shade::Mode::Vpl:
                        for (const vl::Hvl& h : hvls)
                            color += shade::vplContribution(sp, h, sc.materials, cfg);
                        break;
                    case shade::Mode::Vsl: {
                        Rng rng = pixelRng(opt.seed, px, py);
                        for (const vl::Hvl& h : hvls)
                            color += shade::vslContribution(sp, h, sc.materials, cfg, rng);
                        break;
                    }
                    case shade::Mode::Path: {
                        Rng rng = pixelRng(opt.seed, px, py);
                        color += shade::pathTraceIndirect(sp, sc, cfg, rng);
                        break;
                    }
                    case shade::Mode::Direct:
                        break;
                }
                rowNanos +=
                    std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - g0)
                        .count();
            }
            image.set(px, py, color);
        }
        if (rowNanos > 0) indirectNanos.fetch_add(rowNanos, std::memory_order_relaxed);
    };

    int threads = resolveThreads(opt.threads);
    if (threads <= 1 || cam.height <= 1) {
        for (int py = 0; py < cam.height; ++py) shadeRow(py);
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (;;) {
                int py = next.fetch_add(1);
                if (py >= cam.height) return;
                shadeRow(py);
            }
        };
        std::vector<std::thread> pool;
        int n = std::min(threads, cam.height);
        pool.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    auto t3 = clock::now();

    RenderResult res;
    res.image = std::move(image);
    res.hvlCount = static_cast<int>(hvls.size());
    res.times.tablesSec = seconds(t0, t1);
    res.times.placementSec = seconds(t1, t2);
    res.times.shadeSec = seconds(t2, t3);
    res.times.indirectSec = static_cast<double>(indirectNanos.load()) * 1e-9;
    res.times.totalSec = seconds(t0, t3);
    return res;
}

}  // namespace hvl::render
