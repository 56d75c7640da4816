// SPDX-License-Identifier: Apache-2.0
//
// Frame rendering: builds per-material tables, places virtual lights from
// each light's shadow-map pass, then shades every pixel with the selected
// estimator. Rows are distributed over worker threads; all sampling uses
// per-pixel counter-based streams, so the image is independent of the thread
// count and row schedule.
#pragma once

#include <cstdint>
#include <string>

#include "hvl/image.hpp"
#include "hvl/scene.hpp"
#include "hvl/shading.hpp"
#include "hvl/virtual_lights.hpp"

namespace hvl::render {

struct RenderOptions {
    shade::Mode mode = shade::Mode::Hvl;
    int hvlCount = 400;  // per light
    int bandsEmission = 3;
    int bandsGather = 5;
    vl::RadiusMode radiusMode = vl::RadiusMode::R2;
    double fixedRadius = 0.0;   // required > 0 for RadiusMode::Fixed
    double radiusScale = 1.0;   // multiplier on the chosen radius rule
    int vslSamples = 25;
    int pathSamples = 256;
    double vplClamp = 0.0;  // <= 0 disables
    bool pathFullVisibility = true;
    uint64_t seed = 0;
    int threads = 0;  // 0: HVL_THREADS env var, then hardware concurrency
    bool indirectOnly = false;
    std::string dumpHvlsPath;  // write the placement CSV when non-empty
};

struct StageTimes {
    double tablesSec = 0.0;
    double placementSec = 0.0;  // shadow-map pass + distribution + radii
    double shadeSec = 0.0;
    double indirectSec = 0.0;  // portion of shadeSec spent in the bounce estimator
    double totalSec = 0.0;
};

struct RenderResult {
    img::Image image;
    StageTimes times;
    int hvlCount = 0;  // total virtual lights actually placed
};

RenderResult renderFrame(const scene::Scene& sc, const RenderOptions& opt);

}  // namespace hvl::render
