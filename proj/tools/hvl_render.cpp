// SPDX-License-Identifier: Apache-2.0
//
// Command line renderer. Exit codes: 0 success, 1 runtime failure (scene or
// I/O errors, reference mismatch), 2 bad command line.
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hvl/image.hpp"
#include "hvl/render.hpp"
#include "hvl/scene.hpp"

namespace {

struct Options {
    std::string scenePath;
    std::string mode = "hvl";
    std::string radius = "r2";
    std::string outPath;
    std::string referencePath;
    std::string reportPath;
    std::string dumpHvlsPath;
    std::string pathVisibility = "full";
    hvl::render::RenderOptions render;
};

hvl::shade::Mode parseMode(const std::string& s) {
    static const std::map<std::string, hvl::shade::Mode> kModes = {
        {"hvl", hvl::shade::Mode::Hvl},     {"hvl-zh", hvl::shade::Mode::HvlZhFast},
        {"vpl", hvl::shade::Mode::Vpl},     {"vsl", hvl::shade::Mode::Vsl},
        {"path", hvl::shade::Mode::Path},   {"direct", hvl::shade::Mode::Direct}};
    return kModes.at(s);
}

// "r1", "r2", or "fixed:<value>".
void parseRadius(const std::string& s, hvl::render::RenderOptions& r) {
    if (s == "r1") {
        r.radiusMode = hvl::vl::RadiusMode::R1;
        return;
    }
    if (s == "r2") {
        r.radiusMode = hvl::vl::RadiusMode::R2;
        return;
    }
    if (s.rfind("fixed:", 0) == 0) {
        size_t used = 0;
        double v = std::stod(s.substr(6), &used);
        if (used != s.size() - 6 || v <= 0.0)
            throw CLI::ValidationError("--radius", "fixed radius must be a positive number");
        r.radiusMode = hvl::vl::RadiusMode::Fixed;
        r.fixedRadius = v;
        return;
    }
    throw CLI::ValidationError("--radius", "expected r1, r2, or fixed:<value>");
}

hvl::img::Format formatForPath(const std::string& path) {
    auto endsWith = [&](const char* suf) {
        size_t n = std::string(suf).size();
        return path.size() >= n && path.compare(path.size() - n, n, suf) == 0;
    };
    if (endsWith(".pfm")) return hvl::img::Format::Pfm;
    if (endsWith(".ppm")) return hvl::img::Format::Ppm;
    throw std::runtime_error("unsupported image extension (use .pfm or .ppm): " + path);
}

int run(const Options& opt) {
    hvl::scene::Scene sc = hvl::scene::loadScene(opt.scenePath);
    hvl::render::RenderResult res = hvl::render::renderFrame(sc, opt.render);

    std::vector<std::pair<std::string, std::string>> report;
    auto add = [&](const std::string& k, const std::string& v) { report.emplace_back(k, v); };
    auto addNum = [&](const std::string& k, double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        add(k, buf);
    };
    add("scene", opt.scenePath);
    add("mode", opt.mode);
    addNum("width", sc.camera.width);
    addNum("height", sc.camera.height);
    addNum("hvl_count", res.hvlCount);
    addNum("bands_emission", opt.render.bandsEmission);
    addNum("bands_gather", opt.render.bandsGather);
    add("radius", opt.radius);
    addNum("radius_scale", opt.render.radiusScale);
    addNum("vsl_samples", opt.render.vslSamples);
    addNum("path_samples", opt.render.pathSamples);
    add("path_visibility", opt.pathVisibility);
    addNum("seed", static_cast<double>(opt.render.seed));
    add("indirect_only", opt.render.indirectOnly ? "true" : "false");
    addNum("tables_sec", res.times.tablesSec);
    addNum("placement_sec", res.times.placementSec);
    addNum("shade_sec", res.times.shadeSec);
    addNum("indirect_sec", res.times.indirectSec);
    addNum("total_sec", res.times.totalSec);

    if (!opt.outPath.empty())
        hvl::img::writeImage(res.image, opt.outPath, formatForPath(opt.outPath));

    if (!opt.referencePath.empty()) {
        hvl::img::Image ref = hvl::img::readImage(opt.referencePath);
        if (ref.width != res.image.width || ref.height != res.image.height)
            throw std::runtime_error(
                "reference resolution " + std::to_string(ref.width) + "x" +
                std::to_string(ref.height) + " does not match render " +
                std::to_string(res.image.width) + "x" + std::to_string(res.image.height));
        double e = hvl::img::rmse(res.image, ref);
        double p = hvl::img::psnr(res.image, ref);
        double s = hvl::img::ssim(res.image, ref);
        addNum("rmse", e);
        addNum("psnr_db", p);
        addNum("ssim", s);
        std::printf("rmse %.6f  psnr %.2f dB  ssim %.4f\n", e, p, s);
    }

    if (!opt.reportPath.empty()) {
        std::ofstream out(opt.reportPath);
        if (!out) throw std::runtime_error("cannot write report: " + opt.reportPath);
        for (const auto& [k, v] : report) out << k << ": " << v << "\n";
    }

    std::printf("%s: %dx%d, %d virtual lights, %.2fs\n", opt.mode.c_str(), res.image.width,
                res.image.height, res.hvlCount, res.times.totalSec);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Offline renderer: one-bounce indirect lighting from "
                 "spherical virtual lights with projected-harmonics BRDFs"};
    app.add_option("--scene", opt.scenePath, "scene description file")->required();
    app.add_option("--mode", opt.mode, "hvl, hvl-zh, vpl, vsl, path, or direct")
        ->check(CLI::IsMember({"hvl", "hvl-zh", "vpl", "vsl", "path", "direct"}));
    app.add_option("--hvl-count", opt.render.hvlCount, "virtual lights per light source")
        ->check(CLI::PositiveNumber);
    app.add_option("--bands-emission", opt.render.bandsEmission,
                   "harmonic bands for emission reconstruction")
        ->check(CLI::Range(1, 32));
    app.add_option("--bands-gather", opt.render.bandsGather, "harmonic bands for gathering")
        ->check(CLI::Range(1, 32));
    app.add_option("--radius", opt.radius, "radius rule: r1, r2, or fixed:<value>");
    app.add_option("--k", opt.render.radiusScale, "radius scale factor")
        ->check(CLI::PositiveNumber);
    app.add_option("--vsl-samples", opt.render.vslSamples, "cone samples per virtual light")
        ->check(CLI::PositiveNumber);
    app.add_option("--path-samples", opt.render.pathSamples, "gather rays per pixel")
        ->check(CLI::PositiveNumber);
    app.add_option("--vpl-clamp", opt.render.vplClamp,
                   "per-channel clamp on point-light contributions (0 = off)");
    app.add_option("--seed", opt.render.seed, "random seed");
    app.add_option("--out", opt.outPath, "output image (.pfm or .ppm)");
    app.add_option("--reference", opt.referencePath,
                   "reference image; prints rmse/psnr/ssim against it");
    app.add_option("--report", opt.reportPath, "write a key: value run report");
    app.add_option("--threads", opt.render.threads,
                   "worker threads (0 = HVL_THREADS env, then all cores)");
    app.add_flag("--indirect-only", opt.render.indirectOnly, "skip direct lighting");
    app.add_option("--dump-hvls", opt.dumpHvlsPath, "write placed virtual lights as CSV");
    app.add_option("--path-visibility", opt.pathVisibility,
                   "path mode occlusion: full, or none (accumulate through blockers)")
        ->check(CLI::IsMember({"full", "none"}));

    try {
        app.parse(argc, argv);
        parseRadius(opt.radius, opt.render);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::fprintf(stderr, "%s\n", e.what());
        std::fprintf(stderr, "%s", app.help().c_str());
        return 2;
    }

    opt.render.mode = parseMode(opt.mode);
    opt.render.pathFullVisibility = opt.pathVisibility == "full";
    opt.render.dumpHvlsPath = opt.dumpHvlsPath;

    try {
        return run(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
