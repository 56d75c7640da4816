// SPDX-License-Identifier: Apache-2.0
//
// HDR image buffers, PFM/PPM I/O, and image error metrics.
//
// Images store row-major RGB float radiance with row 0 at the top. PFM files
// round-trip bit exactly (scale -1.0, little endian, rows bottom to top).
// PPM output is display-referred: clamp to [0,1], gamma 1/2.2, 8-bit.
//
// Metrics (rmse / psnr / ssim) operate on tone-mapped luma: each channel is
// clamped to [0,1], then reduced with Rec.709 weights. No gamma is applied in
// metric space, so a uniform radiance offset inside the displayable range
// shifts the metric luma by exactly the same amount. PSNR uses peak 1.0 and
// is capped at 99 dB. SSIM uses an 11x11 Gaussian window (sigma 1.5,
// K1 = 0.01, K2 = 0.03, dynamic range 1) averaged over window centers that
// lie fully inside both images.
#pragma once

#include <string>
#include <vector>

#include "hvl/vec.hpp"

namespace hvl::img {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> px;  // 3 floats per pixel, row-major, top row first

    Image() = default;
    Image(int w, int h) : width(w), height(h), px(static_cast<size_t>(w) * h * 3, 0.0f) {}

    size_t offset(int x, int y) const {
        return 3 * (static_cast<size_t>(y) * width + static_cast<size_t>(x));
    }
    Rgb get(int x, int y) const {
        size_t o = offset(x, y);
        return Rgb(px[o], px[o + 1], px[o + 2]);
    }
    void set(int x, int y, const Rgb& c) {
        size_t o = offset(x, y);
        px[o] = static_cast<float>(c.x);
        px[o + 1] = static_cast<float>(c.y);
        px[o + 2] = static_cast<float>(c.z);
    }
};

enum class Format { Pfm, Ppm };

// Throws std::runtime_error on I/O failure or non-finite/negative pixels.
void writeImage(const Image& img, const std::string& path, Format format);

// Reads PFM or PPM, detected from the magic bytes. PPM values are linearized
// with gamma 2.2. Throws std::runtime_error on malformed input.
Image readImage(const std::string& path);

// All three throw std::invalid_argument when dimensions differ.
double rmse(const Image& a, const Image& b);
double psnr(const Image& a, const Image& b);  // dB, capped at 99
double ssim(const Image& a, const Image& b);

}  // namespace hvl::img
