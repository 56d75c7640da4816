// SPDX-License-Identifier: Apache-2.0
#include "hvl/image.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace hvl::img {

namespace {

void checkFinite(const Image& img) {
    for (float v : img.px)
        if (!std::isfinite(v) || v < 0.0f)
            throw std::runtime_error("image contains negative or non-finite pixels");
}

void writePfm(const Image& img, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(f, "PF\n%d %d\n-1.000000\n", img.width, img.height);
    bool ok = true;
    for (int y = img.height - 1; y >= 0 && ok; --y)
        ok = std::fwrite(&img.px[img.offset(0, y)], sizeof(float),
                         static_cast<size_t>(img.width) * 3,
                         f) == static_cast<size_t>(img.width) * 3;
    if (std::fclose(f) != 0) ok = false;
    if (!ok) throw std::runtime_error("write failed: " + path);
}

void writePpm(const Image& img, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(f, "P6\n%d %d\n255\n", img.width, img.height);
    std::vector<unsigned char> row(static_cast<size_t>(img.width) * 3);
    bool ok = true;
    for (int y = 0; y < img.height && ok; ++y) {
        for (int x = 0; x < img.width * 3; ++x) {
            double v = clampd(img.px[img.offset(0, y) + static_cast<size_t>(x)], 0.0, 1.0);
            v = std::pow(v, 1.0 / 2.2);
            row[static_cast<size_t>(x)] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
        ok = std::fwrite(row.data(), 1, row.size(), f) == row.size();
    }
    if (std::fclose(f) != 0) ok = false;
    if (!ok) throw std::runtime_error("write failed: " + path);
}

// Reads one whitespace-delimited token, skipping '#' comments.
std::string readToken(std::FILE* f) {
    std::string tok;
    int c;
    while ((c = std::fgetc(f)) != EOF) {
        if (c == '#') {
            while ((c = std::fgetc(f)) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parseDim(const std::string& tok, const std::string& path) {
    try {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v <= 0 || v > 1 << 20) throw std::exception();
        return v;
    } catch (...) {
        throw std::runtime_error(path + ": malformed header dimension '" + tok + "'");
    }
}

Image readPfm(std::FILE* f, const std::string& path) {
    int w = parseDim(readToken(f), path);
    int h = parseDim(readToken(f), path);
    std::string scaleTok = readToken(f);
    double scale;
    try {
        scale = std::stod(scaleTok);
    } catch (...) {
        throw std::runtime_error(path + ": malformed scale '" + scaleTok + "'");
    }
    if (scale == 0.0) throw std::runtime_error(path + ": zero scale");
    bool littleEndian = scale < 0.0;
    Image img(w, h);
    for (int y = h - 1; y >= 0; --y) {
        size_t n = static_cast<size_t>(w) * 3;
        if (std::fread(&img.px[img.offset(0, y)], sizeof(float), n, f) != n)
            throw std::runtime_error(path + ": truncated pixel data");
    }
    if (!littleEndian) {
        for (float& v : img.px) {
            unsigned char* b = reinterpret_cast<unsigned char*>(&v);
            std::swap(b[0], b[3]);
            std::swap(b[1], b[2]);
        }
    }
    double mag = std::abs(scale);
    if (mag != 1.0)
        for (float& v : img.px) v = static_cast<float>(v * mag);
    return img;
}

Image readPpm(std::FILE* f, const std::string& path) {
    int w = parseDim(readToken(f), path);
    int h = parseDim(readToken(f), path);
    int maxval = parseDim(readToken(f), path);
    if (maxval > 255) throw std::runtime_error(path + ": 16-bit ppm unsupported");
    Image img(w, h);
    std::vector<unsigned char> row(static_cast<size_t>(w) * 3);
    for (int y = 0; y < h; ++y) {
        if (std::fread(row.data(), 1, row.size(), f) != row.size())
            throw std::runtime_error(path + ": truncated pixel data");
        for (size_t i = 0; i < row.size(); ++i)
            img.px[img.offset(0, y) + i] =
                static_cast<float>(std::pow(row[i] / static_cast<double>(maxval), 2.2));
    }
    return img;
}

std::vector<double> lumaPlane(const Image& img) {
    std::vector<double> out(static_cast<size_t>(img.width) * img.height);
    for (size_t p = 0, i = 0; p < out.size(); ++p, i += 3) {
        double r = clampd(img.px[i], 0.0, 1.0);
        double g = clampd(img.px[i + 1], 0.0, 1.0);
        double b = clampd(img.px[i + 2], 0.0, 1.0);
        out[p] = 0.2126 * r + 0.7152 * g + 0.0722 * b;
    }
    return out;
}

void requireSameDims(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("image dimensions differ: " + std::to_string(a.width) + "x" +
                                    std::to_string(a.height) + " vs " + std::to_string(b.width) +
                                    "x" + std::to_string(b.height));
}

}  // namespace

void writeImage(const Image& img, const std::string& path, Format format) {
    if (img.width <= 0 || img.height <= 0) throw std::runtime_error("empty image");
    checkFinite(img);
    if (format == Format::Pfm)
        writePfm(img, path);
    else
        writePpm(img, path);
}

Image readImage(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    Image img;
    try {
        std::string magic = readToken(f);
        if (magic == "PF")
            img = readPfm(f, path);
        else if (magic == "P6")
            img = readPpm(f, path);
        else
            throw std::runtime_error(path + ": unsupported image format '" + magic + "'");
    } catch (...) {
        std::fclose(f);
        throw;
    }
    std::fclose(f);
    return img;
}

double rmse(const Image& a, const Image& b) {
    requireSameDims(a, b);
    std::vector<double> la = lumaPlane(a), lb = lumaPlane(b);
    double sum = 0.0;
    for (size_t i = 0; i < la.size(); ++i) {
        double d = la[i] - lb[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(la.size()));
}

double psnr(const Image& a, const Image& b) {
    double e = rmse(a, b);
    if (e <= 0.0) return 99.0;
    return std::min(99.0, 20.0 * std::log10(1.0 / e));
}

double ssim(const Image& a, const Image& b) {
    requireSameDims(a, b);
    std::vector<double> la = lumaPlane(a), lb = lumaPlane(b);
    constexpr double kC1 = 0.01 * 0.01, kC2 = 0.03 * 0.03;
    int w = a.width, h = a.height;

    int radius = 5;
    bool windowed = w >= 11 && h >= 11;
    std::vector<double> g;
    if (windowed) {
        g.resize(121);
        double sum = 0.0;
        for (int dy = -radius; dy <= radius; ++dy)
            for (int dx = -radius; dx <= radius; ++dx) {
                double v = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
                g[static_cast<size_t>((dy + radius) * 11 + dx + radius)] = v;
                sum += v;
            }
        for (double& v : g) v /= sum;
    }

    auto localSsim = [&](int x0, int y0, int x1, int y1, bool gauss) {
        double ma = 0, mb = 0;
        int idx = 0;
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x, ++idx) {
                double wgt = gauss ? g[static_cast<size_t>(idx)]
                                   : 1.0 / ((x1 - x0 + 1) * (y1 - y0 + 1));
                size_t p = static_cast<size_t>(y) * w + static_cast<size_t>(x);
                ma += wgt * la[p];
                mb += wgt * lb[p];
            }
        double va = 0, vb = 0, cov = 0;
        idx = 0;
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x, ++idx) {
                double wgt = gauss ? g[static_cast<size_t>(idx)]
                                   : 1.0 / ((x1 - x0 + 1) * (y1 - y0 + 1));
                size_t p = static_cast<size_t>(y) * w + static_cast<size_t>(x);
                double da = la[p] - ma, db = lb[p] - mb;
                va += wgt * da * da;
                vb += wgt * db * db;
                cov += wgt * da * db;
            }
        return ((2 * ma * mb + kC1) * (2 * cov + kC2)) /
               ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
    };

    if (!windowed) return localSsim(0, 0, w - 1, h - 1, false);

    double total = 0.0;
    long count = 0;
    for (int y = radius; y < h - radius; ++y)
        for (int x = radius; x < w - radius; ++x) {
            total += localSsim(x - radius, y - radius, x + radius, y + radius, true);
            ++count;
        }
    return total / static_cast<double>(count);
}

}  // namespace hvl::img
