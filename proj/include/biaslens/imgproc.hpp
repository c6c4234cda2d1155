/********************************************************************************
* Copyright 2026 The biaslens authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*    http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
********************************************************************************/

#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

#include "biaslens/common.hpp"
#include "biaslens/image.hpp"

namespace biaslens::img {

struct NonPositiveGamma : Error {
    using Error::Error;
};
struct ShiftTooLarge : Error {
    using Error::Error;
};
struct ZeroDimension : Error {
    using Error::Error;
};
struct DegenerateLandmarks : Error {
    using Error::Error;
};
struct InvalidAugmentConfig : Error {
    using Error::Error;
};

/// Eye centers in pixel coordinates. Left means smaller x.
struct EyePoints {
    double lx = 0, ly = 0, rx = 0, ry = 0;
};

/// gray = round(0.299 R + 0.587 G + 0.114 B), per pixel.
inline GrayImage to_gray(const RgbImage& im) {
    GrayImage out(im.width, im.height);
    const std::size_t n = out.pixels.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = im.pixels[3 * i + 0];
        const double g = im.pixels[3 * i + 1];
        const double b = im.pixels[3 * i + 2];
        out.pixels[i] = clamp_u8(0.299 * r + 0.587 * g + 0.114 * b);
    }
    return out;
}

/// Power-law intensity transfer: out = round(255 * (in/255)^gamma).
/// Monotone in the input; 0 and 255 are fixed points for every gamma.
inline GrayImage gamma_correct(const GrayImage& im, double gamma) {
    if (!(gamma > 0.0)) throw NonPositiveGamma("gamma must be positive");
    std::array<std::uint8_t, 256> lut;
    for (int v = 0; v < 256; ++v)
        lut[v] = clamp_u8(255.0 * std::pow(v / 255.0, gamma));
    GrayImage out(im.width, im.height);
    for (std::size_t i = 0; i < im.pixels.size(); ++i)
        out.pixels[i] = lut[im.pixels[i]];
    return out;
}

/// Mirror across the vertical axis: out(x, y) = in(width-1-x, y).
inline GrayImage hflip(const GrayImage& im) {
    GrayImage out(im.width, im.height);
    for (int y = 0; y < im.height; ++y)
        for (int x = 0; x < im.width; ++x)
            out.at(x, y) = im.at(im.width - 1 - x, y);
    return out;
}

/// Shift-and-crop: returns the (width-|dx|) x (height-|dy|) window whose
/// top-left corner sits at (max(dx,0), max(dy,0)). No padding is invented.
inline GrayImage translate_crop(const GrayImage& im, int dx, int dy) {
    if (std::abs(dx) >= im.width || std::abs(dy) >= im.height)
        throw ShiftTooLarge("shift (" + std::to_string(dx) + "," + std::to_string(dy) +
                            ") too large for " + std::to_string(im.width) + "x" +
                            std::to_string(im.height) + " image");
    const int ox = dx > 0 ? dx : 0;
    const int oy = dy > 0 ? dy : 0;
    const int w = im.width - std::abs(dx);
    const int h = im.height - std::abs(dy);
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = im.at(x + ox, y + oy);
    return out;
}

namespace detail {

// Bilinear sample at real coordinates; out-of-frame contributions are 0.
inline double sample_bilinear_zero(const GrayImage& im, double sx, double sy) {
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const double fx = sx - x0;
    const double fy = sy - y0;
    auto px = [&](int x, int y) -> double {
        if (x < 0 || y < 0 || x >= im.width || y >= im.height) return 0.0;
        return im.at(x, y);
    };
    return px(x0, y0) * (1 - fx) * (1 - fy) + px(x0 + 1, y0) * fx * (1 - fy) +
           px(x0, y0 + 1) * (1 - fx) * fy + px(x0 + 1, y0 + 1) * fx * fy;
}

} // namespace detail

/// Corner-aligned bilinear resize. Constant images stay constant and outputs
/// never leave the input intensity range by more than rounding.
inline GrayImage resize_bilinear(const GrayImage& im, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw ZeroDimension("resize target must be positive");
    if (out_w == im.width && out_h == im.height) return im;
    GrayImage out(out_w, out_h);
    const double sx_step = out_w > 1 ? double(im.width - 1) / (out_w - 1) : 0.0;
    const double sy_step = out_h > 1 ? double(im.height - 1) / (out_h - 1) : 0.0;
    const double sx_off = out_w > 1 ? 0.0 : (im.width - 1) * 0.5;
    const double sy_off = out_h > 1 ? 0.0 : (im.height - 1) * 0.5;
    for (int y = 0; y < out_h; ++y) {
        const double sy = sy_off + y * sy_step;
        const int y0 = static_cast<int>(std::floor(sy));
        const int y1 = y0 + 1 < im.height ? y0 + 1 : y0;
        const double fy = sy - y0;
        for (int x = 0; x < out_w; ++x) {
            const double sx = sx_off + x * sx_step;
            const int x0 = static_cast<int>(std::floor(sx));
            const int x1 = x0 + 1 < im.width ? x0 + 1 : x0;
            const double fx = sx - x0;
            const double v = im.at(x0, y0) * (1 - fx) * (1 - fy) +
                             im.at(x1, y0) * fx * (1 - fy) +
                             im.at(x0, y1) * (1 - fx) * fy +
                             im.at(x1, y1) * fx * fy;
            out.at(x, y) = clamp_u8(v);
        }
    }
    return out;
}

/// Rotates image content by `angle` radians about (cx, cy) with bilinear
/// resampling; samples falling outside the frame read as 0.
inline GrayImage rotate_about(const GrayImage& im, double cx, double cy, double angle) {
    if (angle == 0.0) return im;
    GrayImage out(im.width, im.height);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (int y = 0; y < im.height; ++y) {
        for (int x = 0; x < im.width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            // inverse map: rotate by -angle
            const double sx = cx + dx * c + dy * s;
            const double sy = cy - dx * s + dy * c;
            out.at(x, y) = clamp_u8(detail::sample_bilinear_zero(im, sx, sy));
        }
    }
    return out;
}

/// Rotates about the eye midpoint so the eye line becomes horizontal
/// (rotation by -atan2(ry-ly, rx-lx)); out-of-frame samples fill with 0.
inline GrayImage align_by_eyes(const GrayImage& im, const EyePoints& eyes) {
    if (!(eyes.lx < eyes.rx))
        throw DegenerateLandmarks("left eye x must be strictly left of right eye x");
    const double theta = std::atan2(eyes.ry - eyes.ly, eyes.rx - eyes.lx);
    const double cx = (eyes.lx + eyes.rx) * 0.5;
    const double cy = (eyes.ly + eyes.ry) * 0.5;
    return rotate_about(im, cx, cy, -theta);
}

/// Illumination/appearance augmentation plan. The variant count is
/// (1 + #gammas) * (1 + translation) * (1 + flip); the default is 16.
struct AugmentConfig {
    std::vector<double> gamma_values{0.6, 1.4, 1.8};
    int translate_px = 4;
    bool include_translation = true;
    bool include_flip = true;

    int variant_count() const {
        return static_cast<int>(1 + gamma_values.size()) *
               (include_translation ? 2 : 1) * (include_flip ? 2 : 1);
    }

    void validate() const {
        if (gamma_values.empty())
            throw InvalidAugmentConfig("gamma_values must be non-empty");
        for (double g : gamma_values)
            if (!(g > 0.0)) throw InvalidAugmentConfig("gamma values must be positive");
        if (translate_px < 0)
            throw InvalidAugmentConfig("translate_px must be non-negative");
    }
};

/// Expands one training image into its augmentation variants, every one
/// resized to net_size x net_size. Order: gamma outermost (original first),
/// then translation, then flip, so element 0 is the resized original and
/// flip-enabled outputs come in consecutive (v, hflip(v)) pairs.
inline std::vector<GrayImage> augment(const GrayImage& im, const AugmentConfig& cfg,
                                      int net_size) {
    cfg.validate();
    if (cfg.include_translation &&
        (im.width <= cfg.translate_px || im.height <= cfg.translate_px))
        throw ShiftTooLarge("image smaller than translate_px");
    std::vector<GrayImage> out;
    out.reserve(static_cast<std::size_t>(cfg.variant_count()));
    for (std::size_t gi = 0; gi <= cfg.gamma_values.size(); ++gi) {
        const GrayImage toned = gi == 0 ? im : gamma_correct(im, cfg.gamma_values[gi - 1]);
        for (int ti = 0; ti <= (cfg.include_translation ? 1 : 0); ++ti) {
            const GrayImage shifted =
                ti == 0 ? toned : translate_crop(toned, cfg.translate_px, cfg.translate_px);
            GrayImage resized = resize_bilinear(shifted, net_size, net_size);
            if (cfg.include_flip) {
                GrayImage mirrored = hflip(resized);
                out.push_back(std::move(resized));
                out.push_back(std::move(mirrored));
            } else {
                out.push_back(std::move(resized));
            }
        }
    }
    return out;
}

/// Test-time preprocessing: align when landmarks are present, then resize to
/// the network input size. No augmentation.
inline GrayImage preprocess_test(const GrayImage& im,
                                 const std::optional<EyePoints>& eyes, int net_size) {
    const GrayImage aligned = eyes ? align_by_eyes(im, *eyes) : im;
    return resize_bilinear(aligned, net_size, net_size);
}

inline GrayImage preprocess_test(const RgbImage& im,
                                 const std::optional<EyePoints>& eyes, int net_size) {
    return preprocess_test(to_gray(im), eyes, net_size);
}

} // namespace biaslens::img
