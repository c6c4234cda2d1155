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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "biaslens/common.hpp"
#include "biaslens/dataset.hpp"
#include "biaslens/image.hpp"

namespace biaslens::data {

struct InvalidSpec : Error {
    using Error::Error;
};

/// Parameters of the synthetic grouped-face generator. Each emotion is a
/// distinct glyph (mouth curvature, brow angle, mouth opening) drawn on a
/// face template; the two groups render with systematically different styles
/// (stroke thickness, face aspect ratio, expression amplitude) plus
/// per-subject and per-image jitter. Deterministic per seed at byte level.
struct SynthSpec {
    int subjects_per_group = 12;
    int images_per_subject = 4; // per emotion
    int image_size = 48;

    // Group rendering styles. The gap between the two styles is what makes a
    // single-group training set fail on the other group.
    double stroke_female = 3.2;
    double stroke_male = 1.6;
    double aspect_female = 1.18;
    double aspect_male = 0.90;
    double expr_scale_female = 0.55;
    double expr_scale_male = 1.0;

    void validate() const {
        if (subjects_per_group < 1) throw InvalidSpec("subjects_per_group must be >= 1");
        if (images_per_subject < 1) throw InvalidSpec("images_per_subject must be >= 1");
        if (image_size < 16) throw InvalidSpec("image_size must be >= 16");
        if (!(stroke_female > 0) || !(stroke_male > 0))
            throw InvalidSpec("stroke widths must be positive");
        if (!(aspect_female > 0) || !(aspect_male > 0))
            throw InvalidSpec("aspect ratios must be positive");
        if (!(expr_scale_female > 0) || !(expr_scale_male > 0))
            throw InvalidSpec("expression scales must be positive");
    }

    int total_images() const { return 2 * subjects_per_group * kNumEmotions * images_per_subject; }
};

namespace detail {

// Per-emotion glyph geometry, in face-relative units.
struct EmotionGeometry {
    double brow_raise;  // >0 raises both brows
    double brow_slope;  // >0 drops the inner ends (scowl), <0 lifts them
    double mouth_bend;  // >0 corners up (smile), <0 corners down
    double mouth_skew;  // asymmetric corner lift
    double open_w;      // open-mouth ellipse, 0 = closed
    double open_h;
    double eye_scale;
};

inline const EmotionGeometry& emotion_geometry(EmotionLabel l) {
    static const std::array<EmotionGeometry, kNumEmotions> table = {{
        // raise  slope  bend   skew  open_w open_h eyes
        {-0.45, +0.75, -0.45, 0.0, 0.0, 0.0, 1.00},  // Angry
        {-0.20, +0.30, -0.15, 0.8, 0.0, 0.0, 1.00},  // Disgust
        {+0.60, -0.35, 0.0, 0.0, 0.80, 0.28, 1.12},  // Fear
        {+0.05, 0.0, +0.60, 0.0, 0.0, 0.0, 1.00},    // Happy
        {+0.25, -0.70, -0.60, 0.0, 0.0, 0.0, 1.00},  // Sad
        {+0.85, 0.0, 0.0, 0.0, 0.45, 0.55, 1.30},    // Surprise
    }};
    return table[static_cast<int>(l)];
}

// Pose of one subject's face; fixed per subject, jittered per image.
struct FacePose {
    double cx, cy;
    double face_rx, face_ry;
    double eye_dx, eye_y, eye_r;
    double mouth_y, mouth_w;
    double brow_gap, brow_w;
    double stroke;
    double ink, bg;
    double expr;
};

inline FacePose subject_pose(const SynthSpec& spec, GroupTag group, Rng& rng) {
    const double S = spec.image_size;
    const bool female = group == GroupTag::Female;
    FacePose p;
    p.cx = S * 0.5 + rng.uniform(-1.5, 1.5);
    p.cy = S * 0.5 + rng.uniform(-1.5, 1.5);
    const double aspect = female ? spec.aspect_female : spec.aspect_male;
    p.face_rx = S * 0.33 * aspect * rng.uniform(0.95, 1.05);
    p.face_ry = S * 0.42 * rng.uniform(0.95, 1.05);
    p.eye_dx = p.face_rx * 0.48 * rng.uniform(0.92, 1.08);
    p.eye_y = p.cy - p.face_ry * 0.28 * rng.uniform(0.9, 1.1);
    p.eye_r = S * 0.040 * rng.uniform(0.9, 1.1);
    p.mouth_y = p.cy + p.face_ry * 0.45 * rng.uniform(0.92, 1.08);
    p.mouth_w = p.face_rx * 0.52 * rng.uniform(0.9, 1.1);
    p.brow_gap = S * 0.055 * rng.uniform(0.9, 1.1);
    p.brow_w = p.eye_r * 3.4 * rng.uniform(0.9, 1.1);
    p.stroke = (female ? spec.stroke_female : spec.stroke_male) * rng.uniform(0.85, 1.15);
    p.ink = rng.uniform(18.0, 42.0);
    p.bg = rng.uniform(218.0, 234.0);
    p.expr = female ? spec.expr_scale_female : spec.expr_scale_male;
    return p;
}

inline void stamp_disk(img::GrayImage& im, double cx, double cy, double r,
                       std::uint8_t ink) {
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - r - 1)));
    const int x1 = std::min(im.width - 1, static_cast<int>(std::ceil(cx + r + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - r - 1)));
    const int y1 = std::min(im.height - 1, static_cast<int>(std::ceil(cy + r + 1)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) im.at(x, y) = ink;
        }
}

inline void stamp_segment(img::GrayImage& im, double ax, double ay, double bx,
                          double by, double t, std::uint8_t ink) {
    const double r = t * 0.5;
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(ax, bx) - r - 1)));
    const int x1 = std::min(im.width - 1, static_cast<int>(std::ceil(std::max(ax, bx) + r + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(ay, by) - r - 1)));
    const int y1 = std::min(im.height - 1, static_cast<int>(std::ceil(std::max(ay, by) + r + 1)));
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double px = x - ax, py = y - ay;
            double u = len2 > 0 ? (px * vx + py * vy) / len2 : 0.0;
            u = std::clamp(u, 0.0, 1.0);
            const double dx = px - u * vx, dy = py - u * vy;
            if (dx * dx + dy * dy <= r * r) im.at(x, y) = ink;
        }
}

inline void stamp_ellipse_ring(img::GrayImage& im, double cx, double cy, double rx,
                               double ry, double t, std::uint8_t ink) {
    const double band = t * 0.5 / std::min(rx, ry);
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - rx - t)));
    const int x1 = std::min(im.width - 1, static_cast<int>(std::ceil(cx + rx + t)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - ry - t)));
    const int y1 = std::min(im.height - 1, static_cast<int>(std::ceil(cy + ry + t)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double nx = (x - cx) / rx, ny = (y - cy) / ry;
            const double f = std::sqrt(nx * nx + ny * ny);
            if (std::abs(f - 1.0) <= band) im.at(x, y) = ink;
        }
}

// Mouth curve: vertex at (cx, my), ends lifted by bend (smile when bend > 0).
inline void stamp_mouth_curve(img::GrayImage& im, double cx, double my, double w,
                              double bend, double skew, double t, std::uint8_t ink) {
    const double du = 0.4 / std::max(w, 1.0);
    for (double u = -1.0; u <= 1.0; u += du) {
        const double x = cx + u * w;
        const double y = my - bend * u * u + skew * u;
        stamp_disk(im, x, y, t * 0.5, ink);
    }
}

struct RenderedFace {
    img::GrayImage image;
    img::EyePoints eyes;
};

inline RenderedFace render_face(const SynthSpec& spec, const FacePose& base,
                                EmotionLabel emotion, Rng& rng) {
    const double S = spec.image_size;
    FacePose p = base;
    // per-image jitter
    const double jx = rng.uniform(-1.2, 1.2);
    const double jy = rng.uniform(-1.2, 1.2);
    p.cx += jx;
    p.cy += jy;
    p.eye_y += jy;
    p.mouth_y += jy;
    const std::uint8_t ink = clamp_u8(p.ink + rng.uniform(-10.0, 10.0));
    const double bg = p.bg + rng.uniform(-5.0, 5.0);

    img::GrayImage im(spec.image_size, spec.image_size);
    for (auto& px : im.pixels) px = clamp_u8(bg + rng.uniform(-6.0, 6.0));

    const EmotionGeometry& g = emotion_geometry(emotion);
    const double raise_px = g.brow_raise * p.expr * S * 0.06;
    const double slope_px = g.brow_slope * p.expr * S * 0.07;
    const double bend_px = g.mouth_bend * p.expr * S * 0.15;
    const double skew_px = g.mouth_skew * p.expr * S * 0.075;
    const double open_scale = 0.6 + 0.4 * p.expr;

    // head
    stamp_ellipse_ring(im, p.cx, p.cy, p.face_rx, p.face_ry, p.stroke, ink);
    // nose
    stamp_segment(im, p.cx, p.cy - S * 0.02, p.cx, p.cy + S * 0.08, p.stroke * 0.8, ink);
    // eyes and brows
    for (int side = -1; side <= 1; side += 2) {
        const double ex = p.cx + side * p.eye_dx;
        stamp_disk(im, ex, p.eye_y, p.eye_r * g.eye_scale, ink);
        const double by = p.eye_y - p.eye_r * g.eye_scale - p.brow_gap - raise_px;
        const double inner_x = ex - side * p.brow_w * 0.5;
        const double outer_x = ex + side * p.brow_w * 0.5;
        stamp_segment(im, inner_x, by + slope_px, outer_x, by - slope_px, p.stroke, ink);
    }
    // mouth
    if (g.open_w > 0.0) {
        const double mrx = p.mouth_w * g.open_w * open_scale;
        const double mry = p.mouth_w * g.open_h * open_scale;
        stamp_ellipse_ring(im, p.cx, p.mouth_y, std::max(mrx, 1.5), std::max(mry, 1.5),
                           p.stroke, ink);
    } else {
        stamp_mouth_curve(im, p.cx, p.mouth_y, p.mouth_w, bend_px, skew_px, p.stroke, ink);
    }
    RenderedFace out;
    out.image = std::move(im);
    out.eyes = {p.cx - p.eye_dx, p.eye_y, p.cx + p.eye_dx, p.eye_y};
    return out;
}

} // namespace detail

/// Generates the synthetic grouped dataset under out_dir (binary PGM files)
/// and returns the matching manifest entries. Pure function of (spec, seed)
/// at the byte level; file names and entry order are deterministic.
inline std::vector<ManifestEntry> synth_dataset(const SynthSpec& spec, std::uint64_t seed,
                                                const std::filesystem::path& out_dir) {
    spec.validate();
    std::filesystem::create_directories(out_dir);
    std::vector<ManifestEntry> entries;
    entries.reserve(static_cast<std::size_t>(spec.total_images()));
    for (int gi = 0; gi < 2; ++gi) {
        const GroupTag group = gi == 0 ? GroupTag::Female : GroupTag::Male;
        for (int s = 0; s < spec.subjects_per_group; ++s) {
            Rng pose_rng(derive_seed(seed, 0x505345u, gi, static_cast<std::uint64_t>(s)));
            const detail::FacePose pose = detail::subject_pose(spec, group, pose_rng);
            char sid[16];
            std::snprintf(sid, sizeof(sid), "%c%02d", group == GroupTag::Female ? 'F' : 'M', s);
            for (EmotionLabel emotion : kAllEmotions) {
                for (int k = 0; k < spec.images_per_subject; ++k) {
                    Rng img_rng(derive_seed(seed,
                                            (static_cast<std::uint64_t>(gi) << 32) |
                                                static_cast<std::uint64_t>(s),
                                            static_cast<std::uint64_t>(emotion),
                                            static_cast<std::uint64_t>(k)));
                    detail::RenderedFace face =
                        detail::render_face(spec, pose, emotion, img_rng);
                    char name[64];
                    std::snprintf(name, sizeof(name), "%c%02d_%s_%d.pgm",
                                  group == GroupTag::Female ? 'f' : 'm', s,
                                  to_string(emotion), k);
                    img::save_pgm(out_dir / name, face.image);
                    ManifestEntry e;
                    e.path = name;
                    e.label = emotion;
                    e.group = group;
                    e.subject_id = sid;
                    e.eye_landmarks = face.eyes;
                    entries.push_back(std::move(e));
                }
            }
        }
    }
    return entries;
}

} // namespace biaslens::data
