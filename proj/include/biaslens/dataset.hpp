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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "biaslens/common.hpp"
#include "biaslens/imgproc.hpp"
#include "biaslens/labels.hpp"

namespace biaslens::data {

struct MissingFile : Error {
    using Error::Error;
};
struct MalformedLine : Error {
    int line;
    MalformedLine(int ln, const std::string& what)
        : Error("line " + std::to_string(ln) + ": " + what), line(ln) {}
};
struct UnknownLabel : Error {
    int line;
    UnknownLabel(int ln, const std::string& token)
        : Error("line " + std::to_string(ln) + ": unknown label \"" + token + "\""),
          line(ln) {}
};
struct UnknownGroup : Error {
    int line;
    UnknownGroup(int ln, const std::string& token)
        : Error("line " + std::to_string(ln) + ": unknown group \"" + token + "\""),
          line(ln) {}
};
struct TooFewSubjects : Error {
    using Error::Error;
};

/// One labeled, group-tagged image reference.
struct ManifestEntry {
    std::string path;
    EmotionLabel label = EmotionLabel::Angry;
    GroupTag group = GroupTag::Female;
    std::string subject_id;
    std::optional<img::EyePoints> eye_landmarks;

    bool operator==(const ManifestEntry& o) const {
        const bool eyes_equal =
            eye_landmarks.has_value() == o.eye_landmarks.has_value() &&
            (!eye_landmarks ||
             (eye_landmarks->lx == o.eye_landmarks->lx &&
              eye_landmarks->ly == o.eye_landmarks->ly &&
              eye_landmarks->rx == o.eye_landmarks->rx &&
              eye_landmarks->ry == o.eye_landmarks->ry));
        return path == o.path && label == o.label && group == o.group &&
               subject_id == o.subject_id && eyes_equal;
    }
};

/// Subject-disjoint train/test partition.
struct DatasetSplit {
    std::vector<ManifestEntry> train;
    std::vector<ManifestEntry> test;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline std::optional<double> parse_real(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

} // namespace detail

/// Parses a manifest file: one record per line,
/// `path,label,group,subject_id[,lx,ly,rx,ry]`, `#` lines are comments.
inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("manifest not found: " + path.string());
    std::vector<ManifestEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = detail::split_csv(t);
        if (fields.size() != 4 && fields.size() != 8)
            throw MalformedLine(line_no, "expected 4 or 8 comma-separated fields, got " +
                                             std::to_string(fields.size()));
        ManifestEntry e;
        e.path = fields[0];
        if (e.path.empty()) throw MalformedLine(line_no, "empty path");
        const auto label = parse_emotion(fields[1]);
        if (!label) throw UnknownLabel(line_no, fields[1]);
        e.label = *label;
        const auto group = parse_group(fields[2]);
        if (!group) throw UnknownGroup(line_no, fields[2]);
        e.group = *group;
        e.subject_id = fields[3];
        if (e.subject_id.empty()) throw MalformedLine(line_no, "empty subject_id");
        if (fields.size() == 8) {
            img::EyePoints eyes;
            const auto lx = detail::parse_real(fields[4]);
            const auto ly = detail::parse_real(fields[5]);
            const auto rx = detail::parse_real(fields[6]);
            const auto ry = detail::parse_real(fields[7]);
            if (!lx || !ly || !rx || !ry)
                throw MalformedLine(line_no, "non-numeric eye landmark");
            eyes = {*lx, *ly, *rx, *ry};
            if (!(eyes.lx < eyes.rx))
                throw MalformedLine(line_no, "left eye x must be < right eye x");
            e.eye_landmarks = eyes;
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

/// Serializes entries back to the manifest format (used by the synthetic
/// generator and the prepare subcommand).
inline std::string manifest_to_text(const std::vector<ManifestEntry>& entries) {
    std::string out;
    for (const auto& e : entries) {
        out += e.path;
        out += ',';
        out += to_string(e.label);
        out += ',';
        out += to_string(e.group);
        out += ',';
        out += e.subject_id;
        if (e.eye_landmarks) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), ",%g,%g,%g,%g", e.eye_landmarks->lx,
                          e.eye_landmarks->ly, e.eye_landmarks->rx, e.eye_landmarks->ry);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

/// Splits at subject granularity: subjects are shuffled deterministically by
/// seed and the first round(train_fraction * #subjects) of them (ties at .5
/// round half-up) contribute their entries to train, the rest to test.
/// Subject-disjointness holds by construction.
inline DatasetSplit split_by_subject(const std::vector<ManifestEntry>& entries,
                                     double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error("train_fraction must lie in (0,1)");
    std::vector<std::string> subjects;
    for (const auto& e : entries)
        if (std::find(subjects.begin(), subjects.end(), e.subject_id) == subjects.end())
            subjects.push_back(e.subject_id);
    if (subjects.size() < 2)
        throw TooFewSubjects("need at least 2 distinct subjects, have " +
                             std::to_string(subjects.size()));
    // Shuffle a canonical (sorted) ordering so the split depends only on the
    // subject set and the seed, not on manifest line order.
    std::sort(subjects.begin(), subjects.end());
    Rng rng(seed);
    rng.shuffle(subjects);
    const std::size_t n_train = static_cast<std::size_t>(
        round_half_up(train_fraction * static_cast<double>(subjects.size())));
    std::set<std::string> train_subjects(subjects.begin(),
                                         subjects.begin() + static_cast<std::ptrdiff_t>(
                                                                std::min(n_train, subjects.size())));
    DatasetSplit split;
    split.seed = seed;
    split.train_fraction = train_fraction;
    for (const auto& e : entries) {
        if (train_subjects.count(e.subject_id))
            split.train.push_back(e);
        else
            split.test.push_back(e);
    }
    return split;
}

/// Order-preserving subsequence whose group tags satisfy the selector.
inline std::vector<ManifestEntry> filter_group(const std::vector<ManifestEntry>& entries,
                                               GroupSelector selector) {
    std::vector<ManifestEntry> out;
    out.reserve(entries.size());
    for (const auto& e : entries)
        if (admits(selector, e.group)) out.push_back(e);
    return out;
}

/// Labels with zero entries in the sequence. A non-empty result is the
/// warning-level EmptyResult signal: a class without samples cannot be
/// trained or evaluated.
inline std::vector<EmotionLabel> empty_classes(const std::vector<ManifestEntry>& entries) {
    std::array<bool, kNumEmotions> seen{};
    for (const auto& e : entries) seen[static_cast<int>(e.label)] = true;
    std::vector<EmotionLabel> missing;
    for (EmotionLabel l : kAllEmotions)
        if (!seen[static_cast<int>(l)]) missing.push_back(l);
    return missing;
}

} // namespace biaslens::data
