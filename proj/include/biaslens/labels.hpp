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
#include <optional>
#include <string>
#include <string_view>

namespace biaslens {

/// The six basic emotion classes. The index order is canonical and fixed:
/// every confusion matrix row/column and every classifier output uses it.
enum class EmotionLabel : int {
    Angry = 0,
    Disgust = 1,
    Fear = 2,
    Happy = 3,
    Sad = 4,
    Surprise = 5,
};

inline constexpr int kNumEmotions = 6;

inline constexpr std::array<EmotionLabel, kNumEmotions> kAllEmotions = {
    EmotionLabel::Angry,  EmotionLabel::Disgust, EmotionLabel::Fear,
    EmotionLabel::Happy,  EmotionLabel::Sad,     EmotionLabel::Surprise,
};

enum class GroupTag : int { Female = 0, Male = 1 };

enum class GroupSelector : int { Both = 0, FemaleOnly = 1, MaleOnly = 2 };

inline const char* to_string(EmotionLabel l) {
    switch (l) {
        case EmotionLabel::Angry: return "Angry";
        case EmotionLabel::Disgust: return "Disgust";
        case EmotionLabel::Fear: return "Fear";
        case EmotionLabel::Happy: return "Happy";
        case EmotionLabel::Sad: return "Sad";
        case EmotionLabel::Surprise: return "Surprise";
    }
    return "?";
}

inline const char* to_string(GroupTag g) {
    return g == GroupTag::Female ? "female" : "male";
}

inline const char* to_string(GroupSelector s) {
    switch (s) {
        case GroupSelector::Both: return "both";
        case GroupSelector::FemaleOnly: return "female";
        case GroupSelector::MaleOnly: return "male";
    }
    return "?";
}

namespace detail {
inline std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}
} // namespace detail

/// Case-insensitive parse; empty optional for anything outside the six-value set.
inline std::optional<EmotionLabel> parse_emotion(std::string_view s) {
    const std::string t = detail::lowercase(s);
    if (t == "angry") return EmotionLabel::Angry;
    if (t == "disgust") return EmotionLabel::Disgust;
    if (t == "fear") return EmotionLabel::Fear;
    if (t == "happy") return EmotionLabel::Happy;
    if (t == "sad") return EmotionLabel::Sad;
    if (t == "surprise") return EmotionLabel::Surprise;
    return std::nullopt;
}

inline std::optional<GroupTag> parse_group(std::string_view s) {
    const std::string t = detail::lowercase(s);
    if (t == "female") return GroupTag::Female;
    if (t == "male") return GroupTag::Male;
    return std::nullopt;
}

inline std::optional<GroupSelector> parse_selector(std::string_view s) {
    const std::string t = detail::lowercase(s);
    if (t == "both") return GroupSelector::Both;
    if (t == "female") return GroupSelector::FemaleOnly;
    if (t == "male") return GroupSelector::MaleOnly;
    return std::nullopt;
}

inline bool admits(GroupSelector s, GroupTag g) {
    switch (s) {
        case GroupSelector::Both: return true;
        case GroupSelector::FemaleOnly: return g == GroupTag::Female;
        case GroupSelector::MaleOnly: return g == GroupTag::Male;
    }
    return false;
}

} // namespace biaslens
