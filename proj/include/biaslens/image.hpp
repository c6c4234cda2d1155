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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "biaslens/common.hpp"

namespace biaslens::img {

/// 8-bit single-channel raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}
    GrayImage(int w, int h, std::vector<std::uint8_t> px)
        : width(w), height(h), pixels(std::move(px)) {}

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t size() const { return pixels.size(); }

    bool operator==(const GrayImage&) const = default;
};

/// 8-bit interleaved RGB raster, row-major.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // r,g,b triples

    RgbImage() = default;
    RgbImage(int w, int h)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t& at(int x, int y, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    bool operator==(const RgbImage&) const = default;
};

struct BadMagic : Error {
    using Error::Error;
};
struct BadHeader : Error {
    using Error::Error;
};
struct TruncatedPayload : Error {
    using Error::Error;
};
struct UnsupportedMaxval : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

namespace detail {

// Reads the next ASCII integer token of a netpbm header, skipping whitespace
// and '#' comments. Returns -1 when the input runs out or the token is not a
// number.
inline long next_header_int(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        const char c = static_cast<char>(bytes[pos]);
        if (c == '#') {
            while (pos < bytes.size() && static_cast<char>(bytes[pos]) != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size()) return -1;
    long value = 0;
    bool any = false;
    while (pos < bytes.size()) {
        const char c = static_cast<char>(bytes[pos]);
        if (c < '0' || c > '9') break;
        value = value * 10 + (c - '0');
        any = true;
        ++pos;
        if (value > 1 << 30) return -1;
    }
    return any ? value : -1;
}

} // namespace detail

/// Decodes a binary PGM ("P5", maxval 255) byte stream.
inline GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw BadMagic("not a binary PGM: expected magic \"P5\"");
    std::size_t pos = 2;
    const long w = detail::next_header_int(bytes, pos);
    const long h = detail::next_header_int(bytes, pos);
    const long maxval = detail::next_header_int(bytes, pos);
    if (w <= 0 || h <= 0) throw BadHeader("bad PGM header: invalid dimensions");
    if (maxval < 0) throw BadHeader("bad PGM header: missing maxval");
    if (maxval != 255) throw UnsupportedMaxval("PGM maxval must be 255");
    if (pos >= bytes.size()) throw TruncatedPayload("PGM payload missing");
    ++pos; // single whitespace byte after maxval
    const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() - pos < need)
        throw TruncatedPayload("PGM payload truncated: expected " +
                               std::to_string(need) + " bytes, have " +
                               std::to_string(bytes.size() - pos));
    GrayImage out(static_cast<int>(w), static_cast<int>(h));
    std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
              bytes.begin() + static_cast<std::ptrdiff_t>(pos + need),
              out.pixels.begin());
    return out;
}

/// Encodes as binary PGM. decode_pgm(encode_pgm(img)) == img, byte for byte.
inline std::vector<std::uint8_t> encode_pgm(const GrayImage& im) {
    std::string header = "P5\n" + std::to_string(im.width) + " " +
                         std::to_string(im.height) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + im.pixels.size());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), im.pixels.begin(), im.pixels.end());
    return out;
}

/// Encodes as binary PPM ("P6", maxval 255), the overlay output format.
inline std::vector<std::uint8_t> encode_ppm(const RgbImage& im) {
    std::string header = "P6\n" + std::to_string(im.width) + " " +
                         std::to_string(im.height) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + im.pixels.size());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), im.pixels.begin(), im.pixels.end());
    return out;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

inline void write_file(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

inline GrayImage load_pgm(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return decode_pgm(bytes);
}

inline void save_pgm(const std::filesystem::path& path, const GrayImage& im) {
    write_file(path, encode_pgm(im));
}

inline void save_ppm(const std::filesystem::path& path, const RgbImage& im) {
    write_file(path, encode_ppm(im));
}

} // namespace biaslens::img
