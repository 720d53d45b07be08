#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace stamp {

/// 8-bit interleaved RGB, row-major.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width*height*3

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

    bool operator==(const RgbImage&) const = default;
};

/// Reads any 8-bit PNG, converting grey/palette/alpha variants to RGB.
RgbImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace stamp
