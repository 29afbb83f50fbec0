#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "densefeat/image.hpp"

namespace densefeat {

/// Decodes an 8-bit PNG or PGM (or anything else the codec reads) into
/// channel values in [0,1]. Throws std::runtime_error if unreadable.
ColorImage load_color(const std::filesystem::path& path);

/// load_color followed by to_grayscale.
GrayImage load_gray(const std::filesystem::path& path);

/// Writes an 8-bit gray PNG/PGM (values clamped to [0,1], scaled by 255).
void save_gray(const std::filesystem::path& path, const GrayImage& img);

/// 8-bit interleaved RGB raster used for overlays and plots.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
};

RgbImage to_rgb(const GrayImage& img);
void save_rgb(const std::filesystem::path& path, const RgbImage& img);

/// 16-bit PGM of an integer label map.
void save_labels_pgm(const std::filesystem::path& path, const std::vector<int>& labels,
                     int width, int height);

}  // namespace densefeat
