#pragma once

#include <vector>

#include "densefeat/image.hpp"

namespace densefeat {

/// Multi-scale image stack with two levels per octave.
struct ScaleStack {
  std::vector<GrayImage> levels;
  /// Nominal linear downsampling factor of each level (sqrt(2)^i).
  std::vector<double> level_scale;
  /// Actual per-axis factors (original size / level size).
  std::vector<double> factor_x;
  std::vector<double> factor_y;

  int n_sigma() const { return static_cast<int>(levels.size()); }

  /// Maps level pixel coordinates to level-0 coordinates.
  double to_base_x(int level, double x) const { return (x + 0.5) * factor_x[level] - 0.5; }
  double to_base_y(int level, double y) const { return (y + 0.5) * factor_y[level] - 0.5; }
  double to_level_x(int level, double x) const { return (x + 0.5) / factor_x[level] - 0.5; }
  double to_level_y(int level, double y) const { return (y + 0.5) / factor_y[level] - 0.5; }
};

inline constexpr int kMinLevelSide = 8;
inline constexpr double kPreDecimationSigma = 0.8;

/// Level 0 is the input; each further level is the previous one blurred
/// (sigma 0.8) and shrunk by 1/sqrt(2). Levels narrower or shorter than
/// 8 pixels are dropped.
ScaleStack build_scale_stack(const GrayImage& img, int n_sigma = 5);

}  // namespace densefeat
