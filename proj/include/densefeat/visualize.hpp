#pragma once

#include <cstddef>
#include <vector>

#include "densefeat/image_io.hpp"
#include "densefeat/keypoint.hpp"

namespace densefeat {

struct Overlay {
  RgbImage image;
  std::size_t markers = 0;
};

/// Circles of radius sigma for scale-selecting detectors, squares of side
/// twice the detection radius for the others. With first_scale_only set,
/// only scale_index 0 is drawn.
Overlay visualize_keypoints(const RgbImage& base, const std::vector<Keypoint>& kps,
                            bool first_scale_only);

/// Line chart of y over x with point markers, axes scaled to the data.
/// Non-finite points are skipped.
RgbImage plot_line(const std::vector<double>& xs, const std::vector<double>& ys, int width = 640,
                   int height = 480);

}  // namespace densefeat
