#include "densefeat/scale_stack.hpp"

#include <cmath>
#include <stdexcept>

#include "densefeat/filters.hpp"

namespace densefeat {

ScaleStack build_scale_stack(const GrayImage& img, int n_sigma) {
  if (img.empty()) throw std::invalid_argument("cannot build a scale stack of an empty image");
  ScaleStack stack;
  stack.levels.push_back(img);
  stack.level_scale.push_back(1.0);
  stack.factor_x.push_back(1.0);
  stack.factor_y.push_back(1.0);
  for (int i = 1; i < n_sigma; ++i) {
    const GrayImage& prev = stack.levels.back();
    const int w = static_cast<int>(std::lround(prev.width() / std::sqrt(2.0)));
    const int h = static_cast<int>(std::lround(prev.height() / std::sqrt(2.0)));
    if (w < kMinLevelSide || h < kMinLevelSide) break;
    const GrayImage smooth = gaussian_blur(prev, kPreDecimationSigma);
    stack.levels.emplace_back(resize_bilinear(smooth, w, h));
    stack.level_scale.push_back(std::pow(std::sqrt(2.0), i));
    stack.factor_x.push_back(static_cast<double>(img.width()) / w);
    stack.factor_y.push_back(static_cast<double>(img.height()) / h);
  }
  return stack;
}

}  // namespace densefeat
