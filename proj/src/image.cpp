#include "densefeat/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace densefeat {

Raster::Raster(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw std::invalid_argument("raster dimensions must be non-negative");
  }
  values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Raster::Raster(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 0 || height < 0 ||
      values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("raster data length does not match dimensions");
  }
}

int reflect_index(int i, int n) {
  if (n <= 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

double Raster::at_reflect(int x, int y) const {
  return (*this)(reflect_index(x, width_), reflect_index(y, height_));
}

double Raster::sample(double x, double y) const {
  x = std::clamp(x, 0.0, static_cast<double>(width_ - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height_ - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, width_ - 1);
  const int y1 = std::min(y0 + 1, height_ - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = (*this)(x0, y0) * (1.0 - fx) + (*this)(x1, y0) * fx;
  const double bottom = (*this)(x0, y1) * (1.0 - fx) + (*this)(x1, y1) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

GrayImage to_grayscale(const ColorImage& image) {
  if (image.width <= 0 || image.height <= 0) {
    throw std::invalid_argument("cannot convert an empty image");
  }
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  if (image.channels < 1 || image.values.size() != n * image.channels) {
    throw std::invalid_argument("color image data length does not match dimensions");
  }
  std::vector<double> gray(n);
  const std::size_t c = static_cast<std::size_t>(image.channels);
  for (std::size_t i = 0; i < n; ++i) {
    const double* px = &image.values[i * c];
    double v = px[0];
    if (c >= 3) v = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
    gray[i] = std::clamp(v, 0.0, 1.0);
  }
  return GrayImage(image.width, image.height, std::move(gray));
}

}  // namespace densefeat
