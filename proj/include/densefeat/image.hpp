#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace densefeat {

/// Row-major real-valued raster. Base storage for intensity images and
/// response maps.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, double fill = 0.0);
  Raster(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator()(int x, int y) const { return values_[index(x, y)]; }
  double& operator()(int x, int y) { return values_[index(x, y)]; }

  /// Value with mirrored (edge pixel not repeated) coordinates.
  double at_reflect(int x, int y) const;

  /// Bilinear sample at real coordinates, clamped to the raster.
  double sample(double x, double y) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool same_shape(const Raster& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Intensity image with values in [0,1].
class GrayImage : public Raster {
 public:
  using Raster::Raster;
  GrayImage() = default;
  explicit GrayImage(Raster r) : Raster(std::move(r)) {}
};

/// Per-pixel interestingness values of any sign.
class ResponseMap : public Raster {
 public:
  using Raster::Raster;
  ResponseMap() = default;
  explicit ResponseMap(Raster r, int scale = 0)
      : Raster(std::move(r)), scale_index(scale) {}

  int scale_index = 0;
};

/// Interleaved multi-channel raster with channel values in [0,1].
struct ColorImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> values;
};

/// Luma conversion (0.299, 0.587, 0.114). One- and two-channel inputs
/// are treated as gray (+alpha); four-channel inputs ignore alpha.
/// Throws std::invalid_argument for zero-sized input.
GrayImage to_grayscale(const ColorImage& image);

/// Mirror index into [0, n) without repeating the edge sample.
int reflect_index(int i, int n);

}  // namespace densefeat
