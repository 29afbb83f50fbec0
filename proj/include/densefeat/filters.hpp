#pragma once

#include <string>
#include <utility>
#include <vector>

#include "densefeat/image.hpp"

namespace densefeat {

/// Collects non-fatal warnings from operations that degrade to a no-op.
struct Diagnostics {
  std::vector<std::string> warnings;
};

/// Sampled Gaussian of radius ceil(3*sigma), normalized to unit sum.
std::vector<double> gaussian_kernel(double sigma);

/// Separable correlation with mirrored borders. Kernels must have odd length.
Raster separable_filter(const Raster& src, const std::vector<double>& kx,
                        const std::vector<double>& ky);

/// Gaussian smoothing. A non-positive sigma leaves the raster unchanged and
/// records a warning when a diagnostics sink is given.
Raster gaussian_blur(const Raster& src, double sigma, Diagnostics* diag = nullptr);

inline GrayImage gaussian_blur(const GrayImage& src, double sigma,
                               Diagnostics* diag = nullptr) {
  return GrayImage(gaussian_blur(static_cast<const Raster&>(src), sigma, diag));
}

struct Gradients {
  ResponseMap lx;
  ResponseMap ly;
};

/// First derivatives of the sigma_d-smoothed image (central differences).
Gradients gradients(const GrayImage& img, double sigma_d);

struct SecondDerivatives {
  ResponseMap lxx;
  ResponseMap lxy;
  ResponseMap lyy;
};

/// Second derivatives of the sigma-smoothed image (central differences).
SecondDerivatives second_derivatives(const GrayImage& img, double sigma);

/// Bilinear resampling with pixel-center alignment.
Raster resize_bilinear(const Raster& src, int width, int height);

/// Shrinks the image so that its area is about target_area pixels. Images
/// at or below the target are returned unchanged.
GrayImage downsample_to_area(const GrayImage& img, double target_area = 150000.0);

}  // namespace densefeat
