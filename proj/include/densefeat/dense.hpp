#pragma once

#include <functional>
#include <vector>

#include "densefeat/image.hpp"
#include "densefeat/keypoint.hpp"

namespace densefeat {

struct DenseParams {
  int delta_xy = 8;
  int n_scales = 5;
};

enum class DenseResponse { Harris, Frobenius };

struct DenseIpParams {
  int cell = 8;
  int search_scales = 3;
  DenseResponse response_kind = DenseResponse::Frobenius;
};

struct L2NormParams {
  double tau = 0.0;
  int n_scales = 5;
  int stride = 1;
  /// Side of the described window at each level (pixels).
  int patch_side = 41;
};

/// Grid points at (delta/2 + i*delta, delta/2 + j*delta) on every stack level.
std::vector<Keypoint> detect_dense_grid(const GrayImage& img, const DenseParams& p);

/// One keypoint per cell of side p.cell in level-0 coordinates: the argmax
/// of the response over all pixels of the searched levels falling in it.
/// Ties go to the smaller level, then the smaller row-major index.
std::vector<Keypoint> detect_dense_ip(const GrayImage& img, const DenseIpParams& p);

/// Computes the descriptor-norm response map of one level. The default is
/// dense_sift_norm_map from the descriptor module.
using NormMapFn = std::function<ResponseMap(const GrayImage& level, int patch_side, int stride)>;

/// Strict 3x3 maxima of the unnormalized-SIFT norm map with response >= tau.
std::vector<Keypoint> detect_dense_l2norm(const GrayImage& img, const L2NormParams& p,
                                          const NormMapFn& describer = {});

}  // namespace densefeat
