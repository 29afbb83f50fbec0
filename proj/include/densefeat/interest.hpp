#pragma once

#include <vector>

#include "densefeat/image.hpp"
#include "densefeat/keypoint.hpp"

namespace densefeat {

struct HarrisParams {
  double sigma_d = 1.0;
  double sigma_i = 1.0 / 0.7;
  double alpha = 0.05;
  double tau = 0.0;
  /// Frobenius norm of the second moment matrix instead of cornerness.
  bool use_frobenius = false;
  /// Union of directional 2-neighborhood maxima instead of the 3x3 test.
  bool relaxed = false;
};

struct HessianParams {
  double sigma_d = 1.0;
  double tau = 0.0;
};

struct DogParams {
  int scales_per_octave = 3;
  int n_octaves = 4;
  double tau = 0.0;
  double sigma0 = 1.6;
};

/// Geometric ladder of differentiation scales searched by the
/// Harris- and Hessian-Laplace detectors.
struct ScaleLadder {
  double ratio = 1.4;
  int levels = 7;

  double sigma(double base, int k) const;
};

/// Throws std::invalid_argument unless sigma_i > sigma_d > 0, tau >= 0.
void validate(const HarrisParams& p);

/// Scale-adapted second moment matrix M = sigma_d^2 g(sigma_i) * [Lx^2 LxLy; LxLy Ly^2],
/// reduced to det(M) - alpha trace(M)^2 or to its Frobenius norm.
ResponseMap harris_matrix_response(const GrayImage& img, const HarrisParams& p);

/// Scale-normalized Laplacian magnitude sigma^2 |Lxx + Lyy|.
ResponseMap normalized_log(const GrayImage& img, double sigma);

/// Harris-Laplace and its Frobenius / relaxed variants. Spatial maxima of
/// the matrix response at each ladder level (sigma_i scaled along), kept
/// where the normalized Laplacian at sigma_i peaks across adjacent levels.
/// The ladder ends are never selected; scale_index counts searched levels from 0.
std::vector<Keypoint> detect_harris_laplace(const GrayImage& img, const HarrisParams& p,
                                            const ScaleLadder& ladder = {});

/// Hessian-Laplace with upright circular regions.
std::vector<Keypoint> detect_hessian(const GrayImage& img, const HessianParams& p,
                                     const ScaleLadder& ladder = {});

/// Difference of Gaussians over octaves; 3x3x3 extrema of both signs with
/// |D| >= tau. Layers are finer minus coarser so bright blobs are maxima.
std::vector<Keypoint> detect_dog(const GrayImage& img, const DogParams& p);

DetectorId harris_variant(const HarrisParams& p);

}  // namespace densefeat
