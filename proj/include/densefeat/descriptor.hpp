#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "densefeat/image.hpp"
#include "densefeat/keypoint.hpp"
#include "densefeat/scale_stack.hpp"

namespace densefeat {

inline constexpr int kSiftDim = 128;
inline constexpr int kDefaultPatchSide = 41;

/// Detector families sharing one patch-size to scaling-factor conversion.
enum class ScaleFamily {
  Grid,       ///< dense, dense-IP, Hessian, MSER, SSR: s = (p-1)/20
  HarrisDog,  ///< Harris-Laplace variants, DoG: s = p/2.88
  NormEdge,   ///< dense l2-norm, MSER-edge, SSR-edge, fast-edge: s = (p-1)/3
  Zernike,    ///< s = p/11
};

ScaleFamily family_of(DetectorId id);

/// Harris/Hessian/DoG variants and the region detectors report their own sigma.
bool selects_scale(DetectorId id);

/// Measurement-region enlargement for patch side p. Throws
/// std::invalid_argument for p < 5 or an unknown family.
double patch_to_scale(ScaleFamily family, int p);

/// Radius of the detected region: sigma for scale-selecting detectors,
/// half the family's unit size times the level factor otherwise.
double detection_radius(const Keypoint& kp, ScaleFamily family);

struct Patch {
  int side = kDefaultPatchSide;
  std::vector<double> data;
  Keypoint source;

  double operator()(int x, int y) const { return data[static_cast<std::size_t>(y) * side + x]; }
};

/// Samples a p x p patch over the square of half-width
/// patch_to_scale(family, p) * detection_radius(kp) centered on the keypoint.
/// Returns nothing when that square leaves the image.
std::optional<Patch> extract_patch(const GrayImage& img, const Keypoint& kp, ScaleFamily family,
                                   int p = kDefaultPatchSide);

/// As above, sampling from the coarsest stack level whose pixel spacing
/// does not exceed the patch sampling step.
std::optional<Patch> extract_patch(const ScaleStack& stack, const Keypoint& kp,
                                   ScaleFamily family, int p = kDefaultPatchSide);

/// Raw side x side window centered on integer pixel (x, y), no resampling.
std::optional<Patch> window_patch(const GrayImage& img, int x, int y, int side);

enum class DescriptorState { Raw, RootSift, Pca };

struct Descriptor {
  std::array<double, kSiftDim> values{};
  DescriptorState state = DescriptorState::Raw;
  Keypoint source;

  double squared_norm() const;
};

/// Up-right SIFT: 4x4 cells x 8 orientations of gradient magnitude (in
/// 8-bit intensity units), Gaussian window sigma = side/2, trilinear
/// spatial/orientation interpolation. No clipping or normalization.
Descriptor sift(const Patch& patch);

/// Norm of sift(window_patch(level, x, y, side)) at every stride-th pixel,
/// computed with separable sums. Windows leaving the image score 0. The
/// result has ceil(w/stride) x ceil(h/stride) entries.
ResponseMap dense_sift_norm_map(const GrayImage& level, int side, int stride = 1);

/// l1 normalization followed by element-wise square root. Zero stays zero.
/// Throws std::logic_error unless the input is raw.
Descriptor rootsift(const Descriptor& d);

/// Keeps raw descriptors with squared l2 norm >= threshold, order preserved.
std::vector<Descriptor> l2_filter(std::span<const Descriptor> descs, double threshold = 5000.0);

struct PcaModel {
  std::vector<double> mean;
  /// dim x dim row-major; column j is the j-th principal axis.
  std::vector<double> rotation;
  int dim = kSiftDim;

  double axis(int row, int col) const { return rotation[static_cast<std::size_t>(row) * dim + col]; }
};

inline constexpr std::size_t kMinPcaSamples = 256;

/// Mean and covariance eigenvectors (descending eigenvalue, sign fixed so
/// each axis' largest-magnitude entry is positive). Needs >= 256 rootsift
/// descriptors.
PcaModel pca_train(std::span<const Descriptor> descs);

/// Centered and rotated, without the final normalization.
std::array<double, kSiftDim> pca_rotate(const PcaModel& model, const Descriptor& d);

/// Centered, rotated and l2-normalized (zero stays zero).
Descriptor pca_apply(const PcaModel& model, const Descriptor& d);

/// DSC1: "DSC1", u32 count, u32 dim, row-major f32 values.
struct DescriptorTable {
  std::uint32_t dim = kSiftDim;
  std::vector<std::vector<double>> rows;
};

void write_dsc(const std::filesystem::path& path, const DescriptorTable& table);
DescriptorTable read_dsc(const std::filesystem::path& path);
DescriptorTable to_table(std::span<const Descriptor> descs);

}  // namespace densefeat
