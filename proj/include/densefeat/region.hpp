#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "densefeat/image.hpp"
#include "densefeat/keypoint.hpp"

namespace densefeat {

enum class RegionPolarity { DarkOnBright, BrightOnDark };

struct Pixel {
  int x = 0;
  int y = 0;
  bool operator==(const Pixel&) const = default;
};

/// A connected pixel set. Pixels are sorted row-major.
struct Region {
  std::vector<Pixel> pixels;
  RegionPolarity polarity = RegionPolarity::DarkOnBright;
  double stability = 0.0;
  /// Quantized threshold at which the region was selected (in the
  /// polarity's own intensity order).
  int level = 0;
};

// ---------------------------------------------------------------- MSER

struct MserParams {
  int delta = 5;
  int min_area = 10;
  /// Defaults to a quarter of the image area.
  std::optional<int> max_area;
  double max_variation = 1.0;
};

/// Requantizes [0,1] intensities to 0..255.
std::vector<int> quantize_levels(const GrayImage& img);

/// Maximally stable extremal regions of both polarities.
///
/// Components of {I <= t} (4-connected) at every level t form chains: a
/// component's successor is the component containing it at t+1, its
/// predecessor the largest component inside it at t-1 (ties: smallest
/// first pixel). Stability is q = (|R(t+delta)| - |R(t-delta)|) / |R(t)|
/// measured along that chain, with a missing predecessor counting as
/// size 0. A component is selected when it ends a run of equal q whose
/// neighbors on the chain are strictly larger (or absent); a pixel set
/// selected at several levels is kept once, at the lowest one. Results
/// are then filtered by area and max_variation, and ordered by level,
/// size, first pixel, polarity.
std::vector<Region> detect_mser(const GrayImage& img, const MserParams& p);

/// Same as detect_mser on already quantized levels (0..255), one polarity.
std::vector<Region> detect_mser_levels(const std::vector<int>& levels, int width, int height,
                                       const MserParams& p, RegionPolarity polarity);

// ------------------------------------------------------------- ellipses

struct Ellipse {
  double cx = 0.0;
  double cy = 0.0;
  /// Semi-axes covering two standard deviations (equal-area ellipse).
  double major = 1.0;
  double minor = 1.0;
  /// Angle of the major axis in radians, image axes (y down).
  double angle = 0.0;
};

Ellipse fit_ellipse_shape(const Region& region, bool upright);

/// Centroid keypoint with sigma = sqrt(major * minor), floored at 1.
Keypoint fit_ellipse(const Region& region, bool upright, DetectorId detector = DetectorId::Mser);

// ---------------------------------------------------------- segmentation

struct SegParams {
  double k = 50.0;
  int min_size = 20;
};

/// Graph-based segmentation on the 8-connected grid with 8-bit intensity
/// differences as weights. Labels are 0..n-1 in row-major first appearance.
std::vector<int> segment_graph(const GrayImage& img, const SegParams& p);

int count_labels(const std::vector<int>& labels);

/// One region per label.
std::vector<Region> labels_to_regions(const std::vector<int>& labels, int width, int height);

// ------------------------------------------------------------ edge maps

/// Non-negative edge strength per pixel; 0 means non-edge.
class EdgeMap : public Raster {
 public:
  using Raster::Raster;
  EdgeMap() = default;
  explicit EdgeMap(Raster r) : Raster(std::move(r)) {}
};

/// 1 where a 4-neighbor carries another label; the image frame stays 0.
EdgeMap labels_to_edge_map(const std::vector<int>& labels, int width, int height);

/// 1 on pixels of any region with a 4-neighbor outside that region; the
/// image frame stays 0.
EdgeMap regions_to_edge_map(const std::vector<Region>& regions, int width, int height);

/// sqrt(Lx^2 + Ly^2) at the given differentiation scale.
ResponseMap gradient_magnitude(const GrayImage& img, double sigma_d = 1.0);

/// Strict 3x3 maxima of the interest map restricted to edge pixels (non-edge
/// neighbors never win), value >= tau, frame excluded. Each location emits
/// n_scales keypoints, one per stack level.
std::vector<Keypoint> sample_edge_map(const EdgeMap& edges, const ResponseMap& interest,
                                      int n_scales, double tau, DetectorId detector);

/// EMAP: "EMAP", u32 width, u32 height, row-major f32 strengths.
void write_edge_map(const std::filesystem::path& path, const EdgeMap& edges);
EdgeMap load_edge_map(const std::filesystem::path& path);

}  // namespace densefeat
