#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace densefeat {

enum class DetectorId {
  Dense,
  DenseIp,
  DenseL2Norm,
  Harris,
  Frobenius,
  RelaxedHarris,
  RelaxedFrobenius,
  Hessian,
  Dog,
  Zernike,
  Mser,
  MserEdge,
  Ssr,
  SsrEdge,
  FastEdge,
};

enum class Polarity { Max, Min, None };

std::string_view detector_name(DetectorId id);
std::optional<DetectorId> parse_detector(std::string_view name);
const std::vector<DetectorId>& all_detectors();

std::string_view polarity_name(Polarity p);
std::optional<Polarity> parse_polarity(std::string_view name);

/// A detection in level-0 image coordinates.
struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  /// Characteristic scale in pixels; for fixed-scale detectors the
  /// linear factor of the stack level.
  double sigma = 1.0;
  double response = 0.0;
  int scale_index = 0;
  DetectorId detector = DetectorId::Dense;
  Polarity polarity = Polarity::None;
  /// Detector-internal channel (e.g. filter index); not serialized.
  int channel = 0;

  bool operator==(const Keypoint&) const = default;
};

/// Orders by scale_index, then y, then x.
bool keypoint_scan_less(const Keypoint& a, const Keypoint& b);

/// Text format: "densefeat-kp 1", count, then one
/// "x y sigma response scale_index detector polarity" line per point.
void write_keypoints(std::ostream& out, const std::vector<Keypoint>& kps);
void write_keypoints(const std::filesystem::path& path, const std::vector<Keypoint>& kps);
std::vector<Keypoint> read_keypoints(std::istream& in);
std::vector<Keypoint> read_keypoints(const std::filesystem::path& path);

}  // namespace densefeat
