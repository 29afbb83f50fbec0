#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "densefeat/dense.hpp"
#include "densefeat/interest.hpp"
#include "densefeat/keypoint.hpp"
#include "densefeat/region.hpp"

namespace densefeat {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw "key = value" entries grouped by [section]. Keys outside any section
/// are rejected, as are duplicates.
struct ConfigFile {
  std::map<std::string, std::map<std::string, std::string>> sections;
  /// Directory relative paths in the file are resolved against.
  std::filesystem::path base_dir;

  static ConfigFile parse(std::string_view text, const std::filesystem::path& base_dir = {});
  static ConfigFile load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  /// "section.key" form; throws ConfigError on a malformed name.
  void set(const std::string& dotted, const std::string& value);
};

struct ZernikeParams {
  int max_order = 2;
  int filter_size = 11;
  int capacity = 2000;
  int n_scales = 5;
};

struct EdgeParams {
  double tau = 0.0;
  int n_scales = 5;
  double sigma_d = 1.0;
  /// Directory of precomputed "<image stem>.emap" files for fast_edge.
  std::filesystem::path map_dir;
};

struct DescribeParams {
  int patch_side = 41;
  /// 0 keeps every descriptor.
  double l2_threshold = 0.0;
  bool pca = false;
};

struct EncodeParams {
  std::uint32_t k = 256;
  std::uint64_t seed = 0;
  int max_iters = 25;
  double beta = 0.5;
  /// Upper bound on training descriptors; larger sets are subsampled evenly.
  std::size_t max_train = 200000;
  std::filesystem::path train_manifest;
};

struct PipelineConfig {
  DetectorId detector = DetectorId::Dense;
  /// Images larger than this many pixels are shrunk to it; 0 disables.
  double max_pixels = 150000.0;

  DenseParams dense;
  DenseIpParams dense_ip;
  L2NormParams l2norm;
  HarrisParams harris;
  HessianParams hessian;
  DogParams dog;
  ZernikeParams zernike;
  MserParams mser;
  SegParams ssr;
  EdgeParams edge;
  DescribeParams describe;
  EncodeParams encode;
};

/// Typed view of a config file. Unknown sections or keys and unparsable
/// values raise ConfigError.
PipelineConfig resolve_config(const ConfigFile& file);

}  // namespace densefeat
