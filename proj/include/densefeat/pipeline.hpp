#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "densefeat/config.hpp"
#include "densefeat/descriptor.hpp"
#include "densefeat/encoding.hpp"
#include "densefeat/image.hpp"
#include "densefeat/keypoint.hpp"

namespace densefeat {

/// Grayscale load, shrunk to cfg.max_pixels when set.
GrayImage prepare_image(const std::filesystem::path& path, const PipelineConfig& cfg);

/// Runs one detector with the parameters from cfg. fast_edge reads
/// cfg.edge.map_dir / "<source stem>.emap".
std::vector<Keypoint> detect(const GrayImage& img, DetectorId id, const PipelineConfig& cfg,
                             const std::filesystem::path& source = {});

/// Raw SIFT for every keypoint whose measurement region fits in the image,
/// followed by the optional l2 filter.
std::vector<Descriptor> describe_raw(const GrayImage& img, const std::vector<Keypoint>& kps,
                                     const PipelineConfig& cfg);

/// RootSIFT, then PCA when a model is given.
std::vector<Descriptor> finish_descriptors(std::span<const Descriptor> raw, const PcaModel* pca);

PointSet to_points(std::span<const Descriptor> descs);
PointSet to_points(const DescriptorTable& table);

/// VLAD, power law and l2 normalization.
ImageVector encode_image(const PointSet& descs, const Codebook& cb, double beta);

struct TrainedModels {
  std::optional<PcaModel> pca;
  Codebook codebook;
  std::size_t n_descriptors = 0;
};

/// PCA (when enabled) and codebook from the finished descriptors of the
/// given images.
TrainedModels train_models(const std::vector<std::filesystem::path>& images, const PipelineConfig& cfg);

}  // namespace densefeat
