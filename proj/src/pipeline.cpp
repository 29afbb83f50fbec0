#include <algorithm>
#include <stdexcept>

#include "densefeat/dense.hpp"
#include "densefeat/filters.hpp"
#include "densefeat/image_io.hpp"
#include "densefeat/interest.hpp"
#include "densefeat/pipeline.hpp"
#include "densefeat/region.hpp"
#include "densefeat/scale_stack.hpp"
#include "densefeat/zernike.hpp"

namespace densefeat {

GrayImage prepare_image(const std::filesystem::path& path, const PipelineConfig& cfg) {
  GrayImage img = load_gray(path);
  if (cfg.max_pixels > 0.0) img = downsample_to_area(img, cfg.max_pixels);
  return img;
}

namespace {

std::vector<Keypoint> from_regions(const std::vector<Region>& regions, bool upright, DetectorId id) {
  std::vector<Keypoint> out;
  out.reserve(regions.size());
  for (const auto& r : regions) {
    Keypoint kp = fit_ellipse(r, upright, id);
    if (id == DetectorId::Ssr) kp.polarity = Polarity::None;
    out.push_back(kp);
  }
  return out;
}

std::vector<Keypoint> sample_edges(const GrayImage& img, const EdgeMap& edges, DetectorId id,
                                   const EdgeParams& p) {
  return sample_edge_map(edges, gradient_magnitude(img, p.sigma_d), p.n_scales, p.tau, id);
}

}  // namespace

std::vector<Keypoint> detect(const GrayImage& img, DetectorId id, const PipelineConfig& cfg,
                             const std::filesystem::path& source) {
  switch (id) {
    case DetectorId::Dense:
      return detect_dense_grid(img, cfg.dense);
    case DetectorId::DenseIp:
      return detect_dense_ip(img, cfg.dense_ip);
    case DetectorId::DenseL2Norm:
      return detect_dense_l2norm(img, cfg.l2norm);
    case DetectorId::Harris:
    case DetectorId::Frobenius:
    case DetectorId::RelaxedHarris:
    case DetectorId::RelaxedFrobenius: {
      HarrisParams p = cfg.harris;
      p.use_frobenius = id == DetectorId::Frobenius || id == DetectorId::RelaxedFrobenius;
      p.relaxed = id == DetectorId::RelaxedHarris || id == DetectorId::RelaxedFrobenius;
      return detect_harris_laplace(img, p);
    }
    case DetectorId::Hessian:
      return detect_hessian(img, cfg.hessian);
    case DetectorId::Dog:
      return detect_dog(img, cfg.dog);
    case DetectorId::Zernike:
      return detect_zernike(img, build_filter_bank(cfg.zernike.max_order, cfg.zernike.filter_size),
                            cfg.zernike.capacity, cfg.zernike.n_scales);
    case DetectorId::Mser:
      return from_regions(detect_mser(img, cfg.mser), false, id);
    case DetectorId::MserEdge:
      return sample_edges(img, regions_to_edge_map(detect_mser(img, cfg.mser), img.width(), img.height()),
                          id, cfg.edge);
    case DetectorId::Ssr: {
      const auto labels = segment_graph(img, cfg.ssr);
      return from_regions(labels_to_regions(labels, img.width(), img.height()), true, id);
    }
    case DetectorId::SsrEdge:
      return sample_edges(img, labels_to_edge_map(segment_graph(img, cfg.ssr), img.width(), img.height()),
                          id, cfg.edge);
    case DetectorId::FastEdge: {
      if (cfg.edge.map_dir.empty()) {
        throw ConfigError("fast_edge needs edge.map_dir with precomputed EMAP files");
      }
      const auto path = cfg.edge.map_dir / (source.stem().string() + ".emap");
      const EdgeMap edges = load_edge_map(path);
      if (edges.width() != img.width() || edges.height() != img.height()) {
        throw std::invalid_argument(path.string() + ": edge map does not match the image size");
      }
      return sample_edge_map(edges, ResponseMap(Raster(edges)), cfg.edge.n_scales, cfg.edge.tau, id);
    }
  }
  throw std::invalid_argument("unknown detector");
}

std::vector<Descriptor> describe_raw(const GrayImage& img, const std::vector<Keypoint>& kps,
                                     const PipelineConfig& cfg) {
  const ScaleStack stack = build_scale_stack(img);
  std::vector<Descriptor> out;
  out.reserve(kps.size());
  for (const auto& kp : kps) {
    const auto patch = extract_patch(stack, kp, family_of(kp.detector), cfg.describe.patch_side);
    if (patch) out.push_back(sift(*patch));
  }
  if (cfg.describe.l2_threshold > 0.0) return l2_filter(out, cfg.describe.l2_threshold);
  return out;
}

std::vector<Descriptor> finish_descriptors(std::span<const Descriptor> raw, const PcaModel* pca) {
  std::vector<Descriptor> out;
  out.reserve(raw.size());
  for (const auto& d : raw) {
    Descriptor r = rootsift(d);
    out.push_back(pca ? pca_apply(*pca, r) : r);
  }
  return out;
}

PointSet to_points(std::span<const Descriptor> descs) {
  PointSet p;
  p.dim = kSiftDim;
  p.values.reserve(descs.size() * kSiftDim);
  for (const auto& d : descs) p.values.insert(p.values.end(), d.values.begin(), d.values.end());
  return p;
}

PointSet to_points(const DescriptorTable& table) {
  PointSet p;
  p.dim = table.dim;
  for (const auto& row : table.rows) p.values.insert(p.values.end(), row.begin(), row.end());
  return p;
}

ImageVector encode_image(const PointSet& descs, const Codebook& cb, double beta) {
  return l2_normalize(power_law(vlad_encode(descs, cb), beta));
}

TrainedModels train_models(const std::vector<std::filesystem::path>& images, const PipelineConfig& cfg) {
  std::vector<Descriptor> rooted;
  for (const auto& path : images) {
    const GrayImage img = prepare_image(path, cfg);
    const auto raw = describe_raw(img, detect(img, cfg.detector, cfg, path), cfg);
    const auto fin = finish_descriptors(raw, nullptr);
    rooted.insert(rooted.end(), fin.begin(), fin.end());
  }
  // Even subsampling keeps the result independent of any RNG.
  if (rooted.size() > cfg.encode.max_train) {
    std::vector<Descriptor> kept;
    kept.reserve(cfg.encode.max_train);
    for (std::size_t i = 0; i < cfg.encode.max_train; ++i) {
      kept.push_back(rooted[i * rooted.size() / cfg.encode.max_train]);
    }
    rooted = std::move(kept);
  }
  TrainedModels m;
  m.n_descriptors = rooted.size();
  if (cfg.describe.pca) {
    m.pca = pca_train(rooted);
    for (auto& d : rooted) d = pca_apply(*m.pca, d);
  }
  if (rooted.size() < cfg.encode.k) {
    throw std::invalid_argument("training images gave " + std::to_string(rooted.size()) +
                                " descriptors, fewer than encoding.k");
  }
  m.codebook = kmeans_train(to_points(rooted), cfg.encode.k, cfg.encode.seed, cfg.encode.max_iters);
  return m;
}

}  // namespace densefeat
