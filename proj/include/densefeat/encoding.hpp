#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace densefeat {

struct Codebook {
  std::uint32_t k = 0;
  std::uint32_t dim = 0;
  std::uint64_t seed = 0;
  /// k x dim, row-major.
  std::vector<double> centroids;

  const double* centroid(std::size_t i) const { return centroids.data() + i * dim; }
  /// Nearest centroid by squared distance; ties go to the lowest index.
  std::size_t nearest(const double* v) const;
};

/// Row-major set of equally sized vectors.
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> values;

  std::size_t size() const { return dim ? values.size() / dim : 0; }
  const double* row(std::size_t i) const { return values.data() + i * dim; }
};

/// k-means++ seeding followed by Lloyd iterations until the assignment stops
/// changing or max_iters. A cluster that empties is moved onto the point
/// farthest from its current centroid. When trace is given it receives the
/// objective after seeding and after every iteration.
Codebook kmeans_train(const PointSet& points, std::uint32_t k, std::uint64_t seed,
                      int max_iters = 25, std::vector<double>* trace = nullptr);

double kmeans_objective(const PointSet& points, const Codebook& cb);

struct ImageVector {
  std::vector<double> values;
  bool normalized = false;
  /// Set by l2_normalize when the input had no energy.
  bool zero = false;
};

/// Residual sums per word, accumulated in input order.
ImageVector vlad_encode(const PointSet& descs, const Codebook& cb);

ImageVector power_law(const ImageVector& v, double beta = 0.5);
ImageVector l2_normalize(const ImageVector& v);

/// CBK1: "CBK1", u32 k, u32 dim, u64 seed, k*dim f32.
void write_codebook(const std::filesystem::path& path, const Codebook& cb);
Codebook read_codebook(const std::filesystem::path& path);

}  // namespace densefeat
