#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "densefeat/encoding.hpp"
#include "densefeat/raster_io.hpp"

namespace densefeat {

namespace {

double sq_dist(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// std::uniform_real_distribution is not specified bit-for-bit across
// standard libraries; draw from the raw engine instead.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::size_t Codebook::nearest(const double* v) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const double d = sq_dist(v, centroid(c), dim);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double kmeans_objective(const PointSet& points, const Codebook& cb) {
  double obj = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    obj += sq_dist(points.row(i), cb.centroid(cb.nearest(points.row(i))), cb.dim);
  }
  return obj;
}

Codebook kmeans_train(const PointSet& points, std::uint32_t k, std::uint64_t seed, int max_iters,
                      std::vector<double>* trace) {
  const std::size_t n = points.size();
  const std::size_t dim = points.dim;
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (dim == 0 || n < k) throw std::invalid_argument("kmeans: fewer points than clusters");
  if (max_iters < 0) throw std::invalid_argument("kmeans: max_iters must be >= 0");
  for (double v : points.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("kmeans: non-finite input");
  }

  Codebook cb;
  cb.k = k;
  cb.dim = static_cast<std::uint32_t>(dim);
  cb.seed = seed;
  cb.centroids.resize(static_cast<std::size_t>(k) * dim);

  std::mt19937_64 rng(seed);
  auto set_centroid = [&](std::size_t c, std::size_t i) {
    std::copy(points.row(i), points.row(i) + dim, cb.centroids.begin() + c * dim);
  };
  set_centroid(0, rng() % n);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points.row(i), cb.centroid(0), dim);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = unit_draw(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng() % n;
    }
    set_centroid(c, pick);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(points.row(i), cb.centroid(c), dim));
    }
  }
  if (trace) trace->push_back(kmeans_objective(points, cb));

  std::vector<std::size_t> assign(n, k);
  std::vector<double> sums(static_cast<std::size_t>(k) * dim);
  std::vector<std::size_t> counts(k);
  for (int it = 0; it < max_iters; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = cb.nearest(points.row(i));
      if (a != assign[i]) {
        assign[i] = a;
        changed = true;
      }
    }
    if (!changed) break;
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      double* s = sums.data() + assign[i] * dim;
      for (std::size_t j = 0; j < dim; ++j) s[j] += points.row(i)[j];
    }
    std::vector<char> taken(n, 0);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < dim; ++j) {
          cb.centroids[c * dim + j] = sums[c * dim + j] / static_cast<double>(counts[c]);
        }
        continue;
      }
      // Empty: move to the point worst served by its own centroid.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        const double d = sq_dist(points.row(i), cb.centroid(assign[i]), dim);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      taken[far] = 1;
      set_centroid(c, far);
    }
    if (trace) trace->push_back(kmeans_objective(points, cb));
  }
  return cb;
}

ImageVector vlad_encode(const PointSet& descs, const Codebook& cb) {
  ImageVector out;
  out.values.assign(static_cast<std::size_t>(cb.k) * cb.dim, 0.0);
  if (descs.size() == 0) return out;
  if (descs.dim != cb.dim) throw std::invalid_argument("vlad: descriptor dimension mismatch");
  for (std::size_t i = 0; i < descs.size(); ++i) {
    const double* d = descs.row(i);
    const std::size_t w = cb.nearest(d);
    double* block = out.values.data() + w * cb.dim;
    const double* c = cb.centroid(w);
    for (std::size_t j = 0; j < cb.dim; ++j) block[j] += d[j] - c[j];
  }
  return out;
}

ImageVector power_law(const ImageVector& v, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("power_law: beta must be in (0,1]");
  ImageVector out = v;
  out.normalized = false;
  out.zero = false;
  for (double& x : out.values) x = std::copysign(std::pow(std::abs(x), beta), x);
  return out;
}

ImageVector l2_normalize(const ImageVector& v) {
  ImageVector out = v;
  double n = 0.0;
  for (double x : v.values) {
    if (!std::isfinite(x)) throw std::invalid_argument("l2_normalize: non-finite input");
    n += x * x;
  }
  out.normalized = true;
  if (n == 0.0) {
    out.zero = true;
    return out;
  }
  n = std::sqrt(n);
  for (double& x : out.values) x /= n;
  return out;
}

void write_codebook(const std::filesystem::path& path, const Codebook& cb) {
  BinaryWriter w;
  w.magic("CBK1");
  w.u32(cb.k);
  w.u32(cb.dim);
  w.u64(cb.seed);
  for (double v : cb.centroids) w.f32(static_cast<float>(v));
  w.save(path);
}

Codebook read_codebook(const std::filesystem::path& path) {
  auto in = BinaryReader::open(path);
  in.expect_magic("CBK1");
  Codebook cb;
  cb.k = in.u32();
  cb.dim = in.u32();
  if (cb.k == 0 || cb.dim == 0 || cb.k > 1u << 20 || cb.dim > 1u << 16) {
    throw ParseError("bad codebook dimensions", 4);
  }
  cb.seed = in.u64();
  cb.centroids.resize(static_cast<std::size_t>(cb.k) * cb.dim);
  for (double& v : cb.centroids) {
    const auto off = in.offset();
    v = in.f32();
    if (!std::isfinite(v)) throw ParseError("non-finite centroid", off);
  }
  in.expect_end();
  return cb;
}

}  // namespace densefeat
