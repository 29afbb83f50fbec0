#include "densefeat/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "densefeat/raster_io.hpp"

namespace densefeat {

ScaleFamily family_of(DetectorId id) {
  switch (id) {
    case DetectorId::Dense:
    case DetectorId::DenseIp:
    case DetectorId::Hessian:
    case DetectorId::Mser:
    case DetectorId::Ssr:
      return ScaleFamily::Grid;
    case DetectorId::Harris:
    case DetectorId::Frobenius:
    case DetectorId::RelaxedHarris:
    case DetectorId::RelaxedFrobenius:
    case DetectorId::Dog:
      return ScaleFamily::HarrisDog;
    case DetectorId::DenseL2Norm:
    case DetectorId::MserEdge:
    case DetectorId::SsrEdge:
    case DetectorId::FastEdge:
      return ScaleFamily::NormEdge;
    case DetectorId::Zernike:
      return ScaleFamily::Zernike;
  }
  throw std::invalid_argument("unknown detector");
}

double patch_to_scale(ScaleFamily family, int p) {
  if (p < 5) throw std::invalid_argument("patch side must be >= 5");
  switch (family) {
    case ScaleFamily::Grid: return (p - 1) / 20.0;
    case ScaleFamily::HarrisDog: return p / 2.88;
    case ScaleFamily::NormEdge: return (p - 1) / 3.0;
    case ScaleFamily::Zernike: return p / 11.0;
  }
  throw std::invalid_argument("unknown scale family");
}

bool selects_scale(DetectorId id) {
  switch (id) {
    case DetectorId::Harris:
    case DetectorId::Frobenius:
    case DetectorId::RelaxedHarris:
    case DetectorId::RelaxedFrobenius:
    case DetectorId::Hessian:
    case DetectorId::Dog:
    case DetectorId::Mser:
    case DetectorId::Ssr:
      return true;
    default:
      return false;
  }
}

namespace {

double unit_size(ScaleFamily family) {
  switch (family) {
    case ScaleFamily::Grid: return 20.0;
    case ScaleFamily::HarrisDog: return 2.88;
    case ScaleFamily::NormEdge: return 3.0;
    case ScaleFamily::Zernike: return 11.0;
  }
  return 1.0;
}

std::optional<Patch> sample_square(const GrayImage& img, double cx, double cy, double radius,
                                   int p, const Keypoint& source) {
  if (cx - radius < 0.0 || cy - radius < 0.0 || cx + radius > img.width() - 1 ||
      cy + radius > img.height() - 1) {
    return std::nullopt;
  }
  Patch patch{p, std::vector<double>(static_cast<std::size_t>(p) * p), source};
  const double step = 2.0 * radius / (p - 1);
  for (int j = 0; j < p; ++j) {
    const double y = cy - radius + j * step;
    for (int i = 0; i < p; ++i) {
      patch.data[static_cast<std::size_t>(j) * p + i] = img.sample(cx - radius + i * step, y);
    }
  }
  return patch;
}

constexpr double kIntensityScale = 255.0;
constexpr int kCells = 4;
constexpr int kBins = 8;

// Per-offset weights of the four cells along one axis: Gaussian window
// times the tent of the cell center. Outermost samples weigh zero (their
// gradient is undefined inside the patch).
std::vector<std::array<double, kCells>> axis_weights(int side) {
  std::vector<std::array<double, kCells>> w(static_cast<std::size_t>(side));
  const double center = (side - 1) / 2.0;
  const double sigma = side / 2.0;
  const double cell = side / static_cast<double>(kCells);
  for (int u = 1; u + 1 < side; ++u) {
    const double g = std::exp(-0.5 * (u - center) * (u - center) / (sigma * sigma));
    const double t = (u + 0.5) / cell - 0.5;
    for (int c = 0; c < kCells; ++c) {
      w[u][c] = g * std::max(0.0, 1.0 - std::abs(t - c));
    }
  }
  return w;
}

struct OrientationSplit {
  int bin0;
  int bin1;
  double w0;
  double w1;
};

OrientationSplit split_orientation(double gx, double gy) {
  double theta = std::atan2(gy, gx);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  double o = theta * kBins / (2.0 * std::numbers::pi);
  int b0 = static_cast<int>(std::floor(o));
  const double f = o - b0;
  b0 %= kBins;
  return {b0, (b0 + 1) % kBins, 1.0 - f, f};
}

}  // namespace

double detection_radius(const Keypoint& kp, ScaleFamily family) {
  if (selects_scale(kp.detector)) return kp.sigma;
  return 0.5 * unit_size(family) * kp.sigma;
}

std::optional<Patch> extract_patch(const GrayImage& img, const Keypoint& kp, ScaleFamily family,
                                   int p) {
  const double radius = patch_to_scale(family, p) * detection_radius(kp, family);
  return sample_square(img, kp.x, kp.y, radius, p, kp);
}

std::optional<Patch> extract_patch(const ScaleStack& stack, const Keypoint& kp,
                                   ScaleFamily family, int p) {
  const double radius = patch_to_scale(family, p) * detection_radius(kp, family);
  const double step = 2.0 * radius / (p - 1);
  int level = 0;
  while (level + 1 < stack.n_sigma() &&
         std::max(stack.factor_x[level + 1], stack.factor_y[level + 1]) <= step + 1e-9) {
    ++level;
  }
  const GrayImage& img = stack.levels[level];
  const double f = std::max(stack.factor_x[level], stack.factor_y[level]);
  // Bounds are checked at level 0 so the outcome does not depend on the level picked.
  const GrayImage& base = stack.levels[0];
  if (kp.x - radius < 0.0 || kp.y - radius < 0.0 || kp.x + radius > base.width() - 1 ||
      kp.y + radius > base.height() - 1) {
    return std::nullopt;
  }
  const double cx = std::clamp(stack.to_level_x(level, kp.x), 0.0, img.width() - 1.0);
  const double cy = std::clamp(stack.to_level_y(level, kp.y), 0.0, img.height() - 1.0);
  const double r = radius / f;
  Patch patch{p, std::vector<double>(static_cast<std::size_t>(p) * p), kp};
  const double s = 2.0 * r / (p - 1);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i)
      patch.data[static_cast<std::size_t>(j) * p + i] = img.sample(cx - r + i * s, cy - r + j * s);
  return patch;
}

std::optional<Patch> window_patch(const GrayImage& img, int x, int y, int side) {
  const int h = side / 2;
  if (side % 2 == 0 || x - h < 0 || y - h < 0 || x + h > img.width() - 1 ||
      y + h > img.height() - 1) {
    return std::nullopt;
  }
  Patch patch{side, std::vector<double>(static_cast<std::size_t>(side) * side), {}};
  patch.source.x = x;
  patch.source.y = y;
  for (int j = 0; j < side; ++j)
    for (int i = 0; i < side; ++i)
      patch.data[static_cast<std::size_t>(j) * side + i] = img(x - h + i, y - h + j);
  return patch;
}

double Descriptor::squared_norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

Descriptor sift(const Patch& patch) {
  const int side = patch.side;
  if (side < 8) throw std::invalid_argument("sift needs a patch side >= 8");
  const auto w = axis_weights(side);
  Descriptor d;
  d.source = patch.source;
  for (int y = 1; y + 1 < side; ++y) {
    for (int x = 1; x + 1 < side; ++x) {
      const double gx = 0.5 * kIntensityScale * (patch(x + 1, y) - patch(x - 1, y));
      const double gy = 0.5 * kIntensityScale * (patch(x, y + 1) - patch(x, y - 1));
      const double m = std::hypot(gx, gy);
      if (m == 0.0) continue;
      const auto o = split_orientation(gx, gy);
      for (int cy = 0; cy < kCells; ++cy) {
        const double wy = w[y][cy];
        if (wy == 0.0) continue;
        for (int cx = 0; cx < kCells; ++cx) {
          const double wxy = wy * w[x][cx] * m;
          if (wxy == 0.0) continue;
          double* cellp = &d.values[(cy * kCells + cx) * kBins];
          cellp[o.bin0] += wxy * o.w0;
          cellp[o.bin1] += wxy * o.w1;
        }
      }
    }
  }
  return d;
}

ResponseMap dense_sift_norm_map(const GrayImage& level, int side, int stride) {
  if (side < 8 || side % 2 == 0 || stride < 1) {
    throw std::invalid_argument("dense_sift_norm_map: side must be odd >= 9, stride >= 1");
  }
  const int w = level.width();
  const int h = level.height();
  const int half = side / 2;
  const int out_w = (w + stride - 1) / stride;
  const int out_h = (h + stride - 1) / stride;
  ResponseMap out(out_w, out_h);
  if (w < side || h < side) return out;

  // Orientation channels of the gradient magnitude at interior pixels.
  std::vector<Raster> channels(kBins, Raster(w, h));
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double gx = 0.5 * kIntensityScale * (level(x + 1, y) - level(x - 1, y));
      const double gy = 0.5 * kIntensityScale * (level(x, y + 1) - level(x, y - 1));
      const double m = std::hypot(gx, gy);
      if (m == 0.0) continue;
      const auto o = split_orientation(gx, gy);
      channels[o.bin0](x, y) += m * o.w0;
      channels[o.bin1](x, y) += m * o.w1;
    }
  }
  const auto aw = axis_weights(side);

  // Horizontal pass: rows[b * 4 + cx](X, Y) for window centers X in range.
  std::vector<Raster> rows(kBins * kCells, Raster(w, h));
  for (int b = 0; b < kBins; ++b) {
    const Raster& ch = channels[b];
    for (int y = 0; y < h; ++y) {
      for (int x = half; x + half < w; ++x) {
        double acc[kCells] = {0, 0, 0, 0};
        for (int u = 1; u + 1 < side; ++u) {
          const double v = ch(x - half + u, y);
          if (v == 0.0) continue;
          for (int c = 0; c < kCells; ++c) acc[c] += v * aw[u][c];
        }
        for (int c = 0; c < kCells; ++c) rows[b * kCells + c](x, y) = acc[c];
      }
    }
  }

  // Vertical pass at the sampled centers.
  for (int oy = 0; oy < out_h; ++oy) {
    const int y = oy * stride;
    if (y - half < 0 || y + half > h - 1) continue;
    for (int ox = 0; ox < out_w; ++ox) {
      const int x = ox * stride;
      if (x - half < 0 || x + half > w - 1) continue;
      double sq = 0.0;
      for (int r = 0; r < kBins * kCells; ++r) {
        const Raster& rr = rows[r];
        double acc[kCells] = {0, 0, 0, 0};
        for (int v = 1; v + 1 < side; ++v) {
          const double val = rr(x, y - half + v);
          if (val == 0.0) continue;
          for (int c = 0; c < kCells; ++c) acc[c] += val * aw[v][c];
        }
        for (int c = 0; c < kCells; ++c) sq += acc[c] * acc[c];
      }
      out(ox, oy) = std::sqrt(sq);
    }
  }
  return out;
}

Descriptor rootsift(const Descriptor& d) {
  if (d.state != DescriptorState::Raw) throw std::logic_error("rootsift expects a raw descriptor");
  Descriptor out = d;
  out.state = DescriptorState::RootSift;
  double l1 = 0.0;
  for (double v : d.values) l1 += std::abs(v);
  if (l1 == 0.0) return out;
  for (double& v : out.values) v = std::sqrt(std::abs(v) / l1);
  return out;
}

std::vector<Descriptor> l2_filter(std::span<const Descriptor> descs, double threshold) {
  std::vector<Descriptor> out;
  for (const auto& d : descs) {
    if (d.state != DescriptorState::Raw) throw std::logic_error("l2_filter expects raw descriptors");
    if (d.squared_norm() >= threshold) out.push_back(d);
  }
  return out;
}

void write_dsc(const std::filesystem::path& path, const DescriptorTable& table) {
  BinaryWriter w;
  w.magic("DSC1");
  w.u32(static_cast<std::uint32_t>(table.rows.size()));
  w.u32(table.dim);
  for (const auto& row : table.rows) {
    if (row.size() != table.dim) throw std::invalid_argument("descriptor row has wrong dimension");
    for (double v : row) w.f32(static_cast<float>(v));
  }
  w.save(path);
}

DescriptorTable read_dsc(const std::filesystem::path& path) {
  auto in = BinaryReader::open(path);
  in.expect_magic("DSC1");
  const auto count = in.u32();
  DescriptorTable t;
  t.dim = in.u32();
  t.rows.assign(count, std::vector<double>(t.dim));
  for (auto& row : t.rows) {
    for (double& v : row) {
      const auto off = in.offset();
      v = in.f32();
      if (!std::isfinite(v)) throw ParseError("non-finite descriptor value", off);
    }
  }
  in.expect_end();
  return t;
}

DescriptorTable to_table(std::span<const Descriptor> descs) {
  DescriptorTable t;
  t.rows.reserve(descs.size());
  for (const auto& d : descs) t.rows.emplace_back(d.values.begin(), d.values.end());
  return t;
}

}  // namespace densefeat
