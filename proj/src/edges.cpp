#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "densefeat/filters.hpp"
#include "densefeat/raster_io.hpp"
#include "densefeat/region.hpp"

namespace densefeat {

Ellipse fit_ellipse_shape(const Region& region, bool upright) {
  if (region.pixels.empty()) throw std::invalid_argument("cannot fit an ellipse to an empty region");
  const double n = static_cast<double>(region.pixels.size());
  double mx = 0.0, my = 0.0;
  for (const auto& px : region.pixels) {
    mx += px.x;
    my += px.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& px : region.pixels) {
    const double dx = px.x - mx;
    const double dy = px.y - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  sxx /= n;
  syy /= n;
  sxy /= n;
  Ellipse e;
  e.cx = mx;
  e.cy = my;
  if (upright) {
    const double ax = 2.0 * std::sqrt(sxx);
    const double ay = 2.0 * std::sqrt(syy);
    e.major = std::max(ax, ay);
    e.minor = std::min(ax, ay);
    e.angle = ax >= ay ? 0.0 : M_PI / 2.0;
    return e;
  }
  const double tr = sxx + syy;
  const double disc = std::sqrt(std::max(0.0, 0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy));
  const double l1 = 0.5 * tr + disc;
  const double l2 = std::max(0.0, 0.5 * tr - disc);
  e.major = 2.0 * std::sqrt(l1);
  e.minor = 2.0 * std::sqrt(l2);
  e.angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  return e;
}

Keypoint fit_ellipse(const Region& region, bool upright, DetectorId detector) {
  const Ellipse e = fit_ellipse_shape(region, upright);
  Keypoint kp;
  kp.x = e.cx;
  kp.y = e.cy;
  kp.sigma = std::max(1.0, std::sqrt(e.major * e.minor));
  kp.response = region.stability;
  kp.detector = detector;
  kp.polarity = region.polarity == RegionPolarity::DarkOnBright ? Polarity::Min : Polarity::Max;
  return kp;
}

EdgeMap labels_to_edge_map(const std::vector<int>& labels, int width, int height) {
  if (static_cast<int>(labels.size()) != width * height) {
    throw std::invalid_argument("label map does not match dimensions");
  }
  EdgeMap out(width, height);
  auto at = [&](int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; };
  for (int y = 1; y + 1 < height; ++y) {
    for (int x = 1; x + 1 < width; ++x) {
      const int l = at(x, y);
      if (at(x - 1, y) != l || at(x + 1, y) != l || at(x, y - 1) != l || at(x, y + 1) != l) {
        out(x, y) = 1.0;
      }
    }
  }
  return out;
}

EdgeMap regions_to_edge_map(const std::vector<Region>& regions, int width, int height) {
  EdgeMap out(width, height);
  std::vector<int> stamp(static_cast<std::size_t>(width) * height, -1);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const int id = static_cast<int>(r);
    for (const auto& px : regions[r].pixels) stamp[static_cast<std::size_t>(px.y) * width + px.x] = id;
    auto inside = [&](int x, int y) {
      return x >= 0 && y >= 0 && x < width && y < height &&
             stamp[static_cast<std::size_t>(y) * width + x] == id;
    };
    for (const auto& px : regions[r].pixels) {
      if (px.x < 1 || px.y < 1 || px.x + 1 >= width || px.y + 1 >= height) continue;
      if (!inside(px.x - 1, px.y) || !inside(px.x + 1, px.y) || !inside(px.x, px.y - 1) ||
          !inside(px.x, px.y + 1)) {
        out(px.x, px.y) = 1.0;
      }
    }
    // Stamps of later regions overwrite; clear so nested regions do not see stale ids.
    for (const auto& px : regions[r].pixels) stamp[static_cast<std::size_t>(px.y) * width + px.x] = -1;
  }
  return out;
}

ResponseMap gradient_magnitude(const GrayImage& img, double sigma_d) {
  const auto g = gradients(img, sigma_d);
  ResponseMap out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out.values()[i] = std::hypot(g.lx.values()[i], g.ly.values()[i]);
  }
  return out;
}

std::vector<Keypoint> sample_edge_map(const EdgeMap& edges, const ResponseMap& interest,
                                      int n_scales, double tau, DetectorId detector) {
  if (!edges.same_shape(interest)) throw std::invalid_argument("edge and interest maps differ in size");
  if (n_scales < 1) throw std::invalid_argument("n_scales must be >= 1");
  std::vector<std::pair<int, int>> sites;
  for (int y = 1; y + 1 < edges.height(); ++y) {
    for (int x = 1; x + 1 < edges.width(); ++x) {
      if (!(edges(x, y) > 0.0)) continue;
      const double v = interest(x, y);
      if (!(v >= tau)) continue;
      bool peak = true;
      for (int dy = -1; dy <= 1 && peak; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (!dx && !dy) continue;
          if (edges(x + dx, y + dy) > 0.0 && !(v > interest(x + dx, y + dy))) {
            peak = false;
            break;
          }
        }
      }
      if (peak) sites.emplace_back(x, y);
    }
  }
  std::vector<Keypoint> out;
  out.reserve(sites.size() * n_scales);
  for (int s = 0; s < n_scales; ++s) {
    const double factor = std::pow(std::sqrt(2.0), s);
    for (const auto& [x, y] : sites) {
      out.push_back({static_cast<double>(x), static_cast<double>(y), factor, interest(x, y), s,
                     detector, Polarity::None, 0});
    }
  }
  return out;
}

void write_edge_map(const std::filesystem::path& path, const EdgeMap& edges) {
  BinaryWriter w;
  w.magic("EMAP");
  w.u32(static_cast<std::uint32_t>(edges.width()));
  w.u32(static_cast<std::uint32_t>(edges.height()));
  for (double v : edges.values()) w.f32(static_cast<float>(v));
  w.save(path);
}

EdgeMap load_edge_map(const std::filesystem::path& path) {
  auto in = BinaryReader::open(path);
  in.expect_magic("EMAP");
  const auto w = in.u32();
  const auto h = in.u32();
  if (w == 0 || h == 0 || w > 1u << 16 || h > 1u << 16) throw ParseError("bad edge map dimensions", 4);
  EdgeMap e(static_cast<int>(w), static_cast<int>(h));
  for (double& v : e.values()) {
    const auto off = in.offset();
    v = in.f32();
    if (!std::isfinite(v)) throw ParseError("non-finite edge strength", off);
    if (v < 0.0) throw ParseError("negative edge strength", off);
  }
  in.expect_end();
  return e;
}

}  // namespace densefeat
