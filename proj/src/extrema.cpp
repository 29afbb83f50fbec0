#include "densefeat/extrema.hpp"

#include <stdexcept>

namespace densefeat {

namespace {

// Direction pairs: E/W, N/S, NE/SW, NW/SE.
constexpr int kDirs[4][2] = {{1, 0}, {0, 1}, {1, -1}, {1, 1}};

}  // namespace

bool is_strict_max(const Raster& r, int x, int y) {
  const double v = r(x, y);
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      if ((dx || dy) && !(v > r(x + dx, y + dy))) return false;
  return true;
}

bool is_strict_min(const Raster& r, int x, int y) {
  const double v = r(x, y);
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      if ((dx || dy) && !(v < r(x + dx, y + dy))) return false;
  return true;
}

bool is_relaxed_max(const Raster& r, int x, int y) {
  const double v = r(x, y);
  for (const auto& d : kDirs) {
    if (v > r(x + d[0], y + d[1]) && v > r(x - d[0], y - d[1])) return true;
  }
  return false;
}

bool is_relaxed_min(const Raster& r, int x, int y) {
  const double v = r(x, y);
  for (const auto& d : kDirs) {
    if (v < r(x + d[0], y + d[1]) && v < r(x - d[0], y - d[1])) return true;
  }
  return false;
}

std::vector<Extremum> local_extrema(const ResponseMap& resp, NeighborhoodKind kind,
                                    double threshold, ExtremumPolarity polarity) {
  if (kind == NeighborhoodKind::Cube3x3x3) {
    throw std::invalid_argument("Cube3x3x3 extrema need a layered response (see detect_dog)");
  }
  const bool relaxed = kind == NeighborhoodKind::Relaxed2Dir;
  const bool want_max = polarity != ExtremumPolarity::Minima;
  const bool want_min = polarity != ExtremumPolarity::Maxima;
  std::vector<Extremum> out;
  for (int y = 1; y + 1 < resp.height(); ++y) {
    for (int x = 1; x + 1 < resp.width(); ++x) {
      const double v = resp(x, y);
      if (want_max && v >= threshold &&
          (relaxed ? is_relaxed_max(resp, x, y) : is_strict_max(resp, x, y))) {
        out.push_back({x, y, v, true});
      } else if (want_min && v <= -threshold &&
                 (relaxed ? is_relaxed_min(resp, x, y) : is_strict_min(resp, x, y))) {
        out.push_back({x, y, v, false});
      }
    }
  }
  return out;
}

}  // namespace densefeat
