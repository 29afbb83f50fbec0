#pragma once

#include <vector>

#include "densefeat/image.hpp"

namespace densefeat {

enum class NeighborhoodKind {
  Strict3x3,    ///< strictly beyond all 8 neighbors
  Relaxed2Dir,  ///< strictly beyond both neighbors along any of 4 directions
  Cube3x3x3,    ///< 26 neighbors across adjacent layers; see dog detector
};

enum class ExtremumPolarity { Maxima, Minima, Both };

struct Extremum {
  int x = 0;
  int y = 0;
  double response = 0.0;
  bool is_max = true;
};

/// Local extrema of a response map, row-major order. Maxima need
/// response >= threshold, minima response <= -threshold. The one-pixel
/// frame is never reported. Plateaus produce nothing.
std::vector<Extremum> local_extrema(const ResponseMap& resp, NeighborhoodKind kind,
                                    double threshold,
                                    ExtremumPolarity polarity = ExtremumPolarity::Maxima);

/// Single-pixel tests used by the detectors.
bool is_strict_max(const Raster& r, int x, int y);
bool is_strict_min(const Raster& r, int x, int y);
bool is_relaxed_max(const Raster& r, int x, int y);
bool is_relaxed_min(const Raster& r, int x, int y);

}  // namespace densefeat
