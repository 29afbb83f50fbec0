#pragma once

#include <filesystem>
#include <vector>

#include "densefeat/image.hpp"
#include "densefeat/keypoint.hpp"

namespace densefeat {

/// Pseudo-Zernike radial polynomial R_{n,l}(r). Exact factorial sums for
/// n <= 8. Throws std::domain_error when |l| > n or n is out of range.
double radial_poly(int n, int l, double r);

/// Real filter sampled from R_{n|l|}(r) cos(|l| theta) (l >= 0) or
/// R_{n|l|}(r) sin(|l| theta) (l < 0) over the inscribed disc.
struct ZernikeFilter {
  int order = 1;
  int repetition = 0;
  int size = 11;
  /// size*size row-major, zero outside the disc, zero mean, unit l2 norm.
  std::vector<double> kernel;

  double at(int x, int y) const { return kernel[static_cast<std::size_t>(y) * size + x]; }
};

struct FilterBank {
  std::vector<ZernikeFilter> filters;
  int max_order = 2;
  int filter_size = 11;
};

/// Unnormalized sampled filter on a size x size grid (no mean removal).
std::vector<double> sample_zernike(int n, int l, int size);

/// Orders 1..max_order, repetitions -n..n: sum_{n}(2n+1) filters.
/// Requires max_order in [1,6] and odd filter_size >= 5.
FilterBank build_filter_bank(int max_order, int filter_size = 11);

/// Per-scale keypoint budgets, identical for every filter and polarity.
struct CapacityTable {
  int n_filters = 0;
  int n_scales = 0;
  int total = 0;
  int per_filter = 0;
  int per_polarity = 0;
  /// Budget for scale i (i = 0 finest), shared by all (filter, polarity) cells.
  std::vector<int> per_scale;

  int budget(int /*filter*/, Polarity /*polarity*/, int scale) const { return per_scale[scale]; }
  long long sum() const;
};

/// Splits N_z uniformly over filters and polarities, then over scales with
/// weights 2^(n_scales-1-i). Scale shares are handed out one unit at a time
/// in increasing order of (units+1)/weight, ties to the coarser scale, so a
/// larger N_z never shrinks any cell.
CapacityTable allocate_capacity(int n_z, int n_filters, int n_scales);

/// Filter correlation with mirrored borders.
ResponseMap filter_response(const GrayImage& img, const ZernikeFilter& filter);

/// Strict 3x3 extrema of every filter response at every stack level, the
/// strongest ones kept per (filter, polarity, level) up to the capacity.
std::vector<Keypoint> detect_zernike(const GrayImage& img, const FilterBank& bank, int n_z,
                                     int n_scales = 5);

/// One RMAP per filter plus index.txt with "n l filename" lines.
void export_filter_bank(const FilterBank& bank, const std::filesystem::path& dir);

}  // namespace densefeat
